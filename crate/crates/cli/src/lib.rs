//! Library entry point behind the `qhookup` binary.

mod render;
mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qhookup_core::channels::{basis_from_angles, QubitAngles};
use qhookup_core::family::{self, ScanConfig, ThresholdMethod};
use qhookup_core::quantifiers::full_report;
use qhookup_core::states::{Preset, PresetParams};
use qhookup_core::{DensityMatrix, OptimizerConfig, ProductBasis, StateSpec};

/// Exit codes.
pub const EXIT_SUCCESS: u8 = 0;
pub const EXIT_NUMERICAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qhookup",
    version,
    about = "Coherence and correlation quantifiers for multipartite density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every quantifier for one state.
    Compute(ComputeArgs),
    /// Reproduce the reference values and print a pass/fail table.
    Verify(VerifyArgs),
    /// Tabulate the MDMS family over (θ, ε) as CSV.
    ScanMdms(ScanArgs),
    /// Locate the MDMS basis-switch thresholds ε′ and ε″.
    Thresholds(ThresholdArgs),
    /// Range of K − J over local rotations, per ε.
    CompareJk(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Simplex refinements seeded from the best grid cells.
    #[arg(long, default_value_t = 8)]
    starts: usize,
    /// Coarse grid points per angle.
    #[arg(long, default_value_t = 17)]
    grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simplex stopping tolerance on the objective.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

impl OptimizerArgs {
    fn config(&self) -> qhookup_core::Result<OptimizerConfig> {
        let cfg = OptimizerConfig {
            grid_points: self.grid,
            starts: self.starts,
            tolerance: self.tol,
            seed: self.seed,
            ..Default::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// JSON state file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    file: Option<PathBuf>,
    /// Named state: bell, paper-example, w-mixture, mdms, ghz, classical-correlated, diagonal.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, requires = "preset")]
    epsilon: Option<f64>,
    #[arg(long, requires = "preset")]
    theta: Option<f64>,
    #[arg(long, requires = "preset")]
    phi: Option<f64>,
    #[arg(long, requires = "preset")]
    qubits: Option<usize>,
    /// Subsystem dimensions for `diagonal`, e.g. 2,3. Defaults to qubits.
    #[arg(long, requires = "preset", value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Computational-basis probabilities for `diagonal`.
    #[arg(long, requires = "preset", value_delimiter = ',')]
    probabilities: Option<Vec<f64>>,
    /// Reference basis as θ1,φ1,θ2,φ2,... in radians. Defaults to computational.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    basis_angles: Option<Vec<f64>>,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 65)]
    theta_points: usize,
    #[arg(long, default_value_t = 101)]
    epsilon_points: usize,
    #[arg(long, default_value_t = 0.0)]
    theta_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    theta_max: f64,
    #[arg(long, default_value_t = 0.0)]
    epsilon_min: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon_max: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    BasisSwitch,
    Derivative,
    Both,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long, value_enum, default_value = "basis-switch")]
    method: MethodArg,
    #[command(flatten)]
    optimizer: OptimizerArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.5,0.7,0.9")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 65)]
    theta_points: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Errors are reported on standard error.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return u8::try_from(code).unwrap_or(EXIT_INPUT);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let input = err
                .chain()
                .find_map(|e| e.downcast_ref::<qhookup_core::Error>())
                .map(qhookup_core::Error::is_input_error)
                .unwrap_or(false);
            if input {
                EXIT_INPUT
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Compute(args) => compute(args),
        Command::Verify(args) => {
            let rows = verify::run(&args.optimizer.config()?)?;
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
                _ => verify::render(&rows),
            };
            args.output.emit(&text)?;
            Ok(if rows.iter().all(|r| r.pass) {
                EXIT_SUCCESS
            } else {
                EXIT_VERIFY_FAILED
            })
        }
        Command::ScanMdms(args) => {
            let cfg = ScanConfig {
                theta_points: args.theta_points,
                epsilon_points: args.epsilon_points,
                theta_range: (args.theta_min, args.theta_max),
                epsilon_range: (args.epsilon_min, args.epsilon_max),
            };
            let table = family::scan_mdms(&cfg)?;
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&table)? + "\n",
                _ => table.to_csv(),
            };
            args.output.emit(&text)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Thresholds(args) => {
            let cfg = args.optimizer.config()?;
            let methods: &[ThresholdMethod] = match args.method {
                MethodArg::BasisSwitch => &[ThresholdMethod::BasisSwitch],
                MethodArg::Derivative => &[ThresholdMethod::Derivative],
                MethodArg::Both => &[ThresholdMethod::BasisSwitch, ThresholdMethod::Derivative],
            };
            let results = methods
                .iter()
                .map(|&m| family::find_thresholds(m, &cfg))
                .collect::<qhookup_core::Result<Vec<_>>>()?;
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&results)? + "\n",
                _ => render::thresholds(&results),
            };
            args.output.emit(&text)?;
            Ok(EXIT_SUCCESS)
        }
        Command::CompareJk(args) => {
            let rows = family::compare_jk(&args.epsilons, args.theta_points)?;
            let text = match args.format {
                Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
                Format::Csv => render::compare_csv(&rows),
                Format::Text => render::compare_text(&rows),
            };
            args.output.emit(&text)?;
            Ok(EXIT_SUCCESS)
        }
    }
}

fn load_state(args: &ComputeArgs) -> Result<DensityMatrix> {
    if let Some(path) = &args.file {
        let text = read_input(path)?;
        return Ok(qhookup_core::states::load(&text)?);
    }
    let name = args.preset.as_deref().expect("clap enforces file or preset");
    let params = PresetParams {
        epsilon: args.epsilon,
        theta: args.theta,
        phi: args.phi,
        qubits: args.qubits,
        dims: args.dims.clone(),
        probabilities: args.probabilities.clone(),
    };
    Ok(StateSpec::Preset(Preset::from_name(name, &params)?).build()?)
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        qhookup_core::Error::Parse {
            context: path.display().to_string(),
            message: e.to_string(),
        }
        .into()
    })
}

fn compute(args: ComputeArgs) -> Result<u8> {
    let d = load_state(&args)?;
    let basis = match &args.basis_angles {
        None => ProductBasis::computational(d.dims()),
        Some(flat) => {
            if flat.len() % 2 != 0 {
                return Err(qhookup_core::Error::DimensionMismatch(format!(
                    "--basis-angles needs (θ, φ) pairs, got {} values",
                    flat.len()
                ))
                .into());
            }
            let angles = flat
                .chunks_exact(2)
                .map(|a| QubitAngles::new(a[0], a[1]))
                .collect::<qhookup_core::Result<Vec<_>>>()?;
            basis_from_angles(d.dims(), &angles)?
        }
    };
    let report = full_report(&d, &basis, &args.optimizer.config()?)?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => render::report_csv(&report),
        Format::Text => render::report_text(&d, &report),
    };
    args.output.emit(&text)?;
    Ok(EXIT_SUCCESS)
}
