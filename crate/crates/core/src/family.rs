//! The MDMS family: parameter scans, basis-switch thresholds and the J/K
//! comparison.
//!
//! Inside this family the optimal dephasing basis has the form
//! `R(θ') ⊗ R(θ')` with `R` a real rotation, so χ is found by a one-dimensional
//! search instead of the general optimizer.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::io;

use serde::Serialize;

use crate::channels::{dephase, marginal_product, qubit_unitary, rotated_diagonal, ProductBasis};
use crate::error::{Error, Result};
use crate::numerics::{conjugate_unchecked, kron, ComplexMatrix};
use crate::quantifiers::{
    closest_classical, coherence, hookup, irreducible_classical, local_coherence, total_correlations, OptimizerConfig,
};
use crate::states::{mdms_state, shannon_entropy, von_neumann_entropy, DensityMatrix};

const SYMMETRIC_GRID: usize = 65;

fn rotation(theta: f64) -> ComplexMatrix {
    qubit_unitary(theta, 0.0)
}

fn rotation_derivative(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real(&[&[-s, c], &[-c, -s]])
}

fn symmetric_entropy(m: &ComplexMatrix, theta: f64) -> f64 {
    let r = rotation(theta);
    shannon_entropy(&rotated_diagonal(m, &kron(&r, &r)))
}

/// d/dθ of the entropy of diag(B† m B) with B = R(θ) ⊗ R(θ).
fn symmetric_entropy_derivative(m: &ComplexMatrix, theta: f64) -> f64 {
    let r = rotation(theta);
    let dr = rotation_derivative(theta);
    let b = kron(&r, &r);
    let db = &kron(&dr, &r) + &kron(&r, &dr);
    let mb = m * &b;
    let n = m.rows();
    let mut out = 0.0;
    for k in 0..n {
        let mut p = 0.0;
        let mut dp = 0.0;
        for i in 0..n {
            p += (b[(i, k)].conj() * mb[(i, k)]).re;
            dp += 2.0 * (db[(i, k)].conj() * mb[(i, k)]).re;
        }
        if p > 0.0 {
            out -= dp * p.log2();
        }
    }
    out
}

/// Minimum of S(Δ_b[d]) over symmetric real product bases `R(θ') ⊗ R(θ')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricMinimum {
    /// θ' ∈ [0, π/2).
    pub theta: f64,
    pub entropy: f64,
}

pub fn symmetric_closest_classical(d: &DensityMatrix) -> Result<SymmetricMinimum> {
    if d.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "symmetric search needs two qubits, got dims {:?}",
            d.dims()
        )));
    }
    let m = d.matrix();
    let step = FRAC_PI_2 / SYMMETRIC_GRID as f64;
    let (best_i, best) = (0..SYMMETRIC_GRID)
        .map(|i| (i, symmetric_entropy(m, i as f64 * step)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });

    let center = best_i as f64 * step;
    let (mut lo, mut hi) = (center - step, center + step);
    let mut candidate = center;
    let dlo = symmetric_entropy_derivative(m, lo);
    let dhi = symmetric_entropy_derivative(m, hi);
    if dlo < 0.0 && dhi > 0.0 {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if symmetric_entropy_derivative(m, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        candidate = 0.5 * (lo + hi);
    }
    let value = symmetric_entropy(m, candidate);
    let (theta, entropy) = if value < best {
        (candidate, value)
    } else {
        (center, best)
    };
    Ok(SymmetricMinimum {
        theta: theta.rem_euclid(FRAC_PI_2),
        entropy,
    })
}

/// One `(θ, ε)` cell. Fixed-basis quantities use the computational basis;
/// D, J and L use the symmetric closest classical state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub theta: f64,
    pub epsilon: f64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_L")]
    pub c_l: f64,
    #[serde(rename = "C_M")]
    pub c_m: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

pub const SCAN_COLUMNS: [&str; 11] = ["theta", "epsilon", "T", "C", "C_L", "C_M", "K", "M", "D", "J", "L"];

impl ScanRecord {
    pub fn compute(epsilon: f64, theta: f64) -> Result<Self> {
        let d = mdms_state(epsilon, theta, 0.0);
        let b = ProductBasis::computational(d.dims());
        let t = total_correlations(&d)?;
        let c = coherence(&d, &b)?;
        let c_l = local_coherence(&d, &b)?;
        let k = irreducible_classical(&d, &b)?;
        let m = hookup(&d, &b)?;

        let sym = symmetric_closest_classical(&d)?;
        let s = von_neumann_entropy(&d)?;
        let chi = dephase(&d, &ProductBasis::from_flat_angles(&[sym.theta, 0.0, sym.theta, 0.0]))?;
        let dd = sym.entropy - s;
        let j = von_neumann_entropy(&marginal_product(&chi))? - sym.entropy;
        Ok(Self {
            theta,
            epsilon,
            t,
            c,
            c_l,
            c_m: c - c_l,
            k,
            m,
            d: dd,
            j,
            l: dd + j - t,
        })
    }

    fn values(&self) -> [f64; 11] {
        [
            self.theta,
            self.epsilon,
            self.t,
            self.c,
            self.c_l,
            self.c_m,
            self.k,
            self.m,
            self.d,
            self.j,
            self.l,
        ]
    }

    fn from_values(v: &[f64]) -> Self {
        Self {
            theta: v[0],
            epsilon: v[1],
            t: v[2],
            c: v[3],
            c_l: v[4],
            c_m: v[5],
            k: v[6],
            m: v[7],
            d: v[8],
            j: v[9],
            l: v[10],
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub thetas: Vec<f64>,
    pub epsilons: Vec<f64>,
    /// θ-major: all ε values for `thetas[0]`, then `thetas[1]`, ...
    pub records: Vec<ScanRecord>,
    /// Comment lines, without the leading `#`.
    pub provenance: Vec<String>,
}

impl ScanTable {
    pub fn record(&self, theta_index: usize, epsilon_index: usize) -> &ScanRecord {
        &self.records[theta_index * self.epsilons.len() + epsilon_index]
    }

    /// All cells with `epsilons[epsilon_index]`, in θ order.
    pub fn epsilon_row(&self, epsilon_index: usize) -> Vec<&ScanRecord> {
        (0..self.thetas.len()).map(|t| self.record(t, epsilon_index)).collect()
    }

    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        for line in &self.provenance {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SCAN_COLUMNS)?;
        for r in &self.records {
            w.write_record(r.values().iter().map(|x| format!("{x:.16e}")))?;
        }
        w.flush()
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ASCII output")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let parse_err = |context: String, message: String| Error::Parse { context, message };
        let provenance = text
            .lines()
            .filter_map(|l| l.strip_prefix('#'))
            .map(|l| l.strip_prefix(' ').unwrap_or(l).to_string())
            .collect();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| parse_err("header".into(), e.to_string()))?
            .clone();
        if headers.iter().ne(SCAN_COLUMNS.iter().copied()) {
            return Err(parse_err(
                "header".into(),
                format!("expected columns {}", SCAN_COLUMNS.join(",")),
            ));
        }
        let mut records = Vec::new();
        for (i, row) in reader.records().enumerate() {
            let row = row.map_err(|e| parse_err(format!("record {}", i + 1), e.to_string()))?;
            let values = row
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| parse_err(format!("record {}", i + 1), e.to_string()))?;
            if values.len() != SCAN_COLUMNS.len() {
                return Err(parse_err(format!("record {}", i + 1), "wrong column count".into()));
            }
            records.push(ScanRecord::from_values(&values));
        }

        let mut thetas: Vec<f64> = Vec::new();
        let mut epsilons: Vec<f64> = Vec::new();
        for r in &records {
            if thetas.last() != Some(&r.theta) {
                thetas.push(r.theta);
            }
            if thetas.len() == 1 {
                epsilons.push(r.epsilon);
            }
        }
        if thetas.len() * epsilons.len() != records.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} records do not form a {}x{} grid",
                records.len(),
                thetas.len(),
                epsilons.len()
            )));
        }
        Ok(Self {
            thetas,
            epsilons,
            records,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub theta_points: usize,
    pub epsilon_points: usize,
    pub theta_range: (f64, f64),
    pub epsilon_range: (f64, f64),
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            theta_points: 65,
            epsilon_points: 101,
            theta_range: (0.0, FRAC_PI_4),
            epsilon_range: (0.0, 1.0),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.theta_points < 2 || self.epsilon_points < 2 {
            return Err(Error::InvalidRange("grid sizes must be at least 2".into()));
        }
        let (t0, t1) = self.theta_range;
        if !(0.0 <= t0 && t0 < t1 && t1 <= FRAC_PI_4) {
            return Err(Error::InvalidRange(format!(
                "theta range [{t0}, {t1}] must be increasing within [0, π/4]"
            )));
        }
        let (e0, e1) = self.epsilon_range;
        if !(0.0 <= e0 && e0 < e1 && e1 <= 1.0) {
            return Err(Error::InvalidRange(format!(
                "epsilon range [{e0}, {e1}] must be increasing within [0, 1]"
            )));
        }
        Ok(())
    }
}

/// Evaluates every cell of the `(θ, ε)` grid for `mdms(ε, θ, 0)`.
pub fn scan_mdms(cfg: &ScanConfig) -> Result<ScanTable> {
    cfg.validate()?;
    let thetas = linspace(cfg.theta_range.0, cfg.theta_range.1, cfg.theta_points);
    let epsilons = linspace(cfg.epsilon_range.0, cfg.epsilon_range.1, cfg.epsilon_points);
    let mut records = Vec::with_capacity(thetas.len() * epsilons.len());
    for &theta in &thetas {
        for &epsilon in &epsilons {
            records.push(ScanRecord::compute(epsilon, theta)?);
        }
    }
    let provenance =
        vec![
            format!("qhookup {} scan-mdms", env!("CARGO_PKG_VERSION")),
            format!(
            "theta_points={} theta_range=[{:.16e}, {:.16e}] epsilon_points={} epsilon_range=[{:.16e}, {:.16e}] phi=0",
            cfg.theta_points, cfg.theta_range.0, cfg.theta_range.1, cfg.epsilon_points, cfg.epsilon_range.0,
            cfg.epsilon_range.1
        ),
            "basis=computational chi=symmetric-search seed=none".to_string(),
        ];
    Ok(ScanTable {
        thetas,
        epsilons,
        records,
        provenance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    /// Where the optimizer's χ basis leaves the computational basis and where
    /// it reaches the x-basis.
    BasisSwitch,
    /// Where the θ-curvature of the computational-basis dephased entropy
    /// changes sign, near θ = 0 and near θ = π/4.
    Derivative,
}

impl std::str::FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis-switch" => Ok(Self::BasisSwitch),
            "derivative" => Ok(Self::Derivative),
            other => Err(Error::BadParams(format!(
                "unknown threshold method `{other}` (basis-switch, derivative)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub value: f64,
    pub bracket: (f64, f64),
    /// Basis-switch: the final bracket width. Derivative: |curvature| at the root.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub method: ThresholdMethod,
    pub epsilon_prime: Threshold,
    pub epsilon_double_prime: Threshold,
}

/// Tilt, in radians, beyond which a basis counts as rotated.
pub const TILT_TOLERANCE: f64 = 0.02;
pub const CURVATURE_STEP: f64 = 1e-4;
const SEARCH_RANGE: (f64, f64) = (0.05, 0.95);

/// Bisects on ε for the boundary between `pred == false` (below) and
/// `pred == true` (above).
fn bisect(
    mut pred: impl FnMut(f64) -> Result<bool>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    what: &str,
) -> Result<(f64, f64)> {
    if pred(lo)? || !pred(hi)? {
        return Err(Error::NoRootBracketed(format!(
            "{what} not bracketed by ε ∈ [{lo}, {hi}]"
        )));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

fn chi_tilts(epsilon: f64, cfg: &OptimizerConfig) -> Result<Vec<f64>> {
    let cc = closest_classical(&mdms_state(epsilon, 0.0, 0.0), cfg)?;
    Ok(cc
        .basis
        .angles()
        .expect("qubit basis")
        .iter()
        .map(|a| a.theta)
        .collect())
}

/// Second θ-derivative of S(Δ[mdms(ε, θ, 0)]) in the computational basis.
pub fn theta_curvature(epsilon: f64, theta: f64) -> f64 {
    let f = |t: f64| {
        shannon_entropy(
            &mdms_state(epsilon, t, 0.0)
                .matrix()
                .diagonal()
                .iter()
                .map(|z| z.re)
                .collect::<Vec<_>>(),
        )
    };
    let h = CURVATURE_STEP;
    (f(theta + h) - 2.0 * f(theta) + f(theta - h)) / (h * h)
}

pub fn find_thresholds(method: ThresholdMethod, cfg: &OptimizerConfig) -> Result<ThresholdResult> {
    let (lo, hi) = SEARCH_RANGE;
    let (prime, double_prime) = match method {
        ThresholdMethod::BasisSwitch => {
            let tol = 1e-5;
            let p = bisect(
                |e| Ok(chi_tilts(e, cfg)?.iter().any(|&t| t > TILT_TOLERANCE)),
                lo,
                hi,
                tol,
                "departure from the computational basis",
            )?;
            let dp = bisect(
                |e| Ok(chi_tilts(e, cfg)?.iter().all(|&t| t >= FRAC_PI_4 - TILT_TOLERANCE)),
                lo,
                hi,
                tol,
                "arrival at the x-basis",
            )?;
            let t = |b: (f64, f64)| Threshold {
                value: 0.5 * (b.0 + b.1),
                bracket: b,
                residual: b.1 - b.0,
            };
            (t(p), t(dp))
        }
        ThresholdMethod::Derivative => {
            let tol = 1e-6;
            let near_zero = CURVATURE_STEP;
            let near_x = FRAC_PI_4 - CURVATURE_STEP;
            let p = bisect(
                |e| Ok(theta_curvature(e, near_zero) < 0.0),
                lo,
                hi,
                tol,
                "curvature root near θ = 0",
            )?;
            let dp = bisect(
                |e| Ok(theta_curvature(e, near_x) > 0.0),
                lo,
                hi,
                tol,
                "curvature root near θ = π/4",
            )?;
            let t = |b: (f64, f64), theta: f64| {
                let value = 0.5 * (b.0 + b.1);
                Threshold {
                    value,
                    bracket: b,
                    residual: theta_curvature(value, theta).abs(),
                }
            };
            (t(p, near_zero), t(dp, near_x))
        }
    };
    Ok(ThresholdResult {
        method,
        epsilon_prime: prime,
        epsilon_double_prime: double_prime,
    })
}

/// Range of K − J over θ for one family of local rotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KjSpread {
    pub max_k_minus_j: f64,
    pub theta_at_max: f64,
    pub min_k_minus_j: f64,
    pub theta_at_min: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KjComparison {
    pub epsilon: f64,
    pub j: f64,
    /// K of mdms(ε, θ, 0), rotated by U(θ) on both qubits.
    pub symmetric: KjSpread,
    /// K of the base state rotated by U(θ, 0) on the first qubit only.
    pub one_sided: KjSpread,
}

fn spread(thetas: &[f64], j: f64, k_at: impl Fn(f64) -> Result<f64>) -> Result<KjSpread> {
    let mut s = KjSpread {
        max_k_minus_j: f64::NEG_INFINITY,
        theta_at_max: 0.0,
        min_k_minus_j: f64::INFINITY,
        theta_at_min: 0.0,
    };
    for &theta in thetas {
        let diff = k_at(theta)? - j;
        if diff > s.max_k_minus_j {
            s.max_k_minus_j = diff;
            s.theta_at_max = theta;
        }
        if diff < s.min_k_minus_j {
            s.min_k_minus_j = diff;
            s.theta_at_min = theta;
        }
    }
    Ok(s)
}

/// K − J across θ ∈ [0, π/4] for each ε. J is local-unitary invariant, so it
/// is computed once per ε.
pub fn compare_jk(epsilons: &[f64], theta_points: usize) -> Result<Vec<KjComparison>> {
    if theta_points < 65 {
        return Err(Error::InvalidRange(format!(
            "compare-jk needs at least 65 θ points, got {theta_points}"
        )));
    }
    let thetas = linspace(0.0, FRAC_PI_4, theta_points);
    let comp = ProductBasis::computational(&[2, 2]);
    epsilons
        .iter()
        .map(|&epsilon| {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(Error::InvalidRange(format!("ε = {epsilon} is outside (0, 1)")));
            }
            let base = mdms_state(epsilon, 0.0, 0.0);
            let j = ScanRecord::compute(epsilon, 0.0)?.j;
            let symmetric = spread(&thetas, j, |t| {
                irreducible_classical(&mdms_state(epsilon, t, 0.0), &comp)
            })?;
            let one_sided = spread(&thetas, j, |t| {
                let u = kron(&rotation(t), &ComplexMatrix::identity(2));
                let m = conjugate_unchecked(base.matrix(), &u);
                irreducible_classical(&DensityMatrix::new(vec![2, 2], m)?, &comp)
            })?;
            Ok(KjComparison {
                epsilon,
                j,
                symmetric,
                one_sided,
            })
        })
        .collect()
}
