//! Reference-value checks run by `qhookup verify`.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write;
use std::time::Instant;

use serde::Serialize;

use qhookup_core::family::{find_thresholds, scan_mdms, ScanConfig, ScanTable, ThresholdMethod};
use qhookup_core::quantifiers::{
    closest_classical, coherence, hookup, irreducible_classical, multipartite_coherence, CorrelationSplit,
};
use qhookup_core::{OptimizerConfig, Preset, ProductBasis, Result};

/// Minimum |K − J| counted as a definite sign.
pub const SIGN_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub group: u8,
    pub check: String,
    pub expected: String,
    pub actual: f64,
    pub tolerance: String,
    pub pass: bool,
}

fn near(group: u8, check: &str, expected: f64, actual: f64, tol: f64) -> Row {
    Row {
        group,
        check: check.to_string(),
        expected: short(expected),
        actual,
        tolerance: format!("±{tol:e}"),
        pass: (actual - expected).abs() <= tol,
    }
}

fn short(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn number(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.3e}")
    } else {
        format!("{x:.10}")
    }
}

fn bound(group: u8, check: &str, expected: &str, actual: f64, pass: bool) -> Row {
    Row {
        group,
        check: check.to_string(),
        expected: expected.to_string(),
        actual,
        tolerance: "-".to_string(),
        pass,
    }
}

pub fn run(cfg: &OptimizerConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    paper_example(cfg, &mut rows)?;
    w_mixture(cfg, &mut rows)?;
    thresholds(cfg, &mut rows)?;
    scan_structure(&mut rows)?;
    Ok(rows)
}

fn paper_example(cfg: &OptimizerConfig, rows: &mut Vec<Row>) -> Result<()> {
    let start = Instant::now();
    let d = Preset::PaperExample.build()?;
    let b = ProductBasis::computational(d.dims());
    rows.push(near(1, "ρ*: M", 0.5, hookup(&d, &b)?, 1e-6));
    rows.push(near(1, "ρ*: C", 0.5, coherence(&d, &b)?, 1e-6));
    rows.push(near(1, "ρ*: C_M", 0.5, multipartite_coherence(&d, &b)?, 1e-6));
    rows.push(near(1, "ρ*: K", 0.0, irreducible_classical(&d, &b)?, 1e-9));
    let cc = closest_classical(&d, cfg)?;
    let split = CorrelationSplit::new(&d, &cc)?;
    rows.push(near(1, "ρ*: D", 0.31, split.discord, 0.01));
    rows.push(near(1, "ρ*: J", 0.19, split.classical_correlations, 0.01));
    for (k, a) in cc.basis.angles().unwrap_or_default().iter().enumerate() {
        rows.push(near(
            1,
            &format!("ρ*: χ basis θ, qubit {}", k + 1),
            FRAC_PI_4,
            a.theta,
            0.02,
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    rows.push(bound(1, "ρ*: runtime (s)", "< 5", secs, secs < 5.0));
    Ok(())
}

fn w_mixture(cfg: &OptimizerConfig, rows: &mut Vec<Row>) -> Result<()> {
    let start = Instant::now();
    let d = Preset::WMixture.build()?;
    let split = CorrelationSplit::compute(&d, cfg)?;
    rows.push(near(2, "L(υ) as D + J - T", 0.24, split.l.value, 0.01));
    rows.push(near(2, "L(υ) as S(π[υ]‖π[χ])", 0.24, split.l.via_marginals, 0.01));
    let gap = (split.l.value - split.l.via_marginals).abs();
    rows.push(bound(2, "L(υ) cross-form |Δ|", "≤ 1e-6", gap, gap <= 1e-6));
    let secs = start.elapsed().as_secs_f64();
    rows.push(bound(2, "υ: runtime (s)", "< 30", secs, secs < 30.0));
    Ok(())
}

fn thresholds(cfg: &OptimizerConfig, rows: &mut Vec<Row>) -> Result<()> {
    let switch = find_thresholds(ThresholdMethod::BasisSwitch, cfg)?;
    let deriv = find_thresholds(ThresholdMethod::Derivative, cfg)?;
    rows.push(near(3, "ε′ (basis-switch)", 0.6667, switch.epsilon_prime.value, 0.01));
    rows.push(near(
        3,
        "ε″ (basis-switch)",
        0.76,
        switch.epsilon_double_prime.value,
        0.01,
    ));
    rows.push(near(3, "ε′ (derivative)", 0.6667, deriv.epsilon_prime.value, 0.01));
    rows.push(near(3, "ε″ (derivative)", 0.76, deriv.epsilon_double_prime.value, 0.01));
    let gap = (switch.epsilon_prime.value - deriv.epsilon_prime.value).abs();
    rows.push(bound(3, "ε′ method agreement |Δ|", "≤ 0.01", gap, gap <= 0.01));
    let gap = (switch.epsilon_double_prime.value - deriv.epsilon_double_prime.value).abs();
    rows.push(bound(3, "ε″ method agreement |Δ|", "≤ 0.01", gap, gap <= 0.01));
    Ok(())
}

/// Largest amount by which some θ in each ε row beats the value at `pick`,
/// maximized over rows. Zero or negative means `pick` is the row extremum.
fn worst_extremum(
    table: &ScanTable,
    value: impl Fn(&qhookup_core::family::ScanRecord) -> f64,
    pick: usize,
    maximum: bool,
) -> f64 {
    (0..table.epsilons.len())
        .map(|e| {
            let row = table.epsilon_row(e);
            let at = value(row[pick]);
            row.iter()
                .map(|r| if maximum { value(r) - at } else { at - value(r) })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn scan_structure(rows: &mut Vec<Row>) -> Result<()> {
    let table = scan_mdms(&ScanConfig::default())?;
    let last = table.thetas.len() - 1;

    let high_eps_max = (0..table.epsilons.len())
        .filter(|&e| table.epsilons[e] > 0.77)
        .map(|e| {
            table
                .epsilon_row(e)
                .iter()
                .map(|r| r.k - r.j)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    rows.push(bound(
        4,
        "max over ε > 0.77 of max_θ(K - J)",
        "≤ 1e-6",
        high_eps_max,
        high_eps_max <= 1e-6,
    ));

    for target in [0.3, 0.5] {
        let e = nearest_index(&table.epsilons, target);
        let diffs: Vec<f64> = table.epsilon_row(e).iter().map(|r| r.k - r.j).collect();
        let max = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = diffs.iter().copied().fold(f64::INFINITY, f64::min);
        rows.push(bound(
            4,
            &format!("ε = {target}: max_θ(K - J)"),
            "> 1e-6",
            max,
            max > SIGN_THRESHOLD,
        ));
        rows.push(bound(
            4,
            &format!("ε = {target}: min_θ(K - J)"),
            "< -1e-6",
            min,
            min < -SIGN_THRESHOLD,
        ));
    }

    let k = worst_extremum(&table, |r| r.k, last, true);
    rows.push(bound(4, "K maximal at θ = π/4 (worst excess)", "≤ 1e-9", k, k <= 1e-9));
    let m_max = worst_extremum(&table, |r| r.m, last, true);
    rows.push(bound(
        4,
        "M maximal at θ = π/4 (worst excess)",
        "≤ 1e-9",
        m_max,
        m_max <= 1e-9,
    ));
    let m_min = worst_extremum(&table, |r| r.m, 0, false);
    rows.push(bound(
        4,
        "M minimal at θ = 0 (worst excess)",
        "≤ 1e-9",
        m_min,
        m_min <= 1e-9,
    ));
    Ok(())
}

fn nearest_index(values: &[f64], target: f64) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

pub fn render(rows: &[Row]) -> String {
    let mut s = format!(
        "{:<3} {:<40} {:>10} {:>18} {:>10}  {}\n",
        "#", "check", "expected", "actual", "tolerance", "result"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<3} {:<40} {:>10} {:>18} {:>10}  {}",
            r.group,
            r.check,
            r.expected,
            number(r.actual),
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(s, "{} checks, {} failed", rows.len(), failed);
    s
}
