use serde::Serialize;

use super::classical::{closest_classical, global_discord, CorrelationSplit};
use super::optimizer::OptimizerConfig;
use super::{coherence, hookup, irreducible_classical, local_coherence, total_correlations};
use crate::channels::ProductBasis;
use crate::error::{Error, Result};
use crate::states::DensityMatrix;
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerSummary {
    pub starts_used: usize,
    /// S(χ) at the chosen basis.
    pub best_objective: f64,
    pub converged: bool,
    pub global_discord_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    /// |M − (T + C_L)|
    pub hookup_vs_total_plus_local: f64,
    /// |M − (C + K)|
    pub hookup_vs_coherence_plus_classical: f64,
    /// |(D + J − T) − S(π[ρ] ‖ π[χ])|
    pub l_forms: Option<f64>,
}

/// Every quantifier for one state and reference basis. Optimizer-based fields
/// are `None` when the state is not made of at most four qubits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantifierReport {
    #[serde(rename = "T")]
    pub total_correlations: f64,
    #[serde(rename = "C")]
    pub coherence: f64,
    #[serde(rename = "C_L")]
    pub local_coherence: f64,
    #[serde(rename = "C_M")]
    pub multipartite_coherence: f64,
    #[serde(rename = "K")]
    pub irreducible_classical: f64,
    #[serde(rename = "M")]
    pub hookup: f64,
    #[serde(rename = "D")]
    pub discord: Option<f64>,
    #[serde(rename = "J")]
    pub classical_correlations: Option<f64>,
    #[serde(rename = "L")]
    pub l_term: Option<f64>,
    #[serde(rename = "G")]
    pub global_discord: Option<f64>,
    pub reference_basis: ProductBasis,
    pub chi_basis: Option<ProductBasis>,
    pub g_basis: Option<ProductBasis>,
    pub optimizer: Option<OptimizerSummary>,
    pub residuals: Residuals,
    pub numerical_warning: bool,
    /// Why the optimizer-based fields are missing, if they are.
    pub unavailable: Option<String>,
}

pub fn full_report(d: &DensityMatrix, b: &ProductBasis, cfg: &OptimizerConfig) -> Result<QuantifierReport> {
    b.check_dims(d.dims())?;
    let t = total_correlations(d)?;
    let c = coherence(d, b)?;
    let c_l = local_coherence(d, b)?;
    let k = irreducible_classical(d, b)?;
    let m = hookup(d, b)?;

    let mut report = QuantifierReport {
        total_correlations: t,
        coherence: c,
        local_coherence: c_l,
        multipartite_coherence: c - c_l,
        irreducible_classical: k,
        hookup: m,
        discord: None,
        classical_correlations: None,
        l_term: None,
        global_discord: None,
        reference_basis: b.clone(),
        chi_basis: None,
        g_basis: None,
        optimizer: None,
        residuals: Residuals {
            hookup_vs_total_plus_local: (m - t - c_l).abs(),
            hookup_vs_coherence_plus_classical: (m - c - k).abs(),
            l_forms: None,
        },
        numerical_warning: false,
        unavailable: None,
    };

    match closest_classical(d, cfg) {
        Ok(cc) => {
            let split = CorrelationSplit::new(d, &cc)?;
            let g = global_discord(d, cfg)?;
            report.discord = Some(split.discord);
            report.classical_correlations = Some(split.classical_correlations);
            report.l_term = Some(split.l.value);
            report.global_discord = Some(g.value);
            report.residuals.l_forms = Some((split.l.value - split.l.via_marginals).abs());
            report.optimizer = Some(OptimizerSummary {
                starts_used: cc.meta.starts_used,
                best_objective: cc.meta.best_objective,
                converged: cc.meta.converged,
                global_discord_converged: g.meta.converged,
            });
            report.chi_basis = Some(cc.basis);
            report.g_basis = Some(g.basis);
        }
        Err(e @ (Error::NotAllQubits(_) | Error::TooManyQubits { .. })) => {
            report.unavailable = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }

    let r = &report.residuals;
    report.numerical_warning = [
        Some(r.hookup_vs_total_plus_local),
        Some(r.hookup_vs_coherence_plus_classical),
        r.l_forms,
    ]
    .into_iter()
    .flatten()
    .any(|x| x.is_nan() || x > tol::IDENTITY);
    Ok(report)
}
