//! Coherence and correlation quantifiers.
//!
//! Fixed-basis measures take a [`ProductBasis`] and accept any subsystem
//! dimensions. Discord, classical correlations, `L` and global discord minimize
//! over local qubit bases and live in [`classical`].

pub mod classical;
pub mod optimizer;
mod report;

pub use classical::{
    classical_correlations, closest_classical, discord, global_discord, l_term, ClosestClassical, CorrelationSplit,
    GlobalDiscord, LTerm,
};
pub use optimizer::{minimize_over_product_bases, Minimum, OptimizerConfig, OptimizerMeta, MAX_OPTIMIZED_QUBITS};
pub use report::{full_report, OptimizerSummary, QuantifierReport, Residuals};

use crate::channels::{dephase, marginal_product, ProductBasis};
use crate::error::Result;
use crate::states::{relative_entropy, von_neumann_entropy, DensityMatrix};

/// T = S(π[ρ]) − S(ρ), the total mutual information.
pub fn total_correlations(d: &DensityMatrix) -> Result<f64> {
    Ok(von_neumann_entropy(&marginal_product(d))? - von_neumann_entropy(d)?)
}

/// C = S(Δ_b[ρ]) − S(ρ).
pub fn coherence(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    Ok(von_neumann_entropy(&dephase(d, b)?)? - von_neumann_entropy(d)?)
}

/// Sum of the coherences of the single-subsystem marginals, each in its own
/// factor of `b`.
pub fn local_coherence(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    b.check_dims(d.dims())?;
    let mut total = 0.0;
    for (k, factor) in b.factors().iter().enumerate() {
        let marginal = d.marginal(k)?;
        let local = ProductBasis::new(vec![factor.clone()])?;
        total += coherence(&marginal, &local)?;
    }
    Ok(total)
}

/// C_L as S(π[ρ] ‖ Δ_b[π[ρ]]).
pub fn local_coherence_of_product(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    let pi = marginal_product(d);
    let dephased = dephase(&pi, b)?;
    relative_entropy(&pi, &dephased)
}

/// C_M = C − C_L.
pub fn multipartite_coherence(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    Ok(coherence(d, b)? - local_coherence(d, b)?)
}

/// C_M as T(ρ) − T(Δ_b[ρ]).
pub fn multipartite_coherence_from_correlations(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    Ok(total_correlations(d)? - irreducible_classical(d, b)?)
}

/// K = T(Δ_b[ρ]), the correlations that survive dephasing.
pub fn irreducible_classical(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    total_correlations(&dephase(d, b)?)
}

/// M = S(Δ_b[π[ρ]]) − S(ρ): relative entropy to the closest incoherent
/// product state.
pub fn hookup(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    Ok(von_neumann_entropy(&dephase(&marginal_product(d), b)?)? - von_neumann_entropy(d)?)
}
