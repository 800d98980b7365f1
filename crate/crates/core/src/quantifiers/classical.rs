//! Quantifiers defined by a minimum over local qubit bases.

use serde::Serialize;

use super::multipartite_coherence;
use super::optimizer::{minimize_over_product_bases, OptimizerConfig, OptimizerMeta, MAX_OPTIMIZED_QUBITS};
use crate::channels::{
    basis_probabilities, dephase, marginal_distributions, marginal_product, qubit_unitary, rotated_diagonal,
    ProductBasis,
};
use crate::error::{Error, Result};
use crate::numerics::{kron_all, ComplexMatrix};
use crate::states::{relative_entropy, shannon_entropy, von_neumann_entropy, DensityMatrix};

fn require_qubits(d: &DensityMatrix) -> Result<usize> {
    if !d.is_all_qubits() {
        return Err(Error::NotAllQubits(d.dims().to_vec()));
    }
    let n = d.num_subsystems();
    if n > MAX_OPTIMIZED_QUBITS {
        return Err(Error::TooManyQubits {
            got: n,
            max: MAX_OPTIMIZED_QUBITS,
        });
    }
    Ok(n)
}

fn unitary_from_flat(angles: &[f64]) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = angles.chunks_exact(2).map(|a| qubit_unitary(a[0], a[1])).collect();
    kron_all(&factors)
}

/// Distribution of `d` measured in the product basis given by flat angles.
pub(crate) fn probabilities_at(d: &DensityMatrix, angles: &[f64]) -> Vec<f64> {
    rotated_diagonal(d.matrix(), &unitary_from_flat(angles))
}

#[derive(Debug, Clone)]
pub struct ClosestClassical {
    /// Δ_b[ρ] for the minimizing basis.
    pub chi: DensityMatrix,
    pub basis: ProductBasis,
    /// S(χ), the minimized objective.
    pub entropy: f64,
    pub meta: OptimizerMeta,
}

/// χ: the dephasing of `d` in the local qubit basis that minimizes S(Δ_b[d]).
pub fn closest_classical(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<ClosestClassical> {
    let n = require_qubits(d)?;
    let min = minimize_over_product_bases(|x| shannon_entropy(&probabilities_at(d, x)), n, cfg)?;
    let basis = ProductBasis::from_flat_angles(&min.angles);
    let chi = dephase(d, &basis)?;
    let entropy = shannon_entropy(&basis_probabilities(d, &basis)?);
    Ok(ClosestClassical {
        chi,
        basis,
        entropy,
        meta: min.meta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LTerm {
    /// D + J − T.
    pub value: f64,
    /// S(π[ρ] ‖ π[χ]).
    pub via_marginals: f64,
}

/// Discord, classical correlations and `L`, all sharing one χ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationSplit {
    pub discord: f64,
    pub classical_correlations: f64,
    pub total_correlations: f64,
    pub l: LTerm,
}

impl CorrelationSplit {
    pub fn new(d: &DensityMatrix, cc: &ClosestClassical) -> Result<Self> {
        let s_rho = von_neumann_entropy(d)?;
        let pi_rho = marginal_product(d);
        let pi_chi = marginal_product(&cc.chi);
        let discord = cc.entropy - s_rho;
        let classical_correlations = von_neumann_entropy(&pi_chi)? - cc.entropy;
        let total = von_neumann_entropy(&pi_rho)? - s_rho;
        Ok(Self {
            discord,
            classical_correlations,
            total_correlations: total,
            l: LTerm {
                value: discord + classical_correlations - total,
                via_marginals: relative_entropy(&pi_rho, &pi_chi)?,
            },
        })
    }

    pub fn compute(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<Self> {
        Self::new(d, &closest_classical(d, cfg)?)
    }
}

/// D = S(χ) − S(ρ).
pub fn discord(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(CorrelationSplit::compute(d, cfg)?.discord)
}

/// J = S(π[χ]) − S(χ).
pub fn classical_correlations(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(CorrelationSplit::compute(d, cfg)?.classical_correlations)
}

pub fn l_term(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<LTerm> {
    Ok(CorrelationSplit::compute(d, cfg)?.l)
}

#[derive(Debug, Clone)]
pub struct GlobalDiscord {
    pub value: f64,
    pub basis: ProductBasis,
    pub meta: OptimizerMeta,
}

/// G: the minimum of C_M over local qubit bases.
pub fn global_discord(d: &DensityMatrix, cfg: &OptimizerConfig) -> Result<GlobalDiscord> {
    let n = require_qubits(d)?;
    // C_M(b) = H(p) − Σ H(p_k) + Σ S(ρ_k) − S(ρ); only the first two terms
    // depend on b.
    let dims = d.dims().to_vec();
    let objective = |x: &[f64]| {
        let p = probabilities_at(d, x);
        let local: f64 = marginal_distributions(&p, &dims)
            .iter()
            .map(|q| shannon_entropy(q))
            .sum();
        shannon_entropy(&p) - local
    };
    let min = minimize_over_product_bases(objective, n, cfg)?;
    let basis = ProductBasis::from_flat_angles(&min.angles);
    let value = multipartite_coherence(d, &basis)?;
    Ok(GlobalDiscord {
        value,
        basis,
        meta: min.meta,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;
    use crate::states::Preset;

    #[test]
    fn bell_state() {
        let d = Preset::Bell.build().unwrap();
        let cfg = OptimizerConfig::default();
        let split = CorrelationSplit::compute(&d, &cfg).unwrap();
        assert!((split.discord - 1.0).abs() < 1e-8);
        assert!((split.classical_correlations - 1.0).abs() < 1e-8);
        assert!(split.l.value.abs() < 1e-8);
        let g = global_discord(&d, &cfg).unwrap();
        assert!((g.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn paper_example_uses_x_basis() {
        let d = Preset::PaperExample.build().unwrap();
        let cc = closest_classical(&d, &OptimizerConfig::default()).unwrap();
        for a in cc.basis.angles().unwrap() {
            assert!((a.theta - FRAC_PI_4).abs() < 1e-4, "{a:?}");
        }
        let split = CorrelationSplit::new(&d, &cc).unwrap();
        assert!((split.discord - 0.31).abs() < 0.01);
        assert!((split.classical_correlations - 0.19).abs() < 0.01);
    }

    #[test]
    fn qutrits_are_rejected() {
        let d = Preset::Diagonal {
            dims: vec![2, 3],
            probabilities: vec![1.0 / 6.0; 6],
        }
        .build()
        .unwrap();
        assert!(matches!(
            discord(&d, &OptimizerConfig::default()),
            Err(Error::NotAllQubits(_))
        ));
    }

    #[test]
    fn five_qubits_are_rejected() {
        let d = Preset::Diagonal {
            dims: vec![2; 5],
            probabilities: vec![1.0 / 32.0; 32],
        }
        .build()
        .unwrap();
        assert!(matches!(
            global_discord(&d, &OptimizerConfig::default()),
            Err(Error::TooManyQubits { got: 5, max: 4 })
        ));
    }
}
