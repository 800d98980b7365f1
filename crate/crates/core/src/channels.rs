//! Total dephasing in a product basis and the product of marginals: the two
//! idempotent operations whose fixed points are, respectively, incoherent and
//! uncorrelated states.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, kron_all, ComplexMatrix};
use crate::states::DensityMatrix;
use crate::tol;

/// Two-angle parameterization of a qubit basis,
///
/// ```text
/// U(θ, φ) = [[ cos θ,           e^{iφ} sin θ ],
///            [ -e^{-iφ} sin θ,  cos θ        ]]
/// ```
///
/// whose columns are the basis vectors. θ ∈ [0, π/2] and φ ∈ [0, 2π) reach
/// every qubit basis up to reordering.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitAngles {
    pub theta: f64,
    pub phi: f64,
}

impl QubitAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidRange(format!("theta {theta} outside [0, π/2]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidRange(format!("phi {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn unitary(&self) -> ComplexMatrix {
        qubit_unitary(self.theta, self.phi)
    }

    /// Folds arbitrary angles onto the canonical half-sphere θ ∈ [0, π/4],
    /// φ ∈ [0, 2π) without changing the projector set.
    ///
    /// Uses U(θ + π) = −U(θ), U(−θ, φ) = U(θ, φ + π) and the fact that
    /// U(π/2 − θ, φ + π) is U(θ, φ) with its columns swapped up to phases.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(PI);
        let mut p = phi;
        if t > FRAC_PI_2 {
            t = PI - t;
            p += PI;
        }
        if t > FRAC_PI_2 / 2.0 {
            t = FRAC_PI_2 - t;
            p += PI;
        }
        p = p.rem_euclid(2.0 * PI);
        // Guard against rem_euclid returning exactly 2π for tiny negatives.
        if p >= 2.0 * PI {
            p = 0.0;
        }
        if t.sin().abs() < 1e-12 {
            // φ is irrelevant for the computational basis.
            p = 0.0;
        }
        Self { theta: t, phi: p }
    }
}

pub fn qubit_unitary(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    ComplexMatrix::from_vec(
        2,
        2,
        vec![Complex64::new(c, 0.0), e * s, -e.conj() * s, Complex64::new(c, 0.0)],
    )
    .expect("2x2")
}

/// One unitary per subsystem; column `k` of factor `i` is basis vector `|k⟩`
/// of subsystem `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBasis {
    factors: Vec<ComplexMatrix>,
    angles: Option<Vec<QubitAngles>>,
}

impl ProductBasis {
    pub fn computational(dims: &[usize]) -> Self {
        Self {
            factors: dims.iter().map(|&d| ComplexMatrix::identity(d)).collect(),
            angles: dims
                .iter()
                .all(|&d| d == 2)
                .then(|| vec![QubitAngles { theta: 0.0, phi: 0.0 }; dims.len()]),
        }
    }

    /// Explicit factors, each of which must be unitary within 1e-9.
    pub fn new(factors: Vec<ComplexMatrix>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::DimensionMismatch("empty product basis".into()));
        }
        for f in &factors {
            let deviation = f.unitarity_deviation();
            if deviation > tol::VALIDITY {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { factors, angles: None })
    }

    /// Qubit basis from a flat `[θ1, φ1, θ2, φ2, ...]` slice. Angles are
    /// canonicalized, so any real values are accepted.
    pub fn from_flat_angles(flat: &[f64]) -> Self {
        assert!(flat.len() % 2 == 0 && !flat.is_empty(), "need (θ, φ) pairs");
        let angles: Vec<QubitAngles> = flat
            .chunks_exact(2)
            .map(|a| QubitAngles::canonical(a[0], a[1]))
            .collect();
        Self {
            factors: angles.iter().map(QubitAngles::unitary).collect(),
            angles: Some(angles),
        }
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    pub fn angles(&self) -> Option<&[QubitAngles]> {
        self.angles.as_deref()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(ComplexMatrix::rows).collect()
    }

    /// The full-space unitary `U_1 ⊗ ... ⊗ U_n`.
    pub fn unitary(&self) -> ComplexMatrix {
        kron_all(&self.factors)
    }

    pub fn is_computational(&self) -> bool {
        self.factors.iter().all(|f| *f == ComplexMatrix::identity(f.rows()))
    }

    pub fn check_dims(&self, dims: &[usize]) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch(format!(
                "basis dims {:?} vs state dims {dims:?}",
                self.dims()
            )));
        }
        Ok(())
    }
}

/// Serialized as `{"angles": [...]}` for qubit bases built from angles,
/// otherwise as `{"factors": [...]}` with each entry written `[re, im]`.
impl Serialize for ProductBasis {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(1))?;
        match &self.angles {
            Some(angles) => map.serialize_entry("angles", angles)?,
            None => {
                let factors: Vec<Vec<Vec<[f64; 2]>>> = self
                    .factors
                    .iter()
                    .map(|f| {
                        (0..f.rows())
                            .map(|r| f.row(r).iter().map(|z| [z.re, z.im]).collect())
                            .collect()
                    })
                    .collect();
                map.serialize_entry("factors", &factors)?;
            }
        }
        map.end()
    }
}

pub fn basis_from_angles(dims: &[usize], angles: &[QubitAngles]) -> Result<ProductBasis> {
    if dims.iter().any(|&d| d != 2) {
        return Err(Error::NotAllQubits(dims.to_vec()));
    }
    if angles.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} angle pairs for {} qubits",
            angles.len(),
            dims.len()
        )));
    }
    Ok(ProductBasis {
        factors: angles.iter().map(QubitAngles::unitary).collect(),
        angles: Some(angles.to_vec()),
    })
}

/// Δ_b: rotate into `b`, drop off-diagonal entries, rotate back.
pub fn dephase(d: &DensityMatrix, b: &ProductBasis) -> Result<DensityMatrix> {
    b.check_dims(d.dims())?;
    let out = if b.is_computational() {
        d.matrix().diagonal_part()
    } else {
        let u = b.unitary();
        let rotated = &(&u.adjoint() * d.matrix()) * &u;
        numerics::conjugate_unchecked(&rotated.diagonal_part(), &u)
    };
    Ok(DensityMatrix::from_parts(d.dims().to_vec(), out))
}

/// π: tensor product of all single-subsystem marginals.
pub fn marginal_product(d: &DensityMatrix) -> DensityMatrix {
    let marginals: Vec<ComplexMatrix> = (0..d.num_subsystems()).map(|k| d.marginal_matrix(k)).collect();
    DensityMatrix::from_parts(d.dims().to_vec(), kron_all(&marginals))
}

/// Diagonal of `d` expressed in basis `b`: the outcome distribution of the
/// product measurement, and the spectrum of Δ_b[d].
pub fn basis_probabilities(d: &DensityMatrix, b: &ProductBasis) -> Result<Vec<f64>> {
    b.check_dims(d.dims())?;
    Ok(rotated_diagonal(d.matrix(), &b.unitary()))
}

/// `diag(u† m u)` without forming the full product.
pub(crate) fn rotated_diagonal(m: &ComplexMatrix, u: &ComplexMatrix) -> Vec<f64> {
    let mu = m * u;
    let n = m.rows();
    (0..n)
        .map(|k| {
            let mut acc = 0.0;
            for i in 0..n {
                acc += (u[(i, k)].conj() * mu[(i, k)]).re;
            }
            acc
        })
        .collect()
}

/// Single-subsystem marginals of a joint distribution over `dims`.
pub fn marginal_distributions(p: &[f64], dims: &[usize]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = dims.iter().map(|&d| vec![0.0; d]).collect();
    for (idx, &w) in p.iter().enumerate() {
        let mut rest = idx;
        for k in (0..dims.len()).rev() {
            out[k][rest % dims[k]] += w;
            rest /= dims[k];
        }
    }
    out
}

/// ‖Δ[π[d]] − π[Δ[d]]‖_max. Zero up to rounding for every state and product
/// basis, since dephasing in a product basis commutes with taking marginals.
pub fn commutation_check(d: &DensityMatrix, b: &ProductBasis) -> Result<f64> {
    let a = dephase(&marginal_product(d), b)?;
    let c = marginal_product(&dephase(d, b)?);
    Ok(a.matrix().max_abs_diff(c.matrix()))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use super::*;
    use crate::states::Preset;

    fn diag_state(p: &[f64], dims: &[usize]) -> DensityMatrix {
        DensityMatrix::new(dims.to_vec(), ComplexMatrix::from_diag(p)).unwrap()
    }

    #[test]
    fn dephasing_a_diagonal_state_is_a_noop() {
        let d = diag_state(&[0.1, 0.2, 0.3, 0.4], &[2, 2]);
        let out = dephase(&d, &ProductBasis::computational(&[2, 2])).unwrap();
        assert_eq!(out.matrix(), d.matrix());
    }

    #[test]
    fn dephasing_bell_state() {
        let bell = Preset::Bell.build().unwrap();
        let out = dephase(&bell, &ProductBasis::computational(&[2, 2])).unwrap();
        let expected = ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dephasing_paper_example_gives_maximally_mixed() {
        let rho = Preset::PaperExample.build().unwrap();
        let out = dephase(&rho, &ProductBasis::computational(&[2, 2])).unwrap();
        let expected = ComplexMatrix::from_diag(&[0.25; 4]);
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn dephasing_rejects_mismatched_basis() {
        let rho = Preset::Bell.build().unwrap();
        assert!(matches!(
            dephase(&rho, &ProductBasis::computational(&[2, 3])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn marginal_product_fixes_product_states() {
        let a = ComplexMatrix::from_real(&[&[0.6, 0.2], &[0.2, 0.4]]);
        let b = ComplexMatrix::from_diag(&[0.9, 0.1]);
        let d = DensityMatrix::new(vec![2, 2], numerics::kron(&a, &b)).unwrap();
        assert!(marginal_product(&d).matrix().max_abs_diff(d.matrix()) < 1e-15);
    }

    #[test]
    fn marginal_product_of_bell_state() {
        let out = marginal_product(&Preset::Bell.build().unwrap());
        assert!(out.matrix().max_abs_diff(&ComplexMatrix::from_diag(&[0.25; 4])) < 1e-15);
    }

    #[test]
    fn marginal_product_of_unrotated_mdms() {
        let eps = 0.3;
        let d = Preset::Mdms {
            epsilon: eps,
            theta: 0.0,
            phi: 0.0,
        }
        .build()
        .unwrap();
        // tr_B = diag(ε/2, 1 − ε/2), tr_A = diag(1 − ε/2, ε/2).
        let a = ComplexMatrix::from_diag(&[eps / 2.0, 1.0 - eps / 2.0]);
        let b = ComplexMatrix::from_diag(&[1.0 - eps / 2.0, eps / 2.0]);
        let expected = numerics::kron(&a, &b);
        assert!(marginal_product(&d).matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_angles_give_computational_basis() {
        let b = basis_from_angles(&[2, 2], &[QubitAngles::new(0.0, 0.0).unwrap(); 2]).unwrap();
        assert!(b.is_computational());
    }

    #[test]
    fn quarter_turn_gives_x_basis() {
        let b = basis_from_angles(&[2], &[QubitAngles::new(FRAC_PI_4, 0.0).unwrap()]).unwrap();
        let u = &b.factors()[0];
        // Both basis vectors are equal-weight superpositions of |0⟩ and |1⟩.
        for k in 0..2 {
            assert!((u[(0, k)].norm_sqr() - 0.5).abs() < 1e-15);
            assert!((u[(1, k)].norm_sqr() - 0.5).abs() < 1e-15);
        }
        // |+⟩⟨+| is invariant under dephasing in this basis.
        let plus = DensityMatrix::new(vec![2], ComplexMatrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]])).unwrap();
        let out = dephase(&plus, &b).unwrap();
        assert!(out.matrix().max_abs_diff(plus.matrix()) < 1e-15);
    }

    #[test]
    fn angle_factors_are_unitary() {
        for i in 0..20 {
            let theta = FRAC_PI_2 * i as f64 / 19.0;
            let phi = 2.0 * PI * i as f64 / 20.0;
            assert!(qubit_unitary(theta, phi).unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn basis_from_angles_requires_qubits() {
        let a = QubitAngles::new(0.1, 0.2).unwrap();
        assert!(matches!(
            basis_from_angles(&[2, 3], &[a, a]),
            Err(Error::NotAllQubits(_))
        ));
    }

    #[test]
    fn angle_ranges_are_enforced() {
        assert!(QubitAngles::new(-0.1, 0.0).is_err());
        assert!(QubitAngles::new(2.0, 0.0).is_err());
        assert!(QubitAngles::new(0.1, 2.0 * PI).is_err());
    }

    #[test]
    fn canonical_angles_preserve_projectors() {
        let cases = [(0.3, 0.4), (1.2, 5.0), (2.5, -1.0), (-0.7, 3.0), (FRAC_PI_2, 1.0)];
        for (t, p) in cases {
            let raw = qubit_unitary(t, p);
            let canon = QubitAngles::canonical(t, p);
            assert!((0.0..=FRAC_PI_4 + 1e-15).contains(&canon.theta));
            assert!((0.0..2.0 * PI).contains(&canon.phi));
            let folded = canon.unitary();
            // Same projector set, possibly reordered.
            let proj = |u: &ComplexMatrix, k: usize| ComplexMatrix::outer(&[u[(0, k)], u[(1, k)]]);
            let direct = proj(&raw, 0).max_abs_diff(&proj(&folded, 0));
            let swapped = proj(&raw, 0).max_abs_diff(&proj(&folded, 1));
            assert!(direct.min(swapped) < 1e-12, "({t}, {p}) -> {canon:?}");
        }
    }

    #[test]
    fn commutation_on_product_diagonal_state_is_exact() {
        let d = diag_state(&[0.6 * 0.3, 0.6 * 0.7, 0.4 * 0.3, 0.4 * 0.7], &[2, 2]);
        let r = commutation_check(&d, &ProductBasis::computational(&[2, 2])).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn marginal_distributions_match_partial_traces() {
        let p = [0.1, 0.2, 0.05, 0.15, 0.3, 0.2];
        let m = marginal_distributions(&p, &[2, 3]);
        assert!((m[0][0] - 0.35).abs() < 1e-15);
        assert!((m[0][1] - 0.65).abs() < 1e-15);
        assert!((m[1][0] - 0.25).abs() < 1e-15);
        assert!((m[1][1] - 0.5).abs() < 1e-15);
        assert!((m[1][2] - 0.25).abs() < 1e-15);
    }
}
