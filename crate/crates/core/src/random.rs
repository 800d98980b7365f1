//! Random states, unitaries and product bases for tests and benchmarks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channels::{ProductBasis, QubitAngles};
use crate::numerics::{kron_all, ComplexMatrix};
use crate::states::DensityMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

/// G G† / tr(G G†) for a square Ginibre matrix G: full rank almost surely.
pub fn random_density_matrix(dims: &[usize], rng: &mut impl Rng) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    let m = m.scale(Complex64::new(1.0 / tr, 0.0));
    // Exact Hermitian symmetrization keeps the validity check tight.
    let m = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    DensityMatrix::new(dims.to_vec(), m).expect("Ginibre construction is a valid state")
}

pub fn random_pure_state(dims: &[usize], rng: &mut impl Rng) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let psi: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(dims.to_vec(), &psi).expect("nonzero with probability one")
}

/// Haar-distributed unitary: Gram–Schmidt on Ginibre columns.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|r| g[(r, c)]).collect();
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for q in &cols {
                let dot: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= dot * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

pub fn random_product_unitary(dims: &[usize], rng: &mut impl Rng) -> ComplexMatrix {
    let factors: Vec<ComplexMatrix> = dims.iter().map(|&d| random_unitary(d, rng)).collect();
    kron_all(&factors)
}

/// Arbitrary product basis with Haar-random factors.
pub fn random_product_basis(dims: &[usize], rng: &mut impl Rng) -> ProductBasis {
    let factors = dims.iter().map(|&d| random_unitary(d, rng)).collect();
    ProductBasis::new(factors).expect("Gram–Schmidt output is unitary")
}

/// Qubit basis from uniformly drawn angles.
pub fn random_qubit_angles(n_qubits: usize, rng: &mut impl Rng) -> Vec<QubitAngles> {
    (0..n_qubits)
        .map(|_| QubitAngles {
            theta: rng.gen_range(0.0..std::f64::consts::FRAC_PI_2),
            phi: rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2, 3, 4, 8] {
            assert!(random_unitary(n, &mut rng).unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dims in [vec![2, 2], vec![2, 3], vec![2, 2, 2]] {
            assert!(random_density_matrix(&dims, &mut rng).validate().is_ok());
            assert!(random_pure_state(&dims, &mut rng).validate().is_ok());
        }
    }
}
