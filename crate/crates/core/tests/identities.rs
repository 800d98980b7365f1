//! Decomposition identities for the fixed-basis quantifiers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qhookup_core::channels::ProductBasis;
use qhookup_core::quantifiers::{
    coherence, hookup, irreducible_classical, local_coherence, local_coherence_of_product, multipartite_coherence,
    multipartite_coherence_from_correlations, total_correlations,
};
use qhookup_core::random::{random_density_matrix, random_product_basis, random_pure_state};
use qhookup_core::DensityMatrix;

fn check_identities(d: &DensityMatrix, b: &ProductBasis) {
    let t = total_correlations(d).unwrap();
    let c = coherence(d, b).unwrap();
    let c_l = local_coherence(d, b).unwrap();
    let c_m = multipartite_coherence(d, b).unwrap();
    let k = irreducible_classical(d, b).unwrap();
    let m = hookup(d, b).unwrap();

    assert!(t >= -1e-9 && c >= -1e-9 && c_l >= -1e-9 && k >= -1e-9);
    assert!((m - t - c_l).abs() <= 1e-8, "M - T - C_L = {}", m - t - c_l);
    assert!((m - c - k).abs() <= 1e-8, "M - C - K = {}", m - c - k);
    assert!(c_m >= -1e-9, "C_M = {c_m}");
    assert!((k - (t - c_m)).abs() <= 1e-8);
    assert!((c_m - multipartite_coherence_from_correlations(d, b).unwrap()).abs() <= 1e-9);
    assert!((c_l - local_coherence_of_product(d, b).unwrap()).abs() <= 1e-9);
}

#[test]
fn two_qubit_states_computational_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..500 {
        let d = random_density_matrix(&[2, 2], &mut rng);
        check_identities(&d, &ProductBasis::computational(d.dims()));
    }
}

#[test]
fn two_qubit_states_random_bases() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let d = random_density_matrix(&[2, 2], &mut rng);
        let b = random_product_basis(&[2, 2], &mut rng);
        check_identities(&d, &b);
    }
}

#[test]
fn qubit_qutrit_and_three_qubit_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let d = random_density_matrix(&[2, 3], &mut rng);
        let b = random_product_basis(&[2, 3], &mut rng);
        check_identities(&d, &b);
    }
    for _ in 0..30 {
        let d = random_density_matrix(&[2, 2, 2], &mut rng);
        let b = random_product_basis(&[2, 2, 2], &mut rng);
        check_identities(&d, &b);
    }
}

#[test]
fn pure_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..100 {
        let d = random_pure_state(&[2, 2], &mut rng);
        let b = random_product_basis(&[2, 2], &mut rng);
        check_identities(&d, &b);
    }
}

#[test]
fn incoherent_product_state_has_no_hookup() {
    let d = DensityMatrix::new(
        vec![2, 2],
        qhookup_core::ComplexMatrix::from_diag(&[0.7 * 0.4, 0.7 * 0.6, 0.3 * 0.4, 0.3 * 0.6]),
    )
    .unwrap();
    let b = ProductBasis::computational(d.dims());
    assert!(hookup(&d, &b).unwrap().abs() < 1e-12);
    assert!(total_correlations(&d).unwrap().abs() < 1e-12);
}
