use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qhookup_core::family::{scan_mdms, ScanConfig, ScanTable};
use qhookup_core::random::random_density_matrix;
use qhookup_core::states::{load, save, Preset, StateSpec};
use qhookup_core::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn save_load_is_bit_exact(seed in any::<u64>(), shape in 0usize..4) {
        let dims = [vec![2], vec![2, 2], vec![2, 3], vec![2, 2, 2]][shape].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_density_matrix(&dims, &mut rng);
        let back = load(&save(&d)).unwrap();
        prop_assert_eq!(back.dims(), d.dims());
        for (a, b) in back.matrix().as_slice().iter().zip(d.matrix().as_slice()) {
            prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
            prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn mdms_spec_roundtrip(eps in 0.0f64..=1.0, theta in 0.0f64..=std::f64::consts::FRAC_PI_4, phi in 0.0f64..std::f64::consts::TAU) {
        let spec = StateSpec::Preset(Preset::mdms(eps, theta, phi).unwrap());
        prop_assert_eq!(StateSpec::parse(&spec.to_json()).unwrap(), spec);
    }
}

#[test]
fn malformed_inputs() {
    assert!(matches!(load("not json"), Err(Error::Parse { .. })));
    assert!(matches!(load(r#"{"dims": [2]}"#), Err(Error::Parse { .. })));
    assert!(matches!(
        load(r#"{"dims": [2], "matrix": [], "extra": 1}"#),
        Err(Error::Parse { .. })
    ));
    let non_hermitian = r#"{"dims": [2], "matrix": [[{"re": 0.5, "im": 0}, {"re": 0.3, "im": 0}],
                                                    [{"re": 0.0, "im": 0}, {"re": 0.5, "im": 0}]]}"#;
    assert!(matches!(load(non_hermitian), Err(Error::Validation(_))));
    let negative = r#"{"dims": [2], "matrix": [[{"re": 1.5, "im": 0}, {"re": 0, "im": 0}],
                                               [{"re": 0, "im": 0}, {"re": -0.5, "im": 0}]]}"#;
    assert!(matches!(load(negative), Err(Error::Validation(_))));
}

#[test]
fn scan_csv_roundtrip_and_determinism() {
    let cfg = ScanConfig {
        theta_points: 9,
        epsilon_points: 11,
        ..Default::default()
    };
    let a = scan_mdms(&cfg).unwrap();
    let b = scan_mdms(&cfg).unwrap();
    let csv = a.to_csv();
    assert_eq!(csv, b.to_csv());
    let back = ScanTable::from_csv(&csv).unwrap();
    assert_eq!(back, a);
    for (x, y) in back.records.iter().zip(&a.records) {
        assert_eq!(x.k.to_bits(), y.k.to_bits());
        assert_eq!(x.l.to_bits(), y.l.to_bits());
    }
    assert_eq!(back.thetas.len(), 9);
    assert_eq!(back.epsilons.len(), 11);
    assert!(csv.lines().next().unwrap().starts_with('#'));
    assert!(csv.contains("\ntheta,epsilon,T,C,C_L,C_M,K,M,D,J,L\n"));
}

#[test]
fn scan_csv_rejects_wrong_header() {
    assert!(ScanTable::from_csv("a,b\n1,2\n").is_err());
}
