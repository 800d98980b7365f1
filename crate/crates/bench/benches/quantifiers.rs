use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qhookup_core::family::ScanRecord;
use qhookup_core::numerics::hermitian_eig;
use qhookup_core::quantifiers::{closest_classical, full_report, OptimizerConfig};
use qhookup_core::random::random_density_matrix;
use qhookup_core::{Preset, ProductBasis};

fn eigensolver(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dims in [vec![2, 2], vec![2, 2, 2], vec![2, 2, 2, 2]] {
        let d = random_density_matrix(&dims, &mut rng);
        let n: usize = dims.iter().product();
        c.bench_function(&format!("hermitian_eig {n}x{n}"), |b| {
            b.iter(|| hermitian_eig(black_box(d.matrix())).unwrap())
        });
    }
}

fn optimized(c: &mut Criterion) {
    let cfg = OptimizerConfig::default();
    let rho = Preset::PaperExample.build().unwrap();
    c.bench_function("closest_classical two qubits", |b| {
        b.iter(|| closest_classical(black_box(&rho), &cfg).unwrap())
    });
    let basis = ProductBasis::computational(rho.dims());
    c.bench_function("full_report two qubits", |b| {
        b.iter(|| full_report(black_box(&rho), &basis, &cfg).unwrap())
    });
    let w = Preset::WMixture.build().unwrap();
    let mut group = c.benchmark_group("three qubits");
    group.sample_size(10);
    group.bench_function("closest_classical", |b| {
        b.iter(|| closest_classical(black_box(&w), &cfg).unwrap())
    });
    group.finish();
}

fn scan_row(c: &mut Criterion) {
    let thetas: Vec<f64> = (0..65).map(|i| std::f64::consts::FRAC_PI_4 * i as f64 / 64.0).collect();
    c.bench_function("mdms scan row (65 θ)", |b| {
        b.iter(|| {
            thetas
                .iter()
                .map(|&t| ScanRecord::compute(black_box(0.6), t).unwrap())
                .collect::<Vec<_>>()
        })
    });
}

criterion_group!(benches, eigensolver, optimized, scan_row);
criterion_main!(benches);
