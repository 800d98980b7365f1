//! Global minimization of a function of local qubit-basis angles.
//!
//! The search space is `[θ1, φ1, …, θn, φn]`. Every qubit basis has a
//! representative with θ ∈ [0, π/4], φ ∈ [0, 2π), so a coarse grid over that
//! half-sphere seeds downhill-simplex refinement from the best few well-separated
//! grid cells. The simplex itself runs unconstrained; results are folded back
//! onto the canonical domain.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_4, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::channels::QubitAngles;
use crate::error::{Error, Result};

/// Optimizer-based quantifiers support at most this many qubits.
pub const MAX_OPTIMIZED_QUBITS: usize = 4;

/// Bases whose objective lies within this of the minimum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Coarse grid points per angle. Reduced automatically when the full grid
    /// would exceed `max_grid_points`.
    pub grid_points: usize,
    /// Number of simplex refinements, seeded from the best grid cells.
    pub starts: usize,
    /// Simplex stops once the objective spread across its vertices is below this.
    pub tolerance: f64,
    /// Iteration cap per simplex run.
    pub max_iterations: usize,
    pub seed: u64,
    pub max_grid_points: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points: 17,
            starts: 8,
            tolerance: 1e-9,
            max_iterations: 500,
            seed: 0,
            max_grid_points: 17usize.pow(4),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::InvalidRange(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            )));
        }
        if self.starts == 0 || self.max_iterations == 0 || self.max_grid_points == 0 {
            return Err(Error::InvalidRange(
                "starts, max_iterations and max_grid_points must be positive".into(),
            ));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidRange(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }

    /// Grid points per angle actually used for `n_qubits`.
    pub fn effective_grid_points(&self, n_qubits: usize) -> usize {
        let dims = (2 * n_qubits) as u32;
        let mut g = self.grid_points;
        while g > 3 && (g as f64).powi(dims as i32) > self.max_grid_points as f64 {
            g -= 1;
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerMeta {
    pub starts_used: usize,
    pub best_objective: f64,
    /// True when the simplex run that produced the minimum met the tolerance
    /// before its iteration cap.
    pub converged: bool,
    pub evaluations: usize,
    pub grid_points_per_angle: usize,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    /// Canonical flat angles `[θ1, φ1, …]`.
    pub angles: Vec<f64>,
    pub value: f64,
    pub meta: OptimizerMeta,
}

impl Minimum {
    pub fn qubit_angles(&self) -> Vec<QubitAngles> {
        self.angles
            .chunks_exact(2)
            .map(|a| QubitAngles { theta: a[0], phi: a[1] })
            .collect()
    }
}

pub fn minimize_over_product_bases<F>(objective: F, n_qubits: usize, cfg: &OptimizerConfig) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    if n_qubits == 0 {
        return Err(Error::DimensionMismatch("no qubits to optimize over".into()));
    }
    if n_qubits > MAX_OPTIMIZED_QUBITS {
        return Err(Error::TooManyQubits {
            got: n_qubits,
            max: MAX_OPTIMIZED_QUBITS,
        });
    }

    let evaluations = Cell::new(0usize);
    let f = |x: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let dim = 2 * n_qubits;
    let g = cfg.effective_grid_points(n_qubits);
    let theta_step = FRAC_PI_4 / (g - 1) as f64;
    let phi_step = 2.0 * PI / g as f64;
    let grid_angle = |axis: usize, k: usize| {
        if axis % 2 == 0 {
            k as f64 * theta_step
        } else {
            k as f64 * phi_step
        }
    };

    // Exhaustive coarse grid, odometer order.
    let total = g.pow(dim as u32);
    let mut cells: Vec<(f64, Vec<usize>)> = Vec::with_capacity(total);
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    for _ in 0..total {
        for (axis, (&k, x)) in idx.iter().zip(point.iter_mut()).enumerate() {
            *x = grid_angle(axis, k);
        }
        cells.push((f(&point), idx.clone()));
        for axis in (0..dim).rev() {
            idx[axis] += 1;
            if idx[axis] < g {
                break;
            }
            idx[axis] = 0;
        }
    }
    // Stable sort keeps odometer order among equal values.
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut seeds: Vec<Vec<usize>> = Vec::new();
    for (_, cell) in &cells {
        if seeds.len() == cfg.starts {
            break;
        }
        if seeds.iter().all(|s| grid_distance(s, cell, g) >= 2) {
            seeds.push(cell.clone());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = seeds
        .iter()
        .map(|cell| cell.iter().enumerate().map(|(a, &k)| grid_angle(a, k)).collect())
        .collect();
    while starts.len() < cfg.starts {
        starts.push(
            (0..dim)
                .map(|a| {
                    if a % 2 == 0 {
                        rng.gen_range(0.0..FRAC_PI_4)
                    } else {
                        rng.gen_range(0.0..2.0 * PI)
                    }
                })
                .collect(),
        );
    }

    let mut runs: Vec<(f64, Vec<f64>, bool)> = Vec::with_capacity(starts.len());
    for start in &starts {
        let steps: Vec<f64> = (0..dim)
            .map(|a| {
                let base = if a % 2 == 0 { theta_step } else { phi_step };
                0.5 * base * rng.gen_range(0.75..1.25)
            })
            .collect();
        let mut run = nelder_mead(&f, start, &steps, cfg.tolerance, cfg.max_iterations);
        // Restart from the result until a fresh simplex stops improving.
        for _ in 0..3 {
            let small: Vec<f64> = steps.iter().map(|s| s * 0.1).collect();
            let again = nelder_mead(&f, &run.x, &small, cfg.tolerance, cfg.max_iterations);
            let improved = run.fx - again.fx > cfg.tolerance;
            run = NelderMeadResult {
                converged: again.converged,
                ..if again.fx <= run.fx { again } else { run }
            };
            if !improved {
                break;
            }
        }
        runs.push((run.fx, canonicalize(&run.x), run.converged));
    }

    let best_value = runs.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let (mut value, mut angles, converged) = runs
        .iter()
        .filter(|r| r.0 <= best_value + TIE_TOLERANCE)
        .min_by(|a, b| norm(&a.1).total_cmp(&norm(&b.1)))
        .cloned()
        .expect("at least one start");

    snap(&f, &mut angles, &mut value, best_value);

    Ok(Minimum {
        angles,
        value,
        meta: OptimizerMeta {
            starts_used: starts.len(),
            best_objective: value,
            converged,
            evaluations: evaluations.get(),
            grid_points_per_angle: g,
        },
    })
}

/// Chebyshev distance between grid cells; φ axes wrap around.
fn grid_distance(a: &[usize], b: &[usize], g: usize) -> usize {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(axis, (&x, &y))| {
            let d = x.abs_diff(y);
            if axis % 2 == 1 {
                d.min(g - d)
            } else {
                d
            }
        })
        .max()
        .unwrap_or(0)
}

fn canonicalize(x: &[f64]) -> Vec<f64> {
    x.chunks_exact(2)
        .flat_map(|a| {
            let q = QubitAngles::canonical(a[0], a[1]);
            [q.theta, q.phi]
        })
        .collect()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Moves the minimizer to a simpler equivalent point when the objective allows:
/// φ → 0 and θ → {0, π/4}, keeping any candidate within the tie tolerance of
/// the best value found.
fn snap(f: &impl Fn(&[f64]) -> f64, angles: &mut Vec<f64>, value: &mut f64, best: f64) {
    let limit = best + TIE_TOLERANCE;
    let try_candidate = |cand: Vec<f64>, angles: &mut Vec<f64>, value: &mut f64| {
        let cand = canonicalize(&cand);
        if norm(&cand) + 1e-15 < norm(angles) {
            let v = f(&cand);
            if v <= limit {
                *angles = cand;
                *value = v;
            }
        }
    };

    let n = angles.len();
    try_candidate(vec![0.0; n], angles, value);

    let nearest_theta = |t: f64| if t < FRAC_PI_4 / 2.0 { 0.0 } else { FRAC_PI_4 };
    let all_snapped: Vec<f64> = angles
        .chunks_exact(2)
        .flat_map(|a| [nearest_theta(a[0]), 0.0])
        .collect();
    try_candidate(all_snapped, angles, value);

    let phases_zeroed: Vec<f64> = angles.chunks_exact(2).flat_map(|a| [a[0], 0.0]).collect();
    try_candidate(phases_zeroed, angles, value);

    for i in 0..n {
        let mut cand = angles.clone();
        cand[i] = if i % 2 == 0 { nearest_theta(cand[i]) } else { 0.0 };
        try_candidate(cand, angles, value);
    }
}

pub(crate) struct NelderMeadResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub converged: bool,
}

/// Downhill simplex with the standard coefficients (1, 2, ½, ½).
pub(crate) fn nelder_mead(
    f: &impl Fn(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    tolerance: f64,
    max_iterations: usize,
) -> NelderMeadResult {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for (i, &s) in steps.iter().enumerate() {
        let mut x = x0.to_vec();
        x[i] += s;
        let fx = f(&x);
        simplex.push((x, fx));
    }

    let mut converged = false;
    for _ in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[n].1 - simplex[0].1 <= tolerance {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = along(0.5);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-0.5);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (xi, bi) in x.iter_mut().zip(&best) {
                *xi = bi + 0.5 * (*xi - bi);
            }
            *fx = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, fx) = simplex.swap_remove(0);
    NelderMeadResult { x, fx, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let r = nelder_mead(&f, &[0.0, 0.0], &[0.1, 0.1], 1e-14, 2000);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-5);
        assert!((r.x[1] + 0.5).abs() < 1e-5);
    }

    #[test]
    fn constant_objective() {
        let m = minimize_over_product_bases(|_| 0.75, 2, &OptimizerConfig::default()).unwrap();
        assert_eq!(m.value, 0.75);
        assert_eq!(m.angles.len(), 4);
        // Ties resolve to the computational basis.
        assert!(m.angles.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn qubit_cap() {
        let err = minimize_over_product_bases(|_| 0.0, 5, &OptimizerConfig::default()).unwrap_err();
        assert!(matches!(err, Error::TooManyQubits { got: 5, max: 4 }));
    }

    #[test]
    fn grid_is_capped_for_larger_registers() {
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.effective_grid_points(1), 17);
        assert_eq!(cfg.effective_grid_points(2), 17);
        assert_eq!(cfg.effective_grid_points(3), 6);
        assert_eq!(cfg.effective_grid_points(4), 4);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = OptimizerConfig {
            starts: 0,
            ..Default::default()
        };
        assert!(minimize_over_product_bases(|_| 0.0, 1, &cfg).is_err());
        let cfg = OptimizerConfig {
            tolerance: -1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |x: &[f64]| (x[0] - 0.3).sin().powi(2) + (x[1] * 0.5).cos() + x[2].sin() * x[3].cos();
        let cfg = OptimizerConfig::default();
        let a = minimize_over_product_bases(f, 2, &cfg).unwrap();
        let b = minimize_over_product_bases(f, 2, &cfg).unwrap();
        assert_eq!(a.angles, b.angles);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
