//! Density matrices with a subsystem-dimension signature, their entropies, and
//! the named preset states.

mod presets;
mod spec;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

pub(crate) use presets::mdms_state;
pub use presets::{Preset, PresetParams, PRESET_NAMES};
pub use spec::{load, save, StateSpec};

use crate::error::{Error, Result};
use crate::numerics::{self, hermitian_eig, ComplexMatrix};
use crate::tol;

/// Largest supported total Hilbert-space dimension.
pub const MAX_DIM: usize = 64;

/// Hermitian, unit-trace, positive semidefinite matrix over a tensor product of
/// subsystems with dimensions `dims` (each at least 2).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `matrix` against every density-matrix invariant.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let report = validate(&dims, &matrix);
        if !report.is_ok() {
            if let Some(Violation::Dimensions(msg)) = report.violations.first() {
                return Err(Error::DimensionMismatch(msg.clone()));
            }
            return Err(Error::Validation(report));
        }
        Ok(Self { dims, matrix })
    }

    /// For outputs of operations that preserve validity by construction.
    pub(crate) fn from_parts(dims: Vec<usize>, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.rows());
        Self { dims, matrix }
    }

    /// Pure state `|ψ⟩⟨ψ|`; the amplitudes are normalized.
    pub fn pure(dims: Vec<usize>, amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::BadParams("zero state vector".into()));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|a| a / norm).collect();
        Self::new(dims, ComplexMatrix::outer(&psi))
    }

    /// Convex mixture of states sharing one dims signature.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::BadParams("empty mixture".into()))?.1;
        let n = first.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, d) in parts {
            if d.dims != first.dims {
                return Err(Error::DimensionMismatch(format!(
                    "mixing dims {:?} with {:?}",
                    first.dims, d.dims
                )));
            }
            acc = &acc + &d.matrix.scale(Complex64::new(*w, 0.0));
        }
        Self::new(first.dims.clone(), acc)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn is_all_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    pub(crate) fn marginal_matrix(&self, k: usize) -> ComplexMatrix {
        numerics::partial_trace(&self.matrix, &self.dims, k).expect("dims checked at construction")
    }

    /// Reduced state of subsystem `k`.
    pub fn marginal(&self, k: usize) -> Result<DensityMatrix> {
        let m = numerics::partial_trace(&self.matrix, &self.dims, k)?;
        Ok(Self::from_parts(vec![self.dims[k]], m))
    }

    /// `u ρ u†` for a unitary `u` on the full space.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        let m = numerics::conjugate(&self.matrix, u)?;
        Ok(Self::from_parts(self.dims.clone(), m))
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.dims, &self.matrix)
    }

    pub fn entropy(&self) -> Result<f64> {
        von_neumann_entropy(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    Dimensions(String),
    NonHermitian {
        deviation: f64,
    },
    /// Signed `tr ρ − 1`.
    Trace {
        deviation: f64,
    },
    NegativeEigenvalue {
        min_eigenvalue: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimensions(msg) => write!(f, "dimensions: {msg}"),
            Violation::NonHermitian { deviation } => {
                write!(f, "not Hermitian: max |ρ − ρ†| = {deviation:.3e}")
            }
            Violation::Trace { deviation } => write!(f, "trace off by {deviation:+.3e}"),
            Violation::NegativeEigenvalue { min_eigenvalue } => {
                write!(f, "negative eigenvalue {min_eigenvalue:.3e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub trace: Complex64,
    pub min_eigenvalue: Option<f64>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Signed trace deviation, if that invariant failed.
    pub fn trace_violation(&self) -> Option<f64> {
        self.violations.iter().find_map(|v| match v {
            Violation::Trace { deviation } => Some(*deviation),
            _ => None,
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks a candidate matrix against the density-matrix invariants, reporting
/// every failure and its size instead of stopping at the first.
pub fn validate(dims: &[usize], m: &ComplexMatrix) -> ValidationReport {
    let mut violations = Vec::new();
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        violations.push(Violation::Dimensions(format!(
            "every subsystem needs dimension >= 2, got {dims:?}"
        )));
    } else if !m.is_square() || m.rows() != total {
        violations.push(Violation::Dimensions(format!(
            "dims {dims:?} (product {total}) vs {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    } else if total > MAX_DIM {
        violations.push(Violation::Dimensions(format!(
            "total dimension {total} exceeds {MAX_DIM}"
        )));
    }

    let hermiticity_deviation = m.hermiticity_deviation();
    let trace = m.trace();
    if !violations.is_empty() {
        return ValidationReport {
            hermiticity_deviation,
            trace,
            min_eigenvalue: None,
            violations,
        };
    }

    if hermiticity_deviation > tol::VALIDITY {
        violations.push(Violation::NonHermitian {
            deviation: hermiticity_deviation,
        });
    }
    let trace_dev = trace.re - 1.0;
    if trace_dev.abs() > tol::VALIDITY || trace.im.abs() > tol::VALIDITY {
        violations.push(Violation::Trace { deviation: trace_dev });
    }
    let min_eigenvalue = if hermiticity_deviation <= tol::VALIDITY {
        hermitian_eig(m).ok().and_then(|e| e.eigenvalues.last().copied())
    } else {
        None
    };
    if let Some(min) = min_eigenvalue {
        if min < -tol::VALIDITY {
            violations.push(Violation::NegativeEigenvalue { min_eigenvalue: min });
        }
    }
    ValidationReport {
        hermiticity_deviation,
        trace,
        min_eigenvalue,
        violations,
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`; non-positive entries contribute nothing.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Entropy of a spectrum, clipping rounding-level negatives to zero.
pub fn spectral_entropy(eigenvalues: &[f64]) -> f64 {
    let clipped: Vec<f64> = eigenvalues
        .iter()
        .map(|&l| if (-tol::CLIP..0.0).contains(&l) { 0.0 } else { l })
        .collect();
    shannon_entropy(&clipped)
}

/// S(ρ) = −tr ρ log₂ ρ, in bits.
pub fn von_neumann_entropy(d: &DensityMatrix) -> Result<f64> {
    let e = hermitian_eig(d.matrix())?;
    Ok(spectral_entropy(&e.eigenvalues))
}

/// S(ρ‖σ) = −tr ρ log₂ σ − S(ρ), in bits.
///
/// Returns `f64::INFINITY` when ρ has weight above 1e-9 in an eigenspace of σ
/// whose eigenvalue is at most 1e-10.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims != sigma.dims {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy between dims {:?} and {:?}",
            rho.dims, sigma.dims
        )));
    }
    let es = hermitian_eig(sigma.matrix())?;
    let weights = crate::channels::rotated_diagonal(rho.matrix(), &es.eigenvectors);
    let mut cross = 0.0;
    for (&mu, &w) in es.eigenvalues.iter().zip(&weights) {
        if mu <= tol::SUPPORT {
            if w > tol::SUPPORT_WEIGHT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross -= w * mu.log2();
    }
    Ok(cross - von_neumann_entropy(rho)?)
}
