//! Relative-entropy quantifiers of coherence and correlations for multipartite
//! density matrices.
//!
//! Every quantity is measured in bits (base-2 logarithms). Fixed-basis
//! quantifiers work for any subsystem dimensions up to a total dimension of 64;
//! the quantifiers that minimize over local bases (discord, classical
//! correlations, the `L` excess term and global discord) require qubits, at most
//! four of them.
//!
//! ```
//! use qhookup_core::{channels::ProductBasis, quantifiers, states::Preset};
//!
//! let rho = Preset::PaperExample.build().unwrap();
//! let basis = ProductBasis::computational(rho.dims());
//! let m = quantifiers::hookup(&rho, &basis).unwrap();
//! assert!((m - 0.5).abs() < 1e-9);
//! ```

pub mod channels;
pub mod error;
pub mod family;
pub mod numerics;
pub mod quantifiers;
pub mod random;
pub mod states;

pub use channels::{ProductBasis, QubitAngles};
pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, EigenDecomposition};
pub use quantifiers::{OptimizerConfig, QuantifierReport};
pub use states::{DensityMatrix, Preset, StateSpec};

/// Tolerances shared across modules.
pub mod tol {
    /// Allowed deviation from Hermiticity, unit trace and unitarity.
    pub const VALIDITY: f64 = 1e-9;
    /// Eigenvalues of σ at or below this are treated as outside its support.
    pub const SUPPORT: f64 = 1e-10;
    /// Weight of ρ in a null eigenspace of σ above which S(ρ‖σ) is infinite.
    pub const SUPPORT_WEIGHT: f64 = 1e-9;
    /// Rounding-level negative eigenvalues in [-CLIP, 0) are clipped to zero.
    pub const CLIP: f64 = 1e-10;
    /// Identity residuals above this raise the numerical-warning flag.
    pub const IDENTITY: f64 = 1e-8;
}
