//! Numerical study of determinant ratios for Toeplitz-like matrices.
//!
//! A Toeplitz-like matrix here is `M = (c_{p_i - q_j})` where `{c_k}` are the
//! Fourier coefficients of a symbol on the unit circle and the integer
//! sequences `p`, `q` coincide with the identity from some index `m` onward.
//! The crate builds the finite sections `M_{m+n}`, the plain Toeplitz sections
//! `T_n`, and the m x m limit matrix assembled from the Wiener-Hopf factors of
//! the symbol, and verifies that `det M_{m+n} / det T_n` converges to the
//! determinant of that limit matrix.
//!
//! Module layout:
//!
//! - [`symbol`]: symbol descriptions, Fourier coefficients, winding numbers,
//!   continuous logarithms.
//! - [`wiener_hopf`]: the factorization `phi = phi_minus * phi_plus`, computed
//!   two independent ways and certified by reconstruction.
//! - [`toeplitz`]: dense sections `T_n`, perturbed sections `M_{m+n}`, and the
//!   2x2 block splitting used by the Schur-complement identity.
//! - [`linalg`]: complex LU with partial pivoting, log-determinants, solves,
//!   and an inverse-norm estimate.
//! - [`limit`]: the limit determinant, Szego constants, and the
//!   Schur-complement consistency checks.
//! - [`harness`]: config-driven convergence studies with CSV/JSON reports.
//! - [`catalog`]: the built-in symbols and perturbations every check is
//!   pinned to.

pub mod catalog;
pub mod harness;
pub mod limit;
pub mod linalg;
pub mod symbol;
pub mod toeplitz;
pub mod wiener_hopf;

pub use harness::{run_study, ConvergenceReport, ReportFormat, StudyConfig};
pub use limit::{limit_determinant, szego_constants, SzegoConstants};
pub use linalg::{lu_logdet, solve, LogDet};
pub use symbol::{fourier_coefficients, log_coefficients, FourierSeries, SymbolSpec};
pub use toeplitz::{build_perturbed, build_toeplitz, ComplexMatrix, Perturbation};
pub use wiener_hopf::{factorize_log_split, Factorization};

/// Tolerances threaded through a study. Defaults match the values the
/// built-in catalog is certified at.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Coefficient-truncation certificate: tail bounds and Szego series
    /// tails must fall below this.
    pub truncation_tol: f64,
    /// Factorization certificate: `max_k |(phi_minus * phi_plus)_k - c_k|`
    /// must fall below this.
    pub residual_tol: f64,
    /// LU pivot threshold, relative to the largest matrix entry.
    pub singularity_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            truncation_tol: 1e-12,
            residual_tol: 1e-10,
            singularity_tol: 1e-13,
        }
    }
}

impl Tolerances {
    /// All three tolerances must be strictly positive.
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("truncation_tol", self.truncation_tol),
            ("residual_tol", self.residual_tol),
            ("singularity_tol", self.singularity_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("{name} must be a positive finite number, got {v}"));
            }
        }
        Ok(())
    }
}
