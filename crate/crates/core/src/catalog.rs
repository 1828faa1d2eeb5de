//! Built-in symbols, perturbations, and the default section schedule used
//! by the self-test suite and the examples.

use num_complex::Complex64;

use crate::symbol::SymbolSpec;
use crate::toeplitz::Perturbation;

/// `phi = 1`: every section is an identity matrix, so every quantity in a
/// study has a known exact value.
pub fn constant_symbol() -> SymbolSpec {
    SymbolSpec::constant(Complex64::new(1.0, 0.0))
}

/// `phi = (1 - z/2)(1 - 1/(3z))`: band-1 coefficients `7/6, -1/2, -1/3`,
/// with closed-form factors, determinants, and leading constants.
pub fn product_symbol() -> SymbolSpec {
    SymbolSpec::product(
        vec![Complex64::new(0.5, 0.0)],
        vec![Complex64::new(1.0 / 3.0, 0.0)],
    )
    .expect("roots lie inside the unit circle")
}

/// `phi = exp(0.4 (z + 1/z))`: entire symbol with rapidly decaying
/// coefficients and factorial one-sided factors.
pub fn exponential_symbol() -> SymbolSpec {
    SymbolSpec::exp_laurent(
        -1,
        vec![
            Complex64::new(0.4, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.4, 0.0),
        ],
    )
    .expect("log coefficients are a valid Laurent polynomial")
}

/// Swap the first two rows of the Toeplitz section: `p = (1, 0)`,
/// `q = (0, 1)`. The ratio converges to -1.
pub fn swap_perturbation() -> Perturbation {
    Perturbation::new(vec![1, 0], vec![0, 1]).expect("equal lengths")
}

/// Pull one row index below the section: `p = (-1)`, `q = (0)`.
pub fn shift_perturbation() -> Perturbation {
    Perturbation::new(vec![-1], vec![0]).expect("equal lengths")
}

/// A stored row index colliding with the identity tail: every section has
/// two equal rows, so every determinant and the limit are exactly zero.
pub fn duplicate_perturbation() -> Perturbation {
    Perturbation::new(vec![1], vec![0]).expect("equal lengths")
}

/// Section sizes for a quick convergence study.
pub fn default_schedule() -> Vec<usize> {
    vec![8, 16, 24, 32, 40]
}
