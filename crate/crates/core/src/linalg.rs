//! Complex dense LU with partial pivoting, log-scale determinants, and a
//! smallest-singular-value estimator.
//!
//! Determinants of sections grow like `G^n`, which overflows `f64` long
//! before the section sizes of interest when `|G|` is far from 1. All
//! determinant arithmetic therefore stays in log magnitude plus phase and
//! only ratios are ever exponentiated.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::toeplitz::ComplexMatrix;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("right-hand side has length {len}, matrix is {n}x{n}")]
    DimensionMismatch { n: usize, len: usize },
    #[error("matrix is singular to the working threshold")]
    SingularSection,
}

/// Map an angle into `(-pi, pi]`.
pub(crate) fn wrap_angle(x: f64) -> f64 {
    PI - (PI - x).rem_euclid(2.0 * PI)
}

/// A determinant stored as `exp(log_magnitude + i * phase)`, with an exact
/// singularity flag; singular determinants are exactly zero, not small.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDet {
    pub log_magnitude: f64,
    pub phase: f64,
    pub is_singular: bool,
}

impl LogDet {
    pub fn singular() -> Self {
        LogDet {
            log_magnitude: f64::NEG_INFINITY,
            phase: 0.0,
            is_singular: true,
        }
    }

    /// The determinant itself. Overflows to infinity for large magnitudes;
    /// prefer [`LogDet::ratio_to`] when a reference of comparable size exists.
    pub fn value(&self) -> Complex64 {
        if self.is_singular {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(self.log_magnitude.exp(), self.phase)
        }
    }

    /// `exp(self - denom)`, the numerically safe quotient of two
    /// determinants. The denominator must be nonsingular.
    pub fn ratio_to(&self, denom: &LogDet) -> Complex64 {
        assert!(!denom.is_singular, "ratio against a singular determinant");
        if self.is_singular {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(
            (self.log_magnitude - denom.log_magnitude).exp(),
            wrap_angle(self.phase - denom.phase),
        )
    }

    /// Determinant of a product of two matrices.
    pub fn combine(&self, other: &LogDet) -> LogDet {
        if self.is_singular || other.is_singular {
            return LogDet::singular();
        }
        LogDet {
            log_magnitude: self.log_magnitude + other.log_magnitude,
            phase: wrap_angle(self.phase + other.phase),
            is_singular: false,
        }
    }
}

/// Packed LU factorization `P A = L U` with partial pivoting by magnitude.
#[derive(Debug, Clone)]
pub struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
    swaps: usize,
    singular: bool,
}

pub fn lu_factor(mat: &ComplexMatrix, singularity_tol: f64) -> Result<LuFactors, LinalgError> {
    if !mat.is_square() {
        return Err(LinalgError::NotSquare {
            rows: mat.rows(),
            cols: mat.cols(),
        });
    }
    let n = mat.rows();
    let mut lu = mat.data().to_vec();
    let mut pivots = vec![0usize; n];
    let mut swaps = 0usize;
    let mut singular = false;
    // Relative pivot floor: an all-zero matrix has floor 0 and still trips it.
    let pivot_floor = singularity_tol * mat.max_magnitude();
    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[k * n + k].norm();
        for i in k + 1..n {
            let mag = lu[i * n + k].norm();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        pivots[k] = best;
        if best != k {
            for j in 0..n {
                lu.swap(k * n + j, best * n + j);
            }
            swaps += 1;
        }
        if best_mag <= pivot_floor {
            singular = true;
            continue;
        }
        let piv = lu[k * n + k];
        for i in k + 1..n {
            let mult = lu[i * n + k] / piv;
            lu[i * n + k] = mult;
            for j in k + 1..n {
                let ukj = lu[k * n + j];
                lu[i * n + j] -= mult * ukj;
            }
        }
    }
    Ok(LuFactors {
        n,
        lu,
        pivots,
        swaps,
        singular,
    })
}

impl LuFactors {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn logdet(&self) -> LogDet {
        if self.singular {
            return LogDet::singular();
        }
        let mut log_magnitude = 0.0;
        let mut phase = if self.swaps % 2 == 1 { PI } else { 0.0 };
        for k in 0..self.n {
            let u = self.lu[k * self.n + k];
            log_magnitude += u.norm().ln();
            phase += u.arg();
        }
        LogDet {
            log_magnitude,
            phase: wrap_angle(phase),
            is_singular: false,
        }
    }

    /// Solve `A x = b`.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if rhs.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                n: self.n,
                len: rhs.len(),
            });
        }
        if self.singular {
            return Err(LinalgError::SingularSection);
        }
        let n = self.n;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        // L is unit lower triangular.
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        Ok(x)
    }

    /// Solve `A* y = b` with the adjoint of the factored matrix, reusing
    /// the factors: `A* = U* L* P`, so substitute through `U*` (lower),
    /// then `L*` (unit upper), then undo the pivots.
    pub fn solve_adjoint(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if rhs.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                n: self.n,
                len: rhs.len(),
            });
        }
        if self.singular {
            return Err(LinalgError::SingularSection);
        }
        let n = self.n;
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = acc / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[j * n + i].conj() * y[j];
            }
            y[i] = acc;
        }
        for k in (0..n).rev() {
            y.swap(k, self.pivots[k]);
        }
        Ok(y)
    }
}

/// Log-determinant of a square matrix.
pub fn lu_logdet(mat: &ComplexMatrix, singularity_tol: f64) -> Result<LogDet, LinalgError> {
    Ok(lu_factor(mat, singularity_tol)?.logdet())
}

/// A solve together with its verified backward residual
/// `max_i |(A x - b)_i|`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub x: Vec<Complex64>,
    pub residual: f64,
}

/// Solve `A x = b` and report the residual of the computed solution.
pub fn solve(
    mat: &ComplexMatrix,
    rhs: &[Complex64],
    singularity_tol: f64,
) -> Result<Solution, LinalgError> {
    let factors = lu_factor(mat, singularity_tol)?;
    let x = factors.solve(rhs)?;
    let residual = mat
        .mul_vec(&x)
        .iter()
        .zip(rhs)
        .map(|(ax, b)| (ax - b).norm())
        .fold(0.0, f64::max);
    Ok(Solution { x, residual })
}

/// Solve `A X = B` column by column with a single factorization.
pub fn solve_columns(
    mat: &ComplexMatrix,
    rhs: &ComplexMatrix,
    singularity_tol: f64,
) -> Result<ComplexMatrix, LinalgError> {
    if mat.rows() != rhs.rows() {
        return Err(LinalgError::DimensionMismatch {
            n: mat.rows(),
            len: rhs.rows(),
        });
    }
    let factors = lu_factor(mat, singularity_tol)?;
    let mut out = ComplexMatrix::zeros(rhs.rows(), rhs.cols());
    for j in 0..rhs.cols() {
        let col = factors.solve(&rhs.column(j))?;
        for (i, v) in col.into_iter().enumerate() {
            out.set(i, j, v);
        }
    }
    Ok(out)
}

const INVERSE_NORM_MIN_ITERATIONS: usize = 20;
const INVERSE_NORM_MAX_ITERATIONS: usize = 1000;
const INVERSE_NORM_REL_CHANGE: f64 = 1e-6;

/// Result of the inverse-norm iteration. `value` approximates
/// `1 / sigma_min(A)`; an unconverged run reports its last iterate.
#[derive(Debug, Clone, Copy)]
pub struct InverseNormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Spectral norm of `A^{-1}` by inverse power iteration on `A* A`: each
/// step solves `A* u = x`, then `A z = u`, so `z = (A* A)^{-1} x` and the
/// Rayleigh growth converges to `1 / sigma_min(A)^2`. The start vector is
/// drawn from a fixed-seed generator, so runs are reproducible.
pub fn inverse_norm_estimate(
    mat: &ComplexMatrix,
    singularity_tol: f64,
) -> Result<InverseNormEstimate, LinalgError> {
    let factors = lu_factor(mat, singularity_tol)?;
    if factors.singular {
        return Err(LinalgError::SingularSection);
    }
    let n = mat.rows();
    if n == 0 {
        return Ok(InverseNormEstimate {
            value: 0.0,
            converged: true,
            iterations: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1057_a7e5);
    let mut x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut x);
    let mut value = 0.0f64;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=INVERSE_NORM_MAX_ITERATIONS {
        let u = factors.solve_adjoint(&x)?;
        let mut z = factors.solve(&u)?;
        let growth = norm2(&z);
        let estimate = growth.sqrt();
        iterations = it;
        if it >= INVERSE_NORM_MIN_ITERATIONS
            && (estimate - value).abs() <= INVERSE_NORM_REL_CHANGE * estimate
        {
            value = estimate;
            converged = true;
            break;
        }
        value = estimate;
        for v in z.iter_mut() {
            *v /= growth;
        }
        x = z;
    }
    Ok(InverseNormEstimate {
        value,
        converged,
        iterations,
    })
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let norm = norm2(v);
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{fourier_coefficients, SymbolSpec};
    use crate::toeplitz::build_toeplitz;
    use approx::assert_relative_eq;

    const TOL: f64 = 1e-13;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn wrap_angle_lands_in_half_open_interval() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert_relative_eq!(wrap_angle(3.0 * PI), PI);
        assert_relative_eq!(wrap_angle(5.0), 5.0 - 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(wrap_angle(-5.0), 2.0 * PI - 5.0, max_relative = 1e-15);
        for x in [-10.0, -3.2, -0.1, 0.3, 9.9] {
            let w = wrap_angle(x);
            assert!(w > -PI && w <= PI);
            assert_relative_eq!((x - w).rem_euclid(2.0 * PI), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_has_zero_logdet() {
        let ld = lu_logdet(&ComplexMatrix::identity(5), TOL).unwrap();
        assert_eq!(ld.log_magnitude, 0.0);
        assert_eq!(ld.phase, 0.0);
        assert!(!ld.is_singular);
    }

    #[test]
    fn row_swap_has_phase_pi() {
        let mat = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) }
        });
        let ld = lu_logdet(&mat, TOL).unwrap();
        assert_relative_eq!(ld.log_magnitude, 0.0, epsilon = 1e-15);
        assert_relative_eq!(ld.phase, PI);
    }

    #[test]
    fn diagonal_logdet_sums_entries() {
        let mat = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 { c(0.0, 2.0) } else { c(3.0, 0.0) }
            } else {
                c(0.0, 0.0)
            }
        });
        let ld = lu_logdet(&mat, TOL).unwrap();
        assert_relative_eq!(ld.log_magnitude, 6.0f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(ld.phase, PI / 2.0);
    }

    #[test]
    fn duplicated_row_is_exactly_singular() {
        let mut mat = random_matrix(5, 7);
        for j in 0..5 {
            let v = mat.get(1, j);
            mat.set(3, j, v);
        }
        let ld = lu_logdet(&mat, TOL).unwrap();
        assert!(ld.is_singular);
        assert_eq!(ld.log_magnitude, f64::NEG_INFINITY);
        assert_eq!(ld.value(), c(0.0, 0.0));
    }

    #[test]
    fn zero_matrix_is_singular() {
        assert!(lu_logdet(&ComplexMatrix::zeros(3, 3), TOL).unwrap().is_singular);
    }

    #[test]
    fn empty_matrix_has_unit_determinant() {
        let ld = lu_logdet(&ComplexMatrix::zeros(0, 0), TOL).unwrap();
        assert!(!ld.is_singular);
        assert_eq!(ld.log_magnitude, 0.0);
        assert_eq!(ld.phase, 0.0);
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(
            lu_logdet(&ComplexMatrix::zeros(2, 3), TOL),
            Err(LinalgError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn tridiagonal_section_determinant_matches_recursion() {
        // det T_n obeys D_n = c_0 D_{n-1} - c_1 c_{-1} D_{n-2}; at n = 4
        // the value is 1.1998456790123457.
        let spec = SymbolSpec::product(vec![c(0.5, 0.0)], vec![c(1.0 / 3.0, 0.0)]).unwrap();
        let series = fourier_coefficients(&spec, 8, 1e-12).unwrap();
        let t4 = build_toeplitz(&series, 4).unwrap();
        let ld = lu_logdet(&t4, TOL).unwrap();
        let det = ld.value();
        assert_relative_eq!(det.re, 1.1998456790123457, max_relative = 1e-14);
        assert_relative_eq!(det.im, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn logdet_is_multiplicative() {
        let a = random_matrix(6, 11);
        let b = random_matrix(6, 12);
        let ab = a.matmul(&b);
        let lhs = lu_logdet(&ab, TOL).unwrap();
        let rhs = lu_logdet(&a, TOL).unwrap().combine(&lu_logdet(&b, TOL).unwrap());
        assert_relative_eq!(lhs.log_magnitude, rhs.log_magnitude, max_relative = 1e-11);
        assert_relative_eq!(wrap_angle(lhs.phase - rhs.phase), 0.0, epsilon = 1e-11);
    }

    #[test]
    fn ratio_cancels_large_magnitudes() {
        let a = LogDet { log_magnitude: 900.0, phase: 2.0, is_singular: false };
        let b = LogDet { log_magnitude: 899.0, phase: -2.0, is_singular: false };
        let r = a.ratio_to(&b);
        assert_relative_eq!(r.norm(), 1.0f64.exp(), max_relative = 1e-15);
        assert_relative_eq!(r.arg(), wrap_angle(4.0), max_relative = 1e-15);
        assert_eq!(LogDet::singular().ratio_to(&b), c(0.0, 0.0));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = random_matrix(8, 21);
        let expected: Vec<Complex64> = (0..8).map(|i| c(i as f64 - 3.0, 0.5 * i as f64)).collect();
        let rhs = a.mul_vec(&expected);
        let sol = solve(&a, &rhs, TOL).unwrap();
        for (got, want) in sol.x.iter().zip(&expected) {
            assert_relative_eq!(got.re, want.re, epsilon = 1e-11);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-11);
        }
        assert!(sol.residual < 1e-12, "residual {}", sol.residual);
    }

    #[test]
    fn reference_section_solves_meet_the_scaled_residual_bound() {
        let specs = [
            crate::catalog::product_symbol(),
            crate::catalog::exponential_symbol(),
        ];
        for spec in specs {
            let series = fourier_coefficients(&spec, 64, 1e-12).unwrap();
            for n in [8usize, 32] {
                let t = build_toeplitz(&series, n).unwrap();
                let rhs: Vec<Complex64> = (0..n)
                    .map(|i| c((i as f64).sin(), (i as f64).cos()))
                    .collect();
                let sol = solve(&t, &rhs, TOL).unwrap();
                let x_max = sol.x.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
                let bound = 1e-10 * t.max_magnitude() * x_max.max(1.0);
                assert!(
                    sol.residual < bound,
                    "n = {n}: residual {:.3e} vs bound {:.3e}",
                    sol.residual,
                    bound
                );
            }
        }
    }

    #[test]
    fn solve_adjoint_matches_explicit_adjoint_system() {
        let a = random_matrix(5, 31);
        let rhs: Vec<Complex64> = (0..5).map(|i| c(1.0 / (i as f64 + 1.0), i as f64)).collect();
        let factors = lu_factor(&a, TOL).unwrap();
        let y = factors.solve_adjoint(&rhs).unwrap();
        let back = a.conj_transpose().mul_vec(&y);
        for (got, want) in back.iter().zip(&rhs) {
            assert_relative_eq!(got.re, want.re, epsilon = 1e-11);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-11);
        }
    }

    #[test]
    fn solve_columns_inverts() {
        let a = random_matrix(6, 41);
        let inv = solve_columns(&a, &ComplexMatrix::identity(6), TOL).unwrap();
        let prod = a.matmul(&inv);
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(prod.get(i, j).re, want, epsilon = 1e-11);
                assert_relative_eq!(prod.get(i, j).im, 0.0, epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn singular_solve_is_an_error() {
        let mut mat = random_matrix(4, 51);
        for j in 0..4 {
            let v = mat.get(0, j);
            mat.set(2, j, v);
        }
        let rhs = vec![c(1.0, 0.0); 4];
        assert!(matches!(solve(&mat, &rhs, TOL), Err(LinalgError::SingularSection)));
    }

    #[test]
    fn inverse_norm_of_identity_is_one() {
        let est = inverse_norm_estimate(&ComplexMatrix::identity(6), TOL).unwrap();
        assert!(est.converged);
        assert_relative_eq!(est.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn inverse_norm_of_diagonal_is_reciprocal_smallest_entry() {
        let mat = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                if i == 0 { c(2.0, 0.0) } else { c(4.0, 0.0) }
            } else {
                c(0.0, 0.0)
            }
        });
        let est = inverse_norm_estimate(&mat, TOL).unwrap();
        assert!(est.converged);
        assert_relative_eq!(est.value, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn inverse_norm_is_deterministic_across_runs() {
        let mat = random_matrix(10, 61);
        let a = inverse_norm_estimate(&mat, TOL).unwrap();
        let b = inverse_norm_estimate(&mat, TOL).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn inverse_norm_of_singular_matrix_is_an_error() {
        assert!(matches!(
            inverse_norm_estimate(&ComplexMatrix::zeros(3, 3), TOL),
            Err(LinalgError::SingularSection)
        ));
    }
}
