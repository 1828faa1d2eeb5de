//! Symbols on the unit circle: sampling, Fourier coefficients, winding
//! numbers, and continuous logarithms.
//!
//! A symbol `phi` generates the Toeplitz matrix `(c_{i-j})` through its
//! Fourier coefficients `c_k`. Three finite descriptions are supported:
//! explicit Laurent coefficients, products of linear factors with roots
//! inside the unit disk, and Laurent coefficients of `log phi`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::linalg::wrap_angle;

/// Samples with magnitude below this are treated as zeros of the symbol;
/// winding numbers and logarithms are numerically meaningless past it.
pub const ZERO_TOL: f64 = 1e-10;

/// Cap on `|log phi|` samples for the exp-Laurent kind. Larger values mean
/// the input is scaled badly enough that determinant ratios would be
/// dominated by overflow artifacts.
pub const LOG_MAG_CAP: f64 = 500.0;

/// Hard ceiling on FFT / winding grids.
pub const GRID_CAP: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("grid size {0} is not a power of two")]
    GridNotPowerOfTwo(usize),
    #[error("truncation order must be at least 1")]
    ZeroTruncation,
    #[error("root {0} lies on or outside the unit circle")]
    RootOutsideDisk(Complex64),
    #[error("laurent spec needs a nonempty coefficient list")]
    EmptyCoefficients,
    #[error("coefficient tail {tail:.3e} exceeds the truncation tolerance {tolerance:.3e}; increase the truncation order")]
    TailTooLarge { tail: f64, tolerance: f64 },
    #[error("|phi| = {magnitude:.3e} at theta = {theta:.6} is below the zero tolerance")]
    SymbolVanishes { theta: f64, magnitude: f64 },
    #[error("argument increments did not stabilize below the grid cap {0}")]
    NoConvergence(usize),
    #[error("winding number {0} is nonzero; no continuous logarithm exists")]
    NonzeroWinding(i64),
    #[error("|log phi| sample {magnitude:.3e} exceeds the cap {cap:.3e}; symbol is ill-scaled")]
    LogOverflow { magnitude: f64, cap: f64 },
}

/// Finite description of a symbol `phi` on the unit circle.
///
/// Every kind is constructed through a checked constructor; the stored data
/// is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolSpec {
    /// `phi(z) = sum_k c_k z^k` over a finite index range.
    Laurent {
        /// Index of `coefficients[0]`.
        min_index: i64,
        coefficients: Vec<Complex64>,
    },
    /// `phi(z) = prod_r (1 - a_r z) * prod_s (1 - b_s / z)` with all roots
    /// strictly inside the unit disk, which keeps `phi` nonvanishing on the
    /// circle with winding number zero.
    ProductOfLinearFactors {
        /// The `a_r` parameters of the analytic factors `1 - a_r z`.
        plus_roots: Vec<Complex64>,
        /// The `b_s` parameters of the anti-analytic factors `1 - b_s / z`.
        minus_roots: Vec<Complex64>,
    },
    /// `phi = exp(g)` where `g` is a finite Laurent polynomial.
    ExpLaurent {
        /// Index of `log_coefficients[0]`.
        min_index: i64,
        log_coefficients: Vec<Complex64>,
    },
}

impl SymbolSpec {
    pub fn laurent(min_index: i64, coefficients: Vec<Complex64>) -> Result<Self, SymbolError> {
        if coefficients.is_empty() {
            return Err(SymbolError::EmptyCoefficients);
        }
        Ok(SymbolSpec::Laurent {
            min_index,
            coefficients,
        })
    }

    /// Constant symbol `phi = c`, stored as a one-term Laurent polynomial.
    pub fn constant(value: Complex64) -> Self {
        SymbolSpec::Laurent {
            min_index: 0,
            coefficients: vec![value],
        }
    }

    pub fn product(
        plus_roots: Vec<Complex64>,
        minus_roots: Vec<Complex64>,
    ) -> Result<Self, SymbolError> {
        for &r in plus_roots.iter().chain(minus_roots.iter()) {
            if r.norm() >= 1.0 {
                return Err(SymbolError::RootOutsideDisk(r));
            }
        }
        Ok(SymbolSpec::ProductOfLinearFactors {
            plus_roots,
            minus_roots,
        })
    }

    pub fn exp_laurent(min_index: i64, log_coefficients: Vec<Complex64>) -> Result<Self, SymbolError> {
        if log_coefficients.is_empty() {
            return Err(SymbolError::EmptyCoefficients);
        }
        Ok(SymbolSpec::ExpLaurent {
            min_index,
            log_coefficients,
        })
    }

    /// Largest index magnitude carried by the finite description. For the
    /// exp kind this is the bandwidth of `log phi`, not of `phi`.
    pub fn bandwidth(&self) -> usize {
        let range = |min_index: i64, len: usize| -> usize {
            let max_index = min_index + len as i64 - 1;
            min_index.unsigned_abs().max(max_index.unsigned_abs()) as usize
        };
        match self {
            SymbolSpec::Laurent {
                min_index,
                coefficients,
            } => range(*min_index, coefficients.len()),
            SymbolSpec::ProductOfLinearFactors {
                plus_roots,
                minus_roots,
            } => plus_roots.len().max(minus_roots.len()),
            SymbolSpec::ExpLaurent {
                min_index,
                log_coefficients,
            } => range(*min_index, log_coefficients.len()),
        }
    }

    /// Truncation order used when a study does not pin one explicitly.
    pub fn default_truncation(&self) -> usize {
        (4 * self.bandwidth()).max(64)
    }
}

/// Truncated two-sided Fourier coefficient sequence `{c_k}`, `|k| <= N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    truncation: usize,
    /// `coefficients[(k + N) as usize]` holds `c_k`.
    coefficients: Vec<Complex64>,
    tail_bound: f64,
}

impl FourierSeries {
    /// `coefficients` must have length `2 * truncation + 1`, indexed from
    /// `-truncation` to `truncation`. The tail bound is computed here, the
    /// only place coefficients are ever set.
    pub fn new(truncation: usize, coefficients: Vec<Complex64>) -> Self {
        assert_eq!(
            coefficients.len(),
            2 * truncation + 1,
            "coefficient storage must cover -N..=N"
        );
        let tail_bound = tail_bound_of(truncation, &coefficients);
        FourierSeries {
            truncation,
            coefficients,
            tail_bound,
        }
    }

    pub fn from_fn(truncation: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let n = truncation as i64;
        Self::new(truncation, (-n..=n).map(f).collect())
    }

    /// `c_k`, exactly zero outside the truncated range.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let n = self.truncation as i64;
        if k < -n || k > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[(k + n) as usize]
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Max coefficient magnitude over the outermost 10% of indices; the
    /// truncation certificate.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }
}

fn tail_bound_of(truncation: usize, coefficients: &[Complex64]) -> f64 {
    let n = truncation;
    let tail_count = ((n as f64 * 0.1).ceil() as usize).max(1).min(n.max(1));
    let mut bound: f64 = 0.0;
    for k in 0..tail_count.min(coefficients.len()) {
        bound = bound.max(coefficients[k].norm());
        bound = bound.max(coefficients[coefficients.len() - 1 - k].norm());
    }
    bound
}

fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `phi(e^{i theta_j})` for `theta_j = 2 pi j / grid_size`.
pub fn eval_symbol(spec: &SymbolSpec, grid_size: usize) -> Result<Vec<Complex64>, SymbolError> {
    if !is_power_of_two(grid_size) {
        return Err(SymbolError::GridNotPowerOfTwo(grid_size));
    }
    let mut samples = Vec::with_capacity(grid_size);
    for j in 0..grid_size {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / grid_size as f64;
        samples.push(eval_at(spec, theta)?);
    }
    Ok(samples)
}

fn eval_at(spec: &SymbolSpec, theta: f64) -> Result<Complex64, SymbolError> {
    let z = Complex64::from_polar(1.0, theta);
    match spec {
        SymbolSpec::Laurent {
            min_index,
            coefficients,
        } => Ok(eval_laurent(*min_index, coefficients, z)),
        SymbolSpec::ProductOfLinearFactors {
            plus_roots,
            minus_roots,
        } => {
            let zinv = z.conj();
            let mut value = Complex64::new(1.0, 0.0);
            for &a in plus_roots {
                value *= Complex64::new(1.0, 0.0) - a * z;
            }
            for &b in minus_roots {
                value *= Complex64::new(1.0, 0.0) - b * zinv;
            }
            Ok(value)
        }
        SymbolSpec::ExpLaurent {
            min_index,
            log_coefficients,
        } => {
            let logval = eval_laurent(*min_index, log_coefficients, z);
            let magnitude = logval.norm();
            if magnitude > LOG_MAG_CAP {
                return Err(SymbolError::LogOverflow {
                    magnitude,
                    cap: LOG_MAG_CAP,
                });
            }
            Ok(logval.exp())
        }
    }
}

fn eval_laurent(min_index: i64, coefficients: &[Complex64], z: Complex64) -> Complex64 {
    // Horner in z, then one shift by z^min_index. |z| = 1 keeps powi stable.
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coefficients.iter().rev() {
        acc = acc * z + c;
    }
    acc * z.powi(min_index as i32)
}

/// Fourier coefficients `c_k = (1/2 pi) int phi(theta) e^{-i k theta} d theta`
/// for `|k| <= n`, in closed form for the Laurent and product kinds, by FFT
/// for the exp kind.
pub fn fourier_coefficients(
    spec: &SymbolSpec,
    n: usize,
    truncation_tol: f64,
) -> Result<FourierSeries, SymbolError> {
    if n == 0 {
        return Err(SymbolError::ZeroTruncation);
    }
    match spec {
        SymbolSpec::Laurent {
            min_index,
            coefficients,
        } => {
            series_from_exact(n, *min_index, coefficients, truncation_tol)
        }
        SymbolSpec::ProductOfLinearFactors {
            plus_roots,
            minus_roots,
        } => {
            let plus_poly = expand_roots(plus_roots);
            let minus_poly = expand_roots(minus_roots);
            // c_k = sum_v plus[k + v] * minus[v], support -S..=R.
            let s = minus_poly.len() as i64 - 1;
            let r = plus_poly.len() as i64 - 1;
            let coeffs: Vec<Complex64> = (-s..=r)
                .map(|k| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (v, &mv) in minus_poly.iter().enumerate() {
                        let u = k + v as i64;
                        if (0..=r).contains(&u) {
                            acc += plus_poly[u as usize] * mv;
                        }
                    }
                    acc
                })
                .collect();
            series_from_exact(n, -s, &coeffs, truncation_tol)
        }
        SymbolSpec::ExpLaurent { .. } => {
            fft_series(n, spec.bandwidth(), truncation_tol, |grid| {
                eval_symbol(spec, grid)
            })
        }
    }
}

/// `prod_r (1 - a_r w)` expanded into coefficients of `w^0..w^R`.
fn expand_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for &a in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (t, &c) in poly.iter().enumerate() {
            next[t] += c;
            next[t + 1] -= a * c;
        }
        poly = next;
    }
    poly
}

/// Place exactly-known coefficients into a truncated series. Dropping a
/// coefficient above the tolerance means the requested order cannot
/// represent the symbol.
fn series_from_exact(
    n: usize,
    min_index: i64,
    coefficients: &[Complex64],
    truncation_tol: f64,
) -> Result<FourierSeries, SymbolError> {
    let nn = n as i64;
    let mut dropped: f64 = 0.0;
    for (t, &c) in coefficients.iter().enumerate() {
        let k = min_index + t as i64;
        if (k < -nn || k > nn) && c.norm() > dropped {
            dropped = c.norm();
        }
    }
    if dropped > truncation_tol {
        return Err(SymbolError::TailTooLarge {
            tail: dropped,
            tolerance: truncation_tol,
        });
    }
    Ok(FourierSeries::from_fn(n, |k| {
        let t = k - min_index;
        if t >= 0 && (t as usize) < coefficients.len() {
            coefficients[t as usize]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// FFT-based coefficient extraction with the grid-doubling certificate:
/// start at `4 * max(n, bandwidth)` rounded up to a power of two, double
/// until the tail bound clears the tolerance or the grid cap is hit.
fn fft_series(
    n: usize,
    bandwidth: usize,
    truncation_tol: f64,
    sample: impl Fn(usize) -> Result<Vec<Complex64>, SymbolError>,
) -> Result<FourierSeries, SymbolError> {
    let mut grid = (4 * n.max(bandwidth).max(1)).next_power_of_two();
    let mut planner = FftPlanner::new();
    let mut previous_tail = f64::INFINITY;
    loop {
        let mut buffer = sample(grid)?;
        planner.plan_fft_forward(grid).process(&mut buffer);
        let scale = 1.0 / grid as f64;
        let series = FourierSeries::from_fn(n, |k| {
            let bin = k.rem_euclid(grid as i64) as usize;
            buffer[bin] * scale
        });
        let tail = series.tail_bound();
        if tail < truncation_tol {
            return Ok(series);
        }
        // Doubling shrinks the tail only while aliasing dominates it; a
        // stagnant tail is the symbol's own and no grid will fix it.
        if grid >= GRID_CAP || tail > 0.5 * previous_tail {
            return Err(SymbolError::TailTooLarge {
                tail,
                tolerance: truncation_tol,
            });
        }
        previous_tail = tail;
        grid *= 2;
    }
}

/// Winding number of `phi` around the origin, from principal-branch argument
/// increments on a grid that is doubled until every increment is below pi/2.
pub fn winding_number(spec: &SymbolSpec, grid_size: usize) -> Result<i64, SymbolError> {
    if !is_power_of_two(grid_size) {
        return Err(SymbolError::GridNotPowerOfTwo(grid_size));
    }
    let mut grid = grid_size;
    loop {
        let samples = eval_symbol(spec, grid)?;
        match winding_from_samples(&samples, grid) {
            Ok(w) => return Ok(w),
            Err(SymbolError::NoConvergence(_)) if grid < GRID_CAP => grid *= 2,
            Err(e) => return Err(e),
        }
    }
}

fn winding_from_samples(samples: &[Complex64], grid: usize) -> Result<i64, SymbolError> {
    let mut total = 0.0;
    for j in 0..samples.len() {
        let here = samples[j];
        if here.norm() < ZERO_TOL {
            return Err(SymbolError::SymbolVanishes {
                theta: 2.0 * std::f64::consts::PI * j as f64 / samples.len() as f64,
                magnitude: here.norm(),
            });
        }
        let next = samples[(j + 1) % samples.len()];
        let increment = (next * here.conj()).arg();
        if increment.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(SymbolError::NoConvergence(grid));
        }
        total += increment;
    }
    Ok((total / (2.0 * std::f64::consts::PI)).round() as i64)
}

/// Fourier coefficients of a continuous branch of `log phi`, `|k| <= n`.
///
/// The branch starts from the principal value at `theta = 0` and is tracked
/// by continuity around the grid; afterwards the imaginary part of the mean
/// coefficient is folded into `(-pi, pi]`. Requires winding number zero.
pub fn log_coefficients(
    spec: &SymbolSpec,
    n: usize,
    truncation_tol: f64,
) -> Result<FourierSeries, SymbolError> {
    if n == 0 {
        return Err(SymbolError::ZeroTruncation);
    }
    if let SymbolSpec::ExpLaurent {
        min_index,
        log_coefficients,
    } = spec
    {
        // The stored coefficients already are log phi; only the constant
        // term's branch needs folding.
        let mut series = series_from_exact(n, *min_index, log_coefficients, truncation_tol)?;
        let c0 = series.coefficient(0);
        let folded = Complex64::new(c0.re, wrap_angle(c0.im));
        if folded != c0 {
            series = FourierSeries::from_fn(n, |k| if k == 0 { folded } else { series.coefficient(k) });
        }
        return Ok(series);
    }

    let series = fft_series(n, spec.bandwidth(), truncation_tol, |grid| {
        let samples = eval_symbol(spec, grid)?;
        continuous_log(&samples, grid)
    })?;
    let c0 = series.coefficient(0);
    let folded = Complex64::new(c0.re, wrap_angle(c0.im));
    Ok(FourierSeries::from_fn(n, |k| {
        if k == 0 {
            folded
        } else {
            series.coefficient(k)
        }
    }))
}

/// Branch-tracked `log phi` samples. Rejects vanishing samples, coarse grids
/// (increments >= pi/2), and nonzero winding.
fn continuous_log(samples: &[Complex64], grid: usize) -> Result<Vec<Complex64>, SymbolError> {
    let mut logs = Vec::with_capacity(samples.len());
    let mut argument = samples[0].arg();
    for j in 0..samples.len() {
        let here = samples[j];
        if here.norm() < ZERO_TOL {
            return Err(SymbolError::SymbolVanishes {
                theta: 2.0 * std::f64::consts::PI * j as f64 / samples.len() as f64,
                magnitude: here.norm(),
            });
        }
        logs.push(Complex64::new(here.norm().ln(), argument));
        let next = samples[(j + 1) % samples.len()];
        let increment = (next * here.conj()).arg();
        if increment.abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(SymbolError::NoConvergence(grid));
        }
        argument += increment;
    }
    // Closure defect = 2 pi * winding; anything else is ruled out above.
    let winding = ((argument - samples[0].arg()) / (2.0 * std::f64::consts::PI)).round() as i64;
    if winding != 0 {
        return Err(SymbolError::NonzeroWinding(winding));
    }
    Ok(logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn product_half_third() -> SymbolSpec {
        SymbolSpec::product(vec![c(0.5, 0.0)], vec![c(1.0 / 3.0, 0.0)]).unwrap()
    }

    fn exp_cosine() -> SymbolSpec {
        SymbolSpec::exp_laurent(-1, vec![c(0.4, 0.0), c(0.0, 0.0), c(0.4, 0.0)]).unwrap()
    }

    #[test]
    fn constant_symbol_sampling() {
        let spec = SymbolSpec::constant(c(1.0, 0.0));
        let samples = eval_symbol(&spec, 8).unwrap();
        assert_eq!(samples.len(), 8);
        for s in samples {
            assert_eq!(s, c(1.0, 0.0));
        }
    }

    #[test]
    fn product_eval_at_theta_zero() {
        let samples = eval_symbol(&product_half_third(), 4).unwrap();
        assert_relative_eq!(samples[0].re, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(samples[0].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_eval_at_theta_zero() {
        let samples = eval_symbol(&exp_cosine(), 4).unwrap();
        assert_relative_eq!(samples[0].re, 2.2255409284924676, max_relative = 1e-14);
    }

    #[test]
    fn eval_rejects_non_power_of_two_grid() {
        let spec = SymbolSpec::constant(c(1.0, 0.0));
        assert!(matches!(
            eval_symbol(&spec, 12),
            Err(SymbolError::GridNotPowerOfTwo(12))
        ));
    }

    #[test]
    fn ill_scaled_exp_symbol_is_rejected() {
        let spec = SymbolSpec::exp_laurent(0, vec![c(600.0, 0.0)]).unwrap();
        assert!(matches!(
            eval_symbol(&spec, 8),
            Err(SymbolError::LogOverflow { .. })
        ));
    }

    #[test]
    fn roots_on_the_circle_are_rejected() {
        assert!(matches!(
            SymbolSpec::product(vec![c(1.0, 0.0)], vec![]),
            Err(SymbolError::RootOutsideDisk(_))
        ));
    }

    #[test]
    fn product_coefficients_closed_form() {
        let series = fourier_coefficients(&product_half_third(), 8, 1e-12).unwrap();
        assert_eq!(series.coefficient(0), c(1.0 + 1.0 / 6.0, 0.0));
        assert_eq!(series.coefficient(1), c(-0.5, 0.0));
        assert_eq!(series.coefficient(-1), c(-1.0 / 3.0, 0.0));
        for k in 2..=8i64 {
            assert_eq!(series.coefficient(k), c(0.0, 0.0));
            assert_eq!(series.coefficient(-k), c(0.0, 0.0));
        }
        assert_eq!(series.coefficient(100), c(0.0, 0.0));
    }

    #[test]
    fn constant_coefficients() {
        let series = fourier_coefficients(&SymbolSpec::constant(c(1.0, 0.0)), 5, 1e-12).unwrap();
        assert_eq!(series.coefficient(0), c(1.0, 0.0));
        for k in 1..=5i64 {
            assert_eq!(series.coefficient(k), c(0.0, 0.0));
            assert_eq!(series.coefficient(-k), c(0.0, 0.0));
        }
        assert_eq!(series.tail_bound(), 0.0);
    }

    #[test]
    fn exp_coefficients_match_bessel_values() {
        // c_k of exp(0.4 (z + 1/z)) is I_k(0.8).
        let series = fourier_coefficients(&exp_cosine(), 16, 1e-12).unwrap();
        assert_relative_eq!(series.coefficient(0).re, 1.1665149228698027, max_relative = 1e-13);
        assert_relative_eq!(series.coefficient(1).re, 0.4328648026206398, max_relative = 1e-13);
        assert_relative_eq!(series.coefficient(2).re, 0.0843529163182032, max_relative = 1e-12);
        assert_relative_eq!(series.coefficient(-1).re, 0.4328648026206398, max_relative = 1e-13);
        assert!(series.coefficient(1).im.abs() < 1e-15);
    }

    #[test]
    fn exp_coefficients_match_quadrature_oracle() {
        // Direct Riemann sum of the defining integral on a 3000-point grid,
        // evaluated from the formula rather than through the library path.
        let series = fourier_coefficients(&exp_cosine(), 16, 1e-12).unwrap();
        let m = 3000usize;
        for k in [-3i64, -1, 0, 1, 2] {
            let mut acc = c(0.0, 0.0);
            for j in 0..m {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
                let phi = (0.8 * theta.cos()).exp();
                acc += phi * Complex64::from_polar(1.0, -(k as f64) * theta);
            }
            acc /= m as f64;
            assert_relative_eq!(series.coefficient(k).re, acc.re, epsilon = 1e-10);
            assert_relative_eq!(series.coefficient(k).im, acc.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn laurent_coefficients_beyond_truncation_are_an_error() {
        let spec = SymbolSpec::laurent(5, vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            fourier_coefficients(&spec, 3, 1e-12),
            Err(SymbolError::TailTooLarge { .. })
        ));
    }

    #[test]
    fn winding_numbers_of_reference_symbols() {
        assert_eq!(winding_number(&SymbolSpec::constant(c(1.0, 0.0)), 8).unwrap(), 0);
        assert_eq!(winding_number(&product_half_third(), 8).unwrap(), 0);
        let z = SymbolSpec::laurent(1, vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(winding_number(&z, 8).unwrap(), 1);
        let zinv = SymbolSpec::laurent(-1, vec![c(1.0, 0.0)]).unwrap();
        assert_eq!(winding_number(&zinv, 8).unwrap(), -1);
    }

    #[test]
    fn winding_rejects_vanishing_symbol() {
        // phi = 1 - z vanishes at theta = 0.
        let spec = SymbolSpec::laurent(0, vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(matches!(
            winding_number(&spec, 8),
            Err(SymbolError::SymbolVanishes { .. })
        ));
    }

    #[test]
    fn log_coefficients_of_constant_are_zero() {
        let series = log_coefficients(&SymbolSpec::constant(c(1.0, 0.0)), 8, 1e-12).unwrap();
        for k in -8..=8i64 {
            assert!(series.coefficient(k).norm() < 1e-15);
        }
    }

    #[test]
    fn log_coefficients_of_exp_kind_pass_through() {
        let series = log_coefficients(&exp_cosine(), 8, 1e-12).unwrap();
        assert_eq!(series.coefficient(1), c(0.4, 0.0));
        assert_eq!(series.coefficient(-1), c(0.4, 0.0));
        for k in [-8i64, -2, 0, 2, 8] {
            assert_eq!(series.coefficient(k), c(0.0, 0.0));
        }
    }

    #[test]
    fn constant_log_branch_folds_into_principal_range() {
        // log phi = 3 pi i stored directly; the constant coefficient comes
        // back as pi i, the same symbol on the principal branch.
        let three_pi = 3.0 * std::f64::consts::PI;
        let spec = SymbolSpec::exp_laurent(0, vec![c(0.0, three_pi)]).unwrap();
        let series = log_coefficients(&spec, 4, 1e-12).unwrap();
        assert_relative_eq!(series.coefficient(0).im, std::f64::consts::PI, max_relative = 1e-14);
    }

    #[test]
    fn product_log_matches_mercator_series() {
        // log(1 - a z) = -sum a^k z^k / k, same for the 1/z factor.
        let series = log_coefficients(&product_half_third(), 48, 1e-12).unwrap();
        let a: f64 = 0.5;
        let b: f64 = 1.0 / 3.0;
        assert!(series.coefficient(0).norm() < 1e-14);
        for k in 1..=12i64 {
            let expect_plus = -a.powi(k as i32) / k as f64;
            let expect_minus = -b.powi(k as i32) / k as f64;
            assert_relative_eq!(series.coefficient(k).re, expect_plus, epsilon = 1e-13);
            assert!(series.coefficient(k).im.abs() < 1e-13);
            assert_relative_eq!(series.coefficient(-k).re, expect_minus, epsilon = 1e-13);
            assert!(series.coefficient(-k).im.abs() < 1e-13);
        }
    }

    #[test]
    fn log_rejects_nonzero_winding() {
        let z = SymbolSpec::laurent(1, vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(
            log_coefficients(&z, 8, 1e-12),
            Err(SymbolError::NonzeroWinding(1))
        ));
    }

    #[test]
    fn parseval_identity_on_reference_symbols() {
        for spec in [product_half_third(), exp_cosine()] {
            let series = fourier_coefficients(&spec, 24, 1e-12).unwrap();
            let sum_sq: f64 = (-24..=24i64).map(|k| series.coefficient(k).norm_sqr()).sum();
            let grid = 512;
            let samples = eval_symbol(&spec, grid).unwrap();
            let mean_sq: f64 = samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / grid as f64;
            assert_relative_eq!(sum_sq, mean_sq, epsilon = 1e-11);
        }
    }

    #[test]
    fn product_with_real_roots_has_real_coefficients() {
        let series = fourier_coefficients(&product_half_third(), 8, 1e-12).unwrap();
        for k in -8..=8i64 {
            assert_eq!(series.coefficient(k).im, 0.0);
        }
    }

    #[test]
    fn doubling_the_truncation_is_stable() {
        for spec in [product_half_third(), exp_cosine()] {
            let coarse = fourier_coefficients(&spec, 16, 1e-12).unwrap();
            let fine = fourier_coefficients(&spec, 32, 1e-12).unwrap();
            for k in -16..=16i64 {
                let diff = (coarse.coefficient(k) - fine.coefficient(k)).norm();
                assert!(
                    diff <= coarse.tail_bound() + 1e-15,
                    "c_{k} moved by {diff:.3e} when doubling the truncation"
                );
            }
        }
    }

    #[test]
    fn exp_then_log_recovers_stored_coefficients() {
        // Re-extract log coefficients from the numerically computed symbol
        // coefficients, exercising the branch-tracked FFT path.
        let spec = exp_cosine();
        let series = fourier_coefficients(&spec, 48, 1e-12).unwrap();
        let relisted: Vec<Complex64> = (-48..=48).map(|k| series.coefficient(k)).collect();
        let as_laurent = SymbolSpec::laurent(-48, relisted).unwrap();
        let logs = log_coefficients(&as_laurent, 48, 1e-12).unwrap();
        for k in -4..=4i64 {
            let expect = if k.abs() == 1 { 0.4 } else { 0.0 };
            assert!(
                (logs.coefficient(k) - c(expect, 0.0)).norm() < 1e-10,
                "log coefficient {k} drifted: {}",
                logs.coefficient(k)
            );
        }
    }
}
