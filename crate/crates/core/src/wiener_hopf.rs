//! Wiener-Hopf factorization `phi = phi_minus * phi_plus` of a zero-winding
//! symbol, normalized so the constant term of `phi_minus` is exactly 1.
//!
//! The factors come from splitting the logarithm: nonnegative log
//! coefficients exponentiate to `phi_plus`, strictly negative ones to
//! `phi_minus`. Exponentiation uses the power-series recursion
//! `k h_k = sum_{j=1..k} j g_j h_{k-j}`, so no further transforms are
//! involved and the normalization holds exactly.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{solve, LinalgError};
use crate::symbol::FourierSeries;
use crate::toeplitz::{build_toeplitz, ToeplitzError};

#[derive(Debug, Error)]
pub enum WienerHopfError {
    #[error("factor reconstruction residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("constant term of the plus factor vanishes")]
    ZeroConstantTerm,
    #[error("rescaling constant must be nonzero")]
    ZeroGauge,
    #[error(transparent)]
    Section(#[from] ToeplitzError),
    #[error(transparent)]
    Solve(#[from] LinalgError),
}

/// One-sided factors of a symbol. `plus[k]` is the coefficient of `z^k`;
/// `minus[k]` is the coefficient of `z^{-k}`, with `minus[0] = 1`.
#[derive(Debug, Clone)]
pub struct Factorization {
    plus: Vec<Complex64>,
    minus: Vec<Complex64>,
    reconstruction_residual: f64,
}

impl Factorization {
    pub fn truncation(&self) -> usize {
        self.plus.len() - 1
    }

    pub fn plus(&self) -> &[Complex64] {
        &self.plus
    }

    pub fn minus(&self) -> &[Complex64] {
        &self.minus
    }

    /// `(phi_plus)_k`, zero outside `0..=truncation`.
    pub fn plus_coefficient(&self, k: i64) -> Complex64 {
        if k < 0 || k as usize >= self.plus.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.plus[k as usize]
        }
    }

    /// `(phi_minus)_k`, zero outside `-truncation..=0`.
    pub fn minus_coefficient(&self, k: i64) -> Complex64 {
        if k > 0 || (-k) as usize >= self.minus.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.minus[(-k) as usize]
        }
    }

    /// Worst-case deviation of `phi_minus * phi_plus` from the symbol
    /// coefficients the factorization was built against.
    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }

    /// Coefficients of the product `phi_minus * phi_plus` over
    /// `-truncation..=truncation`, index `k + truncation`.
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.truncation();
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for (a, &pa) in self.plus.iter().enumerate() {
            for (b, &mb) in self.minus.iter().enumerate() {
                // term z^{a - b}
                out[(a as i64 - b as i64 + n as i64) as usize] += pa * mb;
            }
        }
        out
    }

    /// The gauge freedom `phi = (phi_minus / c)(c * phi_plus)`. The stored
    /// residual carries over: the scalings cancel term by term in the
    /// reconstruction.
    pub fn rescaled(&self, c: Complex64) -> Result<Factorization, WienerHopfError> {
        if c.norm() == 0.0 {
            return Err(WienerHopfError::ZeroGauge);
        }
        Ok(Factorization {
            plus: self.plus.iter().map(|v| v * c).collect(),
            minus: self.minus.iter().map(|v| v / c).collect(),
            reconstruction_residual: self.reconstruction_residual,
        })
    }

    /// First `len` coefficients of `1 / phi_plus`.
    pub fn reciprocal_plus(&self, len: usize) -> Result<Vec<Complex64>, WienerHopfError> {
        reciprocal_series(&self.plus, len)
    }

    /// Smallest `|phi_plus(z)|` over a uniform grid on the unit circle; a
    /// value near zero flags a factor unfit for inversion.
    pub fn min_plus_modulus(&self, grid_size: usize) -> f64 {
        (0..grid_size)
            .map(|t| {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / grid_size as f64;
                let z = Complex64::from_polar(1.0, theta);
                // Horner in z.
                let mut acc = Complex64::new(0.0, 0.0);
                for &p in self.plus.iter().rev() {
                    acc = acc * z + p;
                }
                acc.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// `exp` of a one-sided power series by the standard recursion.
fn exp_series(g: &[Complex64]) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); g.len()];
    h[0] = g[0].exp();
    for k in 1..g.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += (j as f64) * g[j] * h[k - j];
        }
        h[k] = acc / k as f64;
    }
    h
}

/// First `len` coefficients of `1 / h` for a one-sided series `h`.
fn reciprocal_series(h: &[Complex64], len: usize) -> Result<Vec<Complex64>, WienerHopfError> {
    if h.is_empty() || h[0].norm() == 0.0 {
        return Err(WienerHopfError::ZeroConstantTerm);
    }
    let mut r = vec![Complex64::new(0.0, 0.0); len];
    if len == 0 {
        return Ok(r);
    }
    r[0] = Complex64::new(1.0, 0.0) / h[0];
    for k in 1..len {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k.min(h.len() - 1) {
            acc += h[j] * r[k - j];
        }
        r[k] = -acc / h[0];
    }
    Ok(r)
}

/// Factor a symbol from its log coefficients and verify the product of the
/// factors against the symbol's own coefficients.
pub fn factorize_log_split(
    log_series: &FourierSeries,
    symbol_series: &FourierSeries,
    residual_tol: f64,
) -> Result<Factorization, WienerHopfError> {
    let n = log_series.truncation();
    let plus_log: Vec<Complex64> = (0..=n as i64).map(|k| log_series.coefficient(k)).collect();
    let mut minus_log: Vec<Complex64> = (0..=n as i64).map(|k| log_series.coefficient(-k)).collect();
    minus_log[0] = Complex64::new(0.0, 0.0);
    let plus = exp_series(&plus_log);
    let minus = exp_series(&minus_log);
    let mut fact = Factorization {
        plus,
        minus,
        reconstruction_residual: 0.0,
    };
    let product = fact.reconstruct();
    let half = fact.truncation() as i64;
    let span = half.max(symbol_series.truncation() as i64);
    let mut residual = 0.0f64;
    for k in -span..=span {
        let got = if k.abs() <= half {
            product[(k + half) as usize]
        } else {
            Complex64::new(0.0, 0.0)
        };
        residual = residual.max((got - symbol_series.coefficient(k)).norm());
    }
    fact.reconstruction_residual = residual;
    if residual > residual_tol {
        return Err(WienerHopfError::ResidualTooLarge {
            residual,
            tolerance: residual_tol,
        });
    }
    Ok(fact)
}

/// First column of `T_n(phi)^{-1}`: the solve `T_n x = delta`. As `n`
/// grows, `x` converges to the coefficients of `1 / phi_plus` under the
/// `(phi_minus)_0 = 1` normalization.
pub fn section_inverse_column(
    series: &FourierSeries,
    n: usize,
    singularity_tol: f64,
) -> Result<Vec<Complex64>, WienerHopfError> {
    let t = build_toeplitz(series, n)?;
    let mut delta = vec![Complex64::new(0.0, 0.0); n];
    delta[0] = Complex64::new(1.0, 0.0);
    Ok(solve(&t, &delta, singularity_tol)?.x)
}

/// Worst entrywise gap between the section inverse column at size `n` and
/// the reciprocal plus-factor coefficients: two constructions of the same
/// limit object.
pub fn cross_check_residual(
    series: &FourierSeries,
    fact: &Factorization,
    n: usize,
    singularity_tol: f64,
) -> Result<f64, WienerHopfError> {
    let x = section_inverse_column(series, n, singularity_tol)?;
    let r = fact.reciprocal_plus(n)?;
    Ok(x
        .iter()
        .zip(&r)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}
