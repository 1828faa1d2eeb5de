//! The limiting objects the finite sections converge to: the m x m limit
//! determinant assembled from the one-sided factors, the block-splitting
//! consistency checks, and the leading constants of the determinant
//! asymptotics.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{lu_factor, lu_logdet, solve_columns, LinalgError, LogDet};
use crate::symbol::FourierSeries;
use crate::toeplitz::{Blocks, ComplexMatrix, Perturbation, ToeplitzError};
use crate::wiener_hopf::Factorization;

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("limit entries need factor coefficients to index {needed}, truncation is {truncation}")]
    TruncationExceeded { needed: i64, truncation: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Section(#[from] ToeplitzError),
}

/// The m x m limit matrix and its determinant. A singular matrix means the
/// limit is exactly zero, which duplicate perturbation indices force.
#[derive(Debug, Clone)]
pub struct LimitDeterminant {
    pub matrix: ComplexMatrix,
    pub logdet: LogDet,
}

impl LimitDeterminant {
    pub fn value(&self) -> Complex64 {
        self.logdet.value()
    }
}

/// Entry `(i, j)` of the limit matrix:
/// `sum_{k=1}^{K} (phi_minus)_{p_i + k - m} (phi_plus)_{-q_j - k + m}` with
/// `K = min(m - p_i, m - q_j)`; an empty range gives an exact zero.
fn limit_entry(fact: &Factorization, m: i64, p_i: i64, q_j: i64) -> Complex64 {
    let k_max = (m - p_i).min(m - q_j);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 1..=k_max {
        acc += fact.minus_coefficient(p_i + k - m) * fact.plus_coefficient(-q_j - k + m);
    }
    acc
}

/// The limit of `det M_{m+n} / det T_n` as the section grows: the
/// determinant of the matrix built by [`limit_entry`]. The empty
/// perturbation gives exactly 1.
pub fn limit_determinant(
    fact: &Factorization,
    pert: &Perturbation,
    singularity_tol: f64,
) -> Result<LimitDeterminant, LimitError> {
    let m = pert.rank() as i64;
    let trunc = fact.truncation() as i64;
    // The k = 1 term of any nonempty entry sum already reads factor
    // coefficients at depth m - 1 - index; indices deeper than the
    // truncation would silently drop nonzero terms.
    for &v in pert.stored_p().iter().chain(pert.stored_q().iter()) {
        if v < m - 1 - trunc {
            return Err(LimitError::TruncationExceeded {
                needed: v,
                truncation: fact.truncation(),
            });
        }
    }
    let matrix = ComplexMatrix::from_fn(pert.rank(), pert.rank(), |i, j| {
        limit_entry(fact, m, pert.row_index(i), pert.col_index(j))
    });
    let logdet = lu_logdet(&matrix, singularity_tol)?;
    Ok(LimitDeterminant { matrix, logdet })
}

/// The constants of the determinant asymptotics `det T_n ~ g^n * e`,
/// computed from the log coefficients: `g = exp(g_0)` and
/// `e = exp(sum_{k >= 1} k g_k g_{-k})`. `series_tail` is the magnitude of
/// the last term kept, a proxy for the truncation error of the sum.
#[derive(Debug, Clone, Copy)]
pub struct SzegoConstants {
    pub g: Complex64,
    pub e: Complex64,
    pub series_tail: f64,
}

pub fn szego_constants(log_series: &FourierSeries) -> SzegoConstants {
    let n = log_series.truncation() as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        sum += (k as f64) * log_series.coefficient(k) * log_series.coefficient(-k);
    }
    let series_tail = if n >= 1 {
        ((n as f64) * log_series.coefficient(n) * log_series.coefficient(-n)).norm()
    } else {
        0.0
    };
    SzegoConstants {
        g: log_series.coefficient(0).exp(),
        e: sum.exp(),
        series_tail,
    }
}

/// Multiplicativity check for the block splitting:
/// `det M = det D * det(A - B D^{-1} C)`. Returns the relative discrepancy
/// `|1 - split/whole|` when `det M` is above the singular floor and the
/// absolute discrepancy `|split|` when it is at the floor, where roundoff
/// dust on the split side is all that separates two exact zeros.
pub fn schur_check(blocks: &Blocks, singularity_tol: f64) -> Result<f64, LimitError> {
    if blocks.a.rows() == 0 {
        return Ok(0.0);
    }
    let whole = lu_logdet(&blocks.assemble(), singularity_tol)?;
    let d = lu_factor(&blocks.d, singularity_tol)?;
    if d.is_singular() {
        return Err(LimitError::Linalg(LinalgError::SingularSection));
    }
    let x = solve_columns(&blocks.d, &blocks.c, singularity_tol)?;
    let complement = blocks.a.sub(&blocks.b.matmul(&x));
    let split = d.logdet().combine(&lu_logdet(&complement, singularity_tol)?);
    Ok(if whole.is_singular {
        split.value().norm()
    } else {
        (Complex64::new(1.0, 0.0) - split.ratio_to(&whole)).norm()
    })
}

/// Entry `(i, j)` of the semi-infinite product `B T^{-1} C`:
/// `sum_{k >= 0} (phi_minus)_{p_i - m - k} (phi_plus)_{m + k - q_j}`, which
/// the factor supports truncate to finitely many terms.
fn corrected_entry(fact: &Factorization, m: i64, p_i: i64, q_j: i64) -> Complex64 {
    let k_max = (p_i - m + fact.truncation() as i64).min(fact.truncation() as i64 - m + q_j);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=k_max {
        acc += fact.minus_coefficient(p_i - m - k) * fact.plus_coefficient(m + k - q_j);
    }
    acc
}

/// Worst entrywise gap between the finite-section product `B T_n^{-1} C`
/// and its semi-infinite series value. Decays with `n` at the same
/// geometric rate as the determinant ratio itself.
pub fn schur_entry_check(
    blocks: &Blocks,
    fact: &Factorization,
    pert: &Perturbation,
    singularity_tol: f64,
) -> Result<f64, LimitError> {
    let m = pert.rank();
    if m == 0 {
        return Ok(0.0);
    }
    let x = solve_columns(&blocks.d, &blocks.c, singularity_tol)?;
    let product = blocks.b.matmul(&x);
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let series = corrected_entry(fact, m as i64, pert.row_index(i), pert.col_index(j));
            worst = worst.max((product.get(i, j) - series).norm());
        }
    }
    Ok(worst)
}
