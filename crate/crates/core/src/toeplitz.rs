//! Finite Toeplitz sections `T_n`, perturbed sections `M_{m+n}`, and their
//! 2x2 block splitting.
//!
//! Storage is dense row-major throughout: section sizes stay in the
//! hundreds, so an O(n^3) LU downstream is instantaneous and nothing is
//! gained by exploiting the Toeplitz structure.

use num_complex::Complex64;
use thiserror::Error;

use crate::symbol::FourierSeries;

#[derive(Debug, Error)]
pub enum ToeplitzError {
    #[error("coefficient index {needed} outside the truncation range +-{truncation}")]
    TruncationExceeded { needed: i64, truncation: usize },
    #[error("perturbation rows and columns differ in length: {p_len} vs {q_len}")]
    LengthMismatch { p_len: usize, q_len: usize },
    #[error("section size must be at least 1")]
    EmptySection,
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        ComplexMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..self.cols {
                acc += self.get(i, t) * rhs.get(t, j);
            }
            acc
        })
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "vector length must match columns");
        (0..self.rows)
            .map(|i| {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.cols {
                    acc += self.get(i, j) * x[j];
                }
                acc
            })
            .collect()
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j))
    }
}

/// Integer sequences `p`, `q` of common length `m`; indices at and beyond
/// `m` follow the identity tail `p_i = q_i = i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    p: Vec<i64>,
    q: Vec<i64>,
}

impl Perturbation {
    pub fn new(p: Vec<i64>, q: Vec<i64>) -> Result<Self, ToeplitzError> {
        if p.len() != q.len() {
            return Err(ToeplitzError::LengthMismatch {
                p_len: p.len(),
                q_len: q.len(),
            });
        }
        Ok(Perturbation { p, q })
    }

    /// The empty perturbation, `m = 0`: plain Toeplitz sections.
    pub fn identity() -> Self {
        Perturbation { p: vec![], q: vec![] }
    }

    /// The stabilization rank `m`.
    pub fn rank(&self) -> usize {
        self.p.len()
    }

    pub fn stored_p(&self) -> &[i64] {
        &self.p
    }

    pub fn stored_q(&self) -> &[i64] {
        &self.q
    }

    /// `p_i` with the identity tail.
    pub fn row_index(&self, i: usize) -> i64 {
        if i < self.p.len() {
            self.p[i]
        } else {
            i as i64
        }
    }

    /// `q_j` with the identity tail.
    pub fn col_index(&self, j: usize) -> i64 {
        if j < self.q.len() {
            self.q[j]
        } else {
            j as i64
        }
    }
}

/// The 2x2 block splitting of `M_{m+n}`: `A` is the m x m corner, `D` the
/// plain Toeplitz section `T_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub c: ComplexMatrix,
    pub d: ComplexMatrix,
}

impl Blocks {
    /// Stitch `[[A, B], [C, D]]` back together. Entries are copied, so the
    /// result is bitwise identical to the direct construction.
    pub fn assemble(&self) -> ComplexMatrix {
        let m = self.a.rows();
        let n = self.d.rows();
        ComplexMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
            (true, true) => self.a.get(i, j),
            (true, false) => self.b.get(i, j - m),
            (false, true) => self.c.get(i - m, j),
            (false, false) => self.d.get(i - m, j - m),
        })
    }
}

/// `T_n(phi) = (c_{i-j})`, `i, j < n`.
pub fn build_toeplitz(series: &FourierSeries, n: usize) -> Result<ComplexMatrix, ToeplitzError> {
    if n == 0 {
        return Err(ToeplitzError::EmptySection);
    }
    let needed = n as i64 - 1;
    if needed > series.truncation() as i64 {
        return Err(ToeplitzError::TruncationExceeded {
            needed,
            truncation: series.truncation(),
        });
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        series.coefficient(i as i64 - j as i64)
    }))
}

/// `M_{m+n} = (c_{p_i - q_j})`, `i, j < m + n`, with identity tails.
pub fn build_perturbed(
    series: &FourierSeries,
    pert: &Perturbation,
    n: usize,
) -> Result<ComplexMatrix, ToeplitzError> {
    if n == 0 {
        return Err(ToeplitzError::EmptySection);
    }
    let size = pert.rank() + n;
    check_feasible(series, pert, size)?;
    Ok(ComplexMatrix::from_fn(size, size, |i, j| {
        series.coefficient(pert.row_index(i) - pert.col_index(j))
    }))
}

/// The block splitting: `A = (c_{p_i - q_j})` over the stored indices,
/// `B_{i,k} = c_{p_i - m - k}`, `C_{k,j} = c_{m + k - q_j}`, `D = T_n`.
pub fn build_blocks(
    series: &FourierSeries,
    pert: &Perturbation,
    n: usize,
) -> Result<Blocks, ToeplitzError> {
    if n == 0 {
        return Err(ToeplitzError::EmptySection);
    }
    let m = pert.rank();
    check_feasible(series, pert, m + n)?;
    let mi = m as i64;
    let a = ComplexMatrix::from_fn(m, m, |i, j| {
        series.coefficient(pert.row_index(i) - pert.col_index(j))
    });
    let b = ComplexMatrix::from_fn(m, n, |i, k| {
        series.coefficient(pert.row_index(i) - mi - k as i64)
    });
    let c = ComplexMatrix::from_fn(n, m, |k, j| {
        series.coefficient(mi + k as i64 - pert.col_index(j))
    });
    let d = build_toeplitz(series, n)?;
    Ok(Blocks { a, b, c, d })
}

fn check_feasible(
    series: &FourierSeries,
    pert: &Perturbation,
    size: usize,
) -> Result<(), ToeplitzError> {
    let mut p_min = i64::MAX;
    let mut p_max = i64::MIN;
    let mut q_min = i64::MAX;
    let mut q_max = i64::MIN;
    for t in 0..size {
        p_min = p_min.min(pert.row_index(t));
        p_max = p_max.max(pert.row_index(t));
        q_min = q_min.min(pert.col_index(t));
        q_max = q_max.max(pert.col_index(t));
    }
    let needed = (p_max - q_min).max(q_max - p_min).max(0);
    if needed > series.truncation() as i64 {
        return Err(ToeplitzError::TruncationExceeded {
            needed,
            truncation: series.truncation(),
        });
    }
    Ok(())
}

/// Outcome of [`validate_perturbation`]: duplicate index values within the
/// extended sequences. Duplicates are legal and force exactly-zero
/// determinants, so they warrant a warning rather than rejection.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PerturbationCheck {
    /// Values appearing more than once in the extended `p` sequence.
    pub duplicate_rows: Vec<i64>,
    /// Values appearing more than once in the extended `q` sequence.
    pub duplicate_cols: Vec<i64>,
}

impl PerturbationCheck {
    pub fn has_duplicates(&self) -> bool {
        !self.duplicate_rows.is_empty() || !self.duplicate_cols.is_empty()
    }
}

/// Check stored indices against the coefficient truncation and report
/// duplicates under the identity tail. Section-size feasibility is
/// rechecked at build time once `n` is known.
pub fn validate_perturbation(
    pert: &Perturbation,
    truncation: usize,
) -> Result<PerturbationCheck, ToeplitzError> {
    let bound = truncation as i64;
    for &v in pert.stored_p().iter().chain(pert.stored_q().iter()) {
        if v < -bound || v > bound {
            return Err(ToeplitzError::TruncationExceeded {
                needed: v,
                truncation,
            });
        }
    }
    Ok(PerturbationCheck {
        duplicate_rows: duplicates_under_tail(pert.stored_p(), pert.rank()),
        duplicate_cols: duplicates_under_tail(pert.stored_q(), pert.rank()),
    })
}

/// Values occurring twice among the stored entries, or colliding with the
/// identity tail (a stored value `v >= m` meets `p_v = v` once the section
/// is large enough).
fn duplicates_under_tail(stored: &[i64], m: usize) -> Vec<i64> {
    let mut sorted: Vec<i64> = stored.to_vec();
    sorted.sort_unstable();
    let mut dups: Vec<i64> = Vec::new();
    for w in sorted.windows(2) {
        if w[0] == w[1] && dups.last() != Some(&w[0]) {
            dups.push(w[0]);
        }
    }
    for &v in &sorted {
        if v >= m as i64 && !dups.contains(&v) {
            dups.push(v);
        }
    }
    dups.sort_unstable();
    dups
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{fourier_coefficients, SymbolSpec};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn product_series(n: usize) -> FourierSeries {
        let spec = SymbolSpec::product(vec![c(0.5, 0.0)], vec![c(1.0 / 3.0, 0.0)]).unwrap();
        fourier_coefficients(&spec, n, 1e-12).unwrap()
    }

    fn constant_series(n: usize) -> FourierSeries {
        fourier_coefficients(&SymbolSpec::constant(c(1.0, 0.0)), n, 1e-12).unwrap()
    }

    #[test]
    fn toeplitz_of_constant_is_identity() {
        let t = build_toeplitz(&constant_series(8), 3).unwrap();
        assert_eq!(t, ComplexMatrix::identity(3));
    }

    #[test]
    fn toeplitz_of_product_symbol() {
        let t = build_toeplitz(&product_series(8), 2).unwrap();
        assert_eq!(t.get(0, 0), c(7.0 / 6.0, 0.0));
        assert_eq!(t.get(0, 1), c(-1.0 / 3.0, 0.0));
        assert_eq!(t.get(1, 0), c(-0.5, 0.0));
        assert_eq!(t.get(1, 1), c(7.0 / 6.0, 0.0));
    }

    #[test]
    fn one_by_one_section() {
        let t = build_toeplitz(&product_series(8), 1).unwrap();
        assert_eq!(t.get(0, 0), c(7.0 / 6.0, 0.0));
    }

    #[test]
    fn section_larger_than_truncation_is_rejected() {
        assert!(matches!(
            build_toeplitz(&product_series(4), 6),
            Err(ToeplitzError::TruncationExceeded { needed: 5, truncation: 4 })
        ));
    }

    #[test]
    fn empty_perturbation_reduces_to_toeplitz() {
        let series = product_series(8);
        let t = build_toeplitz(&series, 5).unwrap();
        let m = build_perturbed(&series, &Perturbation::identity(), 5).unwrap();
        assert_eq!(t, m);
    }

    #[test]
    fn row_swap_perturbation_permutes_toeplitz_rows() {
        let series = product_series(8);
        let pert = Perturbation::new(vec![1, 0], vec![0, 1]).unwrap();
        let m = build_perturbed(&series, &pert, 1).unwrap();
        let expected = [
            [c(-0.5, 0.0), c(7.0 / 6.0, 0.0), c(-1.0 / 3.0, 0.0)],
            [c(7.0 / 6.0, 0.0), c(-1.0 / 3.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(-0.5, 0.0), c(7.0 / 6.0, 0.0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), expected[i][j]);
            }
        }
        // Same thing by permuting rows of the plain section.
        let t = build_toeplitz(&series, 3).unwrap();
        for j in 0..3 {
            assert_eq!(m.get(0, j), t.get(1, j));
            assert_eq!(m.get(1, j), t.get(0, j));
            assert_eq!(m.get(2, j), t.get(2, j));
        }
    }

    #[test]
    fn stored_index_meeting_the_tail_duplicates_a_row() {
        let series = product_series(8);
        let pert = Perturbation::new(vec![1], vec![0]).unwrap();
        let m = build_perturbed(&series, &pert, 2).unwrap();
        for j in 0..3 {
            assert_eq!(m.get(0, j), m.get(1, j));
        }
    }

    #[test]
    fn blocks_of_empty_perturbation() {
        let series = product_series(8);
        let blocks = build_blocks(&series, &Perturbation::identity(), 4).unwrap();
        assert_eq!(blocks.a.rows(), 0);
        assert_eq!(blocks.b.cols(), 4);
        assert_eq!(blocks.c.rows(), 4);
        assert_eq!(blocks.d, build_toeplitz(&series, 4).unwrap());
    }

    #[test]
    fn delta_symbol_blocks_are_indicator_matrices() {
        let series = constant_series(8);
        let pert = Perturbation::new(vec![3, 0], vec![1, 4]).unwrap();
        let blocks = build_blocks(&series, &pert, 4).unwrap();
        for i in 0..2usize {
            for k in 0..4usize {
                let expect = pert.row_index(i) == 2 + k as i64;
                assert_eq!(blocks.b.get(i, k) == c(1.0, 0.0), expect);
                let expect = 2 + k as i64 == pert.col_index(i);
                assert_eq!(blocks.c.get(k, i) == c(1.0, 0.0), expect);
            }
        }
    }

    #[test]
    fn swap_blocks_match_hand_expansion() {
        let series = product_series(8);
        let pert = Perturbation::new(vec![1, 0], vec![0, 1]).unwrap();
        let blocks = build_blocks(&series, &pert, 2).unwrap();
        assert_eq!(blocks.a.get(0, 0), c(-0.5, 0.0));
        assert_eq!(blocks.a.get(0, 1), c(7.0 / 6.0, 0.0));
        assert_eq!(blocks.a.get(1, 0), c(7.0 / 6.0, 0.0));
        assert_eq!(blocks.a.get(1, 1), c(-1.0 / 3.0, 0.0));
        assert_eq!(blocks.b.get(0, 0), c(-1.0 / 3.0, 0.0));
        assert_eq!(blocks.b.get(0, 1), c(0.0, 0.0));
        assert_eq!(blocks.b.get(1, 0), c(0.0, 0.0));
        assert_eq!(blocks.b.get(1, 1), c(0.0, 0.0));
        assert_eq!(blocks.c.get(0, 0), c(0.0, 0.0));
        assert_eq!(blocks.c.get(1, 0), c(0.0, 0.0));
        assert_eq!(blocks.c.get(0, 1), c(-0.5, 0.0));
        assert_eq!(blocks.c.get(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn reassembled_blocks_equal_direct_construction_bitwise() {
        let series = product_series(16);
        let perturbations = [
            Perturbation::identity(),
            Perturbation::new(vec![1, 0], vec![0, 1]).unwrap(),
            Perturbation::new(vec![-1], vec![0]).unwrap(),
            Perturbation::new(vec![2, -1, 0], vec![0, 1, 3]).unwrap(),
        ];
        for pert in &perturbations {
            for n in [1, 2, 5, 9] {
                let direct = build_perturbed(&series, pert, n).unwrap();
                let assembled = build_blocks(&series, pert, n).unwrap().assemble();
                assert_eq!(direct, assembled, "pert {pert:?} at n = {n}");
            }
        }
    }

    #[test]
    fn toeplitz_entries_depend_only_on_index_difference() {
        let t = build_toeplitz(&product_series(16), 12).unwrap();
        for (i, j, r, s) in [(0usize, 3usize, 5usize, 8usize), (2, 2, 9, 9), (7, 1, 11, 5)] {
            assert_eq!(i as i64 - j as i64, r as i64 - s as i64);
            assert_eq!(t.get(i, j), t.get(r, s));
        }
    }

    #[test]
    fn validator_accepts_empty_perturbation() {
        let check = validate_perturbation(&Perturbation::identity(), 64).unwrap();
        assert!(!check.has_duplicates());
    }

    #[test]
    fn validator_warns_on_tail_collision() {
        let pert = Perturbation::new(vec![1], vec![0]).unwrap();
        let check = validate_perturbation(&pert, 64).unwrap();
        assert_eq!(check.duplicate_rows, vec![1]);
        assert!(check.duplicate_cols.is_empty());
    }

    #[test]
    fn validator_rejects_indices_beyond_truncation() {
        let pert = Perturbation::new(vec![-200], vec![0]).unwrap();
        assert!(matches!(
            validate_perturbation(&pert, 64),
            Err(ToeplitzError::TruncationExceeded { needed: -200, truncation: 64 })
        ));
    }

    #[test]
    fn mismatched_sequence_lengths_are_rejected() {
        assert!(matches!(
            Perturbation::new(vec![1, 2], vec![0]),
            Err(ToeplitzError::LengthMismatch { p_len: 2, q_len: 1 })
        ));
    }
}
