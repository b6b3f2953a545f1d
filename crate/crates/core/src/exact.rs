//! Exact rational linear algebra: dense matrices, reduced row echelon
//! bases, subspace membership, and reduction of vectors (rational or
//! complex-float) against an exact subspace.
//!
//! Everything here is small and dense by design; the relation matrices this
//! crate produces stay below a few hundred columns.

use crate::scalar::{rational_to_f64, Complex, Rational};
use num::{BigInt, BigRational, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: vector has length {got}, ambient dimension is {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// Dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    /// Build from explicit rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows: all rows must have length {ncols}"
        );
        Self {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-entry convenience, mostly for tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(BigInt::from(x))).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Reduced row echelon basis of the row space. Exact arithmetic
    /// throughout; pivot entries are normalized to 1 and cleared above and
    /// below, so the returned rows are the canonical RREF basis.
    pub fn row_reduce(&self) -> SubspaceBasis {
        let mut work: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivots: Vec<usize> = Vec::new();
        let mut next_row = 0usize;
        for col in 0..self.cols {
            let Some(pivot_row) = (next_row..work.len()).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(next_row, pivot_row);
            let inv = work[next_row][col].recip();
            for x in work[next_row].iter_mut() {
                *x *= &inv;
            }
            for r in 0..work.len() {
                if r != next_row && !work[r][col].is_zero() {
                    let factor = work[r][col].clone();
                    for c in col..self.cols {
                        let sub = &work[next_row][c] * &factor;
                        work[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == work.len() {
                break;
            }
        }
        work.truncate(next_row);
        SubspaceBasis {
            ambient: self.cols,
            rows: work,
            pivots,
        }
    }
}

/// A subspace in reduced row echelon form: independent rows with strictly
/// increasing pivot columns, pivot entries 1, pivot columns zero elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    /// The zero subspace of the given ambient dimension.
    pub fn empty(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Column indices that are not pivots — coordinates of the quotient by
    /// this subspace.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }

    fn check_len(&self, len: usize) -> Result<(), LinAlgError> {
        if len != self.ambient {
            return Err(LinAlgError::DimensionMismatch {
                got: len,
                want: self.ambient,
            });
        }
        Ok(())
    }

    /// Subtract the unique combination of basis rows matching `v`'s pivot
    /// coordinates. The result has zeros in every pivot position; since the
    /// basis is in RREF the combination coefficients are exactly the pivot
    /// coordinates of `v`.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        self.check_len(v.len())?;
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let coeff = std::mem::replace(&mut out[p], Rational::zero());
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &coeff * r;
                }
            }
            out[p] = Rational::zero();
        }
        Ok(out)
    }

    /// Float counterpart of [`reduce`](Self::reduce). Returns the reduced
    /// vector and the error amplification factor: one plus the ∞-norm of the
    /// combination coefficients that were applied.
    pub fn reduce_complex(&self, v: &[Complex]) -> Result<(Vec<Complex>, f64), LinAlgError> {
        self.check_len(v.len())?;
        let mut out = v.to_vec();
        let mut amp = 0.0f64;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let coeff = out[p];
            if coeff.norm() == 0.0 {
                continue;
            }
            amp = amp.max(coeff.norm());
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= coeff * rational_to_f64(r);
                }
            }
            out[p] = Complex::new(0.0, 0.0);
        }
        Ok((out, 1.0 + amp))
    }

    /// Exact membership test: true iff `v` reduces to zero.
    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinAlgError> {
        Ok(self.reduce(v)?.iter().all(Zero::is_zero))
    }

    /// Re-reduce the basis rows of `self` restricted (projected) onto a
    /// coordinate prefix; used for truncation-coherence checks.
    pub fn truncated(&self, prefix_len: usize) -> SubspaceBasis {
        let rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|r| r[..prefix_len.min(self.ambient)].to_vec())
            .collect();
        RationalMatrix::from_rows(rows).row_reduce()
    }

    /// Largest absolute column sum over the basis rows, restricted to the
    /// given columns. This bounds how much input error a reduction against
    /// this basis can inject into those coordinates.
    pub fn column_abs_sum_max(&self, columns: std::ops::Range<usize>) -> f64 {
        let mut best = 0.0f64;
        for c in columns {
            let mut sum = 0.0f64;
            for row in &self.rows {
                if !row[c].is_zero() {
                    sum += row[c].abs().to_f64_lossy();
                }
            }
            best = best.max(sum);
        }
        best
    }
}

trait ToF64Lossy {
    fn to_f64_lossy(&self) -> f64;
}

impl ToF64Lossy for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        rational_to_f64(self)
    }
}

/// Convenience: q as `BigRational` from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dependent_rows_have_rank_one() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        let b = m.row_reduce();
        assert_eq!(b.rank(), 1);
        assert_eq!(b.rows()[0], vec![ratio(1, 1), ratio(2, 1)]);
        assert_eq!(b.pivots(), &[0]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let b = RationalMatrix::zero(3, 4).row_reduce();
        assert_eq!(b.rank(), 0);
        assert_eq!(b.free_columns(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn permutation_matrix_has_full_rank() {
        let b = RationalMatrix::from_int_rows(&[&[0, 1], &[1, 0]]).row_reduce();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.pivots(), &[0, 1]);
    }

    #[test]
    fn reduce_kills_span_members() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2, 0], &[0, 1, 1]]);
        let b = m.row_reduce();
        let v = vec![ratio(3, 1), ratio(7, 1), ratio(1, 1)];
        let r = b.reduce(&v).unwrap();
        // v = 3*(1,2,0) + 1*(0,1,1) is in the span.
        assert!(r.iter().all(Zero::is_zero));
        assert!(b.contains(&v).unwrap());
    }

    #[test]
    fn reduce_is_idempotent_and_difference_in_span() {
        let m = RationalMatrix::from_int_rows(&[&[1, 0, 2], &[0, 1, -1]]);
        let b = m.row_reduce();
        let v = vec![ratio(5, 2), ratio(-1, 3), ratio(4, 7)];
        let r = b.reduce(&v).unwrap();
        assert_eq!(b.reduce(&r).unwrap(), r);
        let diff: Vec<Rational> = v.iter().zip(&r).map(|(a, b)| a - b).collect();
        assert!(b.contains(&diff).unwrap());
    }

    #[test]
    fn reduce_leaves_pivot_free_vectors_alone() {
        let m = RationalMatrix::from_int_rows(&[&[1, 0, 2]]);
        let b = m.row_reduce();
        let (r, amp) = b
            .reduce_complex(&[
                Complex::new(0.0, 0.0),
                Complex::new(0.5, -0.25),
                Complex::new(1.0, 0.0),
            ])
            .unwrap();
        assert_eq!(r[1], Complex::new(0.5, -0.25));
        assert_eq!(r[2], Complex::new(1.0, 0.0));
        assert_eq!(amp, 1.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let b = RationalMatrix::from_int_rows(&[&[1, 0]]).row_reduce();
        assert_eq!(
            b.reduce(&[ratio(1, 1)]).unwrap_err(),
            LinAlgError::DimensionMismatch { got: 1, want: 2 }
        );
    }

    #[test]
    fn rereducing_a_basis_reproduces_it() {
        let m = RationalMatrix::from_int_rows(&[&[2, 4, 6], &[1, 1, 1], &[0, 2, 4]]);
        let b = m.row_reduce();
        let again = RationalMatrix::from_rows(b.rows().to_vec()).row_reduce();
        assert_eq!(b, again);
    }
}
