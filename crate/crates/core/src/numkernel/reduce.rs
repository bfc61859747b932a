//! Gaussian elimination: reduced row echelon form and everything built on it.

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Relative pivot tolerance for the float realization.
pub const FLOAT_RANK_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Rref<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S> Rref<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn zero_threshold<S: Scalar>(m: &Matrix<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        FLOAT_RANK_TOLERANCE * m.max_magnitude()
    }
}

/// Reduced row echelon form.
///
/// Exact input picks the first nonzero pivot in each column. Float input
/// uses partial pivoting and treats any candidate below
/// `FLOAT_RANK_TOLERANCE * max|m|` as zero.
pub fn rref<S: Scalar>(m: &Matrix<S>) -> Rref<S> {
    rref_with_threshold(m, zero_threshold(m))
}

fn rref_with_threshold<S: Scalar>(m: &Matrix<S>, threshold: f64) -> Rref<S> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<S>> = m.to_rows();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let candidate = if S::EXACT {
            (row..rows).find(|&r| !a[r][col].is_zero())
        } else {
            (row..rows)
                .filter(|&r| !a[r][col].is_negligible(threshold))
                .max_by(|&x, &y| a[x][col].magnitude().total_cmp(&a[y][col].magnitude()))
        };
        let Some(p) = candidate else {
            if !S::EXACT {
                for r in a.iter_mut().skip(row) {
                    r[col] = S::zero();
                }
            }
            continue;
        };
        a.swap(row, p);
        let inv = S::one() / a[row][col].clone();
        for x in a[row].iter_mut().skip(col) {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        a[row][col] = S::one();
        let pivot_row = a[row].clone();
        for (r, target) in a.iter_mut().enumerate() {
            if r == row || target[col].is_zero() {
                continue;
            }
            let factor = target[col].clone();
            for (x, p) in target.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
            target[col] = S::zero();
        }
        pivots.push(col);
        row += 1;
    }
    let reduced = Matrix::from_fn(rows, cols, |r, c| a[r][c].clone());
    Rref { reduced, pivots }
}

pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    rref(m).rank()
}

/// Rank with an absolute float threshold instead of the relative one.
pub(crate) fn rank_with_threshold<S: Scalar>(m: &Matrix<S>, threshold: f64) -> usize {
    rref_with_threshold(m, if S::EXACT { 0.0 } else { threshold }).rank()
}

/// Basis of `{v : m v = 0}`, one vector per free column.
pub fn nullspace<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    let Rref { reduced, pivots } = rref(m);
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[(k, free)].clone();
            }
            v
        })
        .collect()
}

/// One solution of `m x = b` (free variables set to zero).
pub fn solve<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Result<Vec<S>> {
    if b.len() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let aug = Matrix::hstack(&[m, &Matrix::column(b)]);
    let Rref { reduced, pivots } = rref(&aug);
    if pivots.last() == Some(&m.cols()) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![S::zero(); m.cols()];
    for (k, &p) in pivots.iter().enumerate() {
        x[p] = reduced[(k, m.cols())].clone();
    }
    Ok(x)
}

pub fn inverse<S: Scalar>(m: &Matrix<S>) -> Result<Matrix<S>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let aug = Matrix::hstack(&[m, &Matrix::identity(n)]);
    let Rref { reduced, pivots } = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(Matrix::from_fn(n, n, |r, c| reduced[(r, n + c)].clone()))
}

/// Indices of a maximal independent subset of the columns of `m`.
pub fn independent_columns<S: Scalar>(m: &Matrix<S>) -> Vec<usize> {
    rref(m).pivots
}

/// Basis of the column space, taken from the original columns.
pub fn column_space<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<S>> {
    independent_columns(m)
        .into_iter()
        .map(|c| m.column_vec(c))
        .collect()
}
