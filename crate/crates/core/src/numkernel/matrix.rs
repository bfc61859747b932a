use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use super::scalar::{Exact, Float, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`Scalar`] realization.
///
/// Arithmetic operators panic on shape mismatch; the `try_*` variants and
/// constructors that accept external data return [`Error::ShapeMismatch`].
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn scalar(n: usize, s: &S) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { s.clone() } else { S::zero() })
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major data, rejecting wrong lengths and non-finite floats.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(S::is_finite) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::from_vec(nrows, ncols, rows.into_iter().flatten().collect())
    }

    /// Integer matrix; panics on ragged input (test and constructor convenience).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self::from_fn(rows.len(), ncols, |r, c| S::from_i64(rows[r][c]))
    }

    /// Single column.
    pub fn column(entries: &[S]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length");
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column_vec(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|c| self.column_vec(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map(&self, f: impl FnMut(&S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(S::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, k| acc + self[(k, k)].clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(r, k)];
                if x.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let y = &rhs[(k, c)];
                    if !y.is_zero() {
                        let cell = &mut out.data[r * rhs.cols + c];
                        *cell = cell.clone() + x.clone() * y.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |x, y| x.clone() + y.clone())
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |x, y| x.clone() - y.clone())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(x, y)| f(x, y)).collect(),
        })
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        &(self * rhs) - &(rhs * self)
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                    .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        assert!(self.is_square());
        (0..k).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Side-by-side concatenation of matrices with equal row counts.
    pub fn hstack(blocks: &[&Self]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        assert!(blocks.iter().all(|b| b.rows == rows), "hstack row counts");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(r));
            }
        }
        Self { rows, cols, data }
    }

    pub fn convert<T: Scalar>(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| T::from_complex64(x.to_complex64()).expect("finite entries"))
                .collect(),
        }
    }
}

impl Matrix<Exact> {
    pub fn to_float(&self) -> Matrix<Float> {
        self.convert()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: Self) -> Matrix<S> {
        self.try_mul(rhs).unwrap()
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: Self) -> Matrix<S> {
        self.try_add(rhs).unwrap()
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: Self) -> Matrix<S> {
        self.try_sub(rhs).unwrap()
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<Exact>;

    #[test]
    fn commutator_of_diagonals_vanishes() {
        let a = M::diagonal(&[Exact::from_i64(0), Exact::from_i64(1), Exact::from_i64(2)]);
        let b = M::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]);
        assert!(a.commutator(&a).is_zero());
        assert!(!a.commutator(&b).is_zero());
    }

    #[test]
    fn shape_errors() {
        let a = M::zeros(2, 3);
        assert!(matches!(a.try_mul(&a), Err(Error::ShapeMismatch(_))));
        assert!(M::from_vec(2, 2, vec![Exact::from_i64(1)]).is_err());
        assert!(Matrix::<Float>::from_vec(1, 1, vec![Float::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn hstack_and_columns() {
        let a = M::from_i64(&[&[1], &[2]]);
        let b = M::from_i64(&[&[3, 4], &[5, 6]]);
        let h = M::hstack(&[&a, &b]);
        assert_eq!(h, M::from_i64(&[&[1, 3, 4], &[2, 5, 6]]));
        assert_eq!(M::from_columns(2, &h.columns()), h);
        assert_eq!(h.transpose().transpose(), h);
    }
}
