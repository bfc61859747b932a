//! The two scalar realizations every matrix routine is generic over.
//!
//! [`Exact`] is a Gaussian rational: a complex number whose real and
//! imaginary parts are arbitrary-precision fractions kept in lowest terms
//! with positive denominators. [`Float`] is an ordinary double-precision
//! complex number. Both are plain `num_complex::Complex` values, so the
//! arithmetic operators come for free.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

use super::eigen;
use super::matrix::Matrix;
use crate::error::Result;

/// Gaussian rational.
pub type Exact = Complex<BigRational>;

/// Double-precision complex.
pub type Float = Complex64;

/// A complex scalar field realization.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// `true` for the exact realization. Rank decisions are exact iff this holds.
    const EXACT: bool;

    /// Short tag used in documents and reports (`"exact"` or `"float"`).
    const NAME: &'static str;

    fn gaussian(re: i64, im: i64) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::gaussian(n, 0)
    }

    fn imag_unit() -> Self {
        Self::gaussian(0, 1)
    }

    /// Real part, as a scalar with zero imaginary part.
    fn re(&self) -> Self;

    /// Imaginary part, as a scalar with zero imaginary part.
    fn im(&self) -> Self;

    /// Modulus, rounded to `f64`.
    fn magnitude(&self) -> f64;

    fn to_complex64(&self) -> Complex64;

    /// `None` if `c` has a non-finite component.
    fn from_complex64(c: Complex64) -> Option<Self>;

    fn is_finite(&self) -> bool;

    /// Exact zero test for [`Exact`]; `magnitude < threshold` for [`Float`].
    fn is_negligible(&self, threshold: f64) -> bool;

    /// Eigenvalues with algebraic multiplicity, pairwise distinct.
    fn eigenvalues(m: &Matrix<Self>) -> Result<Vec<(Self, usize)>>;
}

fn big_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Exact {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn gaussian(re: i64, im: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    fn re(&self) -> Self {
        Complex::new(self.re.clone(), BigRational::zero())
    }

    fn im(&self) -> Self {
        Complex::new(self.im.clone(), BigRational::zero())
    }

    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(big_to_f64(&self.re), big_to_f64(&self.im))
    }

    fn from_complex64(c: Complex64) -> Option<Self> {
        Some(Complex::new(
            BigRational::from_float(c.re)?,
            BigRational::from_float(c.im)?,
        ))
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn is_negligible(&self, _threshold: f64) -> bool {
        self.is_zero()
    }

    fn eigenvalues(m: &Matrix<Self>) -> Result<Vec<(Self, usize)>> {
        eigen::exact_eigenvalues(m)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn gaussian(re: i64, im: i64) -> Self {
        Complex64::new(re as f64, im as f64)
    }

    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }

    fn im(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }

    fn from_complex64(c: Complex64) -> Option<Self> {
        c.is_finite().then_some(c)
    }

    fn is_finite(&self) -> bool {
        Complex64::is_finite(*self)
    }

    fn is_negligible(&self, threshold: f64) -> bool {
        self.norm() < threshold
    }

    fn eigenvalues(m: &Matrix<Self>) -> Result<Vec<(Self, usize)>> {
        eigen::float_eigenvalues(m)
    }
}

/// Parse `"p"` or `"p/q"` into a rational in lowest terms.
pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical `"p"` / `"p/q"` form of a rational.
pub fn format_fraction(q: &BigRational) -> String {
    q.to_string()
}
