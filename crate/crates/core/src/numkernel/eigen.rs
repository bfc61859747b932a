//! Eigenvalues and Jordan block sizes of small matrices.
//!
//! Block sizes always come from the rank sequence `rank((M - λ)^k)`; only the
//! eigenvalue search differs between realizations. The exact path finds
//! Gaussian-rational roots of the characteristic polynomial by divisor
//! search, the float path clusters Schur eigenvalues.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::reduce::rank_with_threshold;
use super::scalar::{Exact, Float, Scalar};
use crate::error::{Error, Result};

/// Largest matrix dimension handled by the exact eigenvalue search.
pub const EXACT_MAX_DIM: usize = 3;

/// Relative distance below which two numerical eigenvalues are merged.
/// A size-k Jordan block splits by about `eps^(1/k)` in double precision,
/// so this must sit well above `1e-16^(1/3)`.
pub const FLOAT_CLUSTER_TOLERANCE: f64 = 1e-4;

/// Norm bound on the constant term for the exact divisor search.
const MAX_SEARCH_NORM: u128 = 100_000_000_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct EigenBlock<S> {
    pub eigenvalue: S,
    /// Jordan block sizes, descending.
    pub block_sizes: Vec<usize>,
}

impl<S> EigenBlock<S> {
    pub fn multiplicity(&self) -> usize {
        self.block_sizes.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenStructure<S> {
    pub blocks: Vec<EigenBlock<S>>,
}

impl<S: Scalar> EigenStructure<S> {
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(EigenBlock::multiplicity).sum()
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.blocks.iter().all(|b| b.block_sizes.iter().all(|&s| s == 1))
    }

    /// All block sizes across eigenvalues, descending.
    pub fn jordan_type(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().flat_map(|b| b.block_sizes.clone()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Eigenvalue owning a block of exactly `size`, if any.
    pub fn eigenvalue_with_block(&self, size: usize) -> Option<&S> {
        self.blocks
            .iter()
            .find(|b| b.block_sizes.contains(&size))
            .map(|b| &b.eigenvalue)
    }

    /// Compact description such as `0:[2] 1:[1]`.
    pub fn describe(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                let sizes: Vec<String> = b.block_sizes.iter().map(ToString::to_string).collect();
                format!("{}:[{}]", b.eigenvalue, sizes.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Eigenvalues with their Jordan block sizes.
pub fn eigen_structure<S: Scalar>(m: &Matrix<S>) -> Result<EigenStructure<S>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut blocks = Vec::new();
    for (lambda, mult) in S::eigenvalues(m)? {
        let shifted = m - &Matrix::scalar(n, &lambda);
        let block_sizes = block_sizes_from_ranks(&shifted, mult, m.max_magnitude()).ok_or_else(|| {
            Error::NumericalJordan(format!("{lambda} (multiplicity {mult})"))
        })?;
        blocks.push(EigenBlock {
            eigenvalue: lambda,
            block_sizes,
        });
    }
    Ok(EigenStructure { blocks })
}

/// Block sizes of the eigenvalue 0 of `shifted`, given its multiplicity.
/// Float ranks of `shifted^k` use the absolute threshold `1e-9 * scale^k`.
fn block_sizes_from_ranks<S: Scalar>(shifted: &Matrix<S>, mult: usize, scale: f64) -> Option<Vec<usize>> {
    let n = shifted.rows();
    let scale = scale.max(1.0);
    // ranks[k] = rank(shifted^k)
    let mut ranks = vec![n];
    let mut power = Matrix::identity(n);
    let mut threshold = super::reduce::FLOAT_RANK_TOLERANCE;
    for _ in 0..=mult {
        power = &power * shifted;
        threshold *= scale;
        ranks.push(rank_with_threshold(&power, threshold));
    }
    // at_least[k] = number of blocks of size >= k, for k = 1..=mult+1
    let at_least: Vec<usize> = (1..ranks.len())
        .map(|k| ranks[k - 1].checked_sub(ranks[k]))
        .collect::<Option<_>>()?;
    let mut sizes = Vec::new();
    for k in (1..=mult).rev() {
        let exactly = at_least[k - 1].checked_sub(at_least[k])?;
        sizes.extend(std::iter::repeat_n(k, exactly));
    }
    (sizes.iter().sum::<usize>() == mult && at_least[mult] == 0).then_some(sizes)
}

/// Coefficients `c_0..c_{n-1}` of the monic characteristic polynomial
/// `t^n + c_{n-1} t^{n-1} + ... + c_0` (Faddeev-LeVerrier).
pub fn characteristic_polynomial<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    let n = m.rows();
    let mut coeffs = vec![S::zero(); n + 1];
    coeffs[n] = S::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = &(m * &mk) + &Matrix::scalar(n, &coeffs[n - k + 1]);
        let t = (m * &mk).trace();
        coeffs[n - k] = -t / S::from_i64(k as i64);
    }
    coeffs.truncate(n);
    coeffs
}

fn eval_monic<S: Scalar>(coeffs: &[S], x: &S) -> S {
    coeffs
        .iter()
        .rev()
        .fold(S::one(), |acc, c| acc * x.clone() + c.clone())
}

/// Divide the monic polynomial by `(t - root)`; the remainder must be zero.
fn deflate<S: Scalar>(coeffs: &[S], root: &S) -> Vec<S> {
    let n = coeffs.len();
    // quotient q of degree n-1 is monic; q_{k-1} = c_k + root * q_k
    let mut q = vec![S::zero(); n - 1];
    let mut carry = S::one();
    for k in (1..n).rev() {
        let next = coeffs[k].clone() + root.clone() * carry;
        q[k - 1] = next.clone();
        carry = next;
    }
    q
}

fn lcm_denominators(coeffs: &[Exact]) -> BigInt {
    coeffs.iter().fold(BigInt::one(), |acc, c| {
        acc.lcm(c.re.denom()).lcm(c.im.denom())
    })
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn divisors(n: u128) -> Vec<u128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Gaussian integers `a + bi` with `a^2 + b^2 = d`.
fn gaussian_with_norm(d: u128) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let r = isqrt(d) as i128;
    for a in -r..=r {
        let rest = d - (a * a) as u128;
        let b = isqrt(rest);
        if b * b == rest {
            out.push((a, b as i128));
            if b != 0 {
                out.push((a, -(b as i128)));
            }
        }
    }
    out
}

fn rational(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// One Gaussian-rational root of a monic polynomial, if any exists.
fn find_gaussian_rational_root(coeffs: &[Exact]) -> Result<Option<Exact>> {
    if coeffs[0].is_zero() {
        return Ok(Some(Exact::zero()));
    }
    // Substituting t = s / D turns the polynomial into a monic one with
    // Gaussian-integer coefficients, whose roots in Q(i) are Gaussian
    // integers dividing the constant term.
    let n = coeffs.len() as u32;
    let d = lcm_denominators(coeffs);
    let d_pow = Pow::pow(&d, n);
    let c0 = Complex::new(
        coeffs[0].re.clone() * rational(d_pow.clone()),
        coeffs[0].im.clone() * rational(d_pow),
    );
    debug_assert!(c0.re.is_integer() && c0.im.is_integer());
    let norm = c0.re.numer() * c0.re.numer() + c0.im.numer() * c0.im.numer();
    let norm = norm
        .to_u128()
        .filter(|&v| v <= MAX_SEARCH_NORM)
        .ok_or_else(|| Error::SpectrumSearchTooLarge(norm.abs().to_string()))?;
    let scale = Complex::new(rational(d), BigRational::zero());
    for divisor in divisors(norm) {
        for (a, b) in gaussian_with_norm(divisor) {
            let s = Complex::new(rational(BigInt::from(a)), rational(BigInt::from(b)));
            let candidate = s / scale.clone();
            if eval_monic(coeffs, &candidate).is_zero() {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}

use num_traits::Pow;

pub(crate) fn exact_eigenvalues(m: &Matrix<Exact>) -> Result<Vec<(Exact, usize)>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() > EXACT_MAX_DIM {
        return Err(Error::ExactDimensionTooLarge(m.rows()));
    }
    let mut poly = characteristic_polynomial(m);
    let mut roots: Vec<(Exact, usize)> = Vec::new();
    while !poly.is_empty() {
        let root = find_gaussian_rational_root(&poly)?.ok_or(Error::IrrationalSpectrum)?;
        poly = deflate(&poly, &root);
        match roots.iter_mut().find(|(r, _)| *r == root) {
            Some((_, mult)) => *mult += 1,
            None => roots.push((root, 1)),
        }
    }
    Ok(roots)
}

pub(crate) fn float_eigenvalues(m: &Matrix<Float>) -> Result<Vec<(Float, usize)>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let dm = DMatrix::<Complex64>::from_row_slice(n, n, m.data());
    let schur = nalgebra::linalg::Schur::try_new(dm, 1e-14, 10_000)
        .ok_or_else(|| Error::NumericalJordan("Schur iteration did not converge".into()))?;
    let values = schur
        .eigenvalues()
        .ok_or_else(|| Error::NumericalJordan("Schur form not triangular".into()))?;
    Ok(cluster(values.iter().copied().collect(), m.max_magnitude()))
}

/// Merge eigenvalues closer than `FLOAT_CLUSTER_TOLERANCE` times the spectral
/// scale; each cluster is represented by its mean, which is far better
/// conditioned than its members.
fn cluster(values: Vec<Complex64>, matrix_scale: f64) -> Vec<(Complex64, usize)> {
    let scale = values.iter().map(|v| v.norm()).fold(matrix_scale.max(1.0), f64::max);
    let tol = FLOAT_CLUSTER_TOLERANCE * scale;
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for v in values {
        let hit = clusters
            .iter_mut()
            .find(|c| c.iter().any(|w| (w - v).norm() < tol));
        match hit {
            Some(c) => c.push(v),
            None => clusters.push(vec![v]),
        }
    }
    clusters
        .into_iter()
        .map(|c| {
            let mean = c.iter().sum::<Complex64>() / c.len() as f64;
            (mean, c.len())
        })
        .collect()
}
