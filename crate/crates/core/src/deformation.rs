//! The deformation complex `End(V) + End(V') --d0--> ambient --d1--> relations`
//! at a representation, and a basis of its middle cohomology
//! `ker d1 / im d0`, the tangent space at a stable point.
//!
//! Ambient coordinates flatten `(a, b, i, j, a', b', f)` in that order, each
//! matrix row-major. Gauge coordinates flatten `(h, h')` the same way, `h`
//! first. Relation coordinates flatten the five components of `d1` in order.

use crate::error::{Error, Result};
use crate::numkernel::{column_space, nullspace, rref, solve, Matrix, Scalar};
use crate::rep::{ensure_stable_solution, DimVector, EnhancedRep};

/// First-order deformation `(a, b, i, j, a', b', f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<S> {
    pub a: Matrix<S>,
    pub b: Matrix<S>,
    pub i: Matrix<S>,
    pub j: Matrix<S>,
    pub ap: Matrix<S>,
    pub bp: Matrix<S>,
    pub f: Matrix<S>,
}

impl<S: Scalar> TangentVector<S> {
    pub fn zeros(dims: DimVector) -> Self {
        let [a, b, i, j, ap, bp, f] = dims.arrow_shapes().map(|(r, c)| Matrix::zeros(r, c));
        Self { a, b, i, j, ap, bp, f }
    }

    pub fn components(&self) -> [&Matrix<S>; 7] {
        [&self.a, &self.b, &self.i, &self.j, &self.ap, &self.bp, &self.f]
    }

    pub fn dims(&self) -> DimVector {
        DimVector {
            r: self.i.cols(),
            c: self.a.rows(),
            cp: self.ap.rows(),
        }
    }

    pub fn has_dims(&self, dims: DimVector) -> bool {
        self.components()
            .iter()
            .zip(dims.arrow_shapes())
            .all(|(m, s)| m.shape() == s)
    }

    /// Flatten into ambient coordinates.
    pub fn to_ambient(&self) -> Vec<S> {
        self.components()
            .iter()
            .flat_map(|m| m.data().iter().cloned())
            .collect()
    }

    pub fn from_ambient(dims: DimVector, coords: &[S]) -> Result<Self> {
        if coords.len() != dims.ambient_len() {
            return Err(Error::ShapeMismatch(format!(
                "{} ambient coordinates for dims {dims} (expected {})",
                coords.len(),
                dims.ambient_len()
            )));
        }
        let mut offset = 0;
        let parts = dims.arrow_shapes().map(|(r, c)| {
            let m = Matrix::from_vec(r, c, coords[offset..offset + r * c].to_vec());
            offset += r * c;
            m
        });
        let [a, b, i, j, ap, bp, f] = parts;
        Ok(Self {
            a: a?,
            b: b?,
            i: i?,
            j: j?,
            ap: ap?,
            bp: bp?,
            f: f?,
        })
    }

    pub fn map(&self, g: impl Fn(&Matrix<S>) -> Matrix<S>) -> Self {
        Self {
            a: g(&self.a),
            b: g(&self.b),
            i: g(&self.i),
            j: g(&self.j),
            ap: g(&self.ap),
            bp: g(&self.bp),
            f: g(&self.f),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|m| m.scale(s))
    }
}

/// `d0(h, h') = ([h,A], [h,B], hI, -Jh, [h',A'], [h',B'], hF - Fh')`.
pub fn apply_d0<S: Scalar>(x: &EnhancedRep<S>, h: &Matrix<S>, hp: &Matrix<S>) -> TangentVector<S> {
    TangentVector {
        a: h.commutator(&x.a),
        b: h.commutator(&x.b),
        i: h * &x.i,
        j: -&(&x.j * h),
        ap: hp.commutator(&x.ap),
        bp: hp.commutator(&x.bp),
        f: &(h * &x.f) - &(&x.f * hp),
    }
}

/// The five components of `d1(u)`:
/// `[a,B] + [A,b] + Ij + iJ`, `Af + aF - Fa' - fA'`, `Bf + bF - Fb' - fB'`,
/// `jF + Jf`, `[a',B'] + [A',b']`.
pub fn apply_d1<S: Scalar>(x: &EnhancedRep<S>, u: &TangentVector<S>) -> [Matrix<S>; 5] {
    let first = &(&(&u.a.commutator(&x.b) + &x.a.commutator(&u.b)) + &(&x.i * &u.j)) + &(&u.i * &x.j);
    let second = &(&(&x.a * &u.f) + &(&u.a * &x.f)) - &(&(&x.f * &u.ap) + &(&u.f * &x.ap));
    let third = &(&(&x.b * &u.f) + &(&u.b * &x.f)) - &(&(&x.f * &u.bp) + &(&u.f * &x.bp));
    let fourth = &(&u.j * &x.f) + &(&x.j * &u.f);
    let fifth = &u.ap.commutator(&x.bp) + &x.ap.commutator(&u.bp);
    [first, second, third, fourth, fifth]
}

fn unit<S: Scalar>(r: usize, c: usize, k: usize) -> Matrix<S> {
    let mut m = Matrix::zeros(r, c);
    m[(k / c, k % c)] = S::one();
    m
}

/// Split gauge coordinates into `(h, h')`.
pub fn gauge_from_coords<S: Scalar>(dims: DimVector, coords: &[S]) -> Result<(Matrix<S>, Matrix<S>)> {
    let (c, cp) = (dims.c, dims.cp);
    if coords.len() != dims.gauge_len() {
        return Err(Error::ShapeMismatch(format!(
            "{} gauge coordinates for dims {dims}",
            coords.len()
        )));
    }
    Ok((
        Matrix::from_vec(c, c, coords[..c * c].to_vec())?,
        Matrix::from_vec(cp, cp, coords[c * c..].to_vec())?,
    ))
}

/// Matrix of `d0`: `ambient_len x (c^2 + c'^2)`.
pub fn d0_matrix<S: Scalar>(x: &EnhancedRep<S>) -> Result<Matrix<S>> {
    x.validate()?;
    let DimVector { c, cp, .. } = x.dims;
    let columns: Vec<Vec<S>> = (0..x.dims.gauge_len())
        .map(|k| {
            let (h, hp) = if k < c * c {
                (unit(c, c, k), Matrix::zeros(cp, cp))
            } else {
                (Matrix::zeros(c, c), unit(cp, cp, k - c * c))
            };
            apply_d0(x, &h, &hp).to_ambient()
        })
        .collect();
    Ok(Matrix::from_columns(x.dims.ambient_len(), &columns))
}

/// Matrix of `d1`: `(c^2 + 2cc' + rc' + c'^2) x ambient_len`.
pub fn d1_matrix<S: Scalar>(x: &EnhancedRep<S>) -> Result<Matrix<S>> {
    x.validate()?;
    let n = x.dims.ambient_len();
    let columns = (0..n)
        .map(|k| {
            let mut e = vec![S::zero(); n];
            e[k] = S::one();
            let u = TangentVector::from_ambient(x.dims, &e)?;
            Ok(apply_d1(x, &u)
                .iter()
                .flat_map(|m| m.data().iter().cloned())
                .collect())
        })
        .collect::<Result<Vec<Vec<S>>>>()?;
    Ok(Matrix::from_columns(x.dims.relation_len(), &columns))
}

#[derive(Clone, Debug)]
pub struct DeformationComplex<S> {
    pub dims: DimVector,
    pub d0: Matrix<S>,
    pub d1: Matrix<S>,
    pub ker_d1: Vec<Vec<S>>,
    pub im_d0: Vec<Vec<S>>,
    /// Representatives in `ker d1` of a basis of `ker d1 / im d0`.
    pub quotient: Vec<Vec<S>>,
    /// `d1 * d0 = 0`.
    pub complex_holds: bool,
}

impl<S: Scalar> DeformationComplex<S> {
    pub fn tangent_dim(&self) -> usize {
        self.quotient.len()
    }

    pub fn ker_dim(&self) -> usize {
        self.ker_d1.len()
    }

    pub fn im_dim(&self) -> usize {
        self.im_d0.len()
    }

    pub fn quotient_vectors(&self) -> Result<Vec<TangentVector<S>>> {
        self.quotient
            .iter()
            .map(|v| TangentVector::from_ambient(self.dims, v))
            .collect()
    }
}

/// Build the complex and pick quotient representatives.
///
/// Representatives are the `ker d1` basis vectors whose columns carry pivots
/// in the RREF of `[im d0 | ker d1]`.
pub fn tangent_basis<S: Scalar>(x: &EnhancedRep<S>) -> Result<DeformationComplex<S>> {
    ensure_stable_solution(x)?;
    let d0 = d0_matrix(x)?;
    let d1 = d1_matrix(x)?;
    let product = &d1 * &d0;
    let tol = if S::EXACT { 0.0 } else { 1e-9 * d0.max_magnitude().max(1.0) * d1.max_magnitude().max(1.0) };
    let complex_holds = product.data().iter().all(|v| v.is_negligible(tol));
    let ker_d1 = nullspace(&d1);
    let im_d0 = column_space(&d0);
    let n = x.dims.ambient_len();
    let mut all = im_d0.clone();
    all.extend(ker_d1.iter().cloned());
    let stacked = Matrix::from_columns(n, &all);
    let quotient = rref(&stacked)
        .pivots
        .into_iter()
        .filter(|&p| p >= im_d0.len())
        .map(|p| ker_d1[p - im_d0.len()].clone())
        .collect();
    Ok(DeformationComplex {
        dims: x.dims,
        d0,
        d1,
        ker_d1,
        im_d0,
        quotient,
        complex_holds,
    })
}

/// Solve `d0(h, h') = u`.
pub fn preimage_d0<S: Scalar>(x: &EnhancedRep<S>, u: &[S]) -> Result<(Matrix<S>, Matrix<S>)> {
    let d0 = d0_matrix(x)?;
    match solve(&d0, u) {
        Ok(coords) => gauge_from_coords(x.dims, &coords),
        Err(Error::Inconsistent) => Err(Error::NotInImage),
        Err(e) => Err(e),
    }
}
