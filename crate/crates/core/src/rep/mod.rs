//! Enhanced ADHM representation data, relation residuals, stability and the
//! change-of-basis action.

mod sample;

use std::fmt;

use crate::error::{Error, Result};
use crate::numkernel::{inverse, rank, Matrix, Scalar};

pub use sample::{random_invertible, sample_stable, Sample, SAMPLE_RANGE, SAMPLER_MAX_ATTEMPTS};

/// Largest `c` accepted by the generic `(1, c, 1)` paths.
pub const MAX_GENERIC_C: usize = 8;

/// Dimensions `(r, c, c')` of `W`, `V` and `V'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DimVector {
    pub r: usize,
    pub c: usize,
    pub cp: usize,
}

impl DimVector {
    /// The dimension vector `(1, 3, 1)` of the classification paths.
    pub const N131: DimVector = DimVector { r: 1, c: 3, cp: 1 };

    pub fn new(r: usize, c: usize, cp: usize) -> Result<Self> {
        if r == 0 || c == 0 {
            return Err(Error::UnsupportedDims(format!("({r},{c},{cp})")));
        }
        Ok(Self { r, c, cp })
    }

    /// `(1, c, 1)` with `1 <= c <= MAX_GENERIC_C`.
    pub fn one_c_one(c: usize) -> Result<Self> {
        if c == 0 || c > MAX_GENERIC_C {
            return Err(Error::UnsupportedDims(format!("(1,{c},1)")));
        }
        Ok(Self { r: 1, c, cp: 1 })
    }

    pub fn is_one_c_one(&self) -> bool {
        self.r == 1 && self.cp == 1 && self.c <= MAX_GENERIC_C
    }

    /// Length of the flattened tangent tuple `(a, b, i, j, a', b', f)`.
    pub fn ambient_len(&self) -> usize {
        let DimVector { r, c, cp } = *self;
        2 * c * c + 2 * r * c + 2 * cp * cp + c * cp
    }

    /// Dimension of the gauge algebra `End(V) + End(V')`.
    pub fn gauge_len(&self) -> usize {
        self.c * self.c + self.cp * self.cp
    }

    /// Dimension of the relation space, the codomain of `d1`.
    pub fn relation_len(&self) -> usize {
        let DimVector { r, c, cp } = *self;
        c * c + 2 * c * cp + r * cp + cp * cp
    }

    /// Row/column shapes of `(A, B, I, J, A', B', F)`, in that order.
    pub fn arrow_shapes(&self) -> [(usize, usize); 7] {
        let DimVector { r, c, cp } = *self;
        [(c, c), (c, c), (c, r), (r, c), (cp, cp), (cp, cp), (c, cp)]
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.c, self.cp)
    }
}

/// Names of the seven arrows, in storage order.
pub const ARROW_NAMES: [&str; 7] = ["A", "B", "I", "J", "Ap", "Bp", "F"];

/// `X = (A, B, I, J, A', B', F)`; the `gamma` arrow is not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct EnhancedRep<S> {
    pub dims: DimVector,
    pub a: Matrix<S>,
    pub b: Matrix<S>,
    pub i: Matrix<S>,
    pub j: Matrix<S>,
    pub ap: Matrix<S>,
    pub bp: Matrix<S>,
    pub f: Matrix<S>,
}

impl<S: Scalar> EnhancedRep<S> {
    /// Build and validate shapes.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dims: DimVector,
        a: Matrix<S>,
        b: Matrix<S>,
        i: Matrix<S>,
        j: Matrix<S>,
        ap: Matrix<S>,
        bp: Matrix<S>,
        f: Matrix<S>,
    ) -> Result<Self> {
        let x = Self {
            dims,
            a,
            b,
            i,
            j,
            ap,
            bp,
            f,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn arrows(&self) -> [&Matrix<S>; 7] {
        [&self.a, &self.b, &self.i, &self.j, &self.ap, &self.bp, &self.f]
    }

    pub fn validate(&self) -> Result<()> {
        for ((name, m), want) in ARROW_NAMES
            .iter()
            .zip(self.arrows())
            .zip(self.dims.arrow_shapes())
        {
            if m.shape() != want {
                return Err(Error::ShapeMismatch(format!(
                    "{name} is {}x{}, expected {}x{} for dims {}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1,
                    self.dims
                )));
            }
        }
        Ok(())
    }

    pub fn convert<T: Scalar>(&self) -> EnhancedRep<T> {
        EnhancedRep {
            dims: self.dims,
            a: self.a.convert(),
            b: self.b.convert(),
            i: self.i.convert(),
            j: self.j.convert(),
            ap: self.ap.convert(),
            bp: self.bp.convert(),
            f: self.f.convert(),
        }
    }
}

/// The five relation residuals. All vanish iff the enhanced ADHM equations hold.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualSet<S> {
    /// `[A,B] + IJ`
    pub r1: Matrix<S>,
    /// `JF`
    pub r2: Matrix<S>,
    /// `[A',B']`
    pub r3: Matrix<S>,
    /// `AF - FA'`
    pub r4: Matrix<S>,
    /// `BF - FB'`
    pub r5: Matrix<S>,
}

impl<S: Scalar> ResidualSet<S> {
    pub const NAMES: [&'static str; 5] = ["[A,B]+IJ", "JF", "[A',B']", "AF-FA'", "BF-FB'"];

    pub fn as_array(&self) -> [&Matrix<S>; 5] {
        [&self.r1, &self.r2, &self.r3, &self.r4, &self.r5]
    }

    /// Exact zero test for exact scalars; for floats, every entry below `tol`.
    pub fn vanishes(&self, tol: f64) -> bool {
        self.as_array()
            .iter()
            .all(|m| m.data().iter().all(|x| x.is_negligible(tol)))
    }

    pub fn is_zero(&self) -> bool {
        self.as_array().iter().all(|m| m.is_zero())
    }

    pub fn max_magnitudes(&self) -> [f64; 5] {
        self.as_array().map(Matrix::max_magnitude)
    }

    /// Names of the equations with a nonzero residual.
    pub fn violated(&self) -> Vec<&'static str> {
        Self::NAMES
            .iter()
            .zip(self.as_array())
            .filter(|(_, m)| !m.is_zero())
            .map(|(n, _)| *n)
            .collect()
    }
}

pub fn residuals<S: Scalar>(x: &EnhancedRep<S>) -> Result<ResidualSet<S>> {
    x.validate()?;
    Ok(ResidualSet {
        r1: &x.a.commutator(&x.b) + &(&x.i * &x.j),
        r2: &x.j * &x.f,
        r3: x.ap.commutator(&x.bp),
        r4: &(&x.a * &x.f) - &(&x.f * &x.ap),
        r5: &(&x.b * &x.f) - &(&x.f * &x.bp),
    })
}

/// Condition (S.1): `F` is injective.
pub fn is_injective_f<S: Scalar>(x: &EnhancedRep<S>) -> bool {
    rank(&x.f) == x.dims.cp
}

/// Smallest `A,B`-invariant subspace containing `im I`, as a column basis,
/// together with the number of closure rounds that enlarged it.
pub fn invariant_closure<S: Scalar>(
    a: &Matrix<S>,
    b: &Matrix<S>,
    i: &Matrix<S>,
) -> (Matrix<S>, usize) {
    let c = a.rows();
    let mut basis = Matrix::from_columns(c, &crate::numkernel::column_space(i));
    let mut rounds = 0;
    loop {
        let grown = Matrix::hstack(&[&basis, &(a * &basis), &(b * &basis)]);
        let next = Matrix::from_columns(c, &crate::numkernel::column_space(&grown));
        if next.cols() == basis.cols() {
            return (basis, rounds);
        }
        basis = next;
        rounds += 1;
    }
}

/// Condition (S.2): no proper `A,B`-invariant subspace contains `im I`.
pub fn is_adhm_stable<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>, i: &Matrix<S>) -> bool {
    invariant_closure(a, b, i).0.cols() == a.rows()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stability {
    /// (S.1)
    pub injective_f: bool,
    /// (S.2)
    pub cyclic_i: bool,
    /// Whether `J = 0`; reported only when `r = 1`.
    pub j_vanishes: Option<bool>,
}

impl Stability {
    pub fn is_stable(&self) -> bool {
        self.injective_f && self.cyclic_i
    }

    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.injective_f {
            v.push("S.1 violated: F is not injective");
        }
        if !self.cyclic_i {
            v.push("S.2 violated: a proper A,B-invariant subspace contains im I");
        }
        v
    }
}

pub fn stability<S: Scalar>(x: &EnhancedRep<S>) -> Result<Stability> {
    x.validate()?;
    Ok(Stability {
        injective_f: is_injective_f(x),
        cyclic_i: is_adhm_stable(&x.a, &x.b, &x.i),
        j_vanishes: (x.dims.r == 1).then(|| x.j.is_zero()),
    })
}

pub fn is_stable<S: Scalar>(x: &EnhancedRep<S>) -> bool {
    stability(x).is_ok_and(|s| s.is_stable())
}

/// Reject base points off the variety or failing stability.
pub fn ensure_stable_solution<S: Scalar>(x: &EnhancedRep<S>) -> Result<()> {
    let res = residuals(x)?;
    if !res.vanishes(residual_tolerance(x)) {
        return Err(Error::NotOnVariety(res.violated().join(", ")));
    }
    let st = stability(x)?;
    if !st.is_stable() {
        return Err(Error::Unstable(st.violations().join("; ")));
    }
    Ok(())
}

/// Zero for exact data; a scale-relative bound for floats.
pub(crate) fn residual_tolerance<S: Scalar>(x: &EnhancedRep<S>) -> f64 {
    if S::EXACT {
        0.0
    } else {
        let scale = x.arrows().iter().map(|m| m.max_magnitude()).fold(1.0, f64::max);
        1e-9 * scale * scale
    }
}

/// `(g A g^-1, g B g^-1, g I, J g^-1, g' A' g'^-1, g' B' g'^-1, g F g'^-1)`.
pub fn act<S: Scalar>(g: &Matrix<S>, gp: &Matrix<S>, x: &EnhancedRep<S>) -> Result<EnhancedRep<S>> {
    x.validate()?;
    let DimVector { c, cp, .. } = x.dims;
    if g.shape() != (c, c) || gp.shape() != (cp, cp) {
        return Err(Error::ShapeMismatch(format!(
            "basis change {}x{} / {}x{} for dims {}",
            g.rows(),
            g.cols(),
            gp.rows(),
            gp.cols(),
            x.dims
        )));
    }
    let gi = inverse(g)?;
    let gpi = inverse(gp)?;
    let conj = |m: &Matrix<S>| &(g * m) * &gi;
    let conj_p = |m: &Matrix<S>| &(gp * m) * &gpi;
    Ok(EnhancedRep {
        dims: x.dims,
        a: conj(&x.a),
        b: conj(&x.b),
        i: g * &x.i,
        j: &x.j * &gi,
        ap: conj_p(&x.ap),
        bp: conj_p(&x.bp),
        f: &(g * &x.f) * &gpi,
    })
}
