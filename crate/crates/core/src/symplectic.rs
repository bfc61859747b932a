//! The holomorphic 2-form
//! `Omega(u, v) = tr(-a_v b_u + b_v a_u - i_v j_u + i_u j_v - a'_v b'_u + b'_v a'_u)`
//! on tangent vectors, its Gram matrix on a tangent basis, and the checks
//! built around it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::deformation::{apply_d0, tangent_basis, DeformationComplex, TangentVector};
use crate::error::{Error, Result};
use crate::normalform::{classify, CaseParams, Classification};
use crate::numkernel::{nullspace, rank, solve, Matrix, Scalar};
use crate::rep::EnhancedRep;

/// `tr(x y)` without forming the product.
fn trace_product<S: Scalar>(x: &Matrix<S>, y: &Matrix<S>) -> S {
    let mut acc = S::zero();
    for r in 0..x.rows() {
        for k in 0..x.cols() {
            let (p, q) = (&x[(r, k)], &y[(k, r)]);
            if !p.is_zero() && !q.is_zero() {
                acc = acc + p.clone() * q.clone();
            }
        }
    }
    acc
}

/// `Omega(u, v)`, complex-bilinear. The `f` component does not enter.
pub fn omega<S: Scalar>(u: &TangentVector<S>, v: &TangentVector<S>) -> Result<S> {
    let dims = u.dims();
    if !u.has_dims(dims) || !v.has_dims(dims) {
        return Err(Error::ShapeMismatch("tangent vectors of different shapes".into()));
    }
    Ok(trace_product(&v.b, &u.a) - trace_product(&v.a, &u.b)
        + trace_product(&u.i, &v.j)
        - trace_product(&v.i, &u.j)
        + trace_product(&v.bp, &u.ap)
        - trace_product(&v.ap, &u.bp))
}

/// Multiplication by the imaginary unit in every component.
pub fn gamma1<S: Scalar>(u: &TangentVector<S>) -> TangentVector<S> {
    u.scale(&S::imag_unit())
}

fn random_gaussian<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    S::gaussian(rng.random_range(-3..=3), rng.random_range(-3..=3))
}

fn random_combination<S: Scalar>(
    dims: crate::rep::DimVector,
    basis: &[Vec<S>],
    rng: &mut ChaCha8Rng,
) -> Result<TangentVector<S>> {
    let mut acc = vec![S::zero(); dims.ambient_len()];
    for v in basis {
        let c: S = random_gaussian(rng);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.clone() + c.clone() * x.clone();
        }
    }
    TangentVector::from_ambient(dims, &acc)
}

/// Largest magnitude of a nonzero residual; exact zeros stay `0.0`.
fn residual_magnitude<S: Scalar>(r: &S) -> f64 {
    if r.is_zero() {
        0.0
    } else {
        r.magnitude().max(f64::MIN_POSITIVE)
    }
}

/// Maximum residual of `w2(u,v) = w3(u, G v)` and `w3(u,v) = -w2(u, G v)`,
/// with `w2 = Re Omega`, `w3 = Im Omega`, over random tangent pairs.
pub fn prehk_residuals<S: Scalar>(x: &EnhancedRep<S>, trials: usize, seed: u64) -> Result<f64> {
    let cx = tangent_basis(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let u = random_combination(x.dims, &cx.quotient, &mut rng)?;
        let v = random_combination(x.dims, &cx.quotient, &mut rng)?;
        let plain = omega(&u, &v)?;
        let turned = omega(&u, &gamma1(&v))?;
        let first = plain.re() - turned.im();
        let second = plain.im() + turned.re();
        worst = worst
            .max(residual_magnitude(&first))
            .max(residual_magnitude(&second));
    }
    Ok(worst)
}

/// Maximum `|Omega(d0(h,h'), v)|` over random `(h, h')` and every `v` in the
/// `ker d1` basis. Zero means `Omega` descends to the quotient.
pub fn descend_residual<S: Scalar>(x: &EnhancedRep<S>, trials: usize, seed: u64) -> Result<f64> {
    let cx = tangent_basis(x)?;
    let kernel: Vec<TangentVector<S>> = cx
        .ker_d1
        .iter()
        .map(|v| TangentVector::from_ambient(x.dims, v))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, cp) = (x.dims.c, x.dims.cp);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let h = Matrix::from_fn(c, c, |_, _| random_gaussian(&mut rng));
        let hp = Matrix::from_fn(cp, cp, |_, _| random_gaussian(&mut rng));
        let gauge = apply_d0(x, &h, &hp);
        for v in &kernel {
            worst = worst.max(residual_magnitude(&omega(&gauge, v)?));
        }
    }
    Ok(worst)
}

/// Short SHA-256 digest of a representation's canonical text.
pub fn rep_digest<S: Scalar>(x: &EnhancedRep<S>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{}|{}", S::NAME, x.dims));
    for m in x.arrows() {
        hasher.update(format!("|{}x{}:", m.rows(), m.cols()));
        for e in m.data() {
            hasher.update(format!("{e};"));
        }
    }
    hex::encode(&hasher.finalize()[..8])
}

#[derive(Clone, Debug)]
pub struct GramReport<S> {
    pub digest: String,
    pub complex: DeformationComplex<S>,
    /// `Omega(q_p, q_q)` over the quotient representatives.
    pub gram: Matrix<S>,
    pub rank: usize,
    /// Degenerate directions, in ambient coordinates.
    pub kernel_basis: Vec<Vec<S>>,
    /// Whether each kernel vector lies in `im d0` (expected `false`).
    pub kernel_in_image: Vec<bool>,
    pub classification: Classification<S>,
    pub predicted_nondegenerate: bool,
    pub computed_nondegenerate: bool,
    pub agreement: bool,
}

impl<S: Scalar> GramReport<S> {
    pub fn tangent_dim(&self) -> usize {
        self.complex.tangent_dim()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let g = &self.gram;
        (&self.gram + &g.transpose())
            .data()
            .iter()
            .all(|v| v.is_negligible(1e-9 * g.max_magnitude().max(1.0)))
    }

    /// Each kernel vector pairs to zero with the whole basis, lies in
    /// `ker d1`, and is not gauge-trivial.
    pub fn kernel_witness_holds(&self) -> Result<bool> {
        let basis = self.complex.quotient_vectors()?;
        let tol = 1e-9 * self.gram.max_magnitude().max(1.0);
        for v in &self.kernel_basis {
            let tv = TangentVector::from_ambient(self.complex.dims, v)?;
            for q in &basis {
                if !omega(&tv, q)?.is_negligible(tol) {
                    return Ok(false);
                }
            }
            if !self.complex.d1.mul_vec(v).iter().all(|e| e.is_negligible(tol)) {
                return Ok(false);
            }
            if solve(&self.complex.d0, v).is_ok() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Gram matrix of `Omega` on the tangent basis with rank, kernel and the
/// degeneracy prediction for the point's normal-form case.
pub fn gram<S: Scalar>(x: &EnhancedRep<S>) -> Result<GramReport<S>> {
    gram_with(x, omega)
}

/// [`gram`] with a substitute pairing.
pub fn gram_with<S: Scalar>(
    x: &EnhancedRep<S>,
    pairing: impl Fn(&TangentVector<S>, &TangentVector<S>) -> Result<S>,
) -> Result<GramReport<S>> {
    let classification = classify(x)?;
    let complex = tangent_basis(x)?;
    let basis = complex.quotient_vectors()?;
    let n = basis.len();
    let mut entries = Vec::with_capacity(n * n);
    for p in &basis {
        for q in &basis {
            entries.push(pairing(p, q)?);
        }
    }
    let gram = Matrix::from_vec(n, n, entries)?;
    let rank = rank(&gram);
    let kernel_basis: Vec<Vec<S>> = nullspace(&gram)
        .into_iter()
        .map(|coeffs| {
            let mut v = vec![S::zero(); x.dims.ambient_len()];
            for (c, q) in coeffs.iter().zip(&complex.quotient) {
                if c.is_zero() {
                    continue;
                }
                for (a, e) in v.iter_mut().zip(q) {
                    *a = a.clone() + c.clone() * e.clone();
                }
            }
            v
        })
        .collect();
    let kernel_in_image = kernel_basis
        .iter()
        .map(|v| solve(&complex.d0, v).is_ok())
        .collect();
    let predicted = classification.label.kind.predicts_nondegenerate();
    let computed = rank == n;
    Ok(GramReport {
        digest: rep_digest(x),
        complex,
        gram,
        rank,
        kernel_basis,
        kernel_in_image,
        classification,
        predicted_nondegenerate: predicted,
        computed_nondegenerate: computed,
        agreement: predicted == computed,
    })
}

/// Reduced closed form of `Omega` between two tangent vectors at a diagonal
/// (case i) normal-form point:
///
/// `-2 a'_2 b'_1 + 2 a'_1 b'_2 + sum_{k,l >= 2} (a1_kl b2_lk - a2_kl b1_lk)`.
///
/// The `(1,k)`/`(k,1)` cross terms cancel by the tangent constraints, which
/// are checked first. The sign of the `a'_2 b'_1` term is negative; the
/// positive variant disagrees with the trace formula.
pub fn omega_case_i_closed_form<S: Scalar>(
    u1: &TangentVector<S>,
    u2: &TangentVector<S>,
    params: &CaseParams<S>,
) -> Result<S> {
    let CaseParams::I(p) = params else {
        return Err(Error::NotCaseI);
    };
    let c = p.c();
    let dims = crate::rep::DimVector::one_c_one(c)?;
    check_case_i_tangent(u1, p, dims)?;
    check_case_i_tangent(u2, p, dims)?;
    let two = S::from_i64(2);
    let mut total = two.clone() * u1.ap[(0, 0)].clone() * u2.bp[(0, 0)].clone()
        - two * u2.ap[(0, 0)].clone() * u1.bp[(0, 0)].clone();
    for k in 1..c {
        for l in 1..c {
            total = total + u1.a[(k, l)].clone() * u2.b[(l, k)].clone()
                - u2.a[(k, l)].clone() * u1.b[(l, k)].clone();
        }
    }
    Ok(total)
}

/// The linear constraints cutting out `ker d1` at a diagonal normal form.
fn check_case_i_tangent<S: Scalar>(
    u: &TangentVector<S>,
    p: &crate::normalform::DiagonalParams<S>,
    dims: crate::rep::DimVector,
) -> Result<()> {
    if !u.has_dims(dims) {
        return Err(Error::ShapeMismatch(format!("tangent vector does not match dims {dims}")));
    }
    let (ad, bd) = (p.a_diag(), p.b_diag());
    let fail = |what: String| Err(Error::NotTangent(what));
    if !u.j.is_zero() {
        return fail("j != 0".into());
    }
    if u.a[(0, 0)] != u.ap[(0, 0)] || u.b[(0, 0)] != u.bp[(0, 0)] {
        return fail("a_11 != a' or b_11 != b'".into());
    }
    for k in 1..dims.c {
        let fk = u.f[(k, 0)].clone();
        let da = ad[0].clone() - ad[k].clone();
        let db = bd[0].clone() - bd[k].clone();
        if u.a[(k, 0)] != da.clone() * fk.clone() || u.b[(k, 0)] != db.clone() * fk {
            return fail(format!("first-column entries of row {}", k + 1));
        }
        if da * u.b[(0, k)].clone() != u.a[(0, k)].clone() * db {
            return fail(format!("entry (1,{})", k + 1));
        }
        for l in 1..dims.c {
            if l == k {
                continue;
            }
            let lhs = (ad[k].clone() - ad[l].clone()) * u.b[(k, l)].clone();
            let rhs = u.a[(k, l)].clone() * (bd[k].clone() - bd[l].clone());
            if lhs != rhs {
                return fail(format!("entry ({},{})", k + 1, l + 1));
            }
        }
    }
    Ok(())
}
