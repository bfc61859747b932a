//! Jordan-type normal forms of stable `(1,3,1)` representations, the case
//! classifier, and the degeneracy predictor.
//!
//! In every normal form `F = e1`, `J = 0`, `A' = [a']`, `B' = [b']`. The
//! non-diagonalizable templates put the Jordan structure on `B`; `A` is the
//! general commuting completion, a polynomial in the nilpotent part of `B`
//! within each Jordan block.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numkernel::{eigen_structure, solve, EigenStructure, Matrix, Scalar};
use crate::rep::{ensure_stable_solution, is_stable, residuals, DimVector, EnhancedRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseKind {
    /// `A` and `B` both diagonalizable.
    I,
    /// Blocks `(2,1)`, the `F`-line inside the size-2 block.
    II1,
    /// A single `3x3` Jordan block.
    II2,
    /// Blocks `(2,1)`, the `F`-line is the size-1 block.
    II3,
}

impl CaseKind {
    pub const ALL: [CaseKind; 4] = [CaseKind::I, CaseKind::II1, CaseKind::II2, CaseKind::II3];

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::I => "i",
            CaseKind::II1 => "ii1",
            CaseKind::II2 => "ii2",
            CaseKind::II3 => "ii3",
        }
    }

    /// Whether the holomorphic 2-form is non-degenerate at points of this case.
    pub fn predicts_nondegenerate(self) -> bool {
        matches!(self, CaseKind::I | CaseKind::II3)
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "i" => Ok(CaseKind::I),
            "ii1" => Ok(CaseKind::II1),
            "ii2" => Ok(CaseKind::II2),
            "ii3" => Ok(CaseKind::II3),
            other => Err(format!("unknown case '{other}' (expected i, ii1, ii2 or ii3)")),
        }
    }
}

/// A case together with whether the roles of `A` and `B` were swapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CaseLabel {
    pub kind: CaseKind,
    pub mirrored: bool,
}

impl CaseLabel {
    pub fn new(kind: CaseKind) -> Self {
        Self {
            kind,
            mirrored: false,
        }
    }

    pub fn mirrored(kind: CaseKind) -> Self {
        Self {
            kind,
            mirrored: true,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            write!(f, "{} (mirrored)", self.kind)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

/// Diagonal (case i) parameters for `(1,c,1)`:
/// `A = diag(a', a_rest..)`, `B = diag(b', b_rest..)`, `I = (i_head.., 1)`.
///
/// For `c = 3`, `a_rest = (A2, A3)`, `b_rest = (B2, B3)` and `i_head = (mu, lambda)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalParams<S> {
    pub a_prime: S,
    pub b_prime: S,
    pub a_rest: Vec<S>,
    pub b_rest: Vec<S>,
    pub i_head: Vec<S>,
}

impl<S: Scalar> DiagonalParams<S> {
    /// The `(1,3,1)` parameter set `(A', A2, A3, B', B2, B3, mu, lambda)`.
    #[allow(clippy::too_many_arguments)]
    pub fn n131(a_prime: S, a2: S, a3: S, b_prime: S, b2: S, b3: S, mu: S, lambda: S) -> Self {
        Self {
            a_prime,
            b_prime,
            a_rest: vec![a2, a3],
            b_rest: vec![b2, b3],
            i_head: vec![mu, lambda],
        }
    }

    pub fn c(&self) -> usize {
        self.a_rest.len() + 1
    }

    /// Diagonal of `A`, starting with `a'`.
    pub fn a_diag(&self) -> Vec<S> {
        std::iter::once(self.a_prime.clone()).chain(self.a_rest.iter().cloned()).collect()
    }

    pub fn b_diag(&self) -> Vec<S> {
        std::iter::once(self.b_prime.clone()).chain(self.b_rest.iter().cloned()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CaseParams<S> {
    I(DiagonalParams<S>),
    II1 {
        a_prime: S,
        a12: S,
        a13: S,
        a3: S,
        b_prime: S,
        b3: S,
    },
    II2 {
        a_prime: S,
        a12: S,
        a13: S,
        b_prime: S,
    },
    II3 {
        a_prime: S,
        a2: S,
        a23: S,
        b_prime: S,
        b2: S,
    },
}

impl<S: Scalar> CaseParams<S> {
    pub fn kind(&self) -> CaseKind {
        match self {
            CaseParams::I(_) => CaseKind::I,
            CaseParams::II1 { .. } => CaseKind::II1,
            CaseParams::II2 { .. } => CaseKind::II2,
            CaseParams::II3 { .. } => CaseKind::II3,
        }
    }
}

fn int<S: Scalar>(n: i64) -> S {
    S::from_i64(n)
}

fn col<S: Scalar>(v: &[i64]) -> Matrix<S> {
    Matrix::column(&v.iter().map(|&x| int(x)).collect::<Vec<S>>())
}

fn e1<S: Scalar>(c: usize) -> Matrix<S> {
    Matrix::from_fn(c, 1, |r, _| if r == 0 { S::one() } else { S::zero() })
}

/// `(A, B, I)` of a template, or a parameter error.
fn template<S: Scalar>(params: &CaseParams<S>) -> Result<(Matrix<S>, Matrix<S>, Matrix<S>)> {
    let z = S::zero;
    let o = S::one;
    match params {
        CaseParams::I(p) => {
            let n = p.a_rest.len();
            if p.b_rest.len() != n || p.i_head.len() != n {
                return Err(Error::InvalidParams("diagonal parameter lengths differ".into()));
            }
            if p.i_head.iter().any(S::is_zero) {
                return Err(Error::InvalidParams("case i requires nonzero I entries".into()));
            }
            let (ad, bd) = (p.a_diag(), p.b_diag());
            for k in 0..ad.len() {
                for l in k + 1..ad.len() {
                    if ad[k] == ad[l] && bd[k] == bd[l] {
                        return Err(Error::InvalidParams(format!(
                            "joint eigenvalue pairs {} and {} coincide",
                            k + 1,
                            l + 1
                        )));
                    }
                }
            }
            let mut i: Vec<S> = p.i_head.clone();
            i.push(S::one());
            Ok((Matrix::diagonal(&ad), Matrix::diagonal(&bd), Matrix::column(&i)))
        }
        CaseParams::II1 {
            a_prime,
            a12,
            a13,
            a3,
            b_prime,
            b3,
        } => {
            if !a13.is_zero() && b3 != b_prime {
                return Err(Error::NonCommutingTemplate(
                    "A13 must vanish unless B3 = B'".into(),
                ));
            }
            let a = Matrix::from_rows(vec![
                vec![a_prime.clone(), a12.clone(), a13.clone()],
                vec![z(), a_prime.clone(), z()],
                vec![z(), z(), a3.clone()],
            ])?;
            let b = Matrix::from_rows(vec![
                vec![b_prime.clone(), o(), z()],
                vec![z(), b_prime.clone(), z()],
                vec![z(), z(), b3.clone()],
            ])?;
            Ok((a, b, col(&[0, 1, 1])))
        }
        CaseParams::II2 {
            a_prime,
            a12,
            a13,
            b_prime,
        } => {
            let a = Matrix::from_rows(vec![
                vec![a_prime.clone(), a12.clone(), a13.clone()],
                vec![z(), a_prime.clone(), a12.clone()],
                vec![z(), z(), a_prime.clone()],
            ])?;
            let b = Matrix::from_rows(vec![
                vec![b_prime.clone(), o(), z()],
                vec![z(), b_prime.clone(), o()],
                vec![z(), z(), b_prime.clone()],
            ])?;
            Ok((a, b, col(&[0, 0, 1])))
        }
        CaseParams::II3 {
            a_prime,
            a2,
            a23,
            b_prime,
            b2,
        } => {
            let a = Matrix::from_rows(vec![
                vec![a_prime.clone(), z(), z()],
                vec![z(), a2.clone(), a23.clone()],
                vec![z(), z(), a2.clone()],
            ])?;
            let b = Matrix::from_rows(vec![
                vec![b_prime.clone(), z(), z()],
                vec![z(), b2.clone(), o()],
                vec![z(), z(), b2.clone()],
            ])?;
            Ok((a, b, col(&[1, 0, 1])))
        }
    }
}

/// Build the normal-form representation for `label` from `params`.
///
/// A mirrored label swaps `(A, A')` with `(B, B')` after building the
/// unmirrored template, so parameter names keep their unmirrored meaning.
pub fn build_case<S: Scalar>(label: CaseLabel, params: &CaseParams<S>) -> Result<EnhancedRep<S>> {
    if params.kind() != label.kind {
        return Err(Error::InvalidParams(format!(
            "parameters for case {} given for label {}",
            params.kind(),
            label
        )));
    }
    let (a, b, i) = template(params)?;
    let c = a.rows();
    let (a_prime, b_prime) = match params {
        CaseParams::I(p) => (p.a_prime.clone(), p.b_prime.clone()),
        CaseParams::II1 { a_prime, b_prime, .. }
        | CaseParams::II2 { a_prime, b_prime, .. }
        | CaseParams::II3 { a_prime, b_prime, .. } => (a_prime.clone(), b_prime.clone()),
    };
    let (a, b, ap, bp) = if label.mirrored {
        (b, a, b_prime, a_prime)
    } else {
        (a, b, a_prime, b_prime)
    };
    let x = EnhancedRep::new(
        DimVector::one_c_one(c)?,
        a,
        b,
        i,
        Matrix::zeros(1, c),
        Matrix::scalar(1, &ap),
        Matrix::scalar(1, &bp),
        e1(c),
    )?;
    let res = residuals(&x)?;
    if !res.is_zero() {
        return Err(Error::NonCommutingTemplate(res.violated().join(", ")));
    }
    if !is_stable(&x) {
        return Err(Error::Unstable(format!("case {label} parameters give an unstable point")));
    }
    Ok(x)
}

/// Case label plus the spectral data it was derived from.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    pub label: CaseLabel,
    pub a_structure: EigenStructure<S>,
    pub b_structure: EigenStructure<S>,
    /// Blocks `(2,1)` sharing one eigenvalue; decided by the range test.
    pub coincident_eigenvalues: bool,
}

fn same<S: Scalar>(x: &S, y: &S, scale: f64) -> bool {
    (x.clone() - y.clone()).is_negligible(1e-6 * scale.max(1.0))
}

/// Classify a stable `(1,3,1)` solution into its normal-form case.
pub fn classify<S: Scalar>(x: &EnhancedRep<S>) -> Result<Classification<S>> {
    if x.dims != DimVector::N131 {
        return Err(Error::UnsupportedDims(format!("{} (classification needs (1,3,1))", x.dims)));
    }
    ensure_stable_solution(x)?;
    let a_structure = eigen_structure(&x.a)?;
    let b_structure = eigen_structure(&x.b)?;
    let done = |kind, mirrored, coincident| Classification {
        label: CaseLabel { kind, mirrored },
        a_structure: a_structure.clone(),
        b_structure: b_structure.clone(),
        coincident_eigenvalues: coincident,
    };
    if a_structure.is_diagonalizable() && b_structure.is_diagonalizable() {
        return Ok(done(CaseKind::I, false, false));
    }
    let (m, es, f_scalar, mirrored) = if !b_structure.is_diagonalizable() {
        (&x.b, &b_structure, &x.bp[(0, 0)], false)
    } else {
        (&x.a, &a_structure, &x.ap[(0, 0)], true)
    };
    match es.jordan_type().as_slice() {
        [3] => Ok(done(CaseKind::II2, mirrored, false)),
        [2, 1] => {
            let big = es.eigenvalue_with_block(2).expect("size-2 block");
            let small = es
                .blocks
                .iter()
                .find(|b| b.block_sizes.contains(&1))
                .map(|b| &b.eigenvalue)
                .expect("size-1 block");
            let scale = m.max_magnitude();
            if !same(big, small, scale) {
                if same(f_scalar, big, scale) {
                    Ok(done(CaseKind::II1, mirrored, false))
                } else if same(f_scalar, small, scale) {
                    Ok(done(CaseKind::II3, mirrored, false))
                } else {
                    Err(Error::NotOnVariety(format!(
                        "F eigenvalue {f_scalar} is not in the spectrum of the Jordan matrix"
                    )))
                }
            } else {
                let shifted = m - &Matrix::scalar(3, big);
                match solve(&shifted, &x.f.column_vec(0)) {
                    Ok(_) => Ok(done(CaseKind::II1, mirrored, true)),
                    Err(Error::Inconsistent) => Ok(done(CaseKind::II3, mirrored, true)),
                    Err(e) => Err(e),
                }
            }
        }
        other => Err(Error::NumericalJordan(format!("unexpected Jordan type {other:?}"))),
    }
}

pub fn classify_case<S: Scalar>(x: &EnhancedRep<S>) -> Result<CaseLabel> {
    classify(x).map(|c| c.label)
}

/// Degeneracy prediction: non-degenerate exactly for cases `i` and `ii3`.
pub fn predict_nondegenerate<S: Scalar>(x: &EnhancedRep<S>) -> Result<bool> {
    classify_case(x).map(|l| l.kind.predicts_nondegenerate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::Exact;
    use crate::rep::act;

    type M = Matrix<Exact>;

    fn ex(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    pub(crate) fn canonical_x0() -> EnhancedRep<Exact> {
        build_case(
            CaseLabel::new(CaseKind::I),
            &CaseParams::I(DiagonalParams::n131(ex(0), ex(1), ex(2), ex(0), ex(1), ex(2), ex(1), ex(1))),
        )
        .unwrap()
    }

    #[test]
    fn case_i_builds_x0() {
        let x = canonical_x0();
        let d = M::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert_eq!(x.a, d);
        assert_eq!(x.b, d);
        assert_eq!(x.i, M::from_i64(&[&[1], &[1], &[1]]));
        assert_eq!(x.f, M::from_i64(&[&[1], &[0], &[0]]));
        assert!(x.j.is_zero());
    }

    #[test]
    fn case_ii2_canonical() {
        let x = build_case(
            CaseLabel::new(CaseKind::II2),
            &CaseParams::II2 {
                a_prime: ex(0),
                a12: ex(0),
                a13: ex(0),
                b_prime: ex(0),
            },
        )
        .unwrap();
        assert!(x.a.is_zero());
        assert_eq!(x.b, M::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]));
        assert_eq!(x.i, M::from_i64(&[&[0], &[0], &[1]]));
    }

    #[test]
    fn case_ii3_canonical() {
        let x = build_case(
            CaseLabel::new(CaseKind::II3),
            &CaseParams::II3 {
                a_prime: ex(0),
                a2: ex(1),
                a23: ex(0),
                b_prime: ex(0),
                b2: ex(1),
            },
        )
        .unwrap();
        assert_eq!(x.a, M::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(x.b, M::from_i64(&[&[0, 0, 0], &[0, 1, 1], &[0, 0, 1]]));
        assert_eq!(x.i, M::from_i64(&[&[1], &[0], &[1]]));
        assert_eq!(classify_case(&x).unwrap(), CaseLabel::new(CaseKind::II3));
        assert!(predict_nondegenerate(&x).unwrap());
    }

    #[test]
    fn parameter_errors() {
        let zero_mu = CaseParams::I(DiagonalParams::n131(
            ex(0), ex(1), ex(2), ex(0), ex(1), ex(2), ex(0), ex(1),
        ));
        assert!(matches!(
            build_case(CaseLabel::new(CaseKind::I), &zero_mu),
            Err(Error::InvalidParams(_))
        ));
        let repeated = CaseParams::I(DiagonalParams::n131(
            ex(0), ex(1), ex(1), ex(0), ex(2), ex(2), ex(1), ex(1),
        ));
        assert!(matches!(
            build_case(CaseLabel::new(CaseKind::I), &repeated),
            Err(Error::InvalidParams(_))
        ));
        let non_commuting = CaseParams::II1 {
            a_prime: ex(0),
            a12: ex(0),
            a13: ex(1),
            a3: ex(1),
            b_prime: ex(0),
            b3: ex(1),
        };
        assert!(matches!(
            build_case(CaseLabel::new(CaseKind::II1), &non_commuting),
            Err(Error::NonCommutingTemplate(_))
        ));
        assert!(matches!(
            build_case(CaseLabel::new(CaseKind::II2), &zero_mu),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_case(&canonical_x0()).unwrap(), CaseLabel::new(CaseKind::I));
        assert!(predict_nondegenerate(&canonical_x0()).unwrap());

        let x = EnhancedRep::new(
            DimVector::N131,
            M::from_i64(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 2]]),
            M::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]),
            M::from_i64(&[&[0], &[1], &[1]]),
            M::zeros(1, 3),
            M::zeros(1, 1),
            M::zeros(1, 1),
            M::from_i64(&[&[1], &[0], &[0]]),
        )
        .unwrap();
        assert_eq!(classify_case(&x).unwrap(), CaseLabel::new(CaseKind::II1));
        assert!(!predict_nondegenerate(&x).unwrap());
    }

    #[test]
    fn classification_survives_basis_change() {
        let x = build_case(
            CaseLabel::new(CaseKind::II2),
            &CaseParams::II2 {
                a_prime: ex(1),
                a12: ex(2),
                a13: ex(-1),
                b_prime: ex(3),
            },
        )
        .unwrap();
        let g = M::from_i64(&[&[1, 2, 0], &[0, 1, -1], &[2, 0, 1]]);
        let y = act(&g, &M::scalar(1, &ex(-2)), &x).unwrap();
        assert_eq!(classify_case(&y).unwrap(), CaseLabel::new(CaseKind::II2));
    }

    #[test]
    fn coincident_eigenvalues_use_range_test() {
        // B has blocks (2,1) with the same eigenvalue in both.
        let ii1 = build_case(
            CaseLabel::new(CaseKind::II1),
            &CaseParams::II1 {
                a_prime: ex(0),
                a12: ex(1),
                a13: ex(2),
                a3: ex(3),
                b_prime: ex(0),
                b3: ex(0),
            },
        )
        .unwrap();
        let c = classify(&ii1).unwrap();
        assert_eq!(c.label, CaseLabel::new(CaseKind::II1));
        assert!(c.coincident_eigenvalues);

        let ii3 = build_case(
            CaseLabel::new(CaseKind::II3),
            &CaseParams::II3 {
                a_prime: ex(0),
                a2: ex(1),
                a23: ex(3),
                b_prime: ex(0),
                b2: ex(0),
            },
        )
        .unwrap();
        let c = classify(&ii3).unwrap();
        assert_eq!(c.label, CaseLabel::new(CaseKind::II3));
        assert!(c.coincident_eigenvalues);
    }

    #[test]
    fn mirrored_labels_round_trip() {
        let params = CaseParams::II3 {
            a_prime: ex(1),
            a2: ex(-2),
            a23: ex(0),
            b_prime: ex(0),
            b2: ex(2),
        };
        let x = build_case(CaseLabel::mirrored(CaseKind::II3), &params).unwrap();
        assert_eq!(classify_case(&x).unwrap(), CaseLabel::mirrored(CaseKind::II3));
        assert!(predict_nondegenerate(&x).unwrap());

        // Both non-diagonalizable: B decides, so the label is not mirrored.
        let both = CaseParams::II3 {
            a_prime: ex(1),
            a2: ex(-2),
            a23: ex(1),
            b_prime: ex(0),
            b2: ex(2),
        };
        let y = build_case(CaseLabel::mirrored(CaseKind::II3), &both).unwrap();
        let c = classify(&y).unwrap();
        assert_eq!(c.label, CaseLabel::new(CaseKind::II3));
        assert!(!c.a_structure.is_diagonalizable());
    }

    #[test]
    fn unstable_and_off_variety_inputs_are_rejected() {
        let mut x = canonical_x0();
        x.i = M::from_i64(&[&[1], &[0], &[0]]);
        assert!(matches!(classify(&x), Err(Error::Unstable(_))));
        let mut y = canonical_x0();
        y.a[(0, 1)] = ex(1);
        assert!(matches!(classify(&y), Err(Error::NotOnVariety(_))));
    }
}
