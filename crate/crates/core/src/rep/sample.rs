//! Seeded samplers for stable representations in each normal-form case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{act, DimVector, EnhancedRep};
use crate::error::{Error, Result};
use crate::normalform::{build_case, CaseKind, CaseLabel, CaseParams, DiagonalParams};
use crate::numkernel::{rank, Matrix, Scalar};

/// Normal-form parameters are drawn uniformly from `-SAMPLE_RANGE..=SAMPLE_RANGE`.
pub const SAMPLE_RANGE: i64 = 5;

pub const SAMPLER_MAX_ATTEMPTS: usize = 1000;

/// Entries of random basis changes lie in `-BASIS_RANGE..=BASIS_RANGE`.
const BASIS_RANGE: i64 = 3;

#[derive(Clone, Debug)]
pub struct Sample<S> {
    pub rep: EnhancedRep<S>,
    /// The representation before any basis change.
    pub normal_form: EnhancedRep<S>,
    pub params: CaseParams<S>,
    /// `(g, g')` when a random basis change was applied.
    pub basis_change: Option<(Matrix<S>, Matrix<S>)>,
    /// Number of rejected draws before success.
    pub rejections: usize,
}

fn draw<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    S::from_i64(rng.random_range(-SAMPLE_RANGE..=SAMPLE_RANGE))
}

fn draw_nonzero<S: Scalar>(rng: &mut ChaCha8Rng, range: i64) -> S {
    loop {
        let v = rng.random_range(-range..=range);
        if v != 0 {
            return S::from_i64(v);
        }
    }
}

/// Random invertible `n x n` integer matrix with small entries.
pub fn random_invertible<S: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Matrix<S> {
    if n == 1 {
        return Matrix::scalar(1, &draw_nonzero(rng, BASIS_RANGE));
    }
    loop {
        let g = Matrix::from_fn(n, n, |_, _| {
            S::from_i64(rng.random_range(-BASIS_RANGE..=BASIS_RANGE))
        });
        if rank(&g) == n {
            return g;
        }
    }
}

fn draw_params<S: Scalar>(dims: DimVector, case: CaseKind, rng: &mut ChaCha8Rng) -> CaseParams<S> {
    match case {
        CaseKind::I => {
            let n = dims.c - 1;
            CaseParams::I(DiagonalParams {
                a_prime: draw(rng),
                b_prime: draw(rng),
                a_rest: (0..n).map(|_| draw(rng)).collect(),
                b_rest: (0..n).map(|_| draw(rng)).collect(),
                i_head: (0..n).map(|_| draw(rng)).collect(),
            })
        }
        CaseKind::II1 => {
            let (a_prime, a12, a3, b_prime, b3) = (draw(rng), draw(rng), draw(rng), draw(rng), draw(rng));
            // A13 only commutes with B when the two eigenvalues of B coincide.
            let a13 = if b3 == b_prime { draw(rng) } else { S::zero() };
            CaseParams::II1 {
                a_prime,
                a12,
                a13,
                a3,
                b_prime,
                b3,
            }
        }
        CaseKind::II2 => CaseParams::II2 {
            a_prime: draw(rng),
            a12: draw(rng),
            a13: draw(rng),
            b_prime: draw(rng),
        },
        CaseKind::II3 => CaseParams::II3 {
            a_prime: draw(rng),
            a2: draw(rng),
            a23: draw(rng),
            b_prime: draw(rng),
            b2: draw(rng),
        },
    }
}

/// Draw a stable solution of the enhanced ADHM equations in the requested
/// normal-form case, resampling until the case invariants and stability hold.
///
/// Cases other than `I` require `dims = (1,3,1)`; case `I` accepts `(1,c,1)`.
/// With `random_basis` the result is conjugated by a random invertible
/// `(g, g')`.
pub fn sample_stable<S: Scalar>(
    dims: DimVector,
    case: CaseKind,
    random_basis: bool,
    seed: u64,
) -> Result<Sample<S>> {
    let supported = match case {
        CaseKind::I => dims.is_one_c_one() && dims.c >= 1,
        _ => dims == DimVector::N131,
    };
    if !supported {
        return Err(Error::UnsupportedDims(format!("{dims} for case {case}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label = CaseLabel::new(case);
    for rejections in 0..SAMPLER_MAX_ATTEMPTS {
        let params = draw_params::<S>(dims, case, &mut rng);
        let normal_form = match build_case(label, &params) {
            Ok(x) => x,
            Err(Error::InvalidParams(_) | Error::Unstable(_)) => continue,
            Err(e) => return Err(e),
        };
        let (rep, basis_change) = if random_basis {
            let g = random_invertible::<S>(dims.c, &mut rng);
            let gp = random_invertible::<S>(dims.cp, &mut rng);
            (act(&g, &gp, &normal_form)?, Some((g, gp)))
        } else {
            (normal_form.clone(), None)
        };
        return Ok(Sample {
            rep,
            normal_form,
            params,
            basis_change,
            rejections,
        });
    }
    Err(Error::SamplerExhausted(SAMPLER_MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{eigen_structure, Exact};
    use crate::rep::{is_stable, residuals};

    #[test]
    fn case_i_pairs_are_distinct_and_stable() {
        for seed in 0..20 {
            let s = sample_stable::<Exact>(DimVector::N131, CaseKind::I, false, seed).unwrap();
            let x = &s.rep;
            let pairs: Vec<_> = (0..3).map(|k| (x.a[(k, k)].clone(), x.b[(k, k)].clone())).collect();
            assert!(pairs[0] != pairs[1] && pairs[0] != pairs[2] && pairs[1] != pairs[2]);
            assert!(is_stable(x));
            assert!(residuals(x).unwrap().is_zero());
        }
    }

    #[test]
    fn case_ii2_has_single_jordan_block() {
        for seed in 0..10 {
            let s = sample_stable::<Exact>(DimVector::N131, CaseKind::II2, true, seed).unwrap();
            let es = eigen_structure(&s.rep.b).unwrap();
            assert_eq!(es.jordan_type(), vec![3]);
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        for case in CaseKind::ALL {
            let a = sample_stable::<Exact>(DimVector::N131, case, true, 42).unwrap();
            let b = sample_stable::<Exact>(DimVector::N131, case, true, 42).unwrap();
            assert_eq!(a.rep, b.rep);
        }
        let a = sample_stable::<Exact>(DimVector::N131, CaseKind::I, false, 1).unwrap();
        let b = sample_stable::<Exact>(DimVector::N131, CaseKind::I, false, 2).unwrap();
        assert_ne!(a.rep, b.rep);
    }

    #[test]
    fn unsupported_dims() {
        let d = DimVector::one_c_one(2).unwrap();
        assert!(sample_stable::<Exact>(d, CaseKind::I, false, 0).is_ok());
        assert!(matches!(
            sample_stable::<Exact>(d, CaseKind::II3, false, 0),
            Err(Error::UnsupportedDims(_))
        ));
    }
}
