//! End-to-end acceptance run. One line per criterion; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use adhm_core::deformation::tangent_basis;
use adhm_core::normalform::{build_case, classify_case, CaseKind, CaseLabel, CaseParams, DiagonalParams};
use adhm_core::rep::{act, random_invertible, sample_stable, stability, DimVector};
use adhm_core::symplectic::{descend_residual, gamma1, gram, omega, omega_case_i_closed_form};
use adhm_core::{EnhancedRep, Exact, Float, Scalar, TangentVector};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(n: i64) -> Exact {
    Exact::from_i64(n)
}

fn sample(dims: DimVector, case: CaseKind, basis: bool, seed: u64) -> adhm_core::rep::Sample<Exact> {
    sample_stable::<Exact>(dims, case, basis, seed).unwrap_or_else(|err| panic!("sampling {case} seed {seed}: {err}"))
}

fn combination<S: Scalar>(
    dims: DimVector,
    vectors: &[Vec<S>],
    mut coeff: impl FnMut() -> S,
) -> TangentVector<S> {
    let mut acc = vec![S::zero(); dims.ambient_len()];
    for v in vectors {
        let c = coeff();
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.clone() + c.clone() * x.clone();
        }
    }
    TangentVector::from_ambient(dims, &acc).expect("ambient length")
}

fn gaussian_coeff(rng: &mut ChaCha8Rng) -> Exact {
    Exact::gaussian(rng.random_range(-3..=3), rng.random_range(-3..=3))
}

fn canonical_points() -> Vec<(CaseKind, EnhancedRep<Exact>)> {
    let params = [
        CaseParams::I(DiagonalParams::n131(e(0), e(1), e(2), e(0), e(1), e(2), e(1), e(1))),
        CaseParams::II1 {
            a_prime: e(0),
            a12: e(0),
            a13: e(0),
            a3: e(2),
            b_prime: e(0),
            b3: e(1),
        },
        CaseParams::II2 {
            a_prime: e(0),
            a12: e(0),
            a13: e(0),
            b_prime: e(0),
        },
        CaseParams::II3 {
            a_prime: e(0),
            a2: e(1),
            a23: e(0),
            b_prime: e(0),
            b2: e(1),
        },
    ];
    params
        .into_iter()
        .map(|p| (p.kind(), build_case(CaseLabel::new(p.kind()), &p).unwrap()))
        .collect()
}

fn tangent_dimension() -> Outcome {
    let start = Instant::now();
    for case in CaseKind::ALL {
        for k in 0..100 {
            let x = sample(DimVector::N131, case, true, 10_000 + k).rep;
            let t = tangent_basis(&x).map_err(|err| err.to_string())?.tangent_dim();
            ensure(t == 6, || format!("(1,3,1) case {case} seed {}: tangent dim {t}", 10_000 + k))?;
        }
    }
    let dims = DimVector::one_c_one(2).unwrap();
    for k in 0..50 {
        let x = sample(dims, CaseKind::I, true, 20_000 + k).rep;
        let t = tangent_basis(&x).map_err(|err| err.to_string())?.tangent_dim();
        ensure(t == 4, || format!("(1,2,1) seed {}: tangent dim {t}", 20_000 + k))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("took {took:.1?}, target < 30 s"))?;
    Ok(format!("400 points at (1,3,1) give 6, 50 at (1,2,1) give 4 ({took:.1?})"))
}

fn proposition_agreement() -> Outcome {
    let start = Instant::now();
    let mut recorded = Vec::new();
    for case in CaseKind::ALL {
        let mut ranks = BTreeSet::new();
        for k in 0..50 {
            let seed = 30_000 + k;
            let s = sample(DimVector::N131, case, true, seed);
            ensure(s.basis_change.is_some(), || "sample without basis change".into())?;
            let g = gram(&s.rep).map_err(|err| err.to_string())?;
            ensure(g.classification.label.kind == case, || {
                format!("case {case} seed {seed} classified as {}", g.classification.label)
            })?;
            ensure(g.agreement, || format!("case {case} seed {seed}: rank {} disagrees", g.rank))?;
            ranks.insert(g.rank);
        }
        ensure(ranks.len() == 1, || format!("case {case}: ranks {ranks:?} not constant"))?;
        let r = *ranks.first().unwrap();
        if case.predicts_nondegenerate() {
            ensure(r == 6, || format!("case {case}: rank {r}, expected 6"))?;
        } else {
            ensure(r < 6 && r % 2 == 0, || format!("case {case}: rank {r}, expected even < 6"))?;
        }
        recorded.push(format!("{case}:{r}"));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:.1?}, target < 60 s"))?;
    Ok(format!("200/200 agree, Gram ranks {} ({took:.1?})", recorded.join(" ")))
}

fn complex_property() -> Outcome {
    let mut n = 0;
    for case in CaseKind::ALL {
        for k in 0..50 {
            let x = sample(DimVector::N131, case, k % 2 == 0, 40_000 + k).rep;
            let cx = tangent_basis(&x).map_err(|err| err.to_string())?;
            ensure((&cx.d1 * &cx.d0).is_zero(), || format!("D1 D0 != 0 at case {case} seed {}", 40_000 + k))?;
            n += 1;
        }
    }
    Ok(format!("D1 D0 = 0 exactly at {n} points"))
}

fn descent() -> Outcome {
    let mut n = 0;
    for case in CaseKind::ALL {
        for k in 0..10 {
            let seed = 50_000 + k;
            let x = sample(DimVector::N131, case, true, seed).rep;
            let worst = descend_residual(&x, 100, seed).map_err(|err| err.to_string())?;
            ensure(worst == 0.0, || format!("case {case} seed {seed}: residual {worst:e}"))?;
            n += 1;
        }
    }
    Ok(format!("max |Omega(d0(h,h'), v)| = 0 at {n} points, 100 draws each"))
}

fn form_identities() -> Outcome {
    let i = Exact::imag_unit();
    let mut float_worst = 0.0_f64;
    let mut points = 0;
    for case in CaseKind::ALL {
        for k in 0..5 {
            let seed = 60_000 + k;
            let x = sample(DimVector::N131, case, true, seed).rep;
            let cx = tangent_basis(&x).map_err(|err| err.to_string())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let u = combination(x.dims, &cx.quotient, || gaussian_coeff(&mut rng));
                let v = combination(x.dims, &cx.quotient, || gaussian_coeff(&mut rng));
                let uv = omega(&u, &v).unwrap();
                ensure(omega(&u, &u).unwrap().is_zero(), || format!("Omega(u,u) != 0, {case} seed {seed}"))?;
                ensure((uv.clone() + omega(&v, &u).unwrap()).is_zero(), || {
                    format!("Omega not antisymmetric, {case} seed {seed}")
                })?;
                ensure(omega(&u, &gamma1(&v)).unwrap() == i.clone() * uv, || {
                    format!("Omega(u, G v) != i Omega(u, v), {case} seed {seed}")
                })?;
            }
            let g = gram(&x).map_err(|err| err.to_string())?;
            ensure((&g.gram + &g.gram.transpose()).is_zero(), || format!("Gram not antisymmetric, {case}"))?;

            let xf = x.convert::<Float>();
            let cf = tangent_basis(&xf).map_err(|err| err.to_string())?;
            let unit = |t: TangentVector<Float>| {
                let m = t.components().iter().map(|c| c.max_magnitude()).fold(0.0, f64::max);
                t.scale(&Float::new(1.0 / m, 0.0))
            };
            let mut frng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || Float::new(frng.random_range(-1.0..1.0), frng.random_range(-1.0..1.0));
            for _ in 0..100 {
                let u = unit(combination(xf.dims, &cf.quotient, &mut draw));
                let v = unit(combination(xf.dims, &cf.quotient, &mut draw));
                let uv = omega(&u, &v).unwrap();
                float_worst = float_worst
                    .max(omega(&u, &u).unwrap().norm())
                    .max((uv + omega(&v, &u).unwrap()).norm())
                    .max((omega(&u, &gamma1(&v)).unwrap() - Float::i() * uv).norm());
            }
            points += 1;
        }
    }
    ensure(float_worst < 1e-10, || format!("float residual {float_worst:e}"))?;
    Ok(format!(
        "exact identities at {points} points x 100 pairs; float residual {float_worst:.1e}"
    ))
}

fn f_direction_witness() -> Outcome {
    let mut pairs = 0;
    for case in CaseKind::ALL {
        for k in 0..5 {
            let x = sample(DimVector::N131, case, true, 70_000 + k).rep;
            let cx = tangent_basis(&x).map_err(|err| err.to_string())?;
            for row in 0..x.dims.c {
                let mut f_dir = TangentVector::<Exact>::zeros(x.dims);
                f_dir.f[(row, 0)] = e(1);
                for v in &cx.ker_d1 {
                    let t = TangentVector::from_ambient(x.dims, v).unwrap();
                    ensure(omega(&f_dir, &t).unwrap().is_zero() && omega(&t, &f_dir).unwrap().is_zero(), || {
                        format!("f-direction pairs nontrivially, case {case}")
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("f-only directions pair to zero in all {pairs} cases"))
}

/// Reduced form with the `+2 a'_2 b'_1` sign.
fn positive_sign_variant(u1: &TangentVector<Exact>, u2: &TangentVector<Exact>) -> Exact {
    let mut total = e(2) * u2.ap[(0, 0)].clone() * u1.bp[(0, 0)].clone()
        + e(2) * u1.ap[(0, 0)].clone() * u2.bp[(0, 0)].clone();
    for k in 1..3 {
        for l in 1..3 {
            total = total + u1.a[(k, l)].clone() * u2.b[(l, k)].clone() - u2.a[(k, l)].clone() * u1.b[(l, k)].clone();
        }
    }
    total
}

fn closed_form_oracle() -> Outcome {
    let mut positive_mismatches = 0;
    for p in 0..10 {
        let s = sample(DimVector::N131, CaseKind::I, false, 80_000 + p);
        let cx = tangent_basis(&s.rep).map_err(|err| err.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..100 {
            let u1 = combination(s.rep.dims, &cx.ker_d1, || gaussian_coeff(&mut rng));
            let u2 = combination(s.rep.dims, &cx.ker_d1, || gaussian_coeff(&mut rng));
            let closed = omega_case_i_closed_form(&u1, &u2, &s.params).map_err(|err| err.to_string())?;
            let trace = omega(&u1, &u2).unwrap();
            ensure(closed == trace, || format!("closed form {closed} != trace {trace}"))?;
            if positive_sign_variant(&u1, &u2) != trace {
                positive_mismatches += 1;
            }
        }
    }
    ensure(positive_mismatches > 0, || "positive-sign variant was never distinguished".into())?;
    Ok(format!(
        "1000/1000 pairs equal; a'2 b'1 term has sign -2 (the +2 variant fails on {positive_mismatches}/1000)"
    ))
}

fn j_vanishes() -> Outcome {
    let mut n = 0;
    let mut check = |x: &EnhancedRep<Exact>, what: String| -> Result<(), String> {
        let st = stability(x).map_err(|err| err.to_string())?;
        ensure(st.is_stable(), || format!("{what}: sample not stable"))?;
        ensure(st.j_vanishes == Some(true), || format!("{what}: J != 0"))?;
        // J stays zero to first order along the solution set
        let cx = tangent_basis(x).map_err(|err| err.to_string())?;
        for v in &cx.ker_d1 {
            let t = TangentVector::from_ambient(x.dims, v).unwrap();
            ensure(t.j.is_zero(), || format!("{what}: ker D1 has a J-component"))?;
        }
        n += 1;
        Ok(())
    };
    for case in CaseKind::ALL {
        for k in 0..50 {
            check(&sample(DimVector::N131, case, true, 90_000 + k).rep, format!("{case} seed {}", 90_000 + k))?;
        }
    }
    for k in 0..50 {
        let dims = DimVector::one_c_one(2).unwrap();
        check(&sample(dims, CaseKind::I, true, 95_000 + k).rep, format!("(1,2,1) seed {}", 95_000 + k))?;
    }
    Ok(format!("J = 0 and dJ = 0 on ker D1 at {n} stable points"))
}

fn gauge_invariance() -> Outcome {
    for (case, x) in canonical_points() {
        let base = gram(&x).map_err(|err| err.to_string())?;
        let label = classify_case(&x).map_err(|err| err.to_string())?;
        ensure(label.kind == case, || format!("canonical {case} classified as {label}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(case as u64);
        for t in 0..20 {
            let g = random_invertible::<Exact>(3, &mut rng);
            let gp = random_invertible::<Exact>(1, &mut rng);
            let y = act(&g, &gp, &x).map_err(|err| err.to_string())?;
            let moved = gram(&y).map_err(|err| err.to_string())?;
            ensure(moved.tangent_dim() == base.tangent_dim(), || format!("{case} #{t}: tangent dim changed"))?;
            ensure(moved.classification.label == label, || format!("{case} #{t}: label changed"))?;
            ensure(moved.rank == base.rank, || format!("{case} #{t}: rank {} vs {}", moved.rank, base.rank))?;
        }
    }
    Ok("tangent dim, label and Gram rank fixed under 20 basis changes at 4 canonical points".into())
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("adhm-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|err| err.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_adhm"))
            .args(["scan", "--case", "all", "--samples", "10", "--seed", "7", "--random-basis", "--csv"])
            .arg(&path)
            .output()
            .map_err(|err| err.to_string())?
            .status;
        ensure(status.success(), || format!("scan exited with {status}"))?;
        std::fs::read(&path).map_err(|err| err.to_string())
    };
    let a = run("a.csv")?;
    let b = run("b.csv")?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(a == b, || "CSV outputs differ".into())?;
    Ok(format!("two scans of 40 samples are byte-identical ({} bytes)", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tangent dimension", tangent_dimension),
        ("degeneracy agreement", proposition_agreement),
        ("complex property", complex_property),
        ("descent", descent),
        ("form identities", form_identities),
        ("degenerate-direction witness", f_direction_witness),
        ("closed-form oracle", closed_form_oracle),
        ("J vanishes", j_vanishes),
        ("gauge invariance", gauge_invariance),
        ("scan determinism", determinism),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
