//! Batch scans over sampled normal-form points and the full verification run.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::time::Instant;

use adhm_core::rep::sample_stable;
use adhm_core::symplectic::{descend_residual, gram, gram_with, omega};
use adhm_core::{CaseKind, DimVector, EnhancedRep, Exact, Result as CoreResult, Scalar, TangentVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::commands::CliError;
use crate::document;

/// Worker count override; unset or invalid means all cores.
pub const WORKERS_ENV: &str = "ADHM_WORKERS";

pub const CSV_HEADER: &str =
    "sample_index,seed,case,mirror,tangent_dim,gram_rank,predicted,computed,agreement,wall_time_ms";

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub c: usize,
    pub cases: Vec<CaseKind>,
    pub samples: usize,
    pub seed: u64,
    pub random_basis: bool,
    /// Record wall time per sample. Off by default so output is reproducible.
    pub timing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub sample_index: usize,
    pub seed: u64,
    pub case: &'static str,
    pub mirror: bool,
    pub tangent_dim: usize,
    pub gram_rank: usize,
    pub predicted: bool,
    pub computed: bool,
    /// Prediction matches the computed verdict and the classifier recovered
    /// the sampled case.
    pub agreement: bool,
    pub wall_time_ms: u64,
}

fn pool() -> rayon::ThreadPool {
    let workers = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// `(global index, case, per-sample seed)` for every sample, in output order.
fn schedule(cases: &[CaseKind], samples: usize, seed: u64) -> Vec<(usize, CaseKind, u64)> {
    cases
        .iter()
        .flat_map(|&k| std::iter::repeat_n(k, samples))
        .enumerate()
        .map(|(i, k)| (i, k, seed.wrapping_add(i as u64)))
        .collect()
}

fn scan_one(index: usize, case: CaseKind, seed: u64, cfg: &ScanConfig) -> CoreResult<ScanRow> {
    let start = Instant::now();
    let dims = DimVector::one_c_one(cfg.c)?;
    let s = sample_stable::<Exact>(dims, case, cfg.random_basis, seed)?;
    let g = gram(&s.rep)?;
    let label = g.classification.label;
    Ok(ScanRow {
        sample_index: index,
        seed,
        case: case.name(),
        mirror: label.mirrored,
        tangent_dim: g.tangent_dim(),
        gram_rank: g.rank,
        predicted: g.predicted_nondegenerate,
        computed: g.computed_nondegenerate,
        agreement: g.agreement && label.kind == case,
        wall_time_ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>, CliError> {
    if cfg.c != 3 {
        return Err(CliError::Usage(format!(
            "--c {}: the case classification exists only for c = 3",
            cfg.c
        )));
    }
    let jobs = schedule(&cfg.cases, cfg.samples, cfg.seed);
    let rows: CoreResult<Vec<ScanRow>> =
        pool().install(|| jobs.par_iter().map(|&(i, k, s)| scan_one(i, k, s, cfg)).collect());
    Ok(rows?)
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER.split(','))
        .map_err(|e| CliError::Io(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn percent(hits: usize, total: usize) -> f64 {
    if total == 0 {
        100.0
    } else {
        100.0 * hits as f64 / total as f64
    }
}

fn rank_list(ranks: &BTreeSet<usize>) -> String {
    ranks.iter().map(ToString::to_string).collect::<Vec<_>>().join("/")
}

pub fn scan_summary(rows: &[ScanRow]) -> String {
    let agree = rows.iter().filter(|r| r.agreement).count();
    let mut out = format!(
        "{} samples, agreement {}/{} ({:.1}%)\n",
        rows.len(),
        agree,
        rows.len(),
        percent(agree, rows.len())
    );
    for kind in CaseKind::ALL {
        let of_case: Vec<&ScanRow> = rows.iter().filter(|r| r.case == kind.name()).collect();
        if of_case.is_empty() {
            continue;
        }
        let ranks: BTreeSet<usize> = of_case.iter().map(|r| r.gram_rank).collect();
        let hits = of_case.iter().filter(|r| r.agreement).count();
        writeln!(
            out,
            "  {:<4} n={:<5} rank {:<6} agreement {:.1}%",
            kind.name(),
            of_case.len(),
            rank_list(&ranks),
            percent(hits, of_case.len())
        )
        .unwrap();
    }
    out
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    /// Flip the sign of the `-a_v b_u` term of Omega; the run must then fail.
    pub inject_fault: bool,
}

/// Random `(h, h')` draws per sample for the descent check.
const DESCENT_TRIALS: usize = 10;

#[derive(Clone, Debug)]
pub struct SampleCheck {
    pub index: usize,
    pub seed: u64,
    pub case: CaseKind,
    pub tangent_dim: usize,
    pub rank: usize,
    pub agreement: bool,
    pub antisymmetric: bool,
    pub even_rank: bool,
    pub descends: bool,
    pub complex_holds: bool,
    pub witness: bool,
    pub rep: EnhancedRep<Exact>,
}

impl SampleCheck {
    pub fn passed(&self) -> bool {
        self.agreement && self.antisymmetric && self.even_rank && self.descends && self.complex_holds && self.witness
    }

    fn failures(&self) -> Vec<&'static str> {
        [
            (self.agreement, "agreement"),
            (self.antisymmetric, "antisymmetry"),
            (self.even_rank, "rank parity"),
            (self.descends, "descent"),
            (self.complex_holds, "d1 d0 = 0"),
            (self.witness, "kernel witness"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

fn faulty_omega(u: &TangentVector<Exact>, v: &TangentVector<Exact>) -> CoreResult<Exact> {
    let two = Exact::from_i64(2);
    Ok(omega(u, v)? + two * (&v.a * &u.b).trace())
}

fn verify_one(index: usize, case: CaseKind, seed: u64, fault: bool) -> CoreResult<SampleCheck> {
    let s = sample_stable::<Exact>(DimVector::N131, case, true, seed)?;
    let g = if fault { gram_with(&s.rep, faulty_omega)? } else { gram(&s.rep)? };
    let descends = descend_residual(&s.rep, DESCENT_TRIALS, seed)? == 0.0;
    Ok(SampleCheck {
        index,
        seed,
        case,
        tangent_dim: g.tangent_dim(),
        rank: g.rank,
        agreement: g.agreement && g.classification.label.kind == case,
        antisymmetric: g.is_antisymmetric(),
        even_rank: g.rank % 2 == 0,
        descends,
        complex_holds: g.complex.complex_holds,
        witness: g.computed_nondegenerate || g.kernel_witness_holds()?,
        rep: s.rep,
    })
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<SampleCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(SampleCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&SampleCheck> {
        self.checks.iter().find(|c| !c.passed())
    }

    pub fn summary(&self) -> String {
        let mut out = String::from("case  samples  tangent  rank   agree  antisym  parity  descent  d1d0  witness\n");
        for kind in CaseKind::ALL {
            let cs: Vec<&SampleCheck> = self.checks.iter().filter(|c| c.case == kind).collect();
            let count = |f: fn(&SampleCheck) -> bool| cs.iter().filter(|c| f(c)).count();
            let dims: BTreeSet<usize> = cs.iter().map(|c| c.tangent_dim).collect();
            let ranks: BTreeSet<usize> = cs.iter().map(|c| c.rank).collect();
            writeln!(
                out,
                "{:<5} {:>7}  {:>7}  {:<6} {:>5}  {:>7}  {:>6}  {:>7}  {:>4}  {:>7}",
                kind.name(),
                cs.len(),
                rank_list(&dims),
                rank_list(&ranks),
                count(|c| c.agreement),
                count(|c| c.antisymmetric),
                count(|c| c.even_rank),
                count(|c| c.descends),
                count(|c| c.complex_holds),
                count(|c| c.witness),
            )
            .unwrap();
        }
        let agree = self.checks.iter().filter(|c| c.agreement).count();
        writeln!(
            out,
            "agreement {}/{} ({:.1}%)",
            agree,
            self.checks.len(),
            percent(agree, self.checks.len())
        )
        .unwrap();
        match self.first_failure() {
            None => out.push_str("result: PASS\n"),
            Some(c) => writeln!(
                out,
                "result: FAIL at sample {} (case {}, seed {}): {}",
                c.index,
                c.case,
                c.seed,
                c.failures().join(", ")
            )
            .unwrap(),
        }
        out
    }

    /// Full document of the first failing sample.
    pub fn counterexample(&self) -> Option<String> {
        self.first_failure().map(|c| document::to_json(&c.rep))
    }
}

pub fn verify_proposition(cfg: &VerifyConfig) -> Result<VerifyReport, CliError> {
    let jobs = schedule(&CaseKind::ALL, cfg.samples, cfg.seed);
    let checks: CoreResult<Vec<SampleCheck>> = pool().install(|| {
        jobs.par_iter()
            .map(|&(i, k, s)| verify_one(i, k, s, cfg.inject_fault))
            .collect()
    });
    Ok(VerifyReport { checks: checks? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_orders_by_case_then_sample() {
        let s = schedule(&[CaseKind::I, CaseKind::II2], 2, 10);
        assert_eq!(
            s,
            vec![
                (0, CaseKind::I, 10),
                (1, CaseKind::I, 11),
                (2, CaseKind::II2, 12),
                (3, CaseKind::II2, 13)
            ]
        );
    }

    #[test]
    fn empty_scan_writes_header_only() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }
}
