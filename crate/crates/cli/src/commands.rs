//! Single-document subcommands. Each returns the text to print and an exit
//! code instead of printing, so the binary and the tests share one path.

use std::fmt::Write as _;

use adhm_core::deformation::tangent_basis;
use adhm_core::rep::{ensure_stable_solution, residuals, stability};
use adhm_core::symplectic::gram;
use adhm_core::{EnhancedRep, Error, ResidualSet, Scalar};
use serde_json::{json, Value};

use crate::document::{AnyRep, DocError, JsonScalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Document(#[from] DocError),
    /// The data is well formed but is not a stable solution.
    #[error("{0}")]
    Rejected(Error),
    #[error("{0}")]
    Core(Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotOnVariety(_) | Error::Unstable(_) => CliError::Rejected(e),
            other => CliError::Core(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => EXIT_FAILURE,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

fn render(value: Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn residual_lines<S: Scalar>(res: &ResidualSet<S>) -> Vec<(&'static str, Value, String)> {
    let mags = res.max_magnitudes();
    ResidualSet::<S>::NAMES
        .iter()
        .zip(res.as_array())
        .zip(mags)
        .map(|((name, m), mag)| {
            if S::EXACT {
                let zero = m.is_zero();
                (*name, Value::Bool(zero), if zero { "zero" } else { "nonzero" }.to_string())
            } else {
                (*name, json!(mag), format!("max |.| = {mag:.3e}"))
            }
        })
        .collect()
}

fn check_rep<S: Scalar>(x: &EnhancedRep<S>, as_json: bool) -> Result<Outcome, CliError> {
    let res = residuals(x)?;
    let st = stability(x)?;
    let verdict = ensure_stable_solution(x);
    let code = if verdict.is_ok() { EXIT_OK } else { EXIT_FAILURE };
    let lines = residual_lines(&res);
    if as_json {
        let residuals: serde_json::Map<String, Value> =
            lines.iter().map(|(n, v, _)| (n.to_string(), v.clone())).collect();
        return Ok(Outcome {
            stdout: render(json!({
                "field": S::NAME,
                "residuals": residuals,
                "injective_f": st.injective_f,
                "cyclic_i": st.cyclic_i,
                "j_vanishes": st.j_vanishes,
                "violations": st.violations(),
                "ok": verdict.is_ok(),
            })),
            code,
        });
    }
    let mut out = String::new();
    writeln!(out, "dims {} ({})", x.dims, S::NAME).unwrap();
    writeln!(out, "residuals:").unwrap();
    for (name, _, text) in &lines {
        writeln!(out, "  {name:<10} {text}").unwrap();
    }
    writeln!(out, "stability:").unwrap();
    writeln!(out, "  S.1 F injective   {}", if st.injective_f { "ok" } else { "no" }).unwrap();
    writeln!(out, "  S.2 I cyclic      {}", if st.cyclic_i { "ok" } else { "no" }).unwrap();
    for v in st.violations() {
        writeln!(out, "{v}").unwrap();
    }
    if let Some(j0) = st.j_vanishes {
        let note = match (j0, st.is_stable()) {
            (true, _) => "J = 0",
            (false, true) => "J != 0 at a stable r = 1 point (contradicts J = 0)",
            (false, false) => "J != 0",
        };
        writeln!(out, "r = 1: {note}").unwrap();
    }
    match verdict {
        Ok(()) => writeln!(out, "verdict: stable solution").unwrap(),
        Err(e) => writeln!(out, "verdict: {e}").unwrap(),
    }
    Ok(Outcome { stdout: out, code })
}

fn tangent_rep<S: Scalar>(x: &EnhancedRep<S>, as_json: bool) -> Result<Outcome, CliError> {
    let cx = tangent_basis(x)?;
    if as_json {
        return Ok(Outcome::ok(render(json!({
            "dims": {"r": x.dims.r, "c": x.dims.c, "cp": x.dims.cp},
            "ambient": x.dims.ambient_len(),
            "ker_d1": cx.ker_dim(),
            "im_d0": cx.im_dim(),
            "tangent_dim": cx.tangent_dim(),
            "complex_holds": cx.complex_holds,
        }))));
    }
    let mut out = String::new();
    writeln!(out, "dims {} ({}), ambient dimension {}", x.dims, S::NAME, x.dims.ambient_len()).unwrap();
    writeln!(out, "dim ker D1   {}", cx.ker_dim()).unwrap();
    writeln!(out, "dim im D0    {}", cx.im_dim()).unwrap();
    writeln!(out, "tangent dim  {}", cx.tangent_dim()).unwrap();
    if !cx.complex_holds {
        writeln!(out, "warning: D1 D0 != 0").unwrap();
    }
    Ok(Outcome::ok(out))
}

fn vector_json<S: JsonScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

fn omega_rep<S: JsonScalar>(x: &EnhancedRep<S>, as_json: bool) -> Result<Outcome, CliError> {
    let g = gram(x)?;
    if as_json {
        let gram_rows: Vec<Value> = g.gram.to_rows().iter().map(|r| vector_json(r)).collect();
        let kernel: Vec<Value> = g
            .kernel_basis
            .iter()
            .zip(&g.kernel_in_image)
            .map(|(v, &img)| json!({"vector": vector_json(v), "in_image_d0": img}))
            .collect();
        return Ok(Outcome::ok(render(json!({
            "digest": g.digest,
            "field": S::NAME,
            "tangent_dim": g.tangent_dim(),
            "gram": gram_rows,
            "rank": g.rank,
            "antisymmetric": g.is_antisymmetric(),
            "kernel": kernel,
        }))));
    }
    let mut out = String::new();
    writeln!(out, "Gram matrix of Omega on the tangent basis ({}x{}):", g.tangent_dim(), g.tangent_dim()).unwrap();
    for r in g.gram.to_rows() {
        let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
        writeln!(out, "  [{}]", cells.join(", ")).unwrap();
    }
    writeln!(out, "rank {}{}", g.rank, if S::EXACT { "" } else { " (float, advisory)" }).unwrap();
    if g.kernel_basis.is_empty() {
        writeln!(out, "kernel: none").unwrap();
    } else {
        writeln!(out, "kernel representatives (ambient coordinates):").unwrap();
        for (v, img) in g.kernel_basis.iter().zip(&g.kernel_in_image) {
            let cells: Vec<String> = v.iter().map(ToString::to_string).collect();
            let status = if *img { "gauge-trivial" } else { "not in im D0" };
            writeln!(out, "  [{}]  {status}", cells.join(", ")).unwrap();
        }
    }
    Ok(Outcome::ok(out))
}

fn classify_rep<S: Scalar>(x: &EnhancedRep<S>, as_json: bool) -> Result<Outcome, CliError> {
    let g = gram(x)?;
    let c = &g.classification;
    let verdict = |nd: bool| if nd { "non-degenerate" } else { "degenerate" };
    let code = if g.agreement { EXIT_OK } else { EXIT_FAILURE };
    if as_json {
        return Ok(Outcome {
            stdout: render(json!({
                "case": c.label.kind.name(),
                "mirrored": c.label.mirrored,
                "a_jordan": c.a_structure.jordan_type(),
                "b_jordan": c.b_structure.jordan_type(),
                "coincident_eigenvalues": c.coincident_eigenvalues,
                "predicted_nondegenerate": g.predicted_nondegenerate,
                "computed_nondegenerate": g.computed_nondegenerate,
                "gram_rank": g.rank,
                "tangent_dim": g.tangent_dim(),
                "advisory": !S::EXACT,
                "agreement": g.agreement,
            })),
            code,
        });
    }
    let mut out = String::new();
    writeln!(out, "case       {}", c.label).unwrap();
    writeln!(out, "A          {}", c.a_structure.describe()).unwrap();
    writeln!(out, "B          {}", c.b_structure.describe()).unwrap();
    writeln!(out, "predicted  {}", verdict(g.predicted_nondegenerate)).unwrap();
    writeln!(
        out,
        "computed   {} (rank {} of {}{})",
        verdict(g.computed_nondegenerate),
        g.rank,
        g.tangent_dim(),
        if S::EXACT { "" } else { ", float, advisory" }
    )
    .unwrap();
    writeln!(out, "agreement  {}", g.agreement).unwrap();
    Ok(Outcome { stdout: out, code })
}

macro_rules! dispatch {
    ($rep:expr, $f:ident, $json:expr) => {
        match $rep {
            AnyRep::Exact(x) => $f(x, $json),
            AnyRep::Float(x) => $f(x, $json),
        }
    };
}

pub fn check(rep: &AnyRep, as_json: bool) -> Result<Outcome, CliError> {
    dispatch!(rep, check_rep, as_json)
}

pub fn tangent(rep: &AnyRep, as_json: bool) -> Result<Outcome, CliError> {
    dispatch!(rep, tangent_rep, as_json)
}

pub fn omega(rep: &AnyRep, as_json: bool) -> Result<Outcome, CliError> {
    dispatch!(rep, omega_rep, as_json)
}

pub fn classify(rep: &AnyRep, as_json: bool) -> Result<Outcome, CliError> {
    dispatch!(rep, classify_rep, as_json)
}
