use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use adhm_cli::commands::{self, CliError, Outcome, EXIT_FAILURE, EXIT_OK};
use adhm_cli::document::{self, AnyRep};
use adhm_cli::scan::{self, ScanConfig, VerifyConfig};
use adhm_core::rep::sample_stable;
use adhm_core::{CaseKind, DimVector, Exact, Float};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "adhm", version, about = "Enhanced ADHM representations of type (1,c,1)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    I,
    Ii1,
    Ii2,
    Ii3,
    All,
}

impl CaseArg {
    fn kinds(self) -> Vec<CaseKind> {
        match self {
            CaseArg::I => vec![CaseKind::I],
            CaseArg::Ii1 => vec![CaseKind::II1],
            CaseArg::Ii2 => vec![CaseKind::II2],
            CaseArg::Ii3 => vec![CaseKind::II3],
            CaseArg::All => CaseKind::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Residuals of the equations and the stability conditions.
    Check {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions of ker D1, im D0 and the tangent space.
    Tangent {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Gram matrix of the holomorphic 2-form, its rank and kernel.
    Omega {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Normal-form case, predicted and computed degeneracy.
    Classify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Write one sampled stable point as a document.
    Sample {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long, default_value_t = 3)]
        c: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        random_basis: bool,
        #[arg(long, value_enum, default_value = "exact")]
        field: FieldArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample points per case and tabulate tangent dimension and Gram rank.
    Scan {
        #[arg(long, default_value_t = 3)]
        c: usize,
        #[arg(long, value_enum, default_value = "all")]
        case: CaseArg,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        random_basis: bool,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Fill the wall_time_ms column (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Four-case scan with random basis changes and all invariant checks.
    VerifyProposition {
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the counterexample document here on failure.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let load = |p: &PathBuf| document::load(p).map_err(CliError::from);
    match cli.command {
        Command::Check { path, json } => commands::check(&load(&path)?, json),
        Command::Tangent { path, json } => commands::tangent(&load(&path)?, json),
        Command::Omega { path, json } => commands::omega(&load(&path)?, json),
        Command::Classify { path, json } => commands::classify(&load(&path)?, json),
        Command::Sample {
            case,
            c,
            seed,
            random_basis,
            field,
            out,
        } => {
            let kinds = case.kinds();
            let [kind] = kinds[..] else {
                return Err(CliError::Usage("sample needs a single case".into()));
            };
            let s = sample_stable::<Exact>(DimVector::one_c_one(c)?, kind, random_basis, seed)?;
            let rep = match field {
                FieldArg::Exact => AnyRep::Exact(s.rep),
                FieldArg::Float => AnyRep::Float(s.rep.convert::<Float>()),
            };
            write_out(out.as_ref(), &rep.to_json())?;
            Ok(Outcome {
                stdout: String::new(),
                code: EXIT_OK,
            })
        }
        Command::Scan {
            c,
            case,
            samples,
            seed,
            random_basis,
            csv,
            timing,
        } => {
            let cfg = ScanConfig {
                c,
                cases: case.kinds(),
                samples,
                seed,
                random_basis,
                timing,
            };
            let rows = scan::run_scan(&cfg)?;
            let summary = scan::scan_summary(&rows);
            let code = if rows.iter().all(|r| r.agreement) { EXIT_OK } else { EXIT_FAILURE };
            match csv {
                Some(p) => {
                    scan::write_csv(&rows, BufWriter::new(File::create(&p)?))?;
                    Ok(Outcome { stdout: summary, code })
                }
                None => {
                    scan::write_csv(&rows, io::stdout().lock())?;
                    eprint!("{summary}");
                    Ok(Outcome {
                        stdout: String::new(),
                        code,
                    })
                }
            }
        }
        Command::VerifyProposition {
            samples,
            seed,
            dump,
            inject_fault,
        } => {
            let report = scan::verify_proposition(&VerifyConfig {
                samples,
                seed,
                inject_fault,
            })?;
            let mut stdout = report.summary();
            let code = match report.counterexample() {
                None => EXIT_OK,
                Some(doc) => {
                    if let Some(p) = &dump {
                        std::fs::write(p, &doc)?;
                    }
                    stdout.push_str("counterexample:\n");
                    stdout.push_str(&doc);
                    EXIT_FAILURE
                }
            };
            Ok(Outcome { stdout, code })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
