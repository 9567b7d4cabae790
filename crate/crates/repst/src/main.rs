//! Command-line surface: construction, certification, classification, and
//! lemma verification with machine-readable JSON output. Every run emits a
//! manifest (command, parameters, version, limits, verdict) alongside the
//! result; identical invocations produce byte-identical output.

use clap::{Args, Parser, Subcommand};
use repst::algebras::{self, AlgebraObject, Verdict};
use repst::config::limits;
use repst::diagrams::Morphism;
use repst::karoubi::KObject;
use repst::symgroup::{self, PermGroup};
use repst::{accept, Error};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "repst", version, about = "Exact diagram calculus for Rep(S_t)")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized searches (all randomness is seeded).
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Worker count for independent cases; execution order never affects
    /// output.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose two morphisms read from JSON files (lhs after rhs).
    Compose {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
    },
    /// Dimension polynomial of the carrier of the induced family for H ≤ S_k.
    DimPoly {
        #[arg(long)]
        k: usize,
        /// Generators in cycle notation, e.g. "(0 1)(2 3), (0 2)".
        #[arg(long, default_value = "")]
        subgroup: String,
    },
    /// Build the induced algebra for H ≤ S_k and write it to a file.
    BuildAlgebra {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check axioms, connectedness, pairing, and the simplicity verdict of a
    /// stored algebra.
    CheckAlgebra { file: PathBuf },
    /// Classification table: one row per subgroup class of S_n with the
    /// simplicity verdict of C[S_n/H].
    ClassifyRepsn {
        #[arg(long)]
        n: usize,
    },
    /// Exhaustively verify a supporting lemma.
    VerifyLemma {
        #[command(subcommand)]
        lemma: Lemma,
    },
    /// Specialize a stored algebra at t = n; with --match, find an explicit
    /// equivariant isomorphism onto the coset algebra.
    Fiber {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long = "match")]
        match_coset: bool,
    },
    /// Run the acceptance suite (all criteria, or a comma-separated subset).
    Selftest {
        #[arg(long)]
        criteria: Option<String>,
    },
}

#[derive(Subcommand)]
enum Lemma {
    /// Overgroups of S_{n−k} in S_n are conjugate to H′ × S_{n−k′}, k′ ≤ k.
    ContainsTimes(NK),
    /// The sign character occurs in C[S_n/H] for every H ≤ A_n.
    SignObstruction {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct NK {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Error> {
    serde_json::to_value(v).map_err(|e| Error::Invalid(e.to_string()))
}

struct Outcome {
    parameters: Value,
    result: Value,
    pass: bool,
}

fn dispatch(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Compose { lhs, rhs } => {
            let l: Morphism = read_json(lhs)?;
            let r: Morphism = read_json(rhs)?;
            let composed = l.compose(&r)?;
            Ok(Outcome {
                parameters: json!({"lhs": lhs.display().to_string(), "rhs": rhs.display().to_string()}),
                result: to_value(&composed)?,
                pass: true,
            })
        }
        Command::DimPoly { k, subgroup } => {
            let h = symgroup::parse_generators(subgroup, *k)?;
            let f = algebras::distinct_idempotent(*k)?
                .compose(&algebras::subgroup_projector(&h))?;
            let poly = KObject::new(*k, f)?.dimension_poly();
            Ok(Outcome {
                parameters: json!({"k": k, "subgroup": h.generator_string()}),
                result: json!({"poly": to_value(&poly)?}),
                pass: true,
            })
        }
        Command::BuildAlgebra { k, subgroup, out } => {
            let h = symgroup::parse_generators(subgroup, *k)?;
            let a = algebras::build_induced_algebra(*k, &h)?;
            let text = if cli.pretty {
                serde_json::to_string_pretty(&a)
            } else {
                serde_json::to_string(&a)
            }
            .map_err(|e| Error::Invalid(e.to_string()))?;
            std::fs::write(out, text)
                .map_err(|e| Error::Invalid(format!("{}: {e}", out.display())))?;
            Ok(Outcome {
                parameters: json!({"k": k, "subgroup": h.generator_string(), "out": out.display().to_string()}),
                result: json!({
                    "written": out.display().to_string(),
                    "dimension_poly": to_value(&a.carrier.dimension_poly())?,
                    "terms": {"idem": a.carrier.idem().num_terms(), "mult": a.mult.num_terms(), "unit": a.unit.num_terms()},
                }),
                pass: true,
            })
        }
        Command::CheckAlgebra { file } => {
            let a: AlgebraObject = read_json(file)?;
            let axioms = algebras::check_axioms(&a)?;
            let cert = algebras::certify_simple(&a)?;
            let pass = axioms.all_pass() && cert.verdict == Verdict::CertifiedSimple;
            Ok(Outcome {
                parameters: json!({"file": file.display().to_string()}),
                result: json!({
                    "axioms": to_value(&axioms)?,
                    "certificate": to_value(&cert)?,
                    "dimension_poly": to_value(&a.carrier.dimension_poly())?,
                }),
                pass,
            })
        }
        Command::ClassifyRepsn { n } => {
            let rows = symgroup::classify_repsn(*n)?;
            let pass = rows.iter().all(|r| r.simple);
            Ok(Outcome {
                parameters: json!({"n": n}),
                result: json!({"classes": rows.len(), "rows": to_value(&rows)?}),
                pass,
            })
        }
        Command::VerifyLemma { lemma } => match lemma {
            Lemma::ContainsTimes(nk) => {
                let report = symgroup::verify_contains_times(nk.n, nk.k)?;
                Ok(Outcome {
                    parameters: json!({"lemma": "contains-times", "n": nk.n, "k": nk.k}),
                    result: json!({
                        "status": if report.pass { "pass" } else { "fail" },
                        "cases": to_value(&report.entries)?,
                    }),
                    pass: report.pass,
                })
            }
            Lemma::SignObstruction { n } => {
                let a_n = PermGroup::alternating(*n);
                let mut rows = vec![];
                let mut pass = true;
                for h in symgroup::subgroups_up_to_conjugacy(*n)? {
                    let even = h.is_subgroup_of(&a_n);
                    let multiplicity = symgroup::sign_multiplicity(*n, &h)?;
                    if even && multiplicity == 0 {
                        pass = false;
                    }
                    rows.push(json!({
                        "order": h.order(),
                        "generators": h.generator_string(),
                        "even": even,
                        "sign_multiplicity": multiplicity,
                    }));
                }
                Ok(Outcome {
                    parameters: json!({"lemma": "sign-obstruction", "n": n}),
                    result: json!({"status": if pass { "pass" } else { "fail" }, "cases": rows}),
                    pass,
                })
            }
        },
        Command::Fiber {
            n,
            algebra,
            match_coset,
        } => {
            let a: AlgebraObject = read_json(algebra)?;
            let fib = repst::fiber::specialize_algebra(
                a.ambient,
                a.carrier.idem(),
                &a.mult,
                &a.unit,
                *n,
            )?;
            let matched = if *match_coset {
                Some(algebras::fiber_match(&a, *n)?.is_some())
            } else {
                None
            };
            Ok(Outcome {
                parameters: json!({"n": n, "algebra": algebra.display().to_string(), "match": match_coset}),
                result: json!({
                    "dimension": fib.dim(),
                    "matched": matched,
                }),
                pass: matched.unwrap_or(true),
            })
        }
        Command::Selftest { criteria } => {
            let ids: Vec<usize> = match criteria {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Invalid(format!("bad criterion id '{s}'")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (1..=accept::CRITERIA).collect(),
            };
            let mut results = vec![];
            for id in &ids {
                results.push(accept::run(*id, cli.seed)?);
            }
            let pass = results.iter().all(|r| r.pass);
            Ok(Outcome {
                parameters: json!({"criteria": ids, "seed": cli.seed}),
                result: to_value(&results)?,
                pass,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Compose { .. } => "compose",
        Command::DimPoly { .. } => "dim-poly",
        Command::BuildAlgebra { .. } => "build-algebra",
        Command::CheckAlgebra { .. } => "check-algebra",
        Command::ClassifyRepsn { .. } => "classify-repsn",
        Command::VerifyLemma { .. } => "verify-lemma",
        Command::Fiber { .. } => "fiber",
        Command::Selftest { .. } => "selftest",
    }
}

fn emit(cli: &Cli, output: &Value) {
    let text = if cli.pretty {
        serde_json::to_string_pretty(output)
    } else {
        serde_json::to_string(output)
    }
    .expect("serializable output");
    println!("{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            let output = json!({
                "manifest": {
                    "command": command_name(&cli.command),
                    "parameters": outcome.parameters,
                    "version": env!("CARGO_PKG_VERSION"),
                    "limits": limits(),
                    "verdict": if outcome.pass { "pass" } else { "fail" },
                },
                "result": outcome.result,
            });
            emit(&cli, &output);
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let code = match e {
                Error::LimitExceeded(_) => 3u8,
                _ => 1,
            };
            let output = json!({
                "manifest": {
                    "command": command_name(&cli.command),
                    "version": env!("CARGO_PKG_VERSION"),
                    "limits": limits(),
                    "verdict": "error",
                },
                "error": e.to_string(),
            });
            emit(&cli, &output);
            ExitCode::from(code)
        }
    }
}
