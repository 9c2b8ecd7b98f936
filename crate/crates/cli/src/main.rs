//! `multiloop`: build twisted multiloop algebras from JSON specs and run
//! the exact verification suites.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage or spec error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use multiloop_core::centext;
use multiloop_core::h2oracle::graded_cocycle_space;
use multiloop_core::laurent::Window;
use multiloop_core::report::CheckReport;
use multiloop_core::session::{Session, SessionSpec};

mod table;

#[derive(Parser, Debug)]
#[command(name = "multiloop", version, about = "Exact verification of central extensions of twisted multiloop Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Session spec (JSON).
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    /// Window half-width d (overrides the spec).
    #[arg(long, global = true)]
    window: Option<i64>,
    /// Extra degrees for generator windows (overrides the spec).
    #[arg(long, global = true)]
    margin: Option<i64>,
    /// Seed for randomized checks (overrides the spec).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Render as aligned text instead of JSON.
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions, eigenspaces, g_0 verdict and graded dims of Omega_R/dR.
    Info,
    /// Run verification suites.
    Check {
        #[arg(value_enum, default_value_t = Suite::All)]
        which: Suite,
    },
    /// Graded H² sandwich at internal degree lambda.
    H2 {
        /// Internal degree, comma separated (default: 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Option<Vec<i64>>,
    },
    /// Chevalley structure constants `[x_i, x_j] = sum c x_k`.
    DumpSc,
    /// Centre of the extended algebra in the window.
    Centre,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    All,
    Jacobi,
    Cocycle,
    Centre,
    Perfect,
    Sandr,
    Decomposition,
    Zrel,
    Lift,
}

const ALL_SUITES: [Suite; 8] = [
    Suite::Centre,
    Suite::Cocycle,
    Suite::Decomposition,
    Suite::Jacobi,
    Suite::Lift,
    Suite::Perfect,
    Suite::Sandr,
    Suite::Zrel,
];

/// Number of random samples for the quotient identities.
const ZREL_SAMPLES: usize = 1000;

enum Failure {
    Usage(String),
}

impl From<multiloop_core::Error> for Failure {
    fn from(e: multiloop_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn load(cli: &Cli) -> Result<Session, Failure> {
    let path = cli.spec.as_ref().ok_or_else(|| Failure::Usage("--spec FILE is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = SessionSpec::from_json(&text)?;
    if let Some(d) = cli.window {
        spec.window = d;
    }
    if let Some(m) = cli.margin {
        spec.margin = m;
    }
    if let Some(s) = cli.seed {
        spec.seed = s;
    }
    Ok(spec.build()?)
}

fn run_suite(session: &Session, suite: Suite) -> Result<CheckReport, Failure> {
    let ml = &session.ml;
    let w = session.window();
    let margin = session.spec.margin;
    let seed = session.spec.seed;
    Ok(match suite {
        Suite::Jacobi => centext::jacobi_check(ml, &w)?,
        Suite::Cocycle => centext::cocycle_check(ml, &w),
        Suite::Centre => centext::centre_check(ml, &w, margin)?,
        Suite::Perfect => centext::perfectness_check(ml, &w, margin)?,
        Suite::Sandr => centext::sandr_check(ml, &w)?,
        Suite::Decomposition => centext::decomposition_check(ml, &w)?,
        Suite::Zrel => centext::zrel_check(ml, &w, seed, ZREL_SAMPLES)?,
        Suite::Lift => centext::lift_check(ml, &w)?,
        Suite::All => unreachable!("expanded by the caller"),
    })
}

fn header(session: &Session) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("window".into(), json!(session.spec.window));
    m.insert("margin".into(), json!(session.spec.margin));
    m.insert("seed".into(), json!(session.spec.seed));
    m
}

fn with_header(session: &Session, value: Value) -> Value {
    let mut m = header(session);
    if let Value::Object(obj) = value {
        m.extend(obj);
    }
    Value::Object(m)
}

fn to_value(x: impl serde::Serialize) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

/// Returns the report and whether every check passed.
fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let session = load(cli)?;
    match &cli.command {
        Command::Info => Ok((to_value(session.info()?), true)),
        Command::DumpSc => Ok((to_value(session.ml.algebra().structure_constants()), true)),
        Command::Centre => {
            let rep = run_suite(&session, Suite::Centre)?;
            let pass = rep.pass;
            Ok((with_header(&session, to_value(rep)), pass))
        }
        Command::Check { which } => {
            if *which == Suite::All {
                let mut reports = Vec::new();
                let mut pass = true;
                for s in ALL_SUITES {
                    let r = run_suite(&session, s)?;
                    pass &= r.pass;
                    reports.push(to_value(r));
                }
                let mut m = header(&session);
                m.insert("status".into(), json!(if pass { "pass" } else { "fail" }));
                m.insert("pass".into(), json!(pass));
                m.insert("reports".into(), Value::Array(reports));
                Ok((Value::Object(m), pass))
            } else {
                let rep = run_suite(&session, *which)?;
                let pass = rep.pass;
                Ok((with_header(&session, to_value(rep)), pass))
            }
        }
        Command::H2 { lambda } => {
            let n = session.ml.nvars();
            let lambda = lambda.clone().unwrap_or_else(|| vec![0; n]);
            if lambda.len() != n {
                return Err(Failure::Usage(format!("--lambda needs {n} entries, got {}", lambda.len())));
            }
            let w = Window::new(n, session.spec.window);
            if !w.contains(&lambda) {
                return Err(Failure::Usage(format!("lambda {lambda:?} lies outside the window d={}", w.d)));
            }
            let rep = graded_cocycle_space(&session.ml, &w, &lambda, 1)?;
            Ok((with_header(&session, to_value(rep)), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, pass)) => {
            if cli.table {
                print!("{}", table::render(&value));
            } else {
                println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
