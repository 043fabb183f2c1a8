//! `equichain`: command-line access to the chain-map solvability engine.
//!
//! Every verb prints one JSON object `{ "metadata": …, "result": … }` with
//! sorted keys. Exit codes: 0 ok / map exists, 1 verification failed,
//! 2 usage or parse error, 3 I/O error, 4 precondition unmet, 5 budget
//! exceeded, 10 certified nonexistence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equichain_core::chains::{reduced_betti, AnnulusClasses};
use equichain_core::docs::{CertificateDoc, ChainDoc, ColoringDoc, Int, MapDoc, ReportDoc, SubdivisionDoc};
use equichain_core::solvability::{renaming_verdict, search_equivariant_map, solve_diophantine};
use equichain_core::subdivision::{
    chromatic_subdivide, coloring_chain_map, enumerate_symmetric_colorings, signed_monochromatic_count,
    verify_symmetric_coloring, wsb_decision_check,
};
use equichain_core::{ComplexName, Error, Execution};
use serde::Serialize;
use serde_json::{json, Value};

const DEFAULT_BUDGET: u128 = 1 << 26;

#[derive(Parser, Debug)]
#[command(name = "equichain", version, about = "Decide weak symmetry breaking solvability with exact chain maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Binomial gcd test, Diophantine witness and renaming verdicts.
    Solvable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Solve the reduced system and emit an existence or nonexistence certificate.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the four checks on a map document, or re-check a certificate.
    Verify {
        #[arg(long)]
        map: PathBuf,
    },
    /// Winding number of an (n-1)-cycle of the annulus.
    Wind {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Symmetric colorings of a chromatic subdivision.
    Wsb(WsbArgs),
    /// Emit a chromatic subdivision document.
    Subdivide {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced integer homology of a named complex.
    Homology {
        #[arg(long)]
        n: usize,
        /// disk, disk-boundary, annulus, output, sphere:C,…, chr:R
        #[arg(long, default_value = "annulus")]
        complex: String,
    },
}

#[derive(Args, Debug)]
struct WsbArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rounds: Option<usize>,
    /// Enumerate every symmetric coloring.
    #[arg(long, conflicts_with = "coloring")]
    exhaustive: bool,
    /// Evaluate one coloring document.
    #[arg(long)]
    coloring: Option<PathBuf>,
    /// Maximum facet evaluations for exhaustive mode.
    #[arg(long, env = "EQUICHAIN_BUDGET")]
    budget_facets: Option<u128>,
}

/// Outcome category of a run; determines the exit code.
enum Status {
    Ok,
    Failed,
    Nonexistence,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: 3, message: format!("{}: {e}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::Json(_) | Error::DuplicateColor(_) | Error::ColorOutOfRange { .. } => 2,
            Error::NotACycle | Error::PreconditionUnmet(_) | Error::NotInComplex(..) => 4,
            Error::BudgetExceeded { .. } => 5,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type Run = Result<(Value, Status), Failure>;

fn to_value<T: Serialize>(doc: &T) -> Value {
    serde_json::to_value(doc).expect("documents serialize")
}

/// Canonical text of a document: sorted keys, two-space indent, trailing newline.
fn canonical(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<(), Failure> {
    fs::write(path, canonical(v)).map_err(|e| Failure::io(path, e))
}

fn solvable(n: usize, t: Option<usize>) -> Run {
    let verdict = renaming_verdict(n, t)?;
    let witness = solve_diophantine(n);
    let exists = n > 0 && verdict.g == 1.into();
    let result = json!({
        "n": n,
        "g": Int(verdict.g.clone()),
        "diophantine": {
            "feasible": witness.is_some(),
            "witness": witness.map(|k| k.into_iter().map(Int).collect::<Vec<_>>()),
        },
        "map_exists": exists,
        "wait_free": verdict.wait_free,
        "t": verdict.t,
        "t_gcd": verdict.t_gcd.map(Int),
        "t_resilient": verdict.t_resilient,
    });
    Ok((result, if exists { Status::Ok } else { Status::Nonexistence }))
}

fn search(n: usize, out: Option<PathBuf>) -> Run {
    let cert = search_equivariant_map(n, Execution::default())?;
    let doc = to_value(&CertificateDoc::from_certificate(&cert)?);
    let status = if cert.exists() { Status::Ok } else { Status::Nonexistence };
    let mut result = json!({ "n": n, "kind": doc["kind"], "g": doc["g"] });
    match out {
        Some(path) => {
            write_json(&path, &doc)?;
            result["out"] = json!(path.display().to_string());
        }
        None => result["certificate"] = doc,
    }
    Ok((result, status))
}

fn verify(path: &Path) -> Run {
    let raw: Value = read_json(path)?;
    if raw.get("kind").is_some() {
        let doc: CertificateDoc = serde_json::from_value(raw).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let cert = doc.to_certificate()?;
        let kind = if cert.exists() { "existence" } else { "nonexistence" };
        return match cert.verify(Execution::default()) {
            Ok(reports) => {
                let reports: Vec<ReportDoc> = reports.iter().map(ReportDoc::from_report).collect();
                Ok((json!({ "certificate": kind, "n": cert.n(), "passed": true, "reports": reports }), Status::Ok))
            }
            Err(Error::VerificationFailed(msg)) => {
                Ok((json!({ "certificate": kind, "n": cert.n(), "passed": false, "reason": msg }), Status::Failed))
            }
            Err(e) => Err(e.into()),
        };
    }
    let doc: MapDoc = serde_json::from_value(raw).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut map = doc.to_map()?;
    let reports = map.verify_all(Execution::default())?;
    let passed = reports.iter().all(|r| r.passed);
    let reports: Vec<ReportDoc> = reports.iter().map(ReportDoc::from_report).collect();
    let result = json!({
        "n": map.n(),
        "source": map.source().to_string(),
        "target": map.target().to_string(),
        "passed": passed,
        "reports": reports,
    });
    Ok((result, if passed { Status::Ok } else { Status::Failed }))
}

fn wind(path: &Path, n: usize) -> Run {
    let doc: ChainDoc = read_json(path)?;
    let chain = doc.to_chain()?;
    if n == 0 {
        return Err(Failure::usage("winding needs n >= 1"));
    }
    if chain.dim() != n as isize - 1 {
        return Err(Failure { code: 4, message: format!("expected a {}-chain, found dimension {}", n - 1, chain.dim()) });
    }
    let classes = AnnulusClasses::new(n)?;
    if !chain.supported_on(classes.annulus()) {
        return Err(Failure { code: 4, message: "chain is not supported on the annulus".into() });
    }
    let w = classes.winding(&chain)?;
    Ok((json!({ "n": n, "winding": Int(w) }), Status::Ok))
}

fn histogram<K: ToString>(h: impl IntoIterator<Item = (K, u64)>) -> Value {
    Value::Array(h.into_iter().map(|(k, c)| json!({ "count": k.to_string().parse::<i64>().unwrap(), "colorings": c })).collect())
}

fn wsb(args: WsbArgs) -> Run {
    if let Some(path) = &args.coloring {
        let doc: ColoringDoc = read_json(path)?;
        for (flag, given, found) in [("--n", args.n, doc.n), ("--rounds", args.rounds, doc.rounds)] {
            if given.is_some_and(|g| g != found) {
                return Err(Failure::usage(format!("{flag} disagrees with the coloring document ({found})")));
            }
        }
        let (s, b) = doc.to_coloring()?;
        let symmetry = verify_symmetric_coloring(&s, &b)?;
        let decision = wsb_decision_check(&s, &b)?;
        let winding = coloring_chain_map(&s, &b)?.boundary_winding;
        let result = json!({
            "n": s.n(),
            "rounds": s.rounds(),
            "symmetric": symmetry.passed,
            "asymmetric_pair": symmetry.witness,
            "monochromatic": decision.monochromatic,
            "signed_monochromatic": signed_monochromatic_count(&s, &b)?,
            "boundary_winding": winding.map(Int),
            "decision": decision.solves,
        });
        return Ok((result, Status::Ok));
    }
    if !args.exhaustive {
        return Err(Failure::usage("wsb needs --exhaustive or --coloring"));
    }
    let (Some(n), Some(rounds)) = (args.n, args.rounds) else {
        return Err(Failure::usage("exhaustive mode needs --n and --rounds"));
    };
    let s = chromatic_subdivide(n, rounds);
    let budget = args.budget_facets.unwrap_or(DEFAULT_BUDGET);
    let census = enumerate_symmetric_colorings(&s, Execution::default(), budget)?;
    let result = json!({
        "n": n,
        "rounds": rounds,
        "colorings": census.colorings,
        "min_monochromatic": census.min(),
        "monochromatic": histogram(census.counts.iter().map(|(k, c)| (*k, *c))),
        "signed_monochromatic": histogram(census.signed_counts.iter().map(|(k, c)| (*k, *c))),
        "modulus": Int(census.modulus.clone()),
        "congruent": census.all_congruent,
        "any_decision": census.any_solves,
        "budget": budget.to_string(),
    });
    Ok((result, if census.all_congruent { Status::Ok } else { Status::Failed }))
}

fn subdivide(n: usize, rounds: usize, out: Option<PathBuf>) -> Run {
    let s = chromatic_subdivide(n, rounds);
    let doc = to_value(&SubdivisionDoc::from_subdivision(&s));
    let mut result = json!({ "n": n, "rounds": rounds, "vertices": s.vertices().len(), "facets": s.facets().len() });
    match out {
        Some(path) => {
            write_json(&path, &doc)?;
            result["out"] = json!(path.display().to_string());
        }
        None => result["subdivision"] = doc,
    }
    Ok((result, Status::Ok))
}

fn homology(n: usize, complex: &str) -> Run {
    let name: ComplexName = complex.parse()?;
    let k = name.build(n)?;
    let top = k.dim().max(0) as usize;
    let groups: Vec<Value> = (0..=top)
        .map(|q| {
            let h = reduced_betti(&k, q);
            json!({ "degree": q, "rank": h.rank, "torsion": h.torsion.into_iter().map(Int).collect::<Vec<_>>() })
        })
        .collect();
    let f_vector: Vec<usize> = (0..=k.dim()).map(|d| k.count(d)).collect();
    let result = json!({
        "complex": name.to_string(),
        "n": n,
        "f_vector": f_vector,
        "euler_characteristic": k.euler_characteristic(),
        "reduced_homology": groups,
    });
    Ok((result, Status::Ok))
}

fn run(cli: Cli) -> Run {
    match cli.command {
        Command::Solvable { n, t } => solvable(n, t),
        Command::Search { n, out } => search(n, out),
        Command::Verify { map } => verify(&map),
        Command::Wind { chain, n } => wind(&chain, n),
        Command::Wsb(args) => wsb(args),
        Command::Subdivide { n, rounds, out } => subdivide(n, rounds, out),
        Command::Homology { n, complex } => homology(n, &complex),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((result, status)) => {
            let doc = json!({
                "metadata": { "tool": "equichain", "version": env!("CARGO_PKG_VERSION") },
                "result": result,
            });
            print!("{}", canonical(&doc));
            ExitCode::from(match status {
                Status::Ok => 0,
                Status::Failed => 1,
                Status::Nonexistence => 10,
            })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
