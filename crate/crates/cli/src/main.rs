//! `qdo`: construct, verify, analyze, extend and compare weight modules
//! from the command line. Reports are canonical JSON on stdout.
//!
//! Exit codes: 0 success or affirmative verdict, 1 negative verdict or
//! relation violation, 2 usage or validation error, 3 an `UNKNOWN` or
//! `NOT_APPLICABLE` verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use qdo_core::analyze::{
    are_isomorphic, decompose, equidimension_check, is_irreducible, weight_dims, Budget, Verdict, Witness,
};
use qdo_core::extend::{extend_to_d, Outcome};
use qdo_core::families::catalog;
use qdo_core::json::{self as qj, Scenario};
use qdo_core::orbits::SubalgebraName;
use qdo_core::verify::{check_relations, polynomial_realization};
use qdo_core::wmod::WeightModule;
use qdo_core::{suite, Error};

#[derive(Parser, Debug)]
#[command(name = "qdo", version, about = "Weight modules over quantum differential operators")]
struct Cli {
    /// Human-readable output: weight diagrams for modules, a table for the
    /// suite, indented JSON otherwise.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, env = "GWA_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the module described by a scenario file.
    Construct {
        #[arg(long)]
        scenario: PathBuf,
        /// Write the module JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the defining relations of an algebra on a module.
    Verify {
        module: PathBuf,
        #[arg(long, default_value = "D")]
        algebra: SubalgebraName,
    },
    /// Structural checks: dims, equidim, irreducible, indecomposable, decompose.
    Analyze {
        module: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "dims,equidim,irreducible,indecomposable")]
        checks: Vec<String>,
        #[arg(long, default_value = "D")]
        algebra: SubalgebraName,
    },
    /// Extend an AQ-module (X, Y1) or A1-module (X, Y) to D.
    Extend { module: PathBuf },
    /// Decide whether two modules are isomorphic.
    Iso {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value = "D")]
        algebra: SubalgebraName,
    },
    /// The truncated action on K[x] and its relation report.
    Realize {
        /// Field object or descriptor, e.g. FUNCTION_FIELD or EXT_FIELD(3,[1,0,1]).
        #[arg(long)]
        field: String,
        #[arg(long)]
        q: Option<String>,
        /// Degree bound.
        #[arg(long = "N", short = 'N', default_value_t = 8)]
        n: usize,
    },
    /// Run the action named in a scenario file.
    Run { scenario: PathBuf },
    /// List the supported families.
    Families,
    /// Run the acceptance grid and criteria.
    Suite {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A report plus the exit code it implies.
struct Report {
    body: Value,
    /// Text shown instead of `body` under `--pretty`.
    text: Option<String>,
    code: u8,
}

impl Report {
    fn new(body: Value, code: u8) -> Self {
        Report { body, text: None, code }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    qj::parse_str(&text)
}

fn load_module(path: &Path) -> Result<WeightModule, Error> {
    qj::module_from_json(&read_json(path)?)
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::Yes(_) => 0,
        Verdict::No(_) => 1,
        Verdict::Unknown(_) | Verdict::NotApplicable(_) => 3,
    }
}

fn construct(s: &Scenario) -> Result<Report, Error> {
    let m = s.build()?;
    let mut r = Report::new(qj::module_to_json(&m), 0);
    r.text = Some(m.diagram());
    Ok(r)
}

fn verify(m: &WeightModule, algebra: SubalgebraName) -> Result<Report, Error> {
    let report = check_relations(m, algebra)?;
    let code = if report.passed() { 0 } else { 1 };
    Ok(Report::new(qj::relation_report_to_json(m.ctx(), &report), code))
}

fn analyze(m: &WeightModule, checks: &[String], algebra: SubalgebraName, budget: &Budget) -> Result<Report, Error> {
    let ctx = m.ctx();
    let mut out = Map::new();
    let mut codes = Vec::new();
    for check in checks {
        let value = match check.as_str() {
            "dims" => json!(weight_dims(m).iter().map(|(k, d)| json!({"offset": k, "dim": d})).collect::<Vec<_>>()),
            "equidim" => {
                let v = equidimension_check(m);
                codes.push(verdict_code(&v));
                qj::verdict_to_json(ctx, &v)
            }
            "irreducible" => {
                let v = is_irreducible(m, algebra, budget)?;
                codes.push(verdict_code(&v));
                qj::verdict_to_json(ctx, &v)
            }
            "indecomposable" => {
                let v = indecomposable(m, algebra, budget)?;
                codes.push(verdict_code(&v));
                qj::verdict_to_json(ctx, &v)
            }
            "decompose" => qj::decomposition_to_json(ctx, &decompose(m, algebra, budget)?),
            other => return Err(Error::InvalidArgument(format!("unknown check {other:?}"))),
        };
        out.insert(check.clone(), value);
    }
    // A negative verdict outranks an inconclusive one.
    let code = if codes.contains(&1) { 1 } else { codes.into_iter().max().unwrap_or(0) };
    Ok(Report::new(json!({"algebra": algebra.to_string(), "checks": out}), code))
}

fn indecomposable(m: &WeightModule, algebra: SubalgebraName, budget: &Budget) -> Result<Verdict, Error> {
    if !m.is_circular() {
        return Ok(Verdict::NotApplicable("module lives on a window of a linear orbit".into()));
    }
    let d = decompose(m, algebra, budget)?;
    Ok(match (d.summands.len(), d.idempotent) {
        (0, _) => Verdict::No(Witness::None),
        (1, _) if d.complete => Verdict::Yes(Witness::None),
        (1, _) => Verdict::Unknown("no idempotent found within the search budget".into()),
        (_, Some(e)) => Verdict::No(Witness::Idempotent(e)),
        (_, None) => Verdict::No(Witness::None),
    })
}

fn extend(m: &WeightModule) -> Result<Report, Error> {
    let e = extend_to_d(m)?;
    let code = if matches!(e.outcome, Outcome::Impossible(_)) { 1 } else { 0 };
    let mut r = Report::new(qj::extension_to_json(m.ctx(), &e), code);
    r.text = match &e.outcome {
        Outcome::Impossible(c) => {
            Some(format!("IMPOSSIBLE: {} fails at offset {} on {} (row {})\n", c.relation, c.offset, c.label, c.row))
        }
        Outcome::Unique(rep) => Some(format!("UNIQUE\n{}", rep.diagram())),
        Outcome::Family { k, representative, .. } => Some(format!("FAMILY(k = {k})\n{}", representative.diagram())),
    };
    Ok(r)
}

fn iso(a: &WeightModule, b: &WeightModule, algebra: SubalgebraName, budget: &Budget) -> Result<Report, Error> {
    let v = are_isomorphic(a, b, algebra, budget)?;
    Ok(Report::new(qj::verdict_to_json(a.ctx(), &v), verdict_code(&v)))
}

fn realize(field: &Value, q: Option<&str>, n: usize) -> Result<Report, Error> {
    let ctx = qj::field_from_json(field, q)?;
    let r = polynomial_realization(&ctx, n)?;
    let code = if r.report.passed() { 0 } else { 1 };
    Ok(Report::new(qj::realization_to_json(&ctx, &r), code))
}

fn run_suite(seed: u64) -> Report {
    let r = suite::run(seed);
    Report { body: r.to_json(), text: Some(r.table()), code: if r.passed() { 0 } else { 1 } }
}

fn run_scenario(s: &Scenario, seed: u64) -> Result<Report, Error> {
    let seed = s.seed.unwrap_or(seed);
    let budget = Budget::with_seed(seed);
    let algebra = s.algebra.unwrap_or(SubalgebraName::D);
    match s.action.as_str() {
        "construct" => construct(s),
        "verify" => verify(&s.build()?, algebra),
        "analyze" => {
            let checks = if s.checks.is_empty() {
                vec!["dims".into(), "equidim".into(), "irreducible".into(), "indecomposable".into()]
            } else {
                s.checks.clone()
            };
            analyze(&s.build()?, &checks, algebra, &budget)
        }
        "extend" => extend(&s.build()?),
        "realize" => {
            let r = polynomial_realization(&s.ctx, s.n.unwrap_or(8))?;
            let code = if r.report.passed() { 0 } else { 1 };
            Ok(Report::new(qj::realization_to_json(&s.ctx, &r), code))
        }
        "suite" => Ok(run_suite(seed)),
        other => Err(Error::InvalidArgument(format!("action {other:?} cannot run from a single scenario"))),
    }
}

fn families() -> Report {
    let entries: Vec<Value> = catalog()
        .iter()
        .map(|e| {
            json!({
                "id": e.name,
                "notation": e.notation,
                "params": e.params,
                "orbit": e.orbit,
                "side_conditions": e.side_conditions,
            })
        })
        .collect();
    Report::new(Value::Array(entries), 0)
}

fn execute(cli: &Cli) -> Result<(Report, Option<PathBuf>), Error> {
    let budget = Budget::with_seed(cli.seed);
    Ok(match &cli.command {
        Command::Construct { scenario, out } => (construct(&Scenario::from_json(&read_json(scenario)?)?)?, out.clone()),
        Command::Verify { module, algebra } => (verify(&load_module(module)?, *algebra)?, None),
        Command::Analyze { module, checks, algebra } => {
            (analyze(&load_module(module)?, checks, *algebra, &budget)?, None)
        }
        Command::Extend { module } => (extend(&load_module(module)?)?, None),
        Command::Iso { left, right, algebra } => {
            (iso(&load_module(left)?, &load_module(right)?, *algebra, &budget)?, None)
        }
        Command::Realize { field, q, n } => {
            let field = if field.trim_start().starts_with('{') { qj::parse_str(field)? } else { json!(field) };
            (realize(&field, q.as_deref(), *n)?, None)
        }
        Command::Run { scenario } => (run_scenario(&Scenario::from_json(&read_json(scenario)?)?, cli.seed)?, None),
        Command::Families => (families(), None),
        Command::Suite { out } => (run_suite(cli.seed), out.clone()),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((report, out)) => {
            let json_text = qj::to_canonical_string(&report.body, cli.pretty && report.text.is_none()) + "\n";
            if let Some(path) = out {
                // The file always gets JSON; the console gets the pretty form.
                if let Err(e) = fs::write(&path, &json_text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
                if cli.pretty {
                    print!("{}", report.text.as_deref().unwrap_or(&json_text));
                }
            } else if cli.pretty {
                print!("{}", report.text.as_deref().unwrap_or(&json_text));
            } else {
                print!("{json_text}");
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
