//! Command-line front end. `run` parses arguments, executes one subcommand
//! and returns the process exit code.
//!
//! Exit codes: 0 holds / true / success, 1 does not hold / false,
//! 2 usage or parse error, 3 resource cap exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use entail_core::entailment::find_counterexample;
use entail_core::rational::{parse_rational, to_f64, to_fraction_string};
use entail_core::rules::{format_rules, parse_attrs, parse_gamma, parse_implication, parse_rules_into};
use entail_core::{
    decide, enforces_homogeneity, gamma_star, prune, AttrSet, Dataset, EntailmentQuery, Error, ImplicationSet, Method,
    Rational, Universe, DEFAULT_ENUMERATION_CAP,
};
use serde_json::{json, Map, Value};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "entail",
    version,
    about = "Entailment among partial implications at a confidence threshold"
)]
struct Cli {
    /// Largest number of attributes whose subsets may be enumerated (at most 24).
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    max_attrs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the premises entail the conclusion at confidence GAMMA.
    Entail {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        premises: PathBuf,
        /// A rule such as "A C D -> B".
        #[arg(long)]
        conclusion: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[arg(long)]
        json: bool,
    },
    /// Bracket the critical confidence of the premises for an antecedent.
    GammaStar {
        #[arg(long)]
        premises: PathBuf,
        /// An attribute list such as "B C D H".
        #[arg(long)]
        antecedent: String,
        #[arg(long, default_value = "1e-6")]
        tol: String,
        #[arg(long)]
        json: bool,
    },
    /// Check whether the rule set enforces homogeneity.
    Nice {
        #[arg(long)]
        premises: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Drop rules entailed by the others at confidence GAMMA.
    Prune {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        rules: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a dataset satisfying the premises and failing the conclusion.
    Counterexample {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        premises: PathBuf,
        #[arg(long)]
        conclusion: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    Lp,
    Charact,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Lp => Method::Lp,
            MethodArg::Charact => Method::Characterization,
        }
    }
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(Failure::Io(path, e)) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ResourceCap { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn seal(universe: Universe, cap: usize) -> Result<Arc<Universe>, Failure> {
    Ok(Arc::new(universe.with_enumeration_cap(cap)?))
}

/// Premises from a file plus a conclusion string, over one universe.
fn load_query(cli: &Cli, premises: &Path, conclusion: &str, gamma: &str) -> Result<EntailmentQuery, Failure> {
    let gamma = parse_gamma(gamma)?;
    let mut universe = Universe::empty();
    let rules = parse_rules_into(&read(premises)?, &mut universe)?;
    let conclusion = parse_implication(conclusion, &mut universe)?;
    let universe = seal(universe, cli.max_attrs)?;
    Ok(EntailmentQuery::new(
        ImplicationSet::new(universe, rules)?,
        conclusion,
        gamma,
    )?)
}

fn load_rules(cli: &Cli, path: &Path) -> Result<ImplicationSet, Failure> {
    let mut universe = Universe::empty();
    let rules = parse_rules_into(&read(path)?, &mut universe)?;
    Ok(ImplicationSet::new(seal(universe, cli.max_attrs)?, rules)?)
}

fn fractions(values: &[Rational]) -> Vec<String> {
    values.iter().map(to_fraction_string).collect()
}

fn dataset_json(d: &Dataset) -> Value {
    let map: Map<String, Value> = d.iter().map(|(z, c)| (d.universe().format(z), json!(c))).collect();
    Value::Object(map)
}

fn write_dataset(out: &mut dyn Write, d: &Dataset) -> std::io::Result<()> {
    let width = d.iter().map(|(_, c)| c.to_string().len()).max().unwrap_or(1);
    for (z, c) in d.iter() {
        let items = if z == AttrSet::EMPTY {
            "(empty)".to_string()
        } else {
            d.universe().format(z)
        };
        writeln!(out, "  {c:>width$}  {items}")?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, value: Value) {
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&value).expect("plain JSON values")
    );
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Entail {
            gamma,
            premises,
            conclusion,
            method,
            json,
        } => {
            let q = load_query(cli, premises, conclusion, gamma)?;
            let v = decide(&q, (*method).into())?;
            if *json {
                emit(
                    out,
                    json!({
                        "holds": v.holds,
                        "regime": v.regime.name(),
                        "lambda": v.certificate.as_deref().map(fractions),
                        "counterexample": v.counterexample.as_ref().map(dataset_json),
                    }),
                );
            } else {
                let verdict = if v.holds { "holds" } else { "does not hold" };
                let _ = writeln!(
                    out,
                    "{verdict} at gamma = {} (regime: {})",
                    to_fraction_string(q.gamma()),
                    v.regime
                );
                if let Some(lambda) = &v.certificate {
                    let _ = writeln!(out, "lambda: {}", fractions(lambda).join(" "));
                }
                if let Some(d) = &v.counterexample {
                    let _ = writeln!(out, "counterexample (multiplicity, transaction):");
                    let _ = write_dataset(out, d);
                }
            }
            Ok(if v.holds { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::GammaStar {
            premises,
            antecedent,
            tol,
            json,
        } => {
            let tol = parse_rational(tol)?;
            let mut universe = Universe::empty();
            let rules = parse_rules_into(&read(premises)?, &mut universe)?;
            let x0 = parse_attrs(antecedent, &mut universe)?;
            let sigma = ImplicationSet::new(seal(universe, cli.max_attrs)?, rules)?;
            let r = gamma_star(&sigma, x0, &tol)?;
            let mid = to_f64(&r.midpoint());
            if *json {
                emit(
                    out,
                    json!({
                        "gamma_star_lower": to_fraction_string(&r.lower),
                        "gamma_star_upper": to_fraction_string(&r.upper),
                        "gamma_star_midpoint_approx": mid,
                        "lambda": fractions(&r.lambda_at_upper),
                    }),
                );
            } else {
                let _ = writeln!(
                    out,
                    "gamma* in [{:.8}, {:.8}] (approx. {mid:.6})",
                    to_f64(&r.lower),
                    to_f64(&r.upper)
                );
                let _ = writeln!(out, "lower: {}", to_fraction_string(&r.lower));
                let _ = writeln!(out, "upper: {}", to_fraction_string(&r.upper));
                let _ = writeln!(out, "lambda at upper: {}", fractions(&r.lambda_at_upper).join(" "));
            }
            Ok(EXIT_TRUE)
        }
        Command::Nice { premises, json } => {
            let sigma = load_rules(cli, premises)?;
            let nice = enforces_homogeneity(&sigma);
            if *json {
                emit(out, json!({ "holds": nice }));
            } else {
                let _ = writeln!(
                    out,
                    "{}",
                    if nice {
                        "enforces homogeneity"
                    } else {
                        "does not enforce homogeneity"
                    }
                );
            }
            Ok(if nice { EXIT_TRUE } else { EXIT_FALSE })
        }
        Command::Prune { gamma, rules, json } => {
            let gamma = parse_gamma(gamma)?;
            let sigma = load_rules(cli, rules)?;
            let kept = prune(&sigma, &gamma)?;
            if *json {
                let rules: Vec<String> = kept.iter().map(|r| kept.format_implication(r)).collect();
                emit(out, json!({ "rules": rules, "removed": sigma.len() - kept.len() }));
            } else {
                let _ = write!(out, "{}", format_rules(&kept));
            }
            Ok(EXIT_TRUE)
        }
        Command::Counterexample {
            gamma,
            premises,
            conclusion,
            json,
        } => {
            let q = load_query(cli, premises, conclusion, gamma)?;
            let d = find_counterexample(&q)?;
            if *json {
                emit(
                    out,
                    json!({ "holds": d.is_none(), "counterexample": d.as_ref().map(dataset_json) }),
                );
            } else {
                match &d {
                    Some(d) => {
                        let _ = writeln!(out, "counterexample (multiplicity, transaction):");
                        let _ = write_dataset(out, d);
                    }
                    None => {
                        let _ = writeln!(out, "entailment holds; no counterexample exists");
                    }
                }
            }
            Ok(if d.is_some() { EXIT_TRUE } else { EXIT_FALSE })
        }
    }
}
