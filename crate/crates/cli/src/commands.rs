//! Command definitions and dispatch.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use darboux_core::{
    barrow_check, change_var_check, decide_integrability, integral_enclosure, verify_gp,
    BarrowVerdict, CvVerdict, Domain, Error as CoreError, FuncSpec, GpVerdict, IntegralResult,
    Integrand, Partition, PrimitiveSpec, Rational, Status, Substitution, DEFAULT_MAX_DEPTH,
};
use thiserror::Error;

use crate::parser::{parse_funcspec, parse_primitive, ParseError};
use crate::report::{write_csv, Row};
use crate::suite::run_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

fn rational_arg(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn positive_rational_arg(s: &str) -> Result<Rational, String> {
    let r = rational_arg(s)?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err(format!("must be positive, got {r}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "darboux",
    version,
    about = "Exact Darboux enclosures, generalized primitives and change-of-variable checks"
)]
pub struct Cli {
    /// Target enclosure width.
    #[arg(long, global = true, default_value = "1/1000", value_parser = positive_rational_arg)]
    pub tol: Rational,

    /// Deepest bisection level.
    #[arg(long, global = true, env = "DARBOUX_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
    pub max_depth: u32,

    /// Pieces of the uniform verification grid.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..=4096))]
    pub grid: u64,

    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Write the CSV report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Exit with status 3 when a result is only inconclusive.
    #[arg(long, global = true)]
    pub strict: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enclose the integral of SPEC from A to B.
    #[command(allow_negative_numbers = true)]
    Integrate {
        #[arg(allow_hyphen_values = true)]
        spec: String,
        #[arg(value_parser = rational_arg)]
        a: Rational,
        #[arg(value_parser = rational_arg)]
        b: Rational,
    },
    /// Verify a candidate generalized primitive and decide integrability.
    Primitive {
        /// `linear:λ`, `lower`, `upper` or a function expression.
        #[arg(long = "F", allow_hyphen_values = true)]
        prim: String,
        #[arg(long = "f", allow_hyphen_values = true)]
        f: String,
    },
    /// Check the change-of-variable formula for G(t) = c + ∫ g.
    #[command(allow_negative_numbers = true)]
    Changevar {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value = "0", value_parser = rational_arg)]
        c: Rational,
    },
    /// Run every acceptance check.
    Suite,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("cannot write report: {0}")]
    Io(#[from] io::Error),
    #[error("cannot write report: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Csv(_) => EXIT_VIOLATION,
            _ => EXIT_BAD_INPUT,
        }
    }
}

/// Rows produced by a command and the exit status they imply.
#[derive(Debug)]
pub struct Outcome {
    pub rows: Vec<Row>,
    pub code: i32,
}

struct Severity {
    violation: bool,
    inconclusive: bool,
}

impl Severity {
    fn new() -> Self {
        Severity {
            violation: false,
            inconclusive: false,
        }
    }

    fn status(&mut self, s: &Status) {
        self.inconclusive |= matches!(s, Status::Inconclusive);
    }

    fn code(&self, strict: bool) -> i32 {
        if self.violation {
            EXIT_VIOLATION
        } else if strict && self.inconclusive {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        }
    }
}

/// Non-integrability certificates are searched among these.
pub fn primitive_family(
    f: &FuncSpec,
    user: Option<&PrimitiveSpec>,
    tol: &Rational,
    max_depth: u32,
) -> Vec<PrimitiveSpec> {
    let mut family: Vec<PrimitiveSpec> = user.into_iter().cloned().collect();
    family.extend([
        PrimitiveSpec::Linear(Rational::zero()),
        PrimitiveSpec::lower_of(f),
        PrimitiveSpec::upper_of(f),
    ]);
    family
        .into_iter()
        .map(|p| p.with_precision(tol.clone(), max_depth))
        .collect()
}

fn witness_summary(r: &IntegralResult) -> String {
    match &r.status {
        Status::NotIntegrable(w) => {
            format!("{} vs {} spread {}", w.first, w.second, w.difference.spread)
        }
        _ => String::new(),
    }
}

/// `∫_a^b f` with an integrability decision when refinement stalls.
pub fn integrate(
    f: &FuncSpec,
    a: &Rational,
    b: &Rational,
    tol: &Rational,
    max_depth: u32,
    grid: usize,
) -> Result<IntegralResult, CoreError> {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    f.check_interval(lo, hi)?;
    if a == b {
        return integral_enclosure(f, a, b, tol, max_depth);
    }
    let restricted = f.with_domain(Domain::new(lo.clone(), hi.clone())?);
    let family = primitive_family(&restricted, None, tol, max_depth);
    let r = decide_integrability(&restricted, &family, tol, max_depth, grid)?;
    Ok(if a < b { r } else { r.negated() })
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let grid = cli.grid as usize;
    let mut sev = Severity::new();
    let rows = match &cli.command {
        Command::Integrate { spec, a, b } => {
            let f = parse_funcspec(spec)?;
            let r = integrate(&f, a, b, &cli.tol, cli.max_depth, grid)?;
            sev.status(&r.status);
            vec![Row::new("1", "integrate", format!("{f} from {a} to {b}"))
                .integral(&r)
                .verdict(witness_summary(&r))]
        }
        Command::Primitive { prim, f } => {
            let f = parse_funcspec(f)?;
            let prim = parse_primitive(prim, &f)?.with_precision(cli.tol.clone(), cli.max_depth);
            let dom = f.domain().clone();
            let partition = Partition::uniform(&dom.lo, &dom.hi, grid)?;
            let gp = verify_gp(&prim, &f, &partition)?;
            sev.violation |= gp.verdict == GpVerdict::Fail;
            sev.inconclusive |= gp.verdict == GpVerdict::Undecided;
            let mut rows = vec![
                Row::new("1", "verify_gp", format!("F={prim} f={f} grid={grid}"))
                    .status(format!(
                        "pairs={} violations={} undecided={}",
                        gp.checked_pairs,
                        gp.violations.len(),
                        gp.undecided_pairs
                    ))
                    .verdict(gp.verdict),
            ];
            if gp.verdict == GpVerdict::Pass {
                let b = barrow_check(&f, &dom.lo, &dom.hi, &prim, &cli.tol, cli.max_depth)?;
                sev.violation |= b.verdict == BarrowVerdict::Inconsistent;
                rows.push(
                    Row::new("2", "barrow", format!("F({})-F({})", dom.hi, dom.lo))
                        .enclosure(&b.increment)
                        .status(b.integral.status.label())
                        .verdict(b.verdict),
                );
            }
            let family = primitive_family(&f, Some(&prim), &cli.tol, cli.max_depth);
            let r = decide_integrability(&f, &family, &cli.tol, cli.max_depth, grid)?;
            sev.status(&r.status);
            rows.push(
                Row::new(
                    format!("{}", rows.len() + 1),
                    "integrability",
                    f.to_string(),
                )
                .integral(&r)
                .verdict(witness_summary(&r)),
            );
            rows
        }
        Command::Changevar { f, g, c } => {
            let f = parse_funcspec(f)?;
            let g = parse_funcspec(g)?;
            let sub = Arc::new(Substitution::new(
                g.clone(),
                c.clone(),
                cli.tol.clone(),
                cli.max_depth,
            )?);
            let rep = change_var_check(&f, sub, &cli.tol, cli.max_depth)?;
            sev.violation |= rep.verdict == CvVerdict::Violation;
            sev.inconclusive |= rep.verdict == CvVerdict::Inconclusive;
            let summary = format!("f={f} g={g} c={c}");
            vec![
                Row::new("1", "changevar_lhs", summary.clone())
                    .integral(&rep.lhs)
                    .verdict(rep.verdict),
                Row::new("2", "changevar_rhs", summary)
                    .integral(&rep.rhs)
                    .verdict(rep.verdict),
            ]
        }
        Command::Suite => {
            let suite = run_suite(cli.seed);
            sev.violation |= !suite.passed();
            suite.rows
        }
    };
    Ok(Outcome {
        code: sev.code(cli.strict),
        rows,
    })
}

/// Runs the command and writes its report; returns the process exit status.
pub fn execute(cli: &Cli) -> i32 {
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cli.out {
        Some(path) => File::create(path)
            .map_err(CliError::from)
            .and_then(|f| write_csv(f, &outcome.rows).map_err(CliError::from)),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(&mut lock, &outcome.rows)
                .map_err(CliError::from)
                .and_then(|_| lock.flush().map_err(CliError::from))
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    outcome.code
}
