//! Argument parsing and command dispatch.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use densecode_core::{
    construct_plan, decide_perfect, entanglement_entropy, maximal_baseline, optimize_shared, plan_with_shared,
    prop2_bound, prop2_bound_for_pair, run_protocol, schmidt_decompose, Method, SimulationConfig,
};

use crate::error::CliError;
use crate::report::{
    AnalyzePayload, BaselinePayload, BoundPayload, OptimizePayload, PlanPayload, Report, SchmidtPayload,
    SimulatePayload,
};
use crate::state_file::{parse_shared_file, parse_state, read_bytes};

#[derive(Debug, Parser)]
#[command(name = "densecode", version, about = "Remote preparation of bipartite pure states from a shared entangled resource")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Numerical tolerance for predicates and spectral routines.
    #[arg(long, global = true, default_value_t = densecode_core::DEFAULT_TOL)]
    pub tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Grid,
    NelderMead,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Grid => Method::Grid,
            MethodArg::NelderMead => Method::NelderMead,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Column Gram matrix and perfect-preparability verdict.
    Analyze { file: PathBuf },
    /// Shared state, sender operation and Kraus pair for the column-norm resource.
    Plan { file: PathBuf },
    /// Success probability with a maximally entangled resource.
    Baseline { file: PathBuf },
    /// Closed-form bound for a target with one non-orthogonal column pair.
    Bound {
        file: PathBuf,
        /// Violating column pair, 0-based.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// Schmidt coefficients, bases and entanglement entropy.
    Schmidt { file: PathBuf },
    /// Monte-Carlo run of the two-outcome measurement.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shared-state override: {"c": [[re, im], ...], "perm_a": [...], "perm_b": [...]}.
        #[arg(long)]
        shared: Option<PathBuf>,
    },
    /// Search shared-state weights for the best success probability.
    Optimize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::NelderMead)]
        method: MethodArg,
        /// Maximum objective evaluations.
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected j1,j2, got `{s}`"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((parse(a)?, parse(b)?))
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Plan { .. } => "plan",
            Command::Baseline { .. } => "baseline",
            Command::Bound { .. } => "bound",
            Command::Schmidt { .. } => "schmidt",
            Command::Simulate { .. } => "simulate",
            Command::Optimize { .. } => "optimize",
        }
    }

    fn file(&self) -> &PathBuf {
        match self {
            Command::Analyze { file }
            | Command::Plan { file }
            | Command::Baseline { file }
            | Command::Bound { file, .. }
            | Command::Schmidt { file }
            | Command::Simulate { file, .. }
            | Command::Optimize { file, .. } => file,
        }
    }
}

fn json(payload: impl serde::Serialize) -> serde_json::Value {
    serde_json::to_value(payload).expect("payload serializes")
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive and finite, got {tol}")));
    }
    let path = cli.command.file();
    let bytes = read_bytes(path)?;
    let t = parse_state(path, &bytes, tol)?;
    let name = cli.command.name();
    let report = |payload: serde_json::Value| Ok(Report::new(name, &bytes, payload));

    match &cli.command {
        Command::Analyze { .. } => report(json(AnalyzePayload::from(&decide_perfect(&t, tol)))),
        Command::Plan { .. } => report(json(PlanPayload::from(&construct_plan(&t, tol)?))),
        Command::Baseline { .. } => {
            report(json(BaselinePayload { success_prob: maximal_baseline(&t, tol)? }))
        }
        Command::Bound { pair, .. } => {
            let r = match pair {
                Some((k1, k2)) => prop2_bound_for_pair(&t, *k1, *k2, tol)?,
                None => prop2_bound(&t, tol)?,
            };
            report(json(BoundPayload::from(&r)))
        }
        Command::Schmidt { .. } => {
            let s = schmidt_decompose(&t, tol)?;
            report(json(SchmidtPayload::new(&s, entanglement_entropy(&s))))
        }
        Command::Simulate { trials, seed, shared, .. } => {
            let plan = match shared {
                Some(p) => plan_with_shared(&t, &parse_shared_file(p, tol)?, tol)?,
                None => construct_plan(&t, tol)?,
            };
            let cfg = SimulationConfig { trials: *trials, seed: *seed, tol };
            let r = run_protocol(&plan, &t, &cfg)?;
            report(json(SimulatePayload::new(*seed, &r)))
        }
        Command::Optimize { method, budget, .. } => {
            let r = optimize_shared(&t, (*method).into(), *budget, tol)?;
            report(json(OptimizePayload::from(&r)))
        }
    }
}

/// Exit code and the bytes destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 1, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let mut stdout = match cli.output {
                OutputFormat::Json => report.to_json(),
                OutputFormat::Text => report.to_text(),
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome { code: 0, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("0,2"), Ok((0, 2)));
        assert_eq!(parse_pair(" 1 , 3"), Ok((1, 3)));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("a,1").is_err());
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["densecode", "simulate", "x.json"]).unwrap();
        assert_eq!(cli.tol, 1e-9);
        assert_eq!(cli.output, OutputFormat::Json);
        match cli.command {
            Command::Simulate { trials, seed, shared, .. } => {
                assert_eq!((trials, seed), (100_000, 0));
                assert!(shared.is_none());
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from(["densecode", "optimize", "x.json", "--method", "grid"]).unwrap();
        assert!(matches!(cli.command, Command::Optimize { method: MethodArg::Grid, budget: 20_000, .. }));
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["densecode", "frobnicate"]).code, 1);
        assert_eq!(run(["densecode", "bound", "x.json", "--pair", "1"]).code, 1);
        assert_eq!(run(["densecode", "--help"]).code, 0);
    }
}
