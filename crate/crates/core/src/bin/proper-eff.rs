use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use proper_eff::harness::selftest;
use proper_eff::io::{
    amin_report, certify_report, classify_instance, parse_instance, parse_number, render_json, render_svg,
    scalarize_report, ssp_report, ClassifyOptions, CertifyKind, InstanceFile,
};
use proper_eff::numlin::{Norm, Vector};
use proper_eff::scalarize::DEFAULT_BUDGET;
use proper_eff::Error;

/// Proper efficiency of points of finite unions of polytopes ordered by a
/// polyhedral cone.
///
/// Exit codes: 0 ok, 1 invalid input, 2 numeric failure or failed self-test,
/// 3 an Unknown verdict under --strict.
#[derive(Parser)]
#[command(name = "proper-eff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Instance JSON document.
    file: PathBuf,
    /// Override the norm of the file: l1, l2 or linf.
    #[arg(long, value_parser = parse_norm)]
    norm: Option<Norm>,
}

#[derive(Args)]
struct Pair {
    /// Functional, comma separated; entries may be `p/q`.
    #[arg(long = "f", value_parser = parse_vec, allow_hyphen_values = true)]
    f: Vector,
    #[arg(long, value_parser = parse_scalar)]
    alpha: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the query point for the requested notions.
    Classify {
        #[command(flatten)]
        input: Input,
        /// Exit 3 if any verdict is Unknown.
        #[arg(long)]
        strict: bool,
        /// Write a 2-D figure of the instance and counterexamples.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Decide the strict separation property of `cone` and `coneK`.
    Ssp {
        #[command(flatten)]
        input: Input,
    },
    /// Search a scalarization certificate.
    Certify {
        #[command(flatten)]
        input: Input,
        /// benson, ghe or tbo.
        #[arg(long, default_value = "benson", value_parser = parse_kind)]
        kind: CertifyKind,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Exit 3 if the search is exhausted.
        #[arg(long)]
        strict: bool,
    },
    /// Minimize the scalarization of a given pair over the set.
    Scalarize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
    },
    /// Decide membership of the query point in the approximate minimizers.
    Amin {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        pair: Pair,
        /// Tolerance; defaults to the bound from the approximation set.
        #[arg(long, value_parser = parse_scalar)]
        lambda: Option<f64>,
    },
    /// Run the seeded cross-check suites.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    Norm::parse(s).ok_or_else(|| format!("unknown norm {s:?}"))
}

fn parse_kind(s: &str) -> Result<CertifyKind, String> {
    CertifyKind::parse(s).ok_or_else(|| format!("unknown certificate kind {s:?}"))
}

fn parse_scalar(s: &str) -> Result<f64, String> {
    parse_number(&serde_json::Value::String(s.into()), "value").map_err(|e| e.to_string())
}

fn parse_vec(s: &str) -> Result<Vector, String> {
    s.split(',').map(parse_scalar).collect()
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn load(input: &Input) -> Result<InstanceFile, Failure> {
    let text = std::fs::read_to_string(&input.file).map_err(|e| Failure::Io(format!("{}: {e}", input.file.display())))?;
    Ok(parse_instance(&text, input.norm)?)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mut code = 0;
    let out = match cli.command {
        Command::Classify { input, strict, svg, timings } => {
            let inst = load(&input)?;
            let report = classify_instance(&inst, &ClassifyOptions { timings, ..ClassifyOptions::default() })?;
            if let Some(path) = svg {
                let figure = render_svg(&inst, Some(&report))?;
                std::fs::write(&path, figure).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            if strict && report.has_unknown() {
                code = 3;
            }
            render_json(&report)?
        }
        Command::Ssp { input } => render_json(&ssp_report(&load(&input)?)?)?,
        Command::Certify { input, kind, budget, seed, strict } => {
            let (cert, doc) = certify_report(&load(&input)?, kind, budget, seed)?;
            if strict && cert.certificate().is_none() {
                code = 3;
            }
            render_json(&doc)?
        }
        Command::Scalarize { input, pair } => render_json(&scalarize_report(&load(&input)?, pair.f, pair.alpha)?)?,
        Command::Amin { input, pair, lambda } => render_json(&amin_report(&load(&input)?, pair.f, pair.alpha, lambda)?)?,
        Command::Selftest { seed, count } => {
            let report = selftest(seed, count)?;
            let verdict = if report.passed() { "selftest passed" } else { "selftest FAILED" };
            let _ = writeln!(std::io::stdout(), "{}{verdict}", report.table());
            return Ok(if report.passed() { 0 } else { 2 });
        }
    };
    let _ = writeln!(std::io::stdout(), "{out}");
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
