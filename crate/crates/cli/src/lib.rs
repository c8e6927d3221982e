//! The `ineq` command line: verification, identity checks, sweeps,
//! falsification and catalog listing with JSON, CSV or table output.
//!
//! Exit codes: 0 every report holds, 1 any violated, 2 any inconclusive (and
//! none violated), 3 usage or domain error.

pub mod args;
mod config_file;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::error::ErrorKind;
use clap::Parser;
use ineq_core::function_catalog::{builtin_catalog_on, catalog_function, ClassKind};
use ineq_core::verifier::{
    check_identity, falsify, sweep, verify, Pairing, ProblemSpec, ProblemTemplate, SweepConfig,
    VerifierError,
};
use serde_json::json;
use thiserror::Error;

use args::{CatalogArgs, Cli, Command, FalsifyArgs, IdentityArgs, SweepArgs, VerifyArgs};
use output::{Counts, Document};

pub const EXIT_USAGE: i32 = 3;

/// Environment variable supplying the default falsification seed.
pub const SEED_ENV: &str = "INEQ_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl From<VerifierError> for CliError {
    fn from(e: VerifierError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ineq_core::function_catalog::CatalogError> for CliError {
    fn from(e: ineq_core::function_catalog::CatalogError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Run with the process environment and standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(argv, env_seed.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

/// Run against explicit streams; `env_seed` stands in for `INEQ_SEED`.
pub fn run_with<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    match execute(argv, env_seed, out) {
        Ok(code) => code,
        Err(Failure::Clap(e)) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = write!(out, "{e}");
                0
            }
            _ => {
                // First paragraph of clap's message, folded onto one line.
                let rendered = e.to_string();
                let line: Vec<&str> = rendered
                    .lines()
                    .take_while(|l| !l.trim().is_empty())
                    .map(str::trim)
                    .collect();
                let line = line.join(" ");
                let _ = writeln!(err, "ineq: {}", line.trim_start_matches("error: "));
                EXIT_USAGE
            }
        },
        Err(Failure::Cli(e)) => {
            let _ = writeln!(err, "ineq: {e}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Clap(clap::Error),
    Cli(CliError),
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        Failure::Cli(e)
    }
}

fn execute(argv: Vec<OsString>, env_seed: Option<&str>, out: &mut dyn Write) -> Result<i32, Failure> {
    let argv = config_file::expand(argv)?;
    let cli = Cli::try_parse_from(argv).map_err(Failure::Clap)?;
    let document = match &cli.command {
        Command::Verify(a) => run_verify(a)?,
        Command::Identity(a) => run_identity(a)?,
        Command::Sweep(a) => run_sweep(a)?,
        Command::Falsify(a) => run_falsify(a, env_seed)?,
        Command::Catalog(a) => run_catalog(a)?,
    };
    let target = cli.command.output();
    let code = if document.command == "catalog" {
        0
    } else {
        Counts::of(&document.reports).exit_code()
    };
    match &target.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            document.write(target.format, &mut writer)?;
            writer.flush().map_err(CliError::from)?;
        }
        None => document.write(target.format, out)?,
    }
    Ok(code)
}

fn summary(command: &str, reports: &[ineq_core::verifier::VerificationReport]) -> serde_json::Value {
    let counts = Counts::of(reports);
    json!({
        "reports": reports.len(),
        "holds": counts.holds,
        "violated": counts.violated,
        "inconclusive": counts.inconclusive,
        "exit_code": if command == "catalog" { 0 } else { counts.exit_code() },
    })
}

fn document(
    command: &'static str,
    config: serde_json::Value,
    reports: Vec<ineq_core::verifier::VerificationReport>,
) -> Document {
    Document {
        command,
        summary: summary(command, &reports),
        config,
        reports,
        catalog: Vec::new(),
    }
}

fn run_verify(a: &VerifyArgs) -> Result<Document, CliError> {
    let class = a.class.with_s(a.s)?;
    let problem = ProblemSpec::new(a.interval.a, a.interval.b, a.p, a.q)?;
    let f = catalog_function(&a.function, a.interval.a, a.interval.b)?;
    let report = verify(&f, &class, &problem, &a.tolerance.resolve())?;
    Ok(document("verify", serde_json::to_value(a)?, vec![report]))
}

fn run_identity(a: &IdentityArgs) -> Result<Document, CliError> {
    let problem = ProblemSpec::new(a.interval.a, a.interval.b, a.p, a.q)?;
    let f = catalog_function(&a.function, a.interval.a, a.interval.b)?;
    let report = check_identity(&f, &problem, &a.tolerance.resolve())?;
    Ok(document("identity", serde_json::to_value(a)?, vec![report]))
}

fn run_sweep(a: &SweepArgs) -> Result<Document, CliError> {
    if a.classes.contains(&ClassKind::SConvex) && a.s_grid.is_empty() {
        return Err(CliError::Usage("--s-grid is required when sweeping s-convex".into()));
    }
    if !a.classes.contains(&ClassKind::SConvex) && !a.s_grid.is_empty() {
        return Err(CliError::Usage("--s-grid only applies to s-convex".into()));
    }
    let config = SweepConfig {
        functions: a.functions.clone(),
        classes: a.classes.clone(),
        p_grid: a.p_grid.clone(),
        q_grid: a.q_grid.clone(),
        s_grid: a.s_grid.clone(),
        interval: (a.interval.a, a.interval.b),
        pairing: if a.diagonal {
            Pairing::Diagonal
        } else {
            Pairing::Cartesian
        },
        tolerance: a.tolerance.resolve(),
    };
    let reports = sweep(&config)?;
    Ok(document("sweep", serde_json::to_value(a)?, reports))
}

fn resolve_seed(flag: Option<u64>, env_seed: Option<&str>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env_seed {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer"))),
        None => Ok(0),
    }
}

fn run_falsify(a: &FalsifyArgs, env_seed: Option<&str>) -> Result<Document, CliError> {
    let seed = resolve_seed(a.seed, env_seed)?;
    let s = match (a.class, a.s, a.s_range) {
        // A drawn s only needs a placeholder here.
        (ClassKind::SConvex, None, Some((lo, _))) => Some(lo),
        (_, s, _) => s,
    };
    if a.s_range.is_some() && a.class != ClassKind::SConvex {
        return Err(CliError::Usage("--s-range only applies to s-convex".into()));
    }
    let class = a.class.with_s(s)?;
    let mut template = ProblemTemplate::for_class(&class);
    if let Some(r) = a.a_range {
        template.a_range = r;
    }
    if let Some(r) = a.width_range {
        template.width_range = r;
    }
    if let Some(r) = a.p_range {
        template.p_range = r;
    }
    if let Some(r) = a.q_range {
        template.q_range = r;
    }
    template.s_range = a.s_range;
    let result = falsify(&class, &template, a.trials, seed, &a.tolerance.resolve())?;

    let mut config = serde_json::to_value(a)?;
    config["seed"] = json!(seed);
    config["template"] = serde_json::to_value(template)?;
    let mut reports = result.violations.clone();
    reports.extend(result.inconclusive_reports.iter().cloned());
    let summary = json!({
        "trials": result.trials,
        "seed": result.seed,
        "class": result.class,
        "holds": result.holds,
        "violated": result.violated,
        "inconclusive": result.inconclusive,
        "min_slack": result.min_slack,
        "min_slack_report": result.min_slack_report,
        "exit_code": Counts { holds: result.holds, violated: result.violated, inconclusive: result.inconclusive }.exit_code(),
    });
    Ok(Document {
        command: "falsify",
        config,
        // Holding trials are summarized; only violations and inconclusive trials are listed.
        reports,
        summary,
        catalog: Vec::new(),
    })
}

fn run_catalog(a: &CatalogArgs) -> Result<Document, CliError> {
    let catalog = builtin_catalog_on(a.interval.a, a.interval.b)?;
    let mut doc = document("catalog", serde_json::to_value(a)?, Vec::new());
    doc.summary = json!({ "functions_listed": catalog.len() });
    doc.catalog = catalog;
    Ok(doc)
}
