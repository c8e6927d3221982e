use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ineq_core::function_catalog::{ClassKind, GridSpec};
use ineq_core::quadrature::ToleranceSpec;
use ineq_core::verifier::VerifyTolerance;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "ineq",
    version,
    about = "Numerically verify or falsify weighted-product integral inequalities",
    args_override_self = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one bound: quadrature of the left-hand side against the closed form.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
    /// Compare the two integral forms of the change-of-variables identity.
    #[command(args_override_self = true)]
    Identity(IdentityArgs),
    /// Verify a grid of functions, classes and exponents.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Seeded random search for counterexamples among generated class members.
    #[command(args_override_self = true)]
    Falsify(FalsifyArgs),
    /// List the built-in functions.
    #[command(args_override_self = true)]
    Catalog(CatalogArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Identity(_) => "identity",
            Command::Sweep(_) => "sweep",
            Command::Falsify(_) => "falsify",
            Command::Catalog(_) => "catalog",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Verify(a) => &a.output,
            Command::Identity(a) => &a.output,
            Command::Sweep(a) => &a.output,
            Command::Falsify(a) => &a.output,
            Command::Catalog(a) => &a.output,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Flat key=value file of flag defaults; flags on the command line win.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IntervalArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub b: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ToleranceArgs {
    /// Absolute quadrature tolerance.
    #[arg(long, default_value = "1e-12")]
    pub atol: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value = "1e-10")]
    pub rtol: f64,
    #[arg(long, default_value_t = 4096)]
    pub max_subdivisions: usize,
    /// Absolute margin before a violation is declared.
    #[arg(long, default_value = "1e-9")]
    pub verdict_atol: f64,
    /// Relative margin (times |rhs|) before a violation is declared.
    #[arg(long, default_value = "1e-8")]
    pub verdict_rtol: f64,
    /// Slack allowed on the class-defining inequality during certification.
    #[arg(long, default_value = "1e-9")]
    pub cert_tol: f64,
    /// Certification grid as XxYxL (x nodes, y nodes, lambda nodes).
    #[arg(long, default_value = "101x101x99", value_parser = parse_grid)]
    #[serde(serialize_with = "serialize_grid")]
    pub grid: GridSpec,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> VerifyTolerance {
        VerifyTolerance {
            quadrature: ToleranceSpec {
                atol: self.atol,
                rtol: self.rtol,
                max_subdivisions: self.max_subdivisions,
            },
            verdict_atol: self.verdict_atol,
            verdict_rtol: self.verdict_rtol,
            certification_tol: self.cert_tol,
            grid: self.grid,
        }
    }
}

fn serialize_grid<S: serde::Serializer>(grid: &GridSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&grid.descriptor())
}

fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<usize> = text
        .split('x')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x_nodes, y_nodes, lambda_nodes] => Ok(GridSpec {
            x_nodes,
            y_nodes,
            lambda_nodes,
        }),
        _ => Err(format!("expected XxYxL, got {text:?}")),
    }
}

fn parse_class(text: &str) -> Result<ClassKind, String> {
    text.parse().map_err(|e: ineq_core::function_catalog::CatalogError| e.to_string())
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    match text.split_once(',') {
        Some((lo, hi)) => {
            let lo = lo.trim().parse::<f64>().map_err(|e| e.to_string())?;
            let hi = hi.trim().parse::<f64>().map_err(|e| e.to_string())?;
            Ok((lo, hi))
        }
        None => Err(format!("expected LO,HI, got {text:?}")),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    /// Catalog function id (see `ineq catalog`).
    #[arg(long = "fn", value_name = "ID")]
    pub function: String,
    #[arg(long, value_parser = parse_class, value_name = "s-convex|convex|quasi|p|q")]
    pub class: ClassKind,
    /// Exponent of the s-convex class; required for s-convex only.
    #[arg(long)]
    pub s: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long = "fn", value_name = "ID")]
    pub function: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub interval: IntervalArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub q: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Comma-separated catalog ids.
    #[arg(long = "fn", value_name = "ID,...", value_delimiter = ',', required = true)]
    pub functions: Vec<String>,
    /// Comma-separated class names.
    #[arg(long = "class", value_delimiter = ',', value_parser = parse_class, required = true)]
    pub classes: Vec<ClassKind>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub p_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub q_grid: Vec<f64>,
    /// s values for s-convex entries.
    #[arg(long, value_delimiter = ',')]
    pub s_grid: Vec<f64>,
    /// Pair p_grid with itself (p = q) instead of taking p_grid × q_grid.
    #[arg(long)]
    pub diagonal: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub interval: IntervalArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FalsifyArgs {
    #[arg(long, value_parser = parse_class)]
    pub class: ClassKind,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Base seed; falls back to INEQ_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub a_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub width_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub p_range: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub q_range: Option<(f64, f64)>,
    /// Draw s per trial from this range (s-convex only).
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub s_range: Option<(f64, f64)>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CatalogArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub interval: IntervalArgs,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
