//! Report documents in JSON, CSV and plain-table form.

use std::io::Write;

use ineq_core::function_catalog::FunctionSpec;
use ineq_core::verifier::{VerificationReport, Verdict};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::CliError;

/// Fixed CSV header; one report per row.
pub const CSV_HEADER: [&str; 16] = [
    "command",
    "function_id",
    "class",
    "formula_id",
    "a",
    "b",
    "p",
    "q",
    "s",
    "lhs",
    "lhs_error",
    "rhs",
    "slack",
    "ratio",
    "verdict",
    "seed",
];

/// CSV header of `catalog`.
pub const CATALOG_CSV_HEADER: [&str; 5] = ["id", "classes", "monotonicity", "symmetric", "breakpoints"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
}

impl Counts {
    pub fn of(reports: &[VerificationReport]) -> Self {
        let mut counts = Counts::default();
        for r in reports {
            match r.verdict {
                Verdict::Holds => counts.holds += 1,
                Verdict::Violated => counts.violated += 1,
                Verdict::Inconclusive => counts.inconclusive += 1,
            }
        }
        counts
    }

    /// 0 all hold, 1 any violated, 2 any inconclusive and none violated.
    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

pub struct Document {
    pub command: &'static str,
    pub config: Value,
    pub reports: Vec<VerificationReport>,
    pub summary: Value,
    pub catalog: Vec<FunctionSpec>,
}

fn float(v: f64) -> String {
    // Debug is the shortest round-trip form and switches to exponent notation
    // for very large or small magnitudes.
    format!("{v:?}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
    }
}

impl Document {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut value = json!({
            "command": self.command,
            "config": self.config,
            "reports": self.reports,
            "summary": self.summary,
        });
        if self.command == "catalog" {
            value["summary"]["functions"] = serde_json::to_value(&self.catalog)?;
        }
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        if self.command == "catalog" {
            w.write_record(CATALOG_CSV_HEADER)?;
            for f in &self.catalog {
                let classes: Vec<String> = f.declared_classes.iter().map(|c| c.to_string()).collect();
                let breakpoints: Vec<String> = f.expr.breakpoints().into_iter().map(float).collect();
                w.write_record([
                    f.id.clone(),
                    classes.join(" "),
                    serde_json::to_value(f.monotonicity)?.as_str().unwrap_or_default().to_string(),
                    f.symmetric_about_midpoint.map(|s| s.to_string()).unwrap_or_default(),
                    breakpoints.join(" "),
                ])?;
            }
        } else {
            w.write_record(CSV_HEADER)?;
            for r in &self.reports {
                w.write_record([
                    self.command.to_string(),
                    r.problem.function_id.clone(),
                    r.class.map(|c| c.kind_name().to_string()).unwrap_or_default(),
                    r.formula_id.to_string(),
                    float(r.problem.a),
                    float(r.problem.b),
                    float(r.problem.p),
                    float(r.problem.q),
                    opt_float(r.problem.s),
                    opt_float(r.lhs),
                    opt_float(r.lhs_error),
                    opt_float(r.rhs),
                    opt_float(r.slack),
                    opt_float(r.ratio),
                    verdict_name(r.verdict).to_string(),
                    r.seed.map(|s| s.to_string()).unwrap_or_default(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    fn write_table(&self, out: &mut dyn Write) -> Result<(), CliError> {
        if self.command == "catalog" {
            writeln!(out, "{:<14} {:<13} {:<9} classes", "id", "monotonicity", "symmetric")?;
            for f in &self.catalog {
                let classes: Vec<String> = f.declared_classes.iter().map(|c| c.to_string()).collect();
                let mono = serde_json::to_value(f.monotonicity)?;
                let symmetric = f.symmetric_about_midpoint.map(|s| s.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{:<14} {:<13} {:<9} {}",
                    f.id,
                    mono.as_str().unwrap_or_default(),
                    symmetric,
                    classes.join(", ")
                )?;
            }
            return Ok(());
        }
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.9e}")).unwrap_or_else(|| "-".into());
        writeln!(
            out,
            "{:<16} {:<9} {:<9} {:>6} {:>6} {:>5} {:>16} {:>16} {:>16} {:<12}",
            "function", "class", "formula", "p", "q", "s", "lhs", "rhs", "ratio", "verdict"
        )?;
        for r in &self.reports {
            writeln!(
                out,
                "{:<16} {:<9} {:<9} {:>6} {:>6} {:>5} {:>16} {:>16} {:>16} {:<12}",
                r.problem.function_id,
                r.class.map(|c| c.kind_name()).unwrap_or("-"),
                r.formula_id.as_str(),
                r.problem.p,
                r.problem.q,
                r.problem.s.map(|s| s.to_string()).unwrap_or_else(|| "-".into()),
                cell(r.lhs),
                cell(r.rhs),
                cell(r.ratio),
                verdict_name(r.verdict)
            )?;
            if let Some(note) = &r.note {
                writeln!(out, "    note: {note}")?;
            }
        }
        let counts = Counts::of(&self.reports);
        writeln!(
            out,
            "{} holds, {} violated, {} inconclusive",
            counts.holds, counts.violated, counts.inconclusive
        )?;
        Ok(())
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => out.write_all(self.to_json()?.as_bytes())?,
            Format::Csv => self.write_csv(out)?,
            Format::Table => self.write_table(out)?,
        }
        Ok(())
    }
}
