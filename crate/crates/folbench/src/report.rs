//! Tables of metrics with one column per variant.
//!
//! Values are rounded half-up to two decimals from the exact counts. An
//! `Avg` row is added when more than one run is reported.

use std::fmt::Write as _;
use std::str::FromStr;

use folbench_core::metrics::{Metrics, Ratio, Score};
use folbench_core::perturb::Variant;
use serde::{Deserialize, Serialize};

use crate::SCHEMA_VERSION;

/// Rendering of a missing value, such as valid accuracy with nothing parsed.
pub const NULL_CELL: &str = "—";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}' (expected markdown, csv or json)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedMetrics {
    pub name: String,
    pub metrics: Metrics,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub runs: Vec<NamedMetrics>,
}

#[derive(Clone, Copy)]
enum Measure {
    Accuracy,
    ExecutionRate,
    ValidAccuracy,
}

impl Measure {
    const ALL: [Measure; 3] = [Measure::Accuracy, Measure::ExecutionRate, Measure::ValidAccuracy];

    fn title(self) -> &'static str {
        match self {
            Measure::Accuracy => "Accuracy",
            Measure::ExecutionRate => "Execution rate",
            Measure::ValidAccuracy => "Valid accuracy",
        }
    }

    fn of(self, s: &Score) -> Option<Ratio> {
        match self {
            Measure::Accuracy => Some(s.accuracy_ratio()),
            Measure::ExecutionRate => Some(s.execution_ratio()),
            Measure::ValidAccuracy => s.valid_ratio(),
        }
    }
}

fn fixed(r: Option<Ratio>) -> String {
    r.and_then(Ratio::to_fixed2).unwrap_or_else(|| NULL_CELL.into())
}

/// `None` for a variant the run does not contain.
fn cell(m: &Metrics, measure: Measure, column: Option<Variant>) -> Option<Option<Ratio>> {
    match column {
        None => Some(measure.of(&m.overall)),
        Some(v) => m.per_variant.get(&v).map(|s| measure.of(s)),
    }
}

fn average(runs: &[NamedMetrics], measure: Measure, column: Option<Variant>) -> Option<Option<Ratio>> {
    let cells: Vec<Option<Ratio>> = runs.iter().filter_map(|r| cell(&r.metrics, measure, column)).collect();
    if cells.is_empty() {
        return None;
    }
    let values: Vec<Ratio> = cells.into_iter().flatten().collect();
    Some(Ratio::mean(&values))
}

fn columns() -> impl Iterator<Item = Option<Variant>> {
    Variant::ALL.into_iter().map(Some).chain([None])
}

fn markdown(runs: &[NamedMetrics]) -> String {
    let mut out = String::new();
    let header: Vec<&str> = Variant::ALL.iter().map(|v| v.name()).collect();
    for (i, measure) in Measure::ALL.into_iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "### {}\n", measure.title());
        let _ = writeln!(out, "| Run | {} | All |", header.join(" | "));
        let _ = writeln!(out, "|---|{}---|", "---|".repeat(header.len()));
        let mut row = |name: &str, cells: Vec<Option<Option<Ratio>>>| {
            let cells: Vec<String> = cells.into_iter().map(|c| c.map(fixed).unwrap_or_default()).collect();
            let _ = writeln!(out, "| {} | {} |", name, cells.join(" | "));
        };
        for r in runs {
            row(&r.name, columns().map(|c| cell(&r.metrics, measure, c)).collect());
        }
        if runs.len() > 1 {
            row("Avg", columns().map(|c| average(runs, measure, c)).collect());
        }
    }
    out
}

fn csv(runs: &[NamedMetrics]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header =
        ["run", "variant", "n", "correct", "parsed", "correct_parsed", "accuracy", "execution_rate", "valid_accuracy"];
    w.write_record(header).expect("in-memory write");
    for r in runs {
        for column in columns() {
            let score = match column {
                None => Some(&r.metrics.overall),
                Some(v) => r.metrics.per_variant.get(&v),
            };
            let Some(s) = score else { continue };
            let value = |m: Measure| m.of(s).and_then(Ratio::to_fixed2).unwrap_or_default();
            w.write_record([
                r.name.clone(),
                column.map_or("all", |v| v.name()).to_string(),
                s.n.to_string(),
                s.correct.to_string(),
                s.parsed.to_string(),
                s.correct_parsed.to_string(),
                value(Measure::Accuracy),
                value(Measure::ExecutionRate),
                value(Measure::ValidAccuracy),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn render(runs: &[NamedMetrics], format: ReportFormat) -> String {
    match format {
        ReportFormat::Markdown => markdown(runs),
        ReportFormat::Csv => csv(runs),
        ReportFormat::Json => {
            let doc = ReportDoc { schema_version: SCHEMA_VERSION, runs: runs.to_vec() };
            let mut s = serde_json::to_string_pretty(&doc).expect("metrics serialize");
            s.push('\n');
            s
        }
    }
}
