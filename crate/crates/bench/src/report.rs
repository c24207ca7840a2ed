//! Aggregated experiment results and their CSV, markdown and JSON-lines forms.

use crate::{Error, Result};
use ils_core::Cost;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub instance: String,
    pub combination: String,
    #[serde(default)]
    pub strength: Option<String>,
    pub seed: u64,
    pub best_cost: Cost,
    #[serde(default)]
    pub best_known: Option<Cost>,
    pub iterations: u64,
    pub local_searches: u64,
    pub elapsed: f64,
    /// `(iteration, best cost)` samples, empty unless requested.
    #[serde(default)]
    pub trajectory: Vec<(u64, Cost)>,
}

/// Aggregate over every seed of one (instance, combination, strength) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub instance: String,
    pub combination: String,
    pub strength: Option<String>,
    pub runs: usize,
    pub mean_cost: f64,
    pub min_cost: Cost,
    pub max_cost: Cost,
    pub best_known: Option<Cost>,
    /// `100 · (mean cost − best known) / best known`.
    pub mean_excess_pct: Option<f64>,
    pub mean_local_searches: f64,
    pub mean_iterations: f64,
    pub mean_elapsed: f64,
    /// Mean best cost at shared sample points.
    pub trajectory: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub runs: Vec<RunResult>,
}

impl Report {
    /// Groups runs by cell, in order of first appearance, and aggregates.
    /// The result depends only on the runs and their order.
    pub fn aggregate(runs: Vec<RunResult>) -> Result<Self> {
        let mut groups: Vec<Vec<&RunResult>> = Vec::new();
        for r in &runs {
            let key = (&r.instance, &r.combination, &r.strength);
            match groups
                .iter_mut()
                .find(|g| (&g[0].instance, &g[0].combination, &g[0].strength) == key)
            {
                Some(g) => g.push(r),
                None => groups.push(vec![r]),
            }
        }
        let rows = groups.iter().map(|g| aggregate_cell(g)).collect::<Result<_>>()?;
        Ok(Report { rows, runs })
    }

    /// Rebuilds a report from the `run` lines of its JSON-lines form.
    pub fn from_json_lines(text: &str) -> Result<Self> {
        let mut runs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: Record = serde_json::from_str(line)
                .map_err(|e| Error::Data(format!("line {}: {e}", i + 1)))?;
            if let Record::Run(r) = record {
                runs.push(r);
            }
        }
        Self::aggregate(runs)
    }

    fn has_sweep(&self) -> bool {
        self.rows.iter().any(|r| r.strength.is_some())
    }
}

fn aggregate_cell(group: &[&RunResult]) -> Result<ReportRow> {
    let first = group[0];
    let n = group.len();
    if let Some(r) = group.iter().find(|r| r.best_known != first.best_known) {
        return Err(Error::Data(format!(
            "runs of {} disagree on the best-known cost ({:?} vs {:?})",
            first.instance, first.best_known, r.best_known
        )));
    }
    let cost_sum: i128 = group.iter().map(|r| r.best_cost as i128).sum();
    let mean_cost = cost_sum as f64 / n as f64;
    let mean_excess_pct = first.best_known.map(|bk| {
        let excess = cost_sum - n as i128 * bk as i128;
        100.0 * excess as f64 / (n as i128 * bk as i128) as f64
    });
    let ls: u128 = group.iter().map(|r| r.local_searches as u128).sum();
    let its: u128 = group.iter().map(|r| r.iterations as u128).sum();
    let elapsed: f64 = group.iter().map(|r| r.elapsed).sum();
    Ok(ReportRow {
        instance: first.instance.clone(),
        combination: first.combination.clone(),
        strength: first.strength.clone(),
        runs: n,
        mean_cost,
        min_cost: group.iter().map(|r| r.best_cost).min().unwrap_or_default(),
        max_cost: group.iter().map(|r| r.best_cost).max().unwrap_or_default(),
        best_known: first.best_known,
        mean_excess_pct,
        mean_local_searches: ls as f64 / n as f64,
        mean_iterations: its as f64 / n as f64,
        mean_elapsed: elapsed / n as f64,
        trajectory: mean_trajectory(group),
    })
}

/// Sample points present in every run, with the mean best cost at each.
fn mean_trajectory(group: &[&RunResult]) -> Vec<(u64, f64)> {
    let shortest = group.iter().map(|r| r.trajectory.len()).min().unwrap_or(0);
    (0..shortest)
        .map_while(|k| {
            let it = group[0].trajectory[k].0;
            if group.iter().any(|r| r.trajectory[k].0 != it) {
                return None;
            }
            let sum: i128 = group.iter().map(|r| r.trajectory[k].1 as i128).sum();
            Some((it, sum as f64 / group.len() as f64))
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record {
    Run(RunResult),
    /// Aggregate rows are recomputed, not read back.
    #[serde(other)]
    Other,
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RecordRef<'a> {
    Run(&'a RunResult),
    Row(&'a ReportRow),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
    JsonLines,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Markdown => "md",
            Format::JsonLines => "jsonl",
        }
    }
}

pub const CSV_HEADER: [&str; 12] = [
    "instance",
    "combination",
    "strength",
    "runs",
    "mean_cost",
    "min_cost",
    "max_cost",
    "best_known",
    "mean_excess_pct",
    "mean_local_searches",
    "mean_iterations",
    "mean_elapsed_s",
];

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => csv(report),
        Format::Markdown => markdown(report),
        Format::JsonLines => json_lines(report),
    }
    .into_bytes()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

fn row_fields(r: &ReportRow) -> [String; 12] {
    [
        r.instance.clone(),
        r.combination.clone(),
        opt(&r.strength),
        r.runs.to_string(),
        r.mean_cost.to_string(),
        r.min_cost.to_string(),
        r.max_cost.to_string(),
        opt(&r.best_known),
        opt(&r.mean_excess_pct),
        r.mean_local_searches.to_string(),
        r.mean_iterations.to_string(),
        r.mean_elapsed.to_string(),
    ]
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

fn csv(report: &Report) -> String {
    let mut out = CSV_HEADER.join(",");
    out.push_str("\r\n");
    for r in &report.rows {
        let fields: Vec<String> = row_fields(r).iter().map(|f| csv_field(f)).collect();
        out.push_str(&fields.join(","));
        out.push_str("\r\n");
    }
    out
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Mean excess when a baseline exists, else mean cost.
fn headline(r: &ReportRow) -> String {
    match r.mean_excess_pct {
        Some(e) => format!("{e:.2}%"),
        None => format!("{:.1}", r.mean_cost),
    }
}

fn markdown(report: &Report) -> String {
    let mut out = String::new();
    let flat: Vec<&ReportRow> = report.rows.iter().filter(|r| r.strength.is_none()).collect();
    if !flat.is_empty() || !report.has_sweep() {
        out.push_str(
            "| instance | combination | runs | mean cost | min | max | best known | excess % | mean #LS | mean time (s) |\n",
        );
        out.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|---:|\n");
        for r in flat {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {:.1} | {} | {} | {} | {} | {:.1} | {:.2} |",
                md_cell(&r.instance),
                md_cell(&r.combination),
                r.runs,
                r.mean_cost,
                r.min_cost,
                r.max_cost,
                opt(&r.best_known),
                r.mean_excess_pct.map(|e| format!("{e:.2}")).unwrap_or_default(),
                r.mean_local_searches,
                r.mean_elapsed,
            );
        }
    }

    // Sweeps: instances down, strengths across, one table per combination.
    let mut combos: Vec<&str> = Vec::new();
    for r in report.rows.iter().filter(|r| r.strength.is_some()) {
        if !combos.contains(&r.combination.as_str()) {
            combos.push(&r.combination);
        }
    }
    for combo in combos {
        let cells: Vec<&ReportRow> = report
            .rows
            .iter()
            .filter(|r| r.combination == combo && r.strength.is_some())
            .collect();
        let mut strengths: Vec<&str> = Vec::new();
        let mut instances: Vec<&str> = Vec::new();
        for r in &cells {
            let s = r.strength.as_deref().unwrap_or_default();
            if !strengths.contains(&s) {
                strengths.push(s);
            }
            if !instances.contains(&r.instance.as_str()) {
                instances.push(&r.instance);
            }
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "### {}\n", md_cell(combo));
        out.push_str("| instance |");
        for s in &strengths {
            let _ = write!(out, " {} |", md_cell(s));
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(strengths.len()));
        out.push('\n');
        for inst in instances {
            let _ = write!(out, "| {} |", md_cell(inst));
            for s in &strengths {
                let cell = cells
                    .iter()
                    .find(|r| r.instance == inst && r.strength.as_deref() == Some(s))
                    .map(|r| headline(r))
                    .unwrap_or_default();
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
    }
    out
}

fn json_lines(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.runs {
        out.push_str(&serde_json::to_string(&RecordRef::Run(r)).expect("serializable"));
        out.push('\n');
    }
    for r in &report.rows {
        out.push_str(&serde_json::to_string(&RecordRef::Row(r)).expect("serializable"));
        out.push('\n');
    }
    out
}
