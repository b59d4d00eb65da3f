use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Usage(format!("unknown format `{other}` (csv or json)"))),
        }
    }
}

/// One (sequence, algorithm) result.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub benchmark: String,
    pub sequence_id: usize,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    /// `None` when the algorithm produced no placement (ILP export only).
    pub shifts: Option<u64>,
    /// `None` when the OFU baseline costs zero.
    pub reduction_vs_ofu: Option<f64>,
    pub runtime_us: Option<u64>,
    pub energy_pj: Option<f64>,
    pub length_bin: String,
    pub category: String,
    pub dbc_violation: bool,
    pub status: String,
}

/// Totals for one algorithm over a group of sequences. Only sequences with
/// a placement contribute.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    /// `all`, `benchmark`, `bin` or `category`.
    pub scope: String,
    pub key: String,
    pub algorithm: String,
    pub sequences: usize,
    pub shifts: u64,
    pub ofu_shifts: u64,
    /// `1 - sum(shifts) / sum(ofu)`.
    pub pooled_reduction: Option<f64>,
    /// Mean of per-sequence reductions over sequences with a non-zero baseline.
    pub mean_reduction: Option<f64>,
    pub energy_pj: f64,
    pub dbc_violations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
    pub warnings: Vec<String>,
}

impl RunReport {
    /// Sorts rows by benchmark, sequence and algorithm name.
    pub fn new(mut rows: Vec<RunRow>, warnings: Vec<String>) -> Self {
        rows.sort_by(|a, b| {
            (&a.benchmark, a.sequence_id, &a.algorithm).cmp(&(&b.benchmark, b.sequence_id, &b.algorithm))
        });
        RunReport { rows, warnings }
    }

    pub fn summary(&self) -> Vec<SummaryRow> {
        let ofu: BTreeMap<(&str, usize), u64> = self
            .rows
            .iter()
            .filter(|r| r.algorithm == "ofu")
            .filter_map(|r| Some(((r.benchmark.as_str(), r.sequence_id), r.shifts?)))
            .collect();

        type Key<'a> = (&'static str, &'a str, &'a str);
        let mut groups: BTreeMap<Key<'_>, Acc> = BTreeMap::new();
        for row in &self.rows {
            let Some(shifts) = row.shifts else { continue };
            let base = ofu.get(&(row.benchmark.as_str(), row.sequence_id)).copied().unwrap_or(0);
            for (scope, key) in [
                ("all", "all"),
                ("benchmark", row.benchmark.as_str()),
                ("bin", row.length_bin.as_str()),
                ("category", row.category.as_str()),
            ] {
                groups
                    .entry((scope, key, row.algorithm.as_str()))
                    .or_default()
                    .add(row, shifts, base);
            }
        }

        groups
            .into_iter()
            .map(|((scope, key, algorithm), acc)| SummaryRow {
                scope: scope.to_owned(),
                key: key.to_owned(),
                algorithm: algorithm.to_owned(),
                sequences: acc.sequences,
                shifts: acc.shifts,
                ofu_shifts: acc.ofu_shifts,
                pooled_reduction: (acc.ofu_shifts > 0)
                    .then(|| 1.0 - acc.shifts as f64 / acc.ofu_shifts as f64),
                mean_reduction: (acc.reductions > 0).then(|| acc.reduction_sum / acc.reductions as f64),
                energy_pj: acc.energy_pj,
                dbc_violations: acc.dbc_violations,
            })
            .collect()
    }
}

#[derive(Default)]
struct Acc {
    sequences: usize,
    shifts: u64,
    ofu_shifts: u64,
    reduction_sum: f64,
    reductions: usize,
    energy_pj: f64,
    dbc_violations: usize,
}

impl Acc {
    fn add(&mut self, row: &RunRow, shifts: u64, base: u64) {
        self.sequences += 1;
        self.shifts += shifts;
        self.ofu_shifts += base;
        if let Some(r) = row.reduction_vs_ofu {
            self.reduction_sum += r;
            self.reductions += 1;
        }
        self.energy_pj += row.energy_pj.unwrap_or(0.0);
        self.dbc_violations += row.dbc_violation as usize;
    }
}

fn ratio(r: Option<f64>) -> String {
    r.map(|r| format!("{r:.4}")).unwrap_or_default()
}

fn energy(e: f64) -> String {
    format!("{e:.1}")
}

const RUN_HEADER: [&str; 13] = [
    "benchmark",
    "sequence_id",
    "n",
    "m",
    "algorithm",
    "shifts",
    "reduction_vs_ofu",
    "runtime_us",
    "energy_pj",
    "length_bin",
    "category",
    "dbc_violation",
    "status",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Invariant(format!("csv encoding failed: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv flush failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_csv(report: &RunReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RUN_HEADER).map_err(csv_err)?;
    for r in &report.rows {
        w.write_record([
            r.benchmark.clone(),
            r.sequence_id.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            r.algorithm.clone(),
            opt(r.shifts),
            ratio(r.reduction_vs_ofu),
            opt(r.runtime_us),
            r.energy_pj.map(energy).unwrap_or_default(),
            r.length_bin.clone(),
            r.category.clone(),
            r.dbc_violation.to_string(),
            r.status.clone(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

pub fn render_summary_csv(summary: &[SummaryRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "scope",
        "key",
        "algorithm",
        "sequences",
        "shifts",
        "ofu_shifts",
        "pooled_reduction",
        "mean_reduction",
        "energy_pj",
        "dbc_violations",
    ])
    .map_err(csv_err)?;
    for s in summary {
        w.write_record([
            s.scope.clone(),
            s.key.clone(),
            s.algorithm.clone(),
            s.sequences.to_string(),
            s.shifts.to_string(),
            s.ofu_shifts.to_string(),
            ratio(s.pooled_reduction),
            ratio(s.mean_reduction),
            energy(s.energy_pj),
            s.dbc_violations.to_string(),
        ])
        .map_err(csv_err)?;
    }
    finish_csv(w)
}

// Ratios go through RawValue so JSON carries the same four decimals as CSV.
#[derive(Serialize)]
struct JsonRow<'a> {
    benchmark: &'a str,
    sequence_id: usize,
    n: usize,
    m: usize,
    algorithm: &'a str,
    shifts: Option<u64>,
    reduction_vs_ofu: Option<Box<RawValue>>,
    runtime_us: Option<u64>,
    energy_pj: Option<f64>,
    length_bin: &'a str,
    category: &'a str,
    dbc_violation: bool,
    status: &'a str,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    scope: &'a str,
    key: &'a str,
    algorithm: &'a str,
    sequences: usize,
    shifts: u64,
    ofu_shifts: u64,
    pooled_reduction: Option<Box<RawValue>>,
    mean_reduction: Option<Box<RawValue>>,
    energy_pj: f64,
    dbc_violations: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    rows: Vec<JsonRow<'a>>,
    summary: Vec<JsonSummary<'a>>,
    warnings: &'a [String],
}

fn raw_ratio(r: Option<f64>) -> Option<Box<RawValue>> {
    r.map(|r| RawValue::from_string(format!("{r:.4}")).expect("formatted float is valid JSON"))
}

pub fn render_json(report: &RunReport) -> Result<String> {
    let summary = report.summary();
    let doc = JsonReport {
        rows: report
            .rows
            .iter()
            .map(|r| JsonRow {
                benchmark: &r.benchmark,
                sequence_id: r.sequence_id,
                n: r.n,
                m: r.m,
                algorithm: &r.algorithm,
                shifts: r.shifts,
                reduction_vs_ofu: raw_ratio(r.reduction_vs_ofu),
                runtime_us: r.runtime_us,
                energy_pj: r.energy_pj,
                length_bin: &r.length_bin,
                category: &r.category,
                dbc_violation: r.dbc_violation,
                status: &r.status,
            })
            .collect(),
        summary: summary
            .iter()
            .map(|s| JsonSummary {
                scope: &s.scope,
                key: &s.key,
                algorithm: &s.algorithm,
                sequences: s.sequences,
                shifts: s.shifts,
                ofu_shifts: s.ofu_shifts,
                pooled_reduction: raw_ratio(s.pooled_reduction),
                mean_reduction: raw_ratio(s.mean_reduction),
                energy_pj: s.energy_pj,
                dbc_violations: s.dbc_violations,
            })
            .collect(),
        warnings: &report.warnings,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Invariant(format!("json encoding failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn emit_report(report: &RunReport, path: &Path, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => render_csv(report)?,
        Format::Json => render_json(report)?,
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn emit_summary(report: &RunReport, path: &Path) -> Result<()> {
    let text = render_summary_csv(&report.summary())?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
