//! Serialization of results documents.
//!
//! JSON is the canonical form. CSV flattens a results document to one row per
//! comparison, with the columns in [`RESULTS_CSV_COLUMNS`] order, and a sweep
//! to one row per swept value, in [`SWEEP_CSV_COLUMNS`] order.

use std::fs;
use std::path::Path;

use serde::Serialize;

use super::config::OutputFormat;
use super::experiment::ResultsDocument;
use super::sweep::SweepResult;
use super::HarnessError;

pub const RESULTS_CSV_COLUMNS: [&str; 18] = [
    "schema",
    "attack",
    "beta2",
    "c",
    "n_pairs",
    "trials",
    "master_seed",
    "detection_policy",
    "max_restarts",
    "comparison",
    "empirical",
    "stderr",
    "samples",
    "reference",
    "reference_source",
    "relation",
    "tolerance",
    "pass",
];

pub const SWEEP_CSV_COLUMNS: [&str; 14] = [
    "parameter",
    "value",
    "per_cm_detection",
    "per_cm_stderr",
    "per_dialogue_detection",
    "per_dialogue_stderr",
    "analytic_per_cm_detection",
    "detection_vs_message_length",
    "detection_at_simulated_runs",
    "detection_before_completion",
    "eve_entropy_bits",
    "mutual_information",
    "all_pass",
    "schema",
];

#[derive(Serialize)]
struct ResultsCsvRow<'a> {
    schema: &'a str,
    attack: &'a str,
    beta2: Option<f64>,
    c: f64,
    n_pairs: usize,
    trials: u64,
    master_seed: u64,
    detection_policy: &'a str,
    max_restarts: u32,
    comparison: &'a str,
    empirical: f64,
    stderr: f64,
    samples: u64,
    reference: f64,
    reference_source: &'a str,
    relation: &'a str,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct SweepCsvRow<'a> {
    parameter: String,
    value: f64,
    per_cm_detection: Option<f64>,
    per_cm_stderr: Option<f64>,
    per_dialogue_detection: f64,
    per_dialogue_stderr: f64,
    analytic_per_cm_detection: Option<f64>,
    detection_vs_message_length: Option<f64>,
    detection_at_simulated_runs: Option<f64>,
    detection_before_completion: Option<f64>,
    eve_entropy_bits: Option<f64>,
    mutual_information: Option<f64>,
    all_pass: bool,
    schema: &'a str,
}

fn csv_error(e: csv::Error) -> HarnessError {
    HarnessError::Serialize(e.to_string())
}

fn enum_label<T: Serialize>(value: &T) -> String {
    serde_json::to_value(value)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn results_to_json(doc: &ResultsDocument) -> Result<String, HarnessError> {
    serde_json::to_string_pretty(doc).map_err(|e| HarnessError::Serialize(e.to_string()))
}

pub fn results_to_csv(doc: &ResultsDocument) -> Result<String, HarnessError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let policy = enum_label(&doc.config.detection_policy);
    let mut relations = Vec::with_capacity(doc.comparisons.len());
    for c in &doc.comparisons {
        relations.push(enum_label(&c.relation));
    }
    if doc.comparisons.is_empty() {
        writer.write_record(RESULTS_CSV_COLUMNS).map_err(csv_error)?;
    }
    for (c, relation) in doc.comparisons.iter().zip(&relations) {
        writer
            .serialize(ResultsCsvRow {
                schema: &doc.schema,
                attack: doc.config.attack.name(),
                beta2: doc.config.attack.beta2(),
                c: doc.config.c,
                n_pairs: doc.config.n_pairs,
                trials: doc.config.trials,
                master_seed: doc.config.master_seed,
                detection_policy: &policy,
                max_restarts: doc.config.max_restarts,
                comparison: &c.name,
                empirical: c.empirical,
                stderr: c.stderr,
                samples: c.samples,
                reference: c.reference,
                reference_source: &c.reference_source,
                relation,
                tolerance: c.tolerance,
                pass: c.pass,
            })
            .map_err(csv_error)?;
    }
    finish(writer)
}

pub fn sweep_to_json(sweep: &SweepResult) -> Result<String, HarnessError> {
    serde_json::to_string_pretty(sweep).map_err(|e| HarnessError::Serialize(e.to_string()))
}

pub fn sweep_to_csv(sweep: &SweepResult) -> Result<String, HarnessError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &sweep.table {
        writer
            .serialize(SweepCsvRow {
                parameter: sweep.parameter.to_string(),
                value: row.value,
                per_cm_detection: row.per_cm_detection,
                per_cm_stderr: row.per_cm_stderr,
                per_dialogue_detection: row.per_dialogue_detection,
                per_dialogue_stderr: row.per_dialogue_stderr,
                analytic_per_cm_detection: row.analytic_per_cm_detection,
                detection_vs_message_length: row.detection_vs_message_length,
                detection_at_simulated_runs: row.detection_at_simulated_runs,
                detection_before_completion: row.detection_before_completion,
                eve_entropy_bits: row.eve_entropy_bits,
                mutual_information: row.mutual_information,
                all_pass: row.all_pass,
                schema: &sweep.schema,
            })
            .map_err(csv_error)?;
    }
    finish(writer)
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, HarnessError> {
    let bytes = writer
        .into_inner()
        .map_err(|e| HarnessError::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::Serialize(e.to_string()))
}

pub fn render_results(doc: &ResultsDocument, format: OutputFormat) -> Result<String, HarnessError> {
    match format {
        OutputFormat::Json => results_to_json(doc),
        OutputFormat::Csv => results_to_csv(doc),
    }
}

pub fn render_sweep(sweep: &SweepResult, format: OutputFormat) -> Result<String, HarnessError> {
    match format {
        OutputFormat::Json => sweep_to_json(sweep),
        OutputFormat::Csv => sweep_to_csv(sweep),
    }
}

/// Writes `contents`, creating parent directories as needed.
pub fn write_output(path: &Path, contents: &str) -> Result<(), HarnessError> {
    let io_error = |source| HarnessError::Write {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_error)?;
    }
    fs::write(path, contents).map_err(io_error)
}
