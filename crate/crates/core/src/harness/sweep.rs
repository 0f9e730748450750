use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiment::{run_experiment, Execution, ResultsDocument};
use super::HarnessError;
use crate::adversary::AttackStrategy;

pub const SWEEP_SCHEMA: &str = "qdialogue.sweep.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParameter {
    C,
    NPairs,
    Beta2,
}

impl FromStr for SweepParameter {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c" => Ok(Self::C),
            "n-pairs" | "n_pairs" => Ok(Self::NPairs),
            "beta2" => Ok(Self::Beta2),
            other => Err(HarnessError::UnknownSweepParameter(other.into())),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::C => "c",
            Self::NPairs => "n-pairs",
            Self::Beta2 => "beta2",
        })
    }
}

/// One line of the combined curve table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub per_cm_detection: Option<f64>,
    pub per_cm_stderr: Option<f64>,
    pub per_dialogue_detection: f64,
    pub per_dialogue_stderr: f64,
    pub analytic_per_cm_detection: Option<f64>,
    pub detection_vs_message_length: Option<f64>,
    pub detection_at_simulated_runs: Option<f64>,
    pub detection_before_completion: Option<f64>,
    pub eve_entropy_bits: Option<f64>,
    pub mutual_information: Option<f64>,
    pub all_pass: bool,
}

impl SweepRow {
    fn from_document(value: f64, doc: &ResultsDocument) -> Self {
        let per_cm = doc.comparison("per_cm_detection");
        let trials = doc.summary.trials as f64;
        let p = doc.summary.detected as f64 / trials;
        Self {
            value,
            per_cm_detection: per_cm.map(|c| c.empirical),
            per_cm_stderr: per_cm.map(|c| c.stderr),
            per_dialogue_detection: p,
            per_dialogue_stderr: (p * (1.0 - p) / trials).sqrt(),
            analytic_per_cm_detection: doc.analytic.per_cm_detection,
            detection_vs_message_length: doc.analytic.detection_vs_message_length,
            detection_at_simulated_runs: doc.analytic.detection_at_simulated_runs,
            detection_before_completion: doc.analytic.detection_before_completion,
            eve_entropy_bits: doc.analytic.eve_entropy_bits,
            mutual_information: doc.leakage.mutual_information,
            all_pass: doc.all_pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema: String,
    pub parameter: SweepParameter,
    pub table: Vec<SweepRow>,
    pub documents: Vec<ResultsDocument>,
    pub all_pass: bool,
}

fn with_value(base: &ExperimentConfig, parameter: SweepParameter, value: f64) -> Result<ExperimentConfig, HarnessError> {
    let mut config = base.clone();
    match parameter {
        SweepParameter::C => {
            if !(value > 0.0 && value < 1.0) {
                return Err(HarnessError::ControlProbability(value));
            }
            config.c = value;
        }
        SweepParameter::NPairs => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(HarnessError::InvalidValue {
                    key: "n-pairs".into(),
                    value: value.to_string(),
                });
            }
            config.n_pairs = value as usize;
        }
        // Varying the probe weight only makes sense for the probe attack.
        SweepParameter::Beta2 => config.attack = AttackStrategy::entangle_measure(value)?,
    }
    Ok(config)
}

/// One experiment per value, plus a table aligning empirical and analytic curves.
pub fn sweep(
    base: &ExperimentConfig,
    parameter: SweepParameter,
    values: &[f64],
    execution: Execution,
) -> Result<SweepResult, HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::EmptySweep);
    }
    let configs = values
        .iter()
        .map(|&v| with_value(base, parameter, v))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Vec::with_capacity(values.len());
    let mut documents = Vec::with_capacity(values.len());
    for (&value, config) in values.iter().zip(&configs) {
        let doc = run_experiment(config, execution)?;
        table.push(SweepRow::from_document(value, &doc));
        documents.push(doc);
    }
    Ok(SweepResult {
        schema: SWEEP_SCHEMA.into(),
        parameter,
        all_pass: documents.iter().all(|d| d.all_pass),
        table,
        documents,
    })
}

/// Parses a comma-separated value list such as `0.1,0.25,0.5`.
pub fn parse_values(text: &str) -> Result<Vec<f64>, HarnessError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>().map_err(|_| HarnessError::InvalidValue {
                key: "values".into(),
                value: s.into(),
            })
        })
        .collect()
}
