//! WebAssembly bindings for the static page in `www/`.
//!
//! Each export takes plain numbers and strings and returns a JSON string. The
//! `*_json` functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use qdialogue::analytics::{detection_before_completion, detection_vs_message_length, eve_entropy_bits};
use qdialogue::harness::{run_experiment, run_trial, Execution, ExperimentConfig};

/// Trials above this are refused to keep the page responsive.
pub const MAX_BROWSER_TRIALS: u64 = 50_000;

#[derive(Serialize)]
struct CurvePoint {
    n: u64,
    closed_form: f64,
    terminal_policy: f64,
}

#[derive(Serialize)]
struct Curves {
    c: f64,
    d: f64,
    points: Vec<CurvePoint>,
    eve_entropy_bits: Option<f64>,
}

fn experiment(attack: &str, beta2: f64, c: f64, n_pairs: u32, trials: u64, seed: u64) -> Result<ExperimentConfig, String> {
    if trials > MAX_BROWSER_TRIALS {
        return Err(format!("at most {MAX_BROWSER_TRIALS} trials in the browser"));
    }
    let mut builder = ExperimentConfig::builder();
    builder.attack = Some(attack.to_string());
    builder.beta2 = (attack == "entangle-measure").then_some(beta2);
    builder.c = Some(c);
    builder.n_pairs = Some(n_pairs as usize);
    builder.trials = Some(trials);
    builder.seed = Some(seed);
    builder.build().map_err(|e| e.to_string())
}

/// Closed-form detection against message length `1..=max_n` for per-control
/// detection `d`; `beta2` (if in range) adds the ancilla entropy.
pub fn detection_curve_json(c: f64, d: f64, max_n: u32, beta2: f64) -> Result<String, String> {
    if !(c > 0.0 && c < 1.0) {
        return Err(format!("c = {c} is outside (0, 1)"));
    }
    if !(0.0..=1.0).contains(&d) {
        return Err(format!("d = {d} is outside [0, 1]"));
    }
    let points = (1..=u64::from(max_n.clamp(1, 512)))
        .map(|n| CurvePoint {
            n,
            closed_form: detection_vs_message_length(c, d, n),
            terminal_policy: detection_before_completion(c, d, n),
        })
        .collect();
    let curves = Curves {
        c,
        d,
        points,
        eve_entropy_bits: eve_entropy_bits(beta2).ok(),
    };
    serde_json::to_string(&curves).map_err(|e| e.to_string())
}

/// A full seeded experiment, returned as a results document.
pub fn simulate_json(attack: &str, beta2: f64, c: f64, n_pairs: u32, trials: u64, seed: u64) -> Result<String, String> {
    let config = experiment(attack, beta2, c, n_pairs, trials, seed)?;
    let doc = run_experiment(&config, Execution::Serial).map_err(|e| e.to_string())?;
    serde_json::to_string(&doc).map_err(|e| e.to_string())
}

/// Transcript of the first trial for the given seed, including Eve's record.
pub fn dialogue_transcript_json(attack: &str, beta2: f64, c: f64, n_pairs: u32, seed: u64) -> Result<String, String> {
    let config = experiment(attack, beta2, c, n_pairs, 1, seed)?;
    let report = run_trial(&config, 0).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn detection_curve(c: f64, d: f64, max_n: u32, beta2: f64) -> Result<String, JsValue> {
    detection_curve_json(c, d, max_n, beta2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn simulate(attack: &str, beta2: f64, c: f64, n_pairs: u32, trials: u32, seed: u32) -> Result<String, JsValue> {
    simulate_json(attack, beta2, c, n_pairs, u64::from(trials), u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn dialogue_transcript(attack: &str, beta2: f64, c: f64, n_pairs: u32, seed: u32) -> Result<String, JsValue> {
    dialogue_transcript_json(attack, beta2, c, n_pairs, u64::from(seed)).map_err(|e| JsValue::from_str(&e))
}
