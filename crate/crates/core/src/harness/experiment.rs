use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OutputFormat};
use super::HarnessError;
use crate::adversary::AttackStrategy;
use crate::analytics::oracle::{claimed_per_cm_detection, oracle_row, to_f64};
use crate::analytics::{
    detection_after_runs, detection_before_completion, detection_vs_message_length, eve_entropy_bits,
    mutual_information_slack, EstimateWithCI, LeakageCounts, LeakageRow, PURE_GUESS, SIGMA_GATE,
};
use crate::protocol::{run_dialogue, run_dialogue_untapped, DetectionPolicy, DialogueStatus, Message, TrialReport};
use crate::rng::RandomStream;

/// Version tag written into every results document.
pub const RESULTS_SCHEMA: &str = "qdialogue.results.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

/// Echo of the settings that shaped the results. The output path is left out
/// so that the document does not depend on where it was written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub attack: AttackStrategy,
    pub c: f64,
    pub n_pairs: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub detection_policy: DetectionPolicy,
    pub max_restarts: u32,
    pub output_format: OutputFormat,
}

impl From<&ExperimentConfig> for ConfigEcho {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            attack: c.attack.clone(),
            c: c.c,
            n_pairs: c.n_pairs,
            trials: c.trials,
            master_seed: c.master_seed,
            detection_policy: c.detection_policy,
            max_restarts: c.max_restarts,
            output_format: c.output_format,
        }
    }
}

/// Compact per-trial record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub status: DialogueStatus,
    pub total_runs: usize,
    pub mm_runs: usize,
    pub cm_runs: usize,
    pub attacked_cm_runs: usize,
    pub control_failures: usize,
    pub restart_count: u32,
    /// Runs the same seed needs without Eve, i.e. the full mode schedule.
    pub scheduled_runs: usize,
    /// Only counted for completed dialogues.
    pub message_bit_errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: u64,
    pub completed: u64,
    pub detected: u64,
    pub aborted_max_restarts: u64,
    pub total_runs: u64,
    pub mm_runs: u64,
    pub cm_runs: u64,
    pub attacked_cm_runs: u64,
    pub control_failures: u64,
    pub message_bit_errors: u64,
    pub message_bits_checked: u64,
    pub mean_scheduled_runs: f64,
}

/// Closed-form values for the configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analytic {
    /// Exact per-control-run detection from exhaustive enumeration, as a fraction.
    pub oracle_per_cm_detection: Option<String>,
    /// The per-control-run figure claimed for the attack family.
    pub claimed_per_cm_detection: Option<f64>,
    /// Detection per control run used by the curves below.
    pub per_cm_detection: Option<f64>,
    pub expected_runs: f64,
    /// `1 - (1 - c·d)^(N/(1-c))`.
    pub detection_vs_message_length: Option<f64>,
    /// `1 - (1 - c·d)^𝒩` averaged over the simulated schedules.
    pub detection_at_simulated_runs: Option<f64>,
    /// `1 - ((1-c)/(1-c+c·d))^N`, exact for the terminal policy.
    pub detection_before_completion: Option<f64>,
    pub eve_entropy_bits: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `|empirical - reference| <= tolerance`, with tolerance `3·stderr`.
    WithinSigma,
    /// Counts must match exactly.
    Exact,
    /// `empirical <= reference + tolerance`.
    AtMost,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub name: String,
    pub empirical: f64,
    pub stderr: f64,
    pub samples: u64,
    pub reference: f64,
    pub reference_source: String,
    pub relation: Relation,
    pub tolerance: f64,
    pub pass: bool,
}

impl Comparison {
    fn within(name: &str, estimate: EstimateWithCI, reference: f64, source: &str) -> Self {
        Self {
            name: name.into(),
            empirical: estimate.estimate,
            stderr: estimate.stderr,
            samples: estimate.n_samples,
            reference,
            reference_source: source.into(),
            relation: Relation::WithinSigma,
            tolerance: SIGMA_GATE * estimate.stderr,
            pass: estimate.within(reference, SIGMA_GATE),
        }
    }

    fn exact(name: &str, observed: u64, expected: u64, samples: u64, source: &str) -> Self {
        Self {
            name: name.into(),
            empirical: observed as f64,
            stderr: 0.0,
            samples,
            reference: expected as f64,
            reference_source: source.into(),
            relation: Relation::Exact,
            tolerance: 0.0,
            pass: observed == expected,
        }
    }

    fn at_most(name: &str, empirical: f64, samples: u64, bound: f64, slack: f64, source: &str) -> Self {
        Self {
            name: name.into(),
            empirical,
            stderr: 0.0,
            samples,
            reference: bound,
            reference_source: source.into(),
            relation: Relation::AtMost,
            tolerance: slack,
            pass: empirical <= bound + slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub schema: String,
    pub config: ConfigEcho,
    pub summary: Summary,
    pub analytic: Analytic,
    pub comparisons: Vec<Comparison>,
    pub leakage: LeakageRow,
    pub all_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<Vec<TrialSummary>>,
}

impl ResultsDocument {
    pub fn comparison(&self, name: &str) -> Option<&Comparison> {
        self.comparisons.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Comparison> {
        self.comparisons.iter().filter(|c| !c.pass)
    }
}

/// The two messages of trial `trial`, drawn from its message stream.
pub fn trial_messages(config: &ExperimentConfig, rng: &mut RandomStream) -> Result<(Message, Message), HarnessError> {
    let alice = Message::random(config.n_pairs, &mut rng.messages)?;
    let bob = Message::random(config.n_pairs, &mut rng.messages)?;
    Ok((alice, bob))
}

/// Runs trial `trial` in full.
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialReport, HarnessError> {
    let mut rng = RandomStream::for_trial(config.master_seed, trial);
    let (alice, bob) = trial_messages(config, &mut rng)?;
    Ok(run_dialogue(&config.protocol(), &alice, &bob, &config.attack, &mut rng)?)
}

fn scheduled_runs(config: &ExperimentConfig, trial: u64, report: &TrialReport) -> Result<usize, HarnessError> {
    if !config.attack.acts() {
        return Ok(report.transcript.total_runs);
    }
    let mut rng = RandomStream::for_trial(config.master_seed, trial);
    let (alice, bob) = trial_messages(config, &mut rng)?;
    let replay = run_dialogue_untapped(&config.protocol(), &alice, &bob, &mut rng)?;
    Ok(replay.transcript.total_runs)
}

struct TrialOutcome {
    summary: TrialSummary,
    leakage: LeakageCounts,
}

fn evaluate_trial(config: &ExperimentConfig, trial: u64) -> Result<TrialOutcome, HarnessError> {
    let report = run_trial(config, trial)?;
    let t = &report.transcript;
    let completed = t.status == DialogueStatus::Completed;
    let summary = TrialSummary {
        trial,
        status: t.status,
        total_runs: t.total_runs,
        mm_runs: t.mm_runs,
        cm_runs: t.cm_runs,
        attacked_cm_runs: t.control_runs().filter(|r| r.tapped).count(),
        control_failures: t.control_failures(),
        restart_count: t.restart_count,
        scheduled_runs: scheduled_runs(config, trial, &report)?,
        message_bit_errors: if completed { report.message_bit_errors() } else { 0 },
    };
    Ok(TrialOutcome {
        summary,
        leakage: LeakageCounts::from_report(&report),
    })
}

fn evaluate_all(config: &ExperimentConfig, execution: Execution) -> Result<Vec<TrialOutcome>, HarnessError> {
    match execution {
        Execution::Serial => (0..config.trials).map(|t| evaluate_trial(config, t)).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            // Indexed collect keeps trial order, so aggregation is order-stable.
            (0..config.trials)
                .into_par_iter()
                .map(|t| evaluate_trial(config, t))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => (0..config.trials).map(|t| evaluate_trial(config, t)).collect(),
    }
}

/// Per-control-run detection the analytics assume for `attack`.
pub fn reference_per_cm_detection(attack: &AttackStrategy) -> Option<(f64, &'static str)> {
    match attack {
        AttackStrategy::None => None,
        AttackStrategy::EntangleMeasure { beta2 } => Some((*beta2, "probe weight beta2")),
        other => oracle_row(other).map(|row| (to_f64(row.per_cm_detection), "exhaustive oracle")),
    }
}

/// Runs every trial of `config` and compares the tallies with the analytics.
pub fn run_experiment(config: &ExperimentConfig, execution: Execution) -> Result<ResultsDocument, HarnessError> {
    run_experiment_with(config, execution, false)
}

/// As [`run_experiment`], optionally keeping one [`TrialSummary`] per trial.
pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
    verbose: bool,
) -> Result<ResultsDocument, HarnessError> {
    config.protocol().validate()?;
    let outcomes = evaluate_all(config, execution)?;

    let mut leakage = LeakageCounts::default();
    let mut summary = Summary {
        trials: config.trials,
        completed: 0,
        detected: 0,
        aborted_max_restarts: 0,
        total_runs: 0,
        mm_runs: 0,
        cm_runs: 0,
        attacked_cm_runs: 0,
        control_failures: 0,
        message_bit_errors: 0,
        message_bits_checked: 0,
        mean_scheduled_runs: 0.0,
    };
    let mut scheduled_total = 0u64;
    for o in &outcomes {
        let s = &o.summary;
        match s.status {
            DialogueStatus::Completed => {
                summary.completed += 1;
                summary.message_bits_checked += 4 * config.n_pairs as u64;
            }
            DialogueStatus::Detected => summary.detected += 1,
            DialogueStatus::AbortedMaxRestarts => summary.aborted_max_restarts += 1,
        }
        summary.total_runs += s.total_runs as u64;
        summary.mm_runs += s.mm_runs as u64;
        summary.cm_runs += s.cm_runs as u64;
        summary.attacked_cm_runs += s.attacked_cm_runs as u64;
        summary.control_failures += s.control_failures as u64;
        summary.message_bit_errors += s.message_bit_errors as u64;
        scheduled_total += s.scheduled_runs as u64;
        leakage.merge(&o.leakage);
    }
    summary.mean_scheduled_runs = scheduled_total as f64 / config.trials as f64;

    let c = config.c;
    let n = config.n_pairs as u64;
    let reference = reference_per_cm_detection(&config.attack);
    let d = reference.map(|(d, _)| d);
    // Average of 1 - (1 - c·d)^𝒩 over each trial's own schedule length.
    let at_simulated_runs = d.map(|d| {
        outcomes
            .iter()
            .map(|o| detection_after_runs(c, d, o.summary.scheduled_runs as u64))
            .sum::<f64>()
            / config.trials as f64
    });
    let analytic = Analytic {
        oracle_per_cm_detection: oracle_row(&config.attack)
            .filter(|_| config.attack.acts())
            .map(|row| row.per_cm_detection.to_string()),
        claimed_per_cm_detection: claimed_per_cm_detection(&config.attack),
        per_cm_detection: d,
        expected_runs: n as f64 / (1.0 - c),
        detection_vs_message_length: d.map(|d| detection_vs_message_length(c, d, n)),
        detection_at_simulated_runs: at_simulated_runs,
        detection_before_completion: d.map(|d| detection_before_completion(c, d, n)),
        eve_entropy_bits: config.attack.beta2().map(eve_entropy_bits).transpose()?,
    };

    let mut comparisons = Vec::new();
    let terminal = config.detection_policy == DetectionPolicy::Terminal;
    match reference {
        None => {
            comparisons.push(Comparison::exact(
                "control_failures",
                summary.control_failures,
                0,
                summary.cm_runs,
                "attack-free channel",
            ));
            comparisons.push(Comparison::exact(
                "message_bit_errors",
                summary.message_bit_errors,
                0,
                summary.message_bits_checked,
                "attack-free channel",
            ));
        }
        Some((d, source)) => {
            if summary.attacked_cm_runs > 0 {
                let estimate = EstimateWithCI::binomial(summary.control_failures, summary.attacked_cm_runs);
                comparisons.push(Comparison::within("per_cm_detection", estimate, d, source));
            }
            if terminal {
                let estimate = EstimateWithCI::binomial(summary.detected, config.trials);
                if let (AttackStrategy::EntangleMeasure { .. }, Some(curve)) = (&config.attack, at_simulated_runs) {
                    comparisons.push(Comparison::within(
                        "per_dialogue_detection",
                        estimate,
                        curve,
                        "1-(1-c*beta2)^runs at simulated run counts",
                    ));
                }
                comparisons.push(Comparison::within(
                    "per_dialogue_detection_exact",
                    estimate,
                    detection_before_completion(c, d, n),
                    "1-((1-c)/(1-c+c*d))^N",
                ));
            }
        }
    }

    let leakage = leakage.into_row(&config.attack);
    let expected_guess = match &config.attack {
        AttackStrategy::EntangleMeasure { .. } => Some((PURE_GUESS, PURE_GUESS, "pure guess")),
        other => oracle_row(other).map(|row| {
            (
                to_f64(row.alice_guess_accuracy),
                to_f64(row.bob_guess_accuracy),
                "exhaustive oracle",
            )
        }),
    };
    if let Some((alice_ref, bob_ref, source)) = expected_guess {
        if let Some(acc) = leakage.alice_accuracy {
            comparisons.push(Comparison::within("eve_alice_guess_accuracy", acc, alice_ref, source));
        }
        if let Some(acc) = leakage.bob_accuracy {
            comparisons.push(Comparison::within("eve_bob_guess_accuracy", acc, bob_ref, source));
        }
    }
    if let (Some(mi), Some(bound)) = (leakage.mutual_information, leakage.entropy_bound) {
        let slack = mutual_information_slack(2, 4, leakage.mi_samples);
        comparisons.push(Comparison::at_most(
            "ancilla_mutual_information",
            mi,
            leakage.mi_samples,
            bound,
            slack,
            "ancilla entropy bound",
        ));
    }

    let all_pass = comparisons.iter().all(|c| c.pass);
    Ok(ResultsDocument {
        schema: RESULTS_SCHEMA.into(),
        config: config.into(),
        summary,
        analytic,
        comparisons,
        leakage,
        all_pass,
        trials: verbose.then(|| outcomes.into_iter().map(|o| o.summary).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(attack: &str, beta2: Option<f64>, trials: u64) -> ExperimentConfig {
        let mut b = ExperimentConfig::builder();
        b.set("attack", attack).unwrap();
        if let Some(beta2) = beta2 {
            b.set("beta2", &beta2.to_string()).unwrap();
        }
        b.set("trials", &trials.to_string()).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn attack_free_run_is_clean() {
        let doc = run_experiment(&config("none", None, 100), Execution::Serial).unwrap();
        assert_eq!(doc.summary.completed, 100);
        assert_eq!(doc.summary.control_failures, 0);
        assert_eq!(doc.summary.message_bit_errors, 0);
        assert!(doc.all_pass, "{:?}", doc.failed().collect::<Vec<_>>());
    }

    #[test]
    fn schedule_replay_covers_executed_runs() {
        let cfg = config("disturb-pauli4", None, 50);
        let doc = run_experiment_with(&cfg, Execution::Serial, true).unwrap();
        for t in doc.trials.unwrap() {
            assert!(t.total_runs <= t.scheduled_runs);
            if t.status == DialogueStatus::Completed {
                assert_eq!(t.total_runs, t.scheduled_runs);
            }
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let cfg = config("entangle-measure", Some(0.25), 64);
        let a = serde_json::to_string(&run_experiment(&cfg, Execution::Serial).unwrap()).unwrap();
        let b = serde_json::to_string(&run_experiment(&cfg, Execution::Parallel).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
