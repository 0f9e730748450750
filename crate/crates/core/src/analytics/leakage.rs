use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::estimate::{EstimateWithCI, SIGMA_GATE};
use super::formulas::eve_entropy_bits;
use crate::adversary::{AttackStrategy, Observation};
use crate::protocol::{Mode, TrialReport};

/// Accuracy of a uniformly random guess of a bit pair.
pub const PURE_GUESS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageRow {
    pub strategy: AttackStrategy,
    /// `None` when no message run was observed.
    pub alice_accuracy: Option<EstimateWithCI>,
    pub bob_accuracy: Option<EstimateWithCI>,
    pub baseline: f64,
    /// Ancilla entropy bound in bits, for the probe attack.
    pub entropy_bound: Option<f64>,
    /// Plug-in mutual information (bits) between ancilla outcome and Alice's pair.
    pub mutual_information: Option<f64>,
    /// Number of (ancilla, pair) samples behind `mutual_information`.
    pub mi_samples: u64,
    /// Either accuracy lies more than 3σ above the pure-guess baseline.
    pub exceeds_baseline: bool,
}

/// Plug-in mutual information in bits from a contingency table of counts.
pub fn mutual_information(table: &BTreeMap<(u8, usize), u64>) -> f64 {
    let n: u64 = table.values().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let mut rows: BTreeMap<u8, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&(r, c), &k) in table {
        *rows.entry(r).or_default() += k;
        *cols.entry(c).or_default() += k;
    }
    table
        .iter()
        .filter(|(_, &k)| k > 0)
        .map(|(&(r, c), &k)| {
            let pxy = k as f64 / n;
            let px = rows[&r] as f64 / n;
            let py = cols[&c] as f64 / n;
            pxy * (pxy / (px * py)).log2()
        })
        .sum::<f64>()
        .max(0.0)
}

/// First-order upward bias of the plug-in estimator, `(R-1)(C-1) / (2 n ln 2)`,
/// used as the tolerance when comparing it against a bound.
pub fn mutual_information_slack(rows: usize, cols: usize, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    ((rows - 1) * (cols - 1)) as f64 / (2.0 * n as f64 * std::f64::consts::LN_2)
}

/// Raw tallies behind a [`LeakageRow`], mergeable across trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LeakageCounts {
    pub guesses: u64,
    pub alice_hits: u64,
    pub bob_hits: u64,
    /// (ancilla outcome, Alice's pair index) counts over every probed run.
    pub table: BTreeMap<(u8, usize), u64>,
}

impl LeakageCounts {
    pub fn from_report(report: &TrialReport) -> Self {
        let mut counts = Self::default();
        // Eve's record holds one entry per run, in transcript order.
        for (run, eve_run) in report.transcript.runs.iter().zip(&report.eve.runs) {
            debug_assert_eq!(run.index, eve_run.run);
            if let Observation::Ancilla(chi) = eve_run.observation {
                *counts.table.entry((chi, run.alice_code.index())).or_default() += 1;
            }
            if run.mode != Mode::Message {
                continue;
            }
            if let Some(guess) = eve_run.guess {
                counts.guesses += 1;
                counts.alice_hits += u64::from(guess.alice == run.alice_code);
                counts.bob_hits += u64::from(guess.bob == run.bob_code);
            }
        }
        counts
    }

    pub fn merge(&mut self, other: &LeakageCounts) {
        self.guesses += other.guesses;
        self.alice_hits += other.alice_hits;
        self.bob_hits += other.bob_hits;
        for (&key, &k) in &other.table {
            *self.table.entry(key).or_default() += k;
        }
    }

    pub fn into_row(self, strategy: &AttackStrategy) -> LeakageRow {
        let alice_accuracy = (self.guesses > 0).then(|| EstimateWithCI::binomial(self.alice_hits, self.guesses));
        let bob_accuracy = (self.guesses > 0).then(|| EstimateWithCI::binomial(self.bob_hits, self.guesses));
        let above = |e: &Option<EstimateWithCI>| e.is_some_and(|e| e.estimate - SIGMA_GATE * e.stderr > PURE_GUESS);
        let mi_samples = self.table.values().sum();
        let (entropy_bound, mutual_information) = match strategy {
            AttackStrategy::EntangleMeasure { beta2 } => {
                (eve_entropy_bits(*beta2).ok(), Some(mutual_information(&self.table)))
            }
            _ => (None, None),
        };
        LeakageRow {
            strategy: strategy.clone(),
            exceeds_baseline: above(&alice_accuracy) || above(&bob_accuracy),
            alice_accuracy,
            bob_accuracy,
            baseline: PURE_GUESS,
            entropy_bound,
            mutual_information,
            mi_samples,
        }
    }
}

/// Eve's guess accuracy and information bound for one strategy.
pub fn leakage_row(strategy: &AttackStrategy, reports: &[TrialReport]) -> LeakageRow {
    let mut counts = LeakageCounts::default();
    for report in reports {
        counts.merge(&LeakageCounts::from_report(report));
    }
    counts.into_row(strategy)
}

/// One row per strategy.
pub fn leakage_report<'a>(groups: impl IntoIterator<Item = (&'a AttackStrategy, &'a [TrialReport])>) -> Vec<LeakageRow> {
    groups.into_iter().map(|(s, reports)| leakage_row(s, reports)).collect()
}
