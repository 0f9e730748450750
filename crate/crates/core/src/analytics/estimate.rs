use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::protocol::{DialogueStatus, TrialReport};

/// Width of every empirical-vs-reference comparison, in standard errors.
pub const SIGMA_GATE: f64 = 3.0;

/// A binomial proportion with its standard error `sqrt(p(1-p)/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub estimate: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

impl EstimateWithCI {
    pub fn binomial(successes: u64, n_samples: u64) -> Self {
        assert!(n_samples > 0, "binomial estimate needs at least one sample");
        assert!(successes <= n_samples);
        let p = successes as f64 / n_samples as f64;
        Self {
            estimate: p,
            stderr: (p * (1.0 - p) / n_samples as f64).sqrt(),
            n_samples,
        }
    }

    /// `|estimate - reference| <= k · stderr`.
    pub fn within(&self, reference: f64, k_sigma: f64) -> bool {
        (self.estimate - reference).abs() <= k_sigma * self.stderr
    }
}

/// How detection events are tallied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionTally {
    /// Failed control runs among control runs the strategy acted on.
    PerControlRun,
    /// Dialogues that ended with status `detected`.
    PerDialogue,
}

/// Attacked control runs and how many of them failed.
pub fn control_run_counts(reports: &[TrialReport]) -> (u64, u64) {
    reports
        .iter()
        .flat_map(|r| r.transcript.control_runs())
        .filter(|run| run.tapped)
        .fold((0, 0), |(fails, total), run| {
            (fails + u64::from(run.cm_pass == Some(false)), total + 1)
        })
}

pub fn empirical_detection(reports: &[TrialReport], tally: DetectionTally) -> Result<EstimateWithCI, AnalyticsError> {
    if reports.is_empty() {
        return Err(AnalyticsError::NoReports);
    }
    match tally {
        DetectionTally::PerControlRun => {
            let (fails, total) = control_run_counts(reports);
            if total == 0 {
                return Err(AnalyticsError::NoAttackedControlRuns);
            }
            Ok(EstimateWithCI::binomial(fails, total))
        }
        DetectionTally::PerDialogue => {
            let detected = reports
                .iter()
                .filter(|r| r.transcript.status == DialogueStatus::Detected)
                .count();
            Ok(EstimateWithCI::binomial(detected as u64, reports.len() as u64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_tally_has_zero_stderr() {
        let e = EstimateWithCI::binomial(0, 500);
        assert_eq!(e.estimate, 0.0);
        assert_eq!(e.stderr, 0.0);
        assert!(e.within(0.0, SIGMA_GATE));
        assert!(!e.within(0.01, SIGMA_GATE));
    }

    #[test]
    fn stderr_formula() {
        let e = EstimateWithCI::binomial(750, 1000);
        assert!((e.stderr - (0.75f64 * 0.25 / 1000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn no_reports_is_an_error() {
        assert_eq!(
            empirical_detection(&[], DetectionTally::PerDialogue),
            Err(AnalyticsError::NoReports)
        );
    }
}
