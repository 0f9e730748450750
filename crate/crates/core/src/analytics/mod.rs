//! Closed-form security figures and their Monte Carlo counterparts.

mod estimate;
mod formulas;
mod leakage;
pub mod oracle;

pub use estimate::{control_run_counts, empirical_detection, DetectionTally, EstimateWithCI, SIGMA_GATE};
pub use formulas::{
    binary_entropy, detection_after_runs, detection_before_completion, detection_vs_message_length,
    eve_entropy_bits, half_length_for_confidence, CurveAxis, DetectionCurve,
};
pub use leakage::{leakage_report, leakage_row, mutual_information, LeakageCounts, mutual_information_slack, LeakageRow, PURE_GUESS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("beta2 = {0} is outside [0, 0.5]")]
    Beta2OutOfRange(f64),
    #[error("no trial reports to estimate from")]
    NoReports,
    #[error("no control run was attacked, so a per-control detection rate is undefined")]
    NoAttackedControlRuns,
}
