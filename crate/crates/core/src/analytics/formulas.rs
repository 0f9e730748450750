//! Closed-form detection probabilities and Eve's entropy.

use serde::{Deserialize, Serialize};

use super::AnalyticsError;

fn check_c(c: f64) {
    assert!(c > 0.0 && c < 1.0, "control probability c = {c} must lie in (0, 1)");
}

fn check_d(d: f64) {
    assert!((0.0..=1.0).contains(&d), "per-control detection d = {d} must lie in [0, 1]");
}

/// Probability that at least one of `runs` runs exposes Eve when each run is a
/// control run with probability `c` and a control run fails with probability
/// `d`: `1 - (1 - c·d)^runs`.
pub fn detection_after_runs(c: f64, d: f64, runs: u64) -> f64 {
    check_c(c);
    check_d(d);
    let survive = 1.0 - c * d;
    match i32::try_from(runs) {
        Ok(r) => 1.0 - survive.powi(r),
        Err(_) => 1.0 - survive.powf(runs as f64),
    }
}

/// [`detection_after_runs`] with the expected run count `N / (1 - c)` needed to
/// carry `N` message pairs, evaluated with a real exponent.
pub fn detection_vs_message_length(c: f64, d: f64, n_half: u64) -> f64 {
    check_c(c);
    check_d(d);
    1.0 - (1.0 - c * d).powf(n_half as f64 / (1.0 - c))
}

/// Probability that a dialogue stopping at its first failed control run is
/// detected before its `N`-th message run: `1 - ((1-c) / (1-c+c·d))^N`.
///
/// Unlike [`detection_vs_message_length`] this accounts for the dialogue
/// length depending on how many control runs were drawn.
pub fn detection_before_completion(c: f64, d: f64, n_half: u64) -> f64 {
    check_c(c);
    check_d(d);
    let ratio = (1.0 - c) / (1.0 - c + c * d);
    1.0 - ratio.powf(n_half as f64)
}

/// Smallest `N` with `detection_vs_message_length(c, d, N) >= 1 - eps`.
pub fn half_length_for_confidence(c: f64, d: f64, eps: f64) -> Option<u64> {
    check_c(c);
    check_d(d);
    if d == 0.0 || !(eps > 0.0 && eps < 1.0) {
        return None;
    }
    // (1 - cd)^(N/(1-c)) <= eps
    let n = (1.0 - c) * eps.ln() / (1.0 - c * d).ln();
    let mut guess = n.ceil().max(0.0) as u64;
    while detection_vs_message_length(c, d, guess) < 1.0 - eps {
        guess += 1;
    }
    while guess > 0 && detection_vs_message_length(c, d, guess - 1) >= 1.0 - eps {
        guess -= 1;
    }
    Some(guess)
}

/// Binary entropy `-p log₂ p - (1-p) log₂ (1-p)` with `0·log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Von Neumann entropy of Eve's probe ancilla, in bits.
pub fn eve_entropy_bits(beta2: f64) -> Result<f64, AnalyticsError> {
    if !(0.0..=0.5).contains(&beta2) {
        return Err(AnalyticsError::Beta2OutOfRange(beta2));
    }
    Ok(binary_entropy(beta2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveAxis {
    /// Total protocol runs `𝒩`.
    Runs,
    /// Message half-length `N`.
    HalfLength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionCurve {
    pub c: f64,
    pub d: f64,
    pub axis: CurveAxis,
    pub points: Vec<(u64, f64)>,
}

impl DetectionCurve {
    pub fn over_runs(c: f64, d: f64, runs: impl IntoIterator<Item = u64>) -> Self {
        Self {
            c,
            d,
            axis: CurveAxis::Runs,
            points: runs.into_iter().map(|r| (r, detection_after_runs(c, d, r))).collect(),
        }
    }

    pub fn over_half_length(c: f64, d: f64, halves: impl IntoIterator<Item = u64>) -> Self {
        Self {
            c,
            d,
            axis: CurveAxis::HalfLength,
            points: halves
                .into_iter()
                .map(|n| (n, detection_vs_message_length(c, d, n)))
                .collect(),
        }
    }

    /// Assumes points are in increasing x order.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}
