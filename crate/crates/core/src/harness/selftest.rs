use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::experiment::{run_experiment, Execution};
use crate::adversary::probe_pong_state;
use crate::analytics::eve_entropy_bits;
use crate::analytics::oracle::{encoded_bell_distribution, to_f64};
use crate::protocol::{alice_encode, bob_prepare, decode_counterpart};
use crate::quantum::pauli::verify_composition;
use crate::quantum::{pauli_compose, BitPair, PauliProduct, Register};

const PROBABILITY_TOLERANCE: f64 = 1e-12;
const ENTROPY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Summary on success, the offending cases on failure.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

fn check(name: &str, failures: Vec<String>, ok: String) -> Check {
    Check {
        name: name.into(),
        pass: failures.is_empty(),
        detail: if failures.is_empty() { ok } else { failures.join("; ") },
    }
}

fn phase_table(compose: impl Fn(BitPair, BitPair) -> PauliProduct) -> Check {
    let failures = verify_composition(compose).iter().map(ToString::to_string).collect();
    check("phase_table", failures, "16 compositions match matrix products".into())
}

fn bell_distribution() -> Check {
    let mut failures = Vec::new();
    for bob in BitPair::ALL {
        for alice in BitPair::ALL {
            let mut channel = bob_prepare(bob);
            let probs = alice_encode(&mut channel, alice)
                .and_then(|_| channel.state.bell_probabilities(Register::Home, Register::Travel));
            let oracle = encoded_bell_distribution(bob, alice);
            match probs {
                Ok(p) if p.iter().zip(oracle).all(|(x, o)| (x - to_f64(o)).abs() <= PROBABILITY_TOLERANCE) => {}
                Ok(p) => failures.push(format!("bob {bob} alice {alice}: {p:?}")),
                Err(e) => failures.push(format!("bob {bob} alice {alice}: {e}")),
            }
        }
    }
    check("bell_distribution", failures, "16 encodings match the exact oracle".into())
}

fn round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut failures = Vec::new();
    for bob in BitPair::ALL {
        for alice in BitPair::ALL {
            let mut channel = bob_prepare(bob);
            let outcome = alice_encode(&mut channel, alice)
                .and_then(|_| channel.state.bell_measure(Register::Home, Register::Travel, &mut rng));
            match outcome {
                Ok(o) if decode_counterpart(o, bob) == alice && decode_counterpart(o, alice) == bob => {}
                Ok(o) => failures.push(format!("bob {bob} alice {alice}: outcome {o}")),
                Err(e) => failures.push(format!("bob {bob} alice {alice}: {e}")),
            }
        }
    }
    check("round_trip", failures, "16 code pairs decode both ways".into())
}

fn entropy() -> Check {
    let mut failures = Vec::new();
    for (beta2, expected) in [(0.0, 0.0), (0.5, 1.0)] {
        match eve_entropy_bits(beta2) {
            Ok(s) if s == expected => {}
            other => failures.push(format!("closed form at beta2 {beta2}: {other:?}")),
        }
    }
    for beta2 in [0.0, 0.1, 0.25, 0.5] {
        let closed = eve_entropy_bits(beta2).unwrap_or(f64::NAN);
        for bob in BitPair::ALL {
            for alice in BitPair::ALL {
                let simulated = probe_pong_state(bob, alice, beta2)
                    .and_then(|s| s.reduced_density(&[Register::Ancilla]))
                    .map(|rho| rho.von_neumann_entropy());
                match simulated {
                    Ok(s) if (s - closed).abs() <= ENTROPY_TOLERANCE => {}
                    other => failures.push(format!("beta2 {beta2} bob {bob} alice {alice}: {other:?} vs {closed}")),
                }
            }
        }
    }
    check("entropy", failures, "endpoints exact, ancilla entropy matches closed form".into())
}

fn attack_free_fidelity() -> Check {
    let mut builder = ExperimentConfig::builder();
    builder.trials = Some(200);
    builder.n_pairs = Some(16);
    let result = builder
        .build()
        .and_then(|config| run_experiment(&config, Execution::Parallel));
    let failures = match &result {
        Ok(doc) => doc
            .failed()
            .map(|c| format!("{}: {} vs {}", c.name, c.empirical, c.reference))
            .collect(),
        Err(e) => vec![e.to_string()],
    };
    check(
        "attack_free_fidelity",
        failures,
        "200 dialogues, no control failures, no bit errors".into(),
    )
}

/// Runs every self-check against the built-in phase table.
pub fn selftest() -> SelftestReport {
    selftest_with(pauli_compose)
}

/// As [`selftest`], checking `compose` in place of the built-in phase table.
pub fn selftest_with(compose: impl Fn(BitPair, BitPair) -> PauliProduct) -> SelftestReport {
    let checks = vec![
        phase_table(compose),
        bell_distribution(),
        round_trip(),
        entropy(),
        attack_free_fidelity(),
    ];
    SelftestReport {
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    }
}
