use num_complex::Complex64;
use proptest::prelude::*;

use qdialogue::adversary::AttackStrategy;
use qdialogue::analytics::{detection_after_runs, detection_before_completion, detection_vs_message_length};
use qdialogue::protocol::{
    run_dialogue, run_dialogue_untapped, DetectionPolicy, DialogueStatus, Message, ProtocolConfig,
};
use qdialogue::quantum::{BitPair, Register, StateVector};
use qdialogue::rng::RandomStream;

fn pair() -> impl Strategy<Value = BitPair> {
    (0usize..4).prop_map(BitPair::from_index)
}

fn attack() -> impl Strategy<Value = AttackStrategy> {
    prop_oneof![
        Just(AttackStrategy::None),
        Just(AttackStrategy::DisturbMeasure),
        Just(AttackStrategy::DisturbPauliZ),
        Just(AttackStrategy::DisturbPauli4),
        Just(AttackStrategy::InterceptResendLiteral),
        Just(AttackStrategy::InterceptResendBlind),
        (0.0..=0.5f64).prop_map(|b| AttackStrategy::entangle_measure(b).unwrap()),
    ]
}

fn messages(n: usize, seed: u64, trial: u64) -> (Message, Message, RandomStream) {
    let mut rng = RandomStream::for_trial(seed, trial);
    let a = Message::random(n, &mut rng.messages).unwrap();
    let b = Message::random(n, &mut rng.messages).unwrap();
    (a, b, rng)
}

proptest! {
    #[test]
    fn paulis_and_probes_preserve_norm(
        start in pair(),
        codes in prop::collection::vec((pair(), any::<bool>()), 0..12),
        beta2 in 0.0..=0.5f64,
    ) {
        let mut state = StateVector::bell(start);
        state.attach_ancilla(Register::Ancilla).unwrap();
        state
            .entangling_probe(Register::Travel, Register::Ancilla, (1.0 - beta2).sqrt(), beta2.sqrt())
            .unwrap();
        for (code, on_travel) in codes {
            let reg = if on_travel { Register::Travel } else { Register::Home };
            state.apply_pauli(reg, code).unwrap();
            prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn global_phase_does_not_change_bell_statistics(bob in pair(), alice in pair(), theta in 0.0..std::f64::consts::TAU) {
        let mut state = StateVector::bell(bob);
        state.apply_pauli(Register::Travel, alice).unwrap();
        let rotated = state.with_global_phase(Complex64::from_polar(1.0, theta)).unwrap();
        let p = state.bell_probabilities(Register::Home, Register::Travel).unwrap();
        let q = rotated.bell_probabilities(Register::Home, Register::Travel).unwrap();
        for (x, y) in p.iter().zip(q) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!((p[(alice ^ bob).index()] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idle_eve_is_invisible(seed in any::<u64>(), trial in 0u64..1000, n in 1usize..24, c in 0.05..0.95f64) {
        let config = ProtocolConfig::new(c, n).unwrap();
        let (a, b, rng) = messages(n, seed, trial);
        let tapped = run_dialogue(&config, &a, &b, &AttackStrategy::None, &mut rng.clone()).unwrap();
        let untapped = run_dialogue_untapped(&config, &a, &b, &mut rng.clone()).unwrap();
        prop_assert_eq!(tapped.transcript, untapped.transcript);
        prop_assert_eq!(tapped.alice_decoded, untapped.alice_decoded);
        prop_assert_eq!(tapped.bob_decoded, untapped.bob_decoded);
    }

    #[test]
    fn run_counts_add_up(
        seed in any::<u64>(),
        n in 1usize..16,
        c in 0.05..0.95f64,
        strategy in attack(),
        reinit in any::<bool>(),
        restarts in 0u32..4,
    ) {
        let policy = if reinit { DetectionPolicy::Reinitialize } else { DetectionPolicy::Terminal };
        let config = ProtocolConfig::new(c, n).unwrap().with_policy(policy, restarts);
        let (a, b, mut rng) = messages(n, seed, 0);
        let report = run_dialogue(&config, &a, &b, &strategy, &mut rng).unwrap();
        let t = &report.transcript;
        prop_assert_eq!(t.total_runs, t.mm_runs + t.cm_runs);
        prop_assert_eq!(t.total_runs, t.runs.len());
        prop_assert!(t.restart_count <= restarts);
        match t.status {
            DialogueStatus::Completed => prop_assert_eq!(t.final_attempt_mm_runs(), n),
            DialogueStatus::Detected => {
                prop_assert_eq!(policy, DetectionPolicy::Terminal);
                prop_assert_eq!(t.runs.last().unwrap().cm_pass, Some(false));
            }
            DialogueStatus::AbortedMaxRestarts => prop_assert_eq!(t.restart_count, restarts),
        }
        // A strategy that never disturbs leaves no failed control runs.
        if matches!(strategy, AttackStrategy::None | AttackStrategy::InterceptResendLiteral) {
            prop_assert_eq!(t.control_failures(), 0);
            prop_assert_eq!(report.message_bit_errors(), 0);
        }
    }

    #[test]
    fn framing_round_trips(bits in prop::collection::vec(any::<bool>(), 1..64)) {
        let message = Message::frame(&bits).unwrap();
        prop_assert_eq!(message.is_padded(), bits.len() % 2 == 1);
        prop_assert_eq!(message.unframe(), bits);
    }

    #[test]
    fn closed_form_equals_partial_sum(c in 0.01..0.99f64, d in 0.0..=1.0f64, runs in 0u64..200) {
        let q = c * d;
        let partial: f64 = (0..runs).map(|k| q * (1.0 - q).powi(k as i32)).sum();
        prop_assert!((detection_after_runs(c, d, runs) - partial).abs() < 1e-12);
    }

    #[test]
    fn detection_grows_with_length_and_control_rate(
        c in 0.01..0.98f64,
        dc in 0.0..0.01f64,
        d in 0.0..=1.0f64,
        n in 1u64..100,
    ) {
        let c2 = (c + dc).min(0.99);
        prop_assert!(detection_vs_message_length(c, d, n + 1) >= detection_vs_message_length(c, d, n));
        prop_assert!(detection_vs_message_length(c2, d, n) >= detection_vs_message_length(c, d, n));
        prop_assert!(detection_before_completion(c, d, n + 1) >= detection_before_completion(c, d, n));
    }
}
