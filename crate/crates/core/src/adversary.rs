//! Eve: eavesdropping strategies attached to the ping and pong routes.
//!
//! Each strategy sees the joint channel state through [`Channel`] and may add
//! her own registers to it (a substitute pair `H`, `T` or a probe ancilla `e`),
//! so every correlation she creates stays visible to Bob's Bell measurement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::{Announcement, Channel};
use crate::quantum::{BitPair, Register, StateError, StateVector};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum AttackStrategy {
    /// No eavesdropper.
    #[default]
    None,
    /// Measure the returning qubit in `{|↑⟩, |↓⟩}` and forward it.
    DisturbMeasure,
    /// Apply `1` or `σz` to the returning qubit, each with probability 1/2.
    DisturbPauliZ,
    /// Apply one of the four encodings to the returning qubit, uniformly.
    DisturbPauli4,
    /// Keep `t`, send `T` of a fresh `|Ψ_{0,0}⟩_{HT}`, read Alice's code from a
    /// Bell measurement on `HT`, apply that code to `t` and forward `t`.
    InterceptResendLiteral,
    /// As above, but forward `t` untouched.
    InterceptResendBlind,
    /// Entangle a probe ancilla with `t` on the ping route (weight `β²`) and
    /// measure it on the pong route.
    EntangleMeasure { beta2: f64 },
}

impl AttackStrategy {
    pub const NAMES: [&'static str; 7] = [
        "none",
        "disturb-measure",
        "disturb-pauli-z",
        "disturb-pauli4",
        "intercept-resend-literal",
        "intercept-resend-blind",
        "entangle-measure",
    ];

    pub fn entangle_measure(beta2: f64) -> Result<Self, AttackError> {
        if !(0.0..=0.5).contains(&beta2) {
            return Err(AttackError::Beta2OutOfRange(beta2));
        }
        Ok(Self::EntangleMeasure { beta2 })
    }

    /// Parses a strategy name; `beta2` must be given exactly for `entangle-measure`.
    pub fn from_name(name: &str, beta2: Option<f64>) -> Result<Self, AttackError> {
        let strategy = match name {
            "none" => Self::None,
            "disturb-measure" => Self::DisturbMeasure,
            "disturb-pauli-z" => Self::DisturbPauliZ,
            "disturb-pauli4" => Self::DisturbPauli4,
            "intercept-resend-literal" => Self::InterceptResendLiteral,
            "intercept-resend-blind" => Self::InterceptResendBlind,
            "entangle-measure" => {
                return Self::entangle_measure(beta2.ok_or(AttackError::MissingBeta2)?);
            }
            other => return Err(AttackError::UnknownStrategy(other.to_string())),
        };
        match beta2 {
            Some(_) => Err(AttackError::UnexpectedBeta2(name.to_string())),
            None => Ok(strategy),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::None => "none",
            Self::DisturbMeasure => "disturb-measure",
            Self::DisturbPauliZ => "disturb-pauli-z",
            Self::DisturbPauli4 => "disturb-pauli4",
            Self::InterceptResendLiteral => "intercept-resend-literal",
            Self::InterceptResendBlind => "intercept-resend-blind",
            Self::EntangleMeasure { .. } => "entangle-measure",
        }
    }

    pub fn beta2(&self) -> Option<f64> {
        match self {
            Self::EntangleMeasure { beta2 } => Some(*beta2),
            _ => None,
        }
    }

    /// Whether the strategy touches the channel at all.
    pub fn acts(&self) -> bool {
        !matches!(self, Self::None)
    }

    /// Whether Eve learns Alice's code outright.
    pub fn reads_alice(&self) -> bool {
        matches!(self, Self::InterceptResendLiteral | Self::InterceptResendBlind)
    }
}

impl fmt::Display for AttackStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EntangleMeasure { beta2 } => write!(f, "entangle-measure(beta2={beta2})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for AttackStrategy {
    type Err = AttackError;

    /// Accepts a bare name, or `entangle-measure:<beta2>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((name, beta2)) => {
                let beta2 = beta2
                    .parse()
                    .map_err(|_| AttackError::UnknownStrategy(s.to_string()))?;
                Self::from_name(name, Some(beta2))
            }
            None => Self::from_name(s, None),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttackError {
    #[error("unknown attack strategy `{0}` (expected one of: {names})", names = AttackStrategy::NAMES.join(", "))]
    UnknownStrategy(String),
    #[error("beta2 = {0} is outside [0, 0.5]")]
    Beta2OutOfRange(f64),
    #[error("entangle-measure needs beta2")]
    MissingBeta2,
    #[error("beta2 is only meaningful for entangle-measure, not `{0}`")]
    UnexpectedBeta2(String),
}

/// What Eve's quantum actions told her during a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Observation {
    Nothing,
    /// Z-basis reading of the returning qubit (0 = ↑, 1 = ↓).
    MeasuredTravel(u8),
    /// The random encoding she applied.
    Kick(BitPair),
    /// Bell outcome on her own `HT` pair, equal to Alice's code.
    SubstituteBell(BitPair),
    /// Ancilla reading: 0 = `χ0`, 1 = `χ1`.
    Ancilla(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveGuess {
    pub alice: BitPair,
    pub bob: BitPair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveRun {
    pub run: usize,
    pub observation: Observation,
    /// Present on message runs, once `(x, y)` has been broadcast.
    pub guess: Option<EveGuess>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EveRecord {
    pub strategy: AttackStrategy,
    pub runs: Vec<EveRun>,
    pub announcements_heard: usize,
}

impl EveRecord {
    pub fn new(strategy: AttackStrategy) -> Self {
        Self {
            strategy,
            runs: Vec::new(),
            announcements_heard: 0,
        }
    }

    pub fn run(&self, index: usize) -> Option<&EveRun> {
        self.runs.iter().find(|r| r.run == index)
    }
}

/// Eve's best reading of one message run.
///
/// With Alice's code in hand she inverts the public outcome for Bob's code;
/// otherwise nothing she holds depends on the secret bits and she guesses.
pub fn eve_guess(observation: Observation, outcome: BitPair, rng: &mut RandomStream) -> EveGuess {
    match observation {
        Observation::SubstituteBell(alice) => EveGuess {
            alice,
            bob: outcome ^ alice,
        },
        _ => EveGuess {
            alice: BitPair::random(&mut rng.eve),
            bob: BitPair::random(&mut rng.eve),
        },
    }
}

/// A live eavesdropper for one dialogue.
#[derive(Debug)]
pub struct Eve {
    record: EveRecord,
}

impl Eve {
    pub fn new(strategy: AttackStrategy) -> Self {
        Self {
            record: EveRecord::new(strategy),
        }
    }

    pub fn strategy(&self) -> &AttackStrategy {
        &self.record.strategy
    }

    pub fn acts(&self) -> bool {
        self.record.strategy.acts()
    }

    pub fn begin_run(&mut self, run: usize) {
        self.record.runs.push(EveRun {
            run,
            observation: Observation::Nothing,
            guess: None,
        });
    }

    fn observe(&mut self, observation: Observation) {
        if let Some(current) = self.record.runs.last_mut() {
            current.observation = observation;
        }
    }

    /// Tap on the Bob → Alice leg.
    pub fn on_ping(&mut self, channel: &mut Channel, _rng: &mut RandomStream) -> Result<(), StateError> {
        match self.record.strategy {
            AttackStrategy::InterceptResendLiteral | AttackStrategy::InterceptResendBlind => {
                let substitute = StateVector::bell_pair(Register::EveHome, Register::EveTravel, BitPair::ZERO)?;
                channel.state = channel.state.tensor(&substitute)?;
                channel.redirect(Register::EveTravel)
            }
            AttackStrategy::EntangleMeasure { beta2 } => {
                let target = channel.in_flight();
                channel.state.attach_ancilla(Register::Ancilla)?;
                channel
                    .state
                    .entangling_probe(target, Register::Ancilla, (1.0 - beta2).sqrt(), beta2.sqrt())
            }
            _ => Ok(()),
        }
    }

    /// Tap on the Alice → Bob leg.
    pub fn on_pong(&mut self, channel: &mut Channel, rng: &mut RandomStream) -> Result<(), StateError> {
        let travelling = channel.in_flight();
        match self.record.strategy {
            AttackStrategy::None => {}
            AttackStrategy::DisturbMeasure => {
                let bit = channel.state.measure_z(travelling, &mut rng.channel)?;
                self.observe(Observation::MeasuredTravel(bit));
            }
            AttackStrategy::DisturbPauliZ => {
                let kick = if rand::Rng::random_bool(&mut rng.eve, 0.5) {
                    BitPair::new(true, true)
                } else {
                    BitPair::ZERO
                };
                channel.state.apply_pauli(travelling, kick)?;
                self.observe(Observation::Kick(kick));
            }
            AttackStrategy::DisturbPauli4 => {
                let kick = BitPair::random(&mut rng.eve);
                channel.state.apply_pauli(travelling, kick)?;
                self.observe(Observation::Kick(kick));
            }
            AttackStrategy::InterceptResendLiteral | AttackStrategy::InterceptResendBlind => {
                let learned = channel
                    .state
                    .bell_measure(Register::EveHome, Register::EveTravel, &mut rng.channel)?;
                if self.record.strategy == AttackStrategy::InterceptResendLiteral {
                    channel.state.apply_pauli(Register::Travel, learned)?;
                }
                channel.redirect(Register::Travel)?;
                self.observe(Observation::SubstituteBell(learned));
            }
            AttackStrategy::EntangleMeasure { .. } => {
                let chi = channel.state.measure_z(Register::Ancilla, &mut rng.channel)?;
                self.observe(Observation::Ancilla(chi));
            }
        }
        Ok(())
    }

    /// Eve listens to every public announcement and guesses on each broadcast.
    pub fn hear(&mut self, announcement: &Announcement, rng: &mut RandomStream) {
        self.record.announcements_heard += 1;
        if let Announcement::Outcome(outcome) = announcement {
            let observation = self
                .record
                .runs
                .last()
                .map_or(Observation::Nothing, |r| r.observation);
            let guess = eve_guess(observation, *outcome, rng);
            if let Some(current) = self.record.runs.last_mut() {
                current.guess = Some(guess);
            }
        }
    }

    pub fn into_record(self) -> EveRecord {
        self.record
    }
}

/// The joint `h`, `t`, `e` state on the pong route, after Bob encodes `bob`,
/// Eve probes with weight `beta2` and Alice encodes `alice`, just before Eve
/// reads her ancilla.
pub fn probe_pong_state(bob: BitPair, alice: BitPair, beta2: f64) -> Result<StateVector, StateError> {
    let mut state = StateVector::bell(bob);
    state.attach_ancilla(Register::Ancilla)?;
    state.entangling_probe(Register::Travel, Register::Ancilla, (1.0 - beta2).sqrt(), beta2.sqrt())?;
    state.apply_pauli(Register::Travel, alice)?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{alice_encode, bob_prepare};
    use crate::quantum::pauli_compose;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parses_names() {
        for name in AttackStrategy::NAMES {
            let beta2 = (name == "entangle-measure").then_some(0.25);
            let s = AttackStrategy::from_name(name, beta2).unwrap();
            assert_eq!(s.name(), name);
        }
        assert_eq!(
            "entangle-measure:0.1".parse::<AttackStrategy>().unwrap(),
            AttackStrategy::EntangleMeasure { beta2: 0.1 }
        );
        assert!(matches!(AttackStrategy::from_name("mitm", None), Err(AttackError::UnknownStrategy(_))));
        assert_eq!(AttackStrategy::from_name("entangle-measure", None), Err(AttackError::MissingBeta2));
        assert_eq!(AttackStrategy::entangle_measure(0.6), Err(AttackError::Beta2OutOfRange(0.6)));
        assert!(matches!(
            AttackStrategy::from_name("none", Some(0.1)),
            Err(AttackError::UnexpectedBeta2(_))
        ));
    }

    #[test]
    fn none_is_pass_through() {
        let mut rng = RandomStream::for_trial(5, 0);
        let mut eve = Eve::new(AttackStrategy::None);
        eve.begin_run(1);
        let mut channel = bob_prepare(BitPair::new(true, false));
        let before = channel.clone();
        eve.on_ping(&mut channel, &mut rng).unwrap();
        eve.on_pong(&mut channel, &mut rng).unwrap();
        assert_eq!(channel, before);
        assert_eq!(eve.into_record().runs[0].observation, Observation::Nothing);
    }

    #[test]
    fn zero_beta_probe_leaves_pair_alone() {
        let mut rng = RandomStream::for_trial(5, 1);
        let mut eve = Eve::new(AttackStrategy::entangle_measure(0.0).unwrap());
        eve.begin_run(1);
        let mut channel = bob_prepare(BitPair::new(false, true));
        eve.on_ping(&mut channel, &mut rng).unwrap();
        let rho = channel.state.reduced_density(&[Register::Home, Register::Travel]).unwrap();
        let clean = StateVector::bell(BitPair::new(false, true))
            .reduced_density(&[Register::Home, Register::Travel])
            .unwrap();
        assert!(rho.max_abs_diff(&clean) < 1e-12);
    }

    #[test]
    fn ping_probe_matches_closed_form() {
        // α|Ψ_kl⟩|χ0⟩ + β φ_{01;kl} |Ψ_{k,1⊕l}⟩|χ1⟩
        let beta2: f64 = 0.3;
        let (alpha, beta) = ((1.0 - beta2).sqrt(), beta2.sqrt());
        let x = BitPair::new(false, true);
        for k in BitPair::ALL {
            let mut rng = RandomStream::for_trial(9, k.index() as u64);
            let mut eve = Eve::new(AttackStrategy::entangle_measure(beta2).unwrap());
            eve.begin_run(1);
            let mut channel = bob_prepare(k);
            eve.on_ping(&mut channel, &mut rng).unwrap();

            let product = pauli_compose(x, k);
            let mut expected = StateVector::bell(k);
            expected.attach_ancilla(Register::Ancilla).unwrap();
            let mut flipped = StateVector::bell(product.code);
            flipped.attach_ancilla(Register::Ancilla).unwrap();
            let phase = product.phase.to_complex();
            for idx in 0..8 {
                let want = if idx & 1 == 0 {
                    alpha * expected.amplitude(idx)
                } else {
                    beta * phase * flipped.amplitude(idx & !1)
                };
                let got = channel.state.amplitude(idx);
                assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-12);
                assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn substitute_qubit_is_entangled_with_eve_not_bob() {
        let mut rng = RandomStream::for_trial(5, 2);
        let mut eve = Eve::new(AttackStrategy::InterceptResendLiteral);
        eve.begin_run(1);
        let mut channel = bob_prepare(BitPair::new(true, true));
        eve.on_ping(&mut channel, &mut rng).unwrap();
        assert_eq!(channel.in_flight(), Register::EveTravel);
        let with_eve = channel.state.reduced_density(&[Register::EveHome, Register::EveTravel]).unwrap();
        assert_abs_diff_eq!(with_eve.von_neumann_entropy(), 0.0, epsilon = 1e-9);
        let with_bob = channel.state.reduced_density(&[Register::Home, Register::EveTravel]).unwrap();
        assert_abs_diff_eq!(with_bob.von_neumann_entropy(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn literal_intercept_learns_alice_exactly() {
        for trial in 0..64u64 {
            let mut rng = RandomStream::for_trial(77, trial);
            let k = BitPair::from_index(trial as usize % 4);
            let i = BitPair::from_index(trial as usize / 4 % 4);
            let mut eve = Eve::new(AttackStrategy::InterceptResendLiteral);
            eve.begin_run(1);
            let mut channel = bob_prepare(k);
            eve.on_ping(&mut channel, &mut rng).unwrap();
            alice_encode(&mut channel, i).unwrap();
            eve.on_pong(&mut channel, &mut rng).unwrap();
            assert_eq!(channel.in_flight(), Register::Travel);
            let outcome = channel
                .state
                .bell_measure(Register::Home, Register::Travel, &mut rng.channel)
                .unwrap();
            assert_eq!(outcome, i ^ k);
            eve.hear(&Announcement::Outcome(outcome), &mut rng);
            let record = eve.into_record();
            assert_eq!(record.runs[0].observation, Observation::SubstituteBell(i));
            assert_eq!(record.runs[0].guess, Some(EveGuess { alice: i, bob: k }));
        }
    }

    #[test]
    fn ancilla_outcome_collapses_pair() {
        // χ0 leaves Ψ_{i⊕k, j⊕l}; χ1 leaves Ψ_{i⊕k, j⊕1⊕l}
        let k = BitPair::new(true, false);
        let i = BitPair::new(false, true);
        let mut seen = [false; 2];
        for trial in 0..200 {
            let mut rng = RandomStream::for_trial(3, trial);
            let mut eve = Eve::new(AttackStrategy::entangle_measure(0.5).unwrap());
            eve.begin_run(1);
            let mut channel = bob_prepare(k);
            eve.on_ping(&mut channel, &mut rng).unwrap();
            alice_encode(&mut channel, i).unwrap();
            eve.on_pong(&mut channel, &mut rng).unwrap();
            let chi = match eve.into_record().runs[0].observation {
                Observation::Ancilla(chi) => chi,
                other => panic!("unexpected {other:?}"),
            };
            seen[chi as usize] = true;
            let expected = if chi == 0 { i ^ k } else { i ^ k ^ BitPair::new(false, true) };
            let probs = channel.state.bell_probabilities(Register::Home, Register::Travel).unwrap();
            assert_abs_diff_eq!(probs[expected.index()], 1.0, epsilon = 1e-12);
        }
        assert!(seen[0] && seen[1]);
    }
}
