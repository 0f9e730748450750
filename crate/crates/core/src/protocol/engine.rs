use rand::Rng;
use serde::{Deserialize, Serialize};

use super::transcript::{Announcement, ChannelEvent, DetectionPolicy, DialogueStatus, Mode, RunRecord, Transcript};
use super::{Message, ProtocolError};
use crate::adversary::{AttackStrategy, Eve, EveRecord};
use crate::quantum::{BitPair, Register, StateError, StateVector};
use crate::rng::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Probability `c` that Alice turns a run into a control run.
    pub control_probability: f64,
    /// Message half-length `N`.
    pub n_pairs: usize,
    pub max_restarts: u32,
    pub detection_policy: DetectionPolicy,
}

impl ProtocolConfig {
    pub fn new(control_probability: f64, n_pairs: usize) -> Result<Self, ProtocolError> {
        let config = Self {
            control_probability,
            n_pairs,
            max_restarts: 0,
            detection_policy: DetectionPolicy::Terminal,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_policy(mut self, policy: DetectionPolicy, max_restarts: u32) -> Self {
        self.detection_policy = policy;
        self.max_restarts = max_restarts;
        self
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        let c = self.control_probability;
        if !(c > 0.0 && c < 1.0) {
            return Err(ProtocolError::ControlProbability(c));
        }
        if self.n_pairs == 0 {
            return Err(ProtocolError::EmptyMessage);
        }
        Ok(())
    }
}

/// The joint quantum state of everything in play during one run, plus which
/// register is currently travelling between the parties.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub state: StateVector,
    in_flight: Register,
}

impl Channel {
    pub fn new(state: StateVector, in_flight: Register) -> Result<Self, StateError> {
        if !state.contains(in_flight) {
            return Err(StateError::UnknownRegister(in_flight));
        }
        Ok(Self { state, in_flight })
    }

    pub fn in_flight(&self) -> Register {
        self.in_flight
    }

    /// Swaps the travelling qubit for another register of the joint state.
    pub fn redirect(&mut self, reg: Register) -> Result<(), StateError> {
        if !self.state.contains(reg) {
            return Err(StateError::UnknownRegister(reg));
        }
        self.in_flight = reg;
        Ok(())
    }
}

/// Bob encodes `(k, l)` on a fresh `|Ψ_{0,0}⟩`, keeping `h` and sending `t`.
pub fn bob_prepare(code: BitPair) -> Channel {
    Channel::new(StateVector::bell(code), Register::Travel).expect("bell pair holds t")
}

/// Alice applies `C_{i,j}` to whatever qubit reached her.
pub fn alice_encode(channel: &mut Channel, code: BitPair) -> Result<(), StateError> {
    let reg = channel.in_flight();
    channel.state.apply_pauli(reg, code)
}

/// Recovers the other party's pair from the broadcast outcome and one's own
/// code: `(x ⊕ a, y ⊕ b)`.
pub fn decode_counterpart(outcome: BitPair, own_code: BitPair) -> BitPair {
    outcome ^ own_code
}

/// Bob's control check: the outcome must equal `revealed ⊕ bob_code`.
pub fn cm_check(outcome: BitPair, bob_code: BitPair, alice_revealed: BitPair) -> bool {
    outcome == alice_revealed ^ bob_code
}

/// Result of one dialogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub transcript: Transcript,
    pub alice_message: Message,
    pub bob_message: Message,
    /// What Alice decoded, i.e. her copy of Bob's message.
    pub alice_decoded: Message,
    /// What Bob decoded, i.e. his copy of Alice's message.
    pub bob_decoded: Message,
    pub eve: EveRecord,
}

impl TrialReport {
    /// Bit errors in both directions; only meaningful for completed dialogues.
    pub fn message_bit_errors(&self) -> usize {
        self.bob_decoded.bit_errors(&self.alice_message) + self.alice_decoded.bit_errors(&self.bob_message)
    }
}

/// Runs a full dialogue with Eve on the channel.
pub fn run_dialogue(
    config: &ProtocolConfig,
    alice_msg: &Message,
    bob_msg: &Message,
    attack: &AttackStrategy,
    rng: &mut RandomStream,
) -> Result<TrialReport, ProtocolError> {
    let mut eve = Eve::new(attack.clone());
    drive(config, alice_msg, bob_msg, Some(&mut eve), rng).map(|(transcript, alice_decoded, bob_decoded)| TrialReport {
        transcript,
        alice_message: alice_msg.clone(),
        bob_message: bob_msg.clone(),
        alice_decoded,
        bob_decoded,
        eve: eve.into_record(),
    })
}

/// Runs a dialogue with no tap handlers installed at all.
pub fn run_dialogue_untapped(
    config: &ProtocolConfig,
    alice_msg: &Message,
    bob_msg: &Message,
    rng: &mut RandomStream,
) -> Result<TrialReport, ProtocolError> {
    drive(config, alice_msg, bob_msg, None, rng).map(|(transcript, alice_decoded, bob_decoded)| TrialReport {
        transcript,
        alice_message: alice_msg.clone(),
        bob_message: bob_msg.clone(),
        alice_decoded,
        bob_decoded,
        eve: EveRecord::new(AttackStrategy::None),
    })
}

fn drive(
    config: &ProtocolConfig,
    alice_msg: &Message,
    bob_msg: &Message,
    mut eve: Option<&mut Eve>,
    rng: &mut RandomStream,
) -> Result<(Transcript, Message, Message), ProtocolError> {
    config.validate()?;
    let n = config.n_pairs;
    if alice_msg.len() != n || bob_msg.len() != n {
        return Err(ProtocolError::LengthMismatch {
            expected: n,
            alice: alice_msg.len(),
            bob: bob_msg.len(),
        });
    }

    let mut transcript = Transcript::new(alice_msg.is_padded(), bob_msg.is_padded());
    let mut alice_decoded = Vec::with_capacity(n);
    let mut bob_decoded = Vec::with_capacity(n);
    let mut attempt = 0u32;
    let tapped = eve.as_ref().is_some_and(|e| e.acts());

    'dialogue: loop {
        alice_decoded.clear();
        bob_decoded.clear();
        let mut slot = 0;
        while slot < n {
            let index = transcript.total_runs + 1;
            let bob_code = bob_msg.pairs()[slot];
            let mut announcements = vec![Announcement::QubitSent];
            let mut channel = bob_prepare(bob_code);

            if let Some(eve) = eve.as_deref_mut() {
                eve.begin_run(index);
                eve.on_ping(&mut channel, rng)?;
            }
            announcements.push(Announcement::QubitReceived);

            // Alice decides the mode privately; a control run carries a fresh
            // random code so revealing it exposes nothing of her message.
            let mode = if rng.alice.random_bool(config.control_probability) {
                Mode::Control
            } else {
                Mode::Message
            };
            let alice_code = match mode {
                Mode::Message => alice_msg.pairs()[slot],
                Mode::Control => BitPair::random(&mut rng.alice),
            };
            alice_encode(&mut channel, alice_code)?;

            if let Some(eve) = eve.as_deref_mut() {
                eve.on_pong(&mut channel, rng)?;
            }
            let returned = channel.in_flight();
            let outcome = channel.state.bell_measure(Register::Home, returned, &mut rng.channel)?;

            announcements.push(Announcement::Mode(mode));
            let mut cm_pass = None;
            match mode {
                Mode::Message => {
                    bob_decoded.push(decode_counterpart(outcome, bob_code));
                    alice_decoded.push(decode_counterpart(outcome, alice_code));
                    announcements.push(Announcement::Outcome(outcome));
                }
                Mode::Control => {
                    announcements.push(Announcement::Revealed(alice_code));
                    let pass = cm_check(outcome, bob_code, alice_code);
                    announcements.push(Announcement::ControlVerdict(pass));
                    cm_pass = Some(pass);
                }
            }
            if let Some(eve) = eve.as_deref_mut() {
                for a in &announcements {
                    eve.hear(a, rng);
                }
            }

            transcript.push(RunRecord {
                index,
                attempt,
                slot: slot + 1,
                mode,
                bob_code,
                alice_code,
                outcome,
                cm_pass,
                tapped,
                channel_events: vec![ChannelEvent::Ping, ChannelEvent::Pong, ChannelEvent::BellMeasurement],
                announcements,
            });

            match cm_pass {
                None => slot += 1,
                Some(true) => {}
                Some(false) => match config.detection_policy {
                    DetectionPolicy::Terminal => {
                        transcript.status = DialogueStatus::Detected;
                        break 'dialogue;
                    }
                    DetectionPolicy::Reinitialize => {
                        if transcript.restart_count >= config.max_restarts {
                            transcript.status = DialogueStatus::AbortedMaxRestarts;
                            break 'dialogue;
                        }
                        transcript.restart_count += 1;
                        attempt += 1;
                        if let Some(last) = transcript.runs.last_mut() {
                            last.announcements.push(Announcement::Restart);
                        }
                        if let Some(eve) = eve.as_deref_mut() {
                            eve.hear(&Announcement::Restart, rng);
                        }
                        continue 'dialogue;
                    }
                },
            }
        }
        transcript.status = DialogueStatus::Completed;
        break;
    }

    Ok((
        transcript,
        Message::partial(alice_decoded, bob_msg.is_padded()),
        Message::partial(bob_decoded, alice_msg.is_padded()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: u8, b: u8) -> BitPair {
        BitPair::from_bits(a, b).unwrap()
    }

    #[test]
    fn decode_is_xor() {
        assert_eq!(decode_counterpart(pair(1, 0), pair(1, 1)), pair(0, 1));
        for x in BitPair::ALL {
            assert_eq!(decode_counterpart(x, BitPair::ZERO), x);
            for own in BitPair::ALL {
                let other = decode_counterpart(x, own);
                assert_eq!(decode_counterpart(decode_counterpart(x, other), other), x);
            }
        }
    }

    #[test]
    fn control_check_cases() {
        assert!(cm_check(pair(1, 0), pair(1, 1), pair(0, 1)));
        assert!(!cm_check(pair(1, 0), pair(1, 1), pair(1, 1)));
    }

    #[test]
    fn bob_prepare_is_bell_state() {
        let mut rng = RandomStream::for_trial(0, 0);
        for code in BitPair::ALL {
            let mut channel = bob_prepare(code);
            assert_eq!(channel.in_flight(), Register::Travel);
            assert_eq!(channel.state, StateVector::bell(code));
            let outcome = channel.state.bell_measure(Register::Home, Register::Travel, &mut rng.channel).unwrap();
            assert_eq!(outcome, code);
        }
    }

    #[test]
    fn alice_encode_follows_xor_rule() {
        for k in BitPair::ALL {
            for i in BitPair::ALL {
                let mut channel = bob_prepare(k);
                alice_encode(&mut channel, i).unwrap();
                let overlap = channel.state.overlap(&StateVector::bell(i ^ k)).unwrap();
                assert!((overlap - 1.0).abs() < 1e-12, "k={k} i={i}");
            }
        }
        // σx on Ψ_{1,1} gives Ψ_{1,0}
        let mut channel = bob_prepare(pair(1, 1));
        alice_encode(&mut channel, pair(0, 1)).unwrap();
        assert!((channel.state.overlap(&StateVector::bell(pair(1, 0))).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_config_and_mismatched_messages() {
        assert_eq!(ProtocolConfig::new(1.0, 4), Err(ProtocolError::ControlProbability(1.0)));
        assert_eq!(ProtocolConfig::new(0.0, 4), Err(ProtocolError::ControlProbability(0.0)));
        let config = ProtocolConfig::new(0.5, 2).unwrap();
        let a = Message::frame(&[true, false, true, true]).unwrap();
        let b = Message::frame(&[true, false]).unwrap();
        let mut rng = RandomStream::for_trial(1, 1);
        assert!(matches!(
            run_dialogue(&config, &a, &b, &AttackStrategy::None, &mut rng),
            Err(ProtocolError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn attack_free_dialogue_exchanges_both_messages() {
        let config = ProtocolConfig::new(0.3, 6).unwrap();
        for trial in 0..50 {
            let mut rng = RandomStream::for_trial(11, trial);
            let a = Message::random(6, &mut rng.messages).unwrap();
            let b = Message::random(6, &mut rng.messages).unwrap();
            let report = run_dialogue(&config, &a, &b, &AttackStrategy::None, &mut rng).unwrap();
            assert_eq!(report.transcript.status, DialogueStatus::Completed);
            assert_eq!(report.bob_decoded, a);
            assert_eq!(report.alice_decoded, b);
            assert_eq!(report.transcript.mm_runs, 6);
            assert_eq!(report.transcript.total_runs, report.transcript.mm_runs + report.transcript.cm_runs);
        }
    }
}
