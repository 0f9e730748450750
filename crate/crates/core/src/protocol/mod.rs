//! The dialogue state machine: framing, encoding, ping/pong flow, decoding and
//! control-mode checks.

mod engine;
mod message;
mod transcript;

pub use engine::{
    alice_encode, bob_prepare, cm_check, decode_counterpart, run_dialogue, run_dialogue_untapped, Channel,
    ProtocolConfig, TrialReport,
};
pub use message::Message;
pub use transcript::{Announcement, ChannelEvent, DetectionPolicy, DialogueStatus, Mode, RunRecord, Transcript};

use thiserror::Error;

use crate::quantum::StateError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("message is empty")]
    EmptyMessage,
    #[error("control probability c = {0} is outside (0, 1)")]
    ControlProbability(f64),
    #[error("messages must both have {expected} pairs (alice {alice}, bob {bob})")]
    LengthMismatch { expected: usize, alice: usize, bob: usize },
    #[error(transparent)]
    State(#[from] StateError),
}
