use serde::{Deserialize, Serialize};

use crate::quantum::BitPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Message mode: the run carries one pair from each party.
    #[serde(rename = "MM")]
    Message,
    /// Control mode: the run is sacrificed to check for eavesdropping.
    #[serde(rename = "CM")]
    Control,
}

/// What happens to the dialogue after a failed control check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionPolicy {
    /// Stop at the first detection.
    #[default]
    Terminal,
    /// Restart the message from its first pair.
    Reinitialize,
}

/// Quantum-channel events, in the order they occur within a run. The sequence
/// is the same in both modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelEvent {
    /// Bob sends the travel qubit to Alice.
    Ping,
    /// Alice returns the travel qubit to Bob.
    Pong,
    /// Bob measures the pair he holds in the Bell basis.
    BellMeasurement,
}

/// Entries on the authenticated public classical channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Announcement {
    /// Bob tells Alice a qubit is on its way.
    QubitSent,
    /// Alice confirms receipt.
    QubitReceived,
    /// Alice reveals the mode of the run, after Bob's Bell measurement.
    Mode(Mode),
    /// Bob broadcasts his Bell outcome `(x, y)` (message runs).
    Outcome(BitPair),
    /// Alice reveals her code `(i, j)` (control runs).
    Revealed(BitPair),
    /// Bob reports whether the control check passed.
    ControlVerdict(bool),
    /// The message restarts from its first pair.
    Restart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// 1-based count over the whole dialogue, restarts included.
    pub index: usize,
    /// 0 for the first pass through the message, +1 per restart.
    pub attempt: u32,
    /// 1-based message position the run served.
    pub slot: usize,
    pub mode: Mode,
    pub bob_code: BitPair,
    pub alice_code: BitPair,
    pub outcome: BitPair,
    /// Present exactly on control runs.
    pub cm_pass: Option<bool>,
    /// Whether an eavesdropping strategy acted on this run.
    pub tapped: bool,
    pub channel_events: Vec<ChannelEvent>,
    pub announcements: Vec<Announcement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DialogueStatus {
    Completed,
    Detected,
    AbortedMaxRestarts,
}

/// Full log of one dialogue. Counters are cumulative across restarts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub runs: Vec<RunRecord>,
    pub total_runs: usize,
    pub mm_runs: usize,
    pub cm_runs: usize,
    pub restart_count: u32,
    pub status: DialogueStatus,
    pub alice_padded: bool,
    pub bob_padded: bool,
}

impl Transcript {
    pub(crate) fn new(alice_padded: bool, bob_padded: bool) -> Self {
        Self {
            runs: Vec::new(),
            total_runs: 0,
            mm_runs: 0,
            cm_runs: 0,
            restart_count: 0,
            status: DialogueStatus::Completed,
            alice_padded,
            bob_padded,
        }
    }

    pub(crate) fn push(&mut self, record: RunRecord) {
        self.total_runs += 1;
        match record.mode {
            Mode::Message => self.mm_runs += 1,
            Mode::Control => self.cm_runs += 1,
        }
        self.runs.push(record);
    }

    pub fn control_runs(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter(|r| r.mode == Mode::Control)
    }

    pub fn control_failures(&self) -> usize {
        self.control_runs().filter(|r| r.cm_pass == Some(false)).count()
    }

    /// Message runs of the last attempt, which are the ones that delivered the
    /// decoded messages.
    pub fn final_attempt_mm_runs(&self) -> usize {
        self.runs
            .iter()
            .filter(|r| r.attempt == self.restart_count && r.mode == Mode::Message)
            .count()
    }
}
