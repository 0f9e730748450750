//! Simulation and security analysis of the entanglement-based quantum dialogue:
//! two parties exchange messages simultaneously by superdense coding on a
//! shared pair whose travel qubit makes a ping-pong round trip, while randomly
//! interleaved control runs expose eavesdroppers.
//!
//! * [`quantum`]: state vectors, Pauli encodings, Bell measurement, partial trace.
//! * [`protocol`]: the dialogue state machine and its transcript.
//! * [`adversary`]: eavesdropping strategies on the ping and pong routes.
//! * [`analytics`]: detection and leakage formulas, estimators, exact oracle.
//! * [`harness`]: seeded experiments, sweeps, self-test and result documents.

pub mod adversary;
pub mod analytics;
pub mod harness;
pub mod protocol;
pub mod quantum;
pub mod rng;

pub use adversary::AttackStrategy;
pub use protocol::{run_dialogue, Message, ProtocolConfig, TrialReport};
pub use quantum::{BitPair, Register, StateVector};
pub use rng::RandomStream;
