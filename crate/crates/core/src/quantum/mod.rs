//! Exact small-system quantum mechanics for the dialogue channel.

mod bits;
mod density;
pub mod pauli;
mod state;

pub use bits::BitPair;
pub use density::{DensityMatrix, EIGEN_CLAMP};
pub use pauli::{pauli_compose, pauli_matrix, Phase, PauliProduct};
pub use state::{bell_vector, Register, StateVector, MAX_REGISTERS, NORM_TOLERANCE};

use thiserror::Error;

/// Misuse of the state-vector API. These indicate harness bugs, not physics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("register {0} is not part of the state")]
    UnknownRegister(Register),
    #[error("register {0} appears twice")]
    DuplicateRegister(Register),
    #[error("{0} registers requested; at most {max} are supported", max = MAX_REGISTERS)]
    TooManyRegisters(usize),
    #[error("expected dimension {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("amplitude is NaN or infinite")]
    NonFinite,
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("states have different register orders")]
    RegisterOrderMismatch,
    #[error("probe amplitudes alpha={alpha}, beta={beta} do not satisfy alpha^2 + beta^2 = 1")]
    ProbeNormalization { alpha: f64, beta: f64 },
    #[error("ancilla {0} is not in its fiducial state")]
    AncillaNotFiducial(Register),
    #[error("partial trace needs at least one register to keep")]
    EmptyKeepList,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(&'static str),
}
