//! Exact small-scale quantum states, BB84-basis measurement, partial trace
//! and state discrimination.
//!
//! Registers are capped at 24 qubits of full state vector. Qubits carry
//! stable [`QubitId`]s so index partitions survive reordering; the bit at
//! register position `i` (first label = leftmost ket slot) has weight
//! `2^(m-1-i)` in the amplitude index.

mod density;
mod ensemble;
mod state;

use serde::{Deserialize, Serialize};

pub use density::{trace_distance, DensityOperator};
pub use ensemble::{guess_probability, product_guess_probability, CqEnsemble, CqEntry};
pub use state::{
    epr_pair, epr_pair_labeled, measure_and_remove, measure_and_remove_rotated, measure_qubits,
    measure_qubits_rotated, measurement_branches, measurement_branches_rotated, StateVector,
};

/// Hard cap on full-state register width.
pub const MAX_QUBITS: usize = 24;

/// Absolute tolerance for algebraic checks (norms, traces, probabilities).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Tolerance for spectral checks (eigenvalue positivity).
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Stable identifier of a qubit within a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitId(pub u32);

impl std::fmt::Display for QubitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// One of the two BB84 measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// The computational basis {|0>, |1>}.
    Computational,
    /// The Hadamard basis {|+>, |->}.
    Hadamard,
}

impl Basis {
    /// Basis selected by a bit: 0 is computational, 1 is Hadamard.
    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Basis::Computational
        } else {
            Basis::Hadamard
        }
    }

    /// The bit naming this basis.
    pub fn bit(self) -> u8 {
        match self {
            Basis::Computational => 0,
            Basis::Hadamard => 1,
        }
    }
}

impl std::fmt::Display for Basis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Basis::Computational => write!(f, "B0"),
            Basis::Hadamard => write!(f, "B1"),
        }
    }
}
