//! Simulator and numerical toolkit for relativistic split-model bit
//! commitment.
//!
//! The crate executes three bit-commitment protocols with honest and
//! cheating agents under light-cone communication constraints, and computes
//! every quantity in their security analysis:
//!
//! * [`quantum`] — exact state vectors, BB84-basis measurement, partial
//!   trace and optimal state discrimination;
//! * [`bounds`] — entropies, the entropic uncertainty-relation check, the
//!   Hoeffding tail, the Hamming-volume bound and the binding-bound
//!   optimisation;
//! * [`spacetime`] — Minkowski geometry, protocol phases and split-model
//!   transcript validation;
//! * [`protocols`] — executable state machines for the three protocols
//!   (secret sharing, pre-agreed bit with local command, and commitment by
//!   transmitting measurement outcomes);
//! * [`adversaries`] — cheating strategies, the no-signalling outcome-table
//!   machinery and the polytope optimisation that makes the no-signalling
//!   bound tight.
//!
//! All randomness flows through explicit [`rng::SimRng`] handles, so every
//! simulation is reproducible from a 64-bit seed.

pub mod adversaries;
pub mod bits;
pub mod bounds;
pub mod error;
mod linalg;
pub mod protocols;
pub mod quantum;
pub mod rng;
pub mod spacetime;

pub use bits::{hamming_distance, BitString};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quantum::{
    epr_pair, guess_probability, measure_qubits, product_guess_probability, Basis, CqEnsemble,
    CqEntry, DensityOperator, QubitId, StateVector,
};
pub use rng::SimRng;
