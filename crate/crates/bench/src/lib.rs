//! Shared fixtures for the criterion benchmarks.

use relbc::quantum::{QubitId, StateVector};
use relbc::rng::SimRng;
use relbc::Complex64;

/// A reproducible random pure state on `qubits` qubits.
pub fn random_state(qubits: u32, seed: u64) -> StateVector {
    let mut rng = SimRng::from_seed(seed);
    let dim = 1usize << qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    StateVector::new(amps, (0..qubits).map(QubitId).collect()).expect("normalised fixture")
}
