//! Classical-quantum ensembles and optimal state discrimination.

use serde::{Deserialize, Serialize};

use super::{DensityOperator, ALGEBRAIC_TOL};
use crate::error::{Error, Result};

/// Off-diagonal magnitude below which a conditional state counts as
/// classical (diagonal in the computational basis).
const DIAGONAL_TOL: f64 = 1e-9;

/// One branch of a cq state: a classical label with its probability and the
/// conditional quantum state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CqEntry {
    /// Classical label value.
    pub label: String,
    /// Prior probability of the label.
    pub probability: f64,
    /// Conditional state of the quantum side.
    pub state: DensityOperator,
}

/// A classical-quantum state, stored as its ensemble decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CqEnsemble {
    entries: Vec<CqEntry>,
}

impl CqEnsemble {
    /// Builds an ensemble, checking probabilities and register consistency.
    pub fn new(entries: Vec<CqEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty ensemble".into()));
        }
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        if (total - 1.0).abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidInput(format!(
                "ensemble probabilities sum to {total}, expected 1"
            )));
        }
        if entries.iter().any(|e| e.probability < 0.0) {
            return Err(Error::InvalidInput("negative probability".into()));
        }
        let labels = entries[0].state.labels().to_vec();
        if entries.iter().any(|e| e.state.labels() != labels) {
            return Err(Error::InvalidInput(
                "conditional states live on different registers".into(),
            ));
        }
        let mut seen: Vec<&str> = entries.iter().map(|e| e.label.as_str()).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != entries.len() {
            return Err(Error::InvalidInput("duplicate ensemble label".into()));
        }
        Ok(Self { entries })
    }

    /// Shorthand for the two-label equal-prior case.
    pub fn binary(state_0: DensityOperator, state_1: DensityOperator) -> Result<Self> {
        Self::new(vec![
            CqEntry {
                label: "0".into(),
                probability: 0.5,
                state: state_0,
            },
            CqEntry {
                label: "1".into(),
                probability: 0.5,
                state: state_1,
            },
        ])
    }

    /// The branches of the ensemble.
    pub fn entries(&self) -> &[CqEntry] {
        &self.entries
    }

    /// Number of labels.
    pub fn label_count(&self) -> usize {
        self.entries.len()
    }

    /// Tensor product of two ensembles on disjoint registers: labels
    /// concatenate, probabilities multiply, states combine.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut entries = Vec::with_capacity(self.entries.len() * other.entries.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(CqEntry {
                    label: format!("{}{}", a.label, b.label),
                    probability: a.probability * b.probability,
                    state: a.state.tensor(&b.state)?,
                });
            }
        }
        Self::new(entries)
    }
}

/// Optimal probability of guessing the label given the quantum side.
///
/// Exact closed forms are implemented for the two cases the analysis needs:
///
/// * two labels (any states): the Helstrom value
///   `1/2 + tracenorm(p0 rho0 - p1 rho1) / 2`;
/// * any number of labels with all conditional states diagonal in the
///   computational basis: the classical value `sum_y max_x P(x, y)`.
///
/// Anything else is reported as unsupported rather than approximated.
pub fn guess_probability(ensemble: &CqEnsemble) -> Result<f64> {
    let entries = ensemble.entries();
    if entries.iter().all(|e| e.state.is_diagonal(DIAGONAL_TOL)) {
        let dim = entries[0].state.dimension();
        let mut total = 0.0;
        for y in 0..dim {
            let best = entries
                .iter()
                .map(|e| e.probability * e.state.element(y, y).re)
                .fold(0.0f64, f64::max);
            total += best;
        }
        return Ok(total);
    }
    if entries.len() == 2 {
        let weighted_diff = entries[0]
            .state
            .as_cmat()
            .scale(entries[0].probability)
            .sub(&entries[1].state.as_cmat().scale(entries[1].probability));
        return Ok(0.5 + 0.5 * weighted_diff.trace_norm_hermitian());
    }
    Err(Error::UnsupportedEnsemble(format!(
        "{} labels with non-commuting conditional states",
        entries.len()
    )))
}

/// Guessing probability of a product of independent rounds: the optimal
/// strategy factorises, so the value is the product of per-round values.
pub fn product_guess_probability(per_round: &[CqEnsemble]) -> Result<f64> {
    per_round
        .iter()
        .map(guess_probability)
        .try_fold(1.0, |acc, p| Ok(acc * p?))
}
