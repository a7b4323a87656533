//! Density operators, partial trace and trace distance.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{QubitId, StateVector, ALGEBRAIC_TOL, SPECTRAL_TOL};
use crate::error::{Error, Result};
use crate::linalg::CMat;

/// A mixed state: Hermitian, positive semi-definite, unit trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    labels: Vec<QubitId>,
    /// Row-major matrix of dimension `2^labels.len()`.
    matrix: Vec<Complex64>,
}

impl DensityOperator {
    /// Builds an operator from a row-major matrix, validating Hermiticity
    /// (within 1e-12), positivity (eigenvalues >= -1e-10) and unit trace
    /// (within 1e-12).
    pub fn new(matrix: Vec<Complex64>, labels: Vec<QubitId>) -> Result<Self> {
        let dim = 1usize << labels.len();
        if matrix.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                dim * dim
            )));
        }
        let mat = CMat { dim, data: matrix };
        if mat.hermiticity_defect() > ALGEBRAIC_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not Hermitian (defect {})",
                mat.hermiticity_defect()
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > ALGEBRAIC_TOL || trace.im.abs() > ALGEBRAIC_TOL {
            return Err(Error::InvalidInput(format!("trace is {trace}, expected 1")));
        }
        let min_eig = mat.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
        if min_eig < -SPECTRAL_TOL {
            return Err(Error::InvalidInput(format!(
                "matrix is not positive semi-definite (min eigenvalue {min_eig})"
            )));
        }
        Ok(Self {
            labels,
            matrix: mat.data,
        })
    }

    /// |psi><psi| for a pure state.
    pub fn from_state(state: &StateVector) -> Self {
        let mat = CMat::outer(state.amplitudes());
        Self {
            labels: state.labels().to_vec(),
            matrix: mat.data,
        }
    }

    /// The maximally mixed state I / 2^m.
    pub fn maximally_mixed(labels: Vec<QubitId>) -> Self {
        let dim = 1usize << labels.len();
        let mat = CMat::identity(dim).scale(1.0 / dim as f64);
        Self {
            labels,
            matrix: mat.data,
        }
    }

    /// A classical (diagonal) state from computational-basis weights.
    pub fn from_diagonal(weights: &[f64], labels: Vec<QubitId>) -> Result<Self> {
        let dim = 1usize << labels.len();
        if weights.len() != dim {
            return Err(Error::InvalidInput(format!(
                "{} diagonal weights for dimension {dim}",
                weights.len()
            )));
        }
        let mut mat = CMat::zeros(dim);
        for (i, &w) in weights.iter().enumerate() {
            mat[(i, i)] = Complex64::new(w, 0.0);
        }
        Self::new(mat.data, labels)
    }

    /// Convex mixture of operators on the same register.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("empty mixture".into()))?;
        let dim = first.1.dimension();
        let mut acc = CMat::zeros(dim);
        for (w, op) in parts {
            if op.labels != first.1.labels {
                return Err(Error::InvalidInput(
                    "mixture parts live on different registers".into(),
                ));
            }
            acc = acc.add(&op.as_cmat().scale(*w));
        }
        Self::new(acc.data, first.1.labels.clone())
    }

    /// Register labels.
    pub fn labels(&self) -> &[QubitId] {
        &self.labels
    }

    /// Matrix dimension `2^m`.
    pub fn dimension(&self) -> usize {
        1usize << self.labels.len()
    }

    /// Matrix element (row, column).
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dimension() + col]
    }

    /// Trace (1 within tolerance by construction).
    pub fn trace(&self) -> f64 {
        (0..self.dimension()).map(|i| self.element(i, i).re).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.as_cmat().hermitian_eigenvalues()
    }

    /// True when every off-diagonal entry is below `tol` in magnitude.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let dim = self.dimension();
        (0..dim).all(|i| (0..dim).all(|j| i == j || self.element(i, j).norm() <= tol))
    }

    /// Kronecker product with another operator on a disjoint register.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if other.labels.iter().any(|q| self.labels.contains(q)) {
            return Err(Error::InvalidInput(
                "tensor product requires disjoint registers".into(),
            ));
        }
        let mat = self.as_cmat().kron(&other.as_cmat());
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(Self {
            labels,
            matrix: mat.data,
        })
    }

    /// Reduced operator on `keep` (output register in `keep` order).
    pub fn partial_trace(&self, keep: &[QubitId]) -> Result<DensityOperator> {
        let positions = trace_positions(&self.labels, keep)?;
        let m = self.labels.len();
        let dim_keep = 1usize << keep.len();
        let dim_env = 1usize << (m - keep.len());
        let env_positions: Vec<usize> = (0..m).filter(|p| !positions.contains(p)).collect();

        let mut out = CMat::zeros(dim_keep);
        for env in 0..dim_env {
            let env_part = scatter_bits(env, &env_positions, m);
            for i in 0..dim_keep {
                let row = env_part | scatter_bits(i, &positions, m);
                for j in 0..dim_keep {
                    let col = env_part | scatter_bits(j, &positions, m);
                    out[(i, j)] += self.matrix[row * (1 << m) + col];
                }
            }
        }
        Ok(DensityOperator {
            labels: keep.to_vec(),
            matrix: out.data,
        })
    }

    pub(crate) fn as_cmat(&self) -> CMat {
        CMat {
            dim: self.dimension(),
            data: self.matrix.clone(),
        }
    }
}

impl StateVector {
    /// Reduced density operator on `keep` (output register in `keep` order).
    pub fn partial_trace(&self, keep: &[QubitId]) -> Result<DensityOperator> {
        let positions = trace_positions(self.labels(), keep)?;
        let m = self.qubit_count();
        let dim_keep = 1usize << keep.len();
        let dim_env = 1usize << (m - keep.len());
        let env_positions: Vec<usize> = (0..m).filter(|p| !positions.contains(p)).collect();

        let amps = self.amplitudes();
        let mut out = CMat::zeros(dim_keep);
        let mut kept_indices = vec![0usize; dim_keep];
        for env in 0..dim_env {
            let env_part = scatter_bits(env, &env_positions, m);
            for (i, slot) in kept_indices.iter_mut().enumerate() {
                *slot = env_part | scatter_bits(i, &positions, m);
            }
            for i in 0..dim_keep {
                let ai = amps[kept_indices[i]];
                if ai.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim_keep {
                    out[(i, j)] += ai * amps[kept_indices[j]].conj();
                }
            }
        }
        Ok(DensityOperator {
            labels: keep.to_vec(),
            matrix: out.data,
        })
    }
}

/// Maps keep labels to register positions, rejecting an empty or invalid set.
fn trace_positions(labels: &[QubitId], keep: &[QubitId]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut positions = Vec::with_capacity(keep.len());
    for &q in keep {
        let pos = labels
            .iter()
            .position(|&l| l == q)
            .ok_or(Error::UnknownQubit(q.0))?;
        if positions.contains(&pos) {
            return Err(Error::InvalidInput(format!("qubit {q} kept twice")));
        }
        positions.push(pos);
    }
    Ok(positions)
}

/// Places the bits of `value` (most significant first) at the given register
/// positions of an `m`-qubit index.
fn scatter_bits(value: usize, positions: &[usize], m: usize) -> usize {
    let mut out = 0usize;
    for (t, &pos) in positions.iter().enumerate() {
        let bit = (value >> (positions.len() - 1 - t)) & 1;
        out |= bit << (m - 1 - pos);
    }
    out
}

/// Trace distance (half the trace norm of the difference).
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.labels() != b.labels() {
        return Err(Error::InvalidInput(
            "trace distance requires matching registers".into(),
        ));
    }
    Ok(a.as_cmat().sub(&b.as_cmat()).trace_norm_hermitian() * 0.5)
}
