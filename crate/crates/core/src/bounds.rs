//! Scalar security-analysis mathematics.
//!
//! Entropies (Rényi family, conditional classical min/max), the overlap
//! constant and uncertainty-relation check, the Hoeffding tail, the exact
//! Hamming-volume bound, and the optimisation that turns the per-round
//! analysis into the binding bound `epsilon(n)`.
//!
//! All logarithms are base 2 and `0 log 0 = 0` throughout.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::quantum::{guess_probability, Basis, CqEnsemble, DensityOperator};

/// A finite probability distribution over named symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    weights: BTreeMap<String, f64>,
}

impl Distribution {
    /// Builds a distribution, checking non-negativity and normalisation.
    pub fn new(weights: BTreeMap<String, f64>) -> Result<Self> {
        if let Some((sym, &w)) = weights.iter().find(|(_, &w)| w < 0.0) {
            return Err(Error::InvalidInput(format!(
                "negative weight {w} for symbol {sym:?}"
            )));
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// Distribution from a list of `(symbol, weight)` pairs.
    pub fn from_pairs(pairs: &[(&str, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|(s, w)| (s.to_string(), *w))
                .collect::<BTreeMap<_, _>>(),
        )
    }

    /// Uniform distribution over `count` symbols named `0..count`.
    pub fn uniform(count: usize) -> Self {
        let w = 1.0 / count as f64;
        Self {
            weights: (0..count).map(|i| (i.to_string(), w)).collect(),
        }
    }

    /// The symbol/weight pairs in canonical (sorted) order.
    pub fn weights(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(s, &w)| (s.as_str(), w))
    }
}

/// A joint distribution over pairs of named symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    weights: BTreeMap<(String, String), f64>,
}

impl JointDistribution {
    /// Builds a joint distribution from `(x, y, weight)` entries; weights of
    /// repeated pairs accumulate.
    pub fn new(entries: Vec<(String, String, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (x, y, w) in entries {
            if w < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "negative weight {w} for pair ({x:?}, {y:?})"
                )));
            }
            *weights.entry((x, y)).or_insert(0.0) += w;
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "joint weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// Entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.weights
            .iter()
            .map(|((x, y), &w)| (x.as_str(), y.as_str(), w))
    }

    /// Groups the joint weights by the second symbol.
    fn columns(&self) -> BTreeMap<&str, Vec<(&str, f64)>> {
        let mut cols: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
        for ((x, y), &w) in &self.weights {
            cols.entry(y.as_str()).or_default().push((x.as_str(), w));
        }
        cols
    }
}

/// The binding bound at a given round count, with its optimising deviation
/// parameter and the two summands it decomposes into.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// Number of protocol rounds.
    pub n: usize,
    /// Minimising deviation parameter, in (0, 1/2).
    pub delta_star: f64,
    /// The bound value: `term_entropy + term_hoeffding` at `delta_star`.
    pub epsilon: f64,
    /// The `2^(1 - n(1 - h(delta)))` summand.
    pub term_entropy: f64,
    /// The `2 exp(-n delta^2 / 2)` summand.
    pub term_hoeffding: f64,
}

/// Binary entropy `h(q) = -q log q - (1-q) log(1-q)`.
pub fn binary_entropy(q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::InvalidInput(format!("q = {q} outside [0, 1]")));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(q) + term(1.0 - q))
}

/// Rényi entropy of order `alpha` (base 2), with the limits at 0, 1 and
/// infinity.
pub fn renyi_entropy(dist: &Distribution, alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha < 0.0 {
        return Err(Error::InvalidInput(format!(
            "invalid order alpha = {alpha}"
        )));
    }
    let probs: Vec<f64> = dist
        .weights()
        .map(|(_, w)| w)
        .filter(|&w| w > 0.0)
        .collect();
    if alpha == 0.0 {
        return Ok((probs.len() as f64).log2());
    }
    if alpha.is_infinite() {
        let max = probs.iter().cloned().fold(0.0f64, f64::max);
        return Ok(-max.log2());
    }
    if alpha == 1.0 {
        return Ok(probs.iter().map(|&p| -p * p.log2()).sum());
    }
    let sum: f64 = probs.iter().map(|&p| p.powf(alpha)).sum();
    Ok(sum.log2() / (1.0 - alpha))
}

/// Min-entropy of the label of a cq state: `-log2 p_guess`.
pub fn hmin_cq(ensemble: &CqEnsemble) -> Result<f64> {
    Ok(-guess_probability(ensemble)?.log2())
}

/// Conditional max-entropy of two classical variables:
/// `log2 sum_y Pr[Y=y] 2^(Hmax(X | Y=y))` with `Hmax` the Rényi entropy of
/// order 1/2 on each conditional.
pub fn hmax_conditional_classical(joint: &JointDistribution) -> Result<f64> {
    let mut total = 0.0;
    for (_, column) in joint.columns() {
        let p_y: f64 = column.iter().map(|(_, w)| w).sum();
        if p_y == 0.0 {
            continue;
        }
        let conditional = Distribution::new(
            column
                .iter()
                .map(|(x, w)| (x.to_string(), w / p_y))
                .collect(),
        )?;
        total += p_y * renyi_entropy(&conditional, 0.5)?.exp2();
    }
    Ok(total.log2())
}

/// Conditional min-entropy of two classical variables:
/// `-log2 sum_y max_x P(x, y)`.
pub fn hmin_conditional_classical(joint: &JointDistribution) -> f64 {
    let guess: f64 = joint
        .columns()
        .values()
        .map(|column| column.iter().map(|(_, w)| *w).fold(0.0f64, f64::max))
        .sum();
    -guess.log2()
}

/// Overlap constant of two `n`-qubit projective basis measurements: the
/// maximum over outcome pairs of the squared overlap. Identical bases give
/// 1; the two conjugate bases give `2^-n`.
pub fn overlap_constant(first: Basis, second: Basis, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("overlap constant needs n >= 1".into()));
    }
    let single = single_qubit_overlap(first, second);
    Ok(single.powi(n as i32))
}

/// Max squared overlap between single-qubit basis vectors of two bases.
fn single_qubit_overlap(first: Basis, second: Basis) -> f64 {
    let vec_of = |basis: Basis, s: usize| -> [f64; 2] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match (basis, s) {
            (Basis::Computational, 0) => [1.0, 0.0],
            (Basis::Computational, _) => [0.0, 1.0],
            (Basis::Hadamard, 0) => [h, h],
            (Basis::Hadamard, _) => [h, -h],
        }
    };
    let mut worst = 0.0f64;
    for z in 0..2 {
        for x in 0..2 {
            let a = vec_of(first, z);
            let b = vec_of(second, x);
            let overlap = a[0] * b[0] + a[1] * b[1];
            worst = worst.max(overlap * overlap);
        }
    }
    worst
}

/// A tri-partite state with a quantum register and two classical
/// conditioning registers, stored as its ensemble decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct CcqState {
    entries: Vec<CcqEntry>,
}

/// One classical branch of a [`CcqState`].
#[derive(Debug, Clone, PartialEq)]
pub struct CcqEntry {
    /// Value of the first conditioning register.
    pub b_label: String,
    /// Value of the second conditioning register.
    pub c_label: String,
    /// Joint probability of the two labels.
    pub probability: f64,
    /// Conditional state of the quantum register.
    pub state: DensityOperator,
}

impl CcqState {
    /// Builds the state, checking probabilities and register consistency.
    pub fn new(entries: Vec<CcqEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty ccq state".into()));
        }
        let total: f64 = entries.iter().map(|e| e.probability).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "ccq probabilities sum to {total}, expected 1"
            )));
        }
        if entries.iter().any(|e| e.probability < 0.0) {
            return Err(Error::InvalidInput("negative ccq probability".into()));
        }
        let labels = entries[0].state.labels().to_vec();
        if entries.iter().any(|e| e.state.labels() != labels) {
            return Err(Error::InvalidInput(
                "conditional states live on different registers".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// A state with trivial conditioning registers.
    pub fn unconditioned(state: DensityOperator) -> Self {
        Self {
            entries: vec![CcqEntry {
                b_label: String::new(),
                c_label: String::new(),
                probability: 1.0,
                state,
            }],
        }
    }

    /// Number of qubits in the quantum register.
    pub fn qubit_count(&self) -> usize {
        self.entries[0].state.labels().len()
    }

    /// Outcome distribution of measuring every qubit of a conditional state
    /// in `basis`, as a vector over the `2^m` outcome strings.
    fn outcome_probabilities(state: &DensityOperator, basis: Basis) -> Vec<f64> {
        let mat = state.as_cmat();
        let rotated = match basis {
            Basis::Computational => mat,
            Basis::Hadamard => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let h1 = CMat::from_rows(&[
                    &[crate::linalg::cr(h), crate::linalg::cr(h)],
                    &[crate::linalg::cr(h), crate::linalg::cr(-h)],
                ]);
                let mut hn = CMat::identity(1);
                for _ in 0..state.labels().len() {
                    hn = hn.kron(&h1);
                }
                hn.matmul(&mat).matmul(&hn)
            }
        };
        (0..rotated.dim)
            .map(|i| rotated[(i, i)].re.max(0.0))
            .collect()
    }
}

/// Result of evaluating the uncertainty relation on one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyCheck {
    /// `Hmax(Z|B) + Hmin(X|C)`.
    pub lhs: f64,
    /// `log2(1/c)` for the overlap constant of the two measurements.
    pub rhs: f64,
    /// Whether `lhs >= rhs - 1e-9`.
    pub holds: bool,
}

/// Evaluates the entropic uncertainty relation
/// `Hmax(Z|B) + Hmin(X|C) >= log2(1/c)` on a state with classical
/// conditioning registers: `Z` is the outcome of measuring the quantum
/// register in `first`, `X` the outcome of measuring it in `second`.
pub fn check_uncertainty_relation(
    state: &CcqState,
    first: Basis,
    second: Basis,
) -> Result<UncertaintyCheck> {
    let m = state.qubit_count();

    let joint_with = |basis: Basis, condition_on_b: bool| -> Result<JointDistribution> {
        let mut entries = Vec::new();
        for e in &state.entries {
            let label = if condition_on_b {
                &e.b_label
            } else {
                &e.c_label
            };
            for (z, p) in CcqState::outcome_probabilities(&e.state, basis)
                .into_iter()
                .enumerate()
            {
                entries.push((format!("{z:b}"), label.clone(), e.probability * p));
            }
        }
        JointDistribution::new(entries)
    };

    let zb = joint_with(first, true)?;
    let xc = joint_with(second, false)?;
    let lhs = hmax_conditional_classical(&zb)? + hmin_conditional_classical(&xc);
    let rhs = -overlap_constant(first, second, m)?.log2();
    Ok(UncertaintyCheck {
        lhs,
        rhs,
        holds: lhs >= rhs - 1e-9,
    })
}

/// The tail bound `exp(-k delta^2 / 2)` for sampling without replacement.
pub fn hoeffding_tail(k: usize, delta: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("sample size must be >= 1".into()));
    }
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} outside (0, 1)"
        )));
    }
    Ok((-0.5 * k as f64 * delta * delta).exp())
}

/// Exact `log2` of the Hamming-ball volume `sum_{i <= floor(n delta)} C(n, i)`,
/// computed with arbitrary-size integers so no intermediate overflows for
/// any `n` this crate sweeps. The value never exceeds `n h(delta)`.
pub fn hamming_volume_log_bound(n: usize, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if delta <= 0.0 || delta >= 0.5 {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} outside (0, 1/2)"
        )));
    }
    let radius = (n as f64 * delta).floor() as usize;
    let mut sum = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32);
    for i in 0..=radius {
        sum += &binom;
        // C(n, i+1) = C(n, i) * (n - i) / (i + 1), exact at every step.
        binom = binom * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let value = log2_biguint(&sum);
    debug_assert!(value <= n as f64 * binary_entropy(delta)? + 1e-9);
    Ok(value)
}

/// `log2` of a positive big integer, accurate to ~1 ulp.
fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return biguint_low_u64(x).log2();
    }
    let shift = bits - 53;
    let top = x >> shift;
    biguint_low_u64(&top).log2() + shift as f64
}

fn biguint_low_u64(x: &BigUint) -> f64 {
    let mut v = 0u64;
    for (i, d) in x.to_u64_digits().iter().enumerate().take(1) {
        v |= d << (64 * i);
    }
    v as f64
}

/// The per-round binding bound `2^(1 - n(1 - h(delta))) + 2 exp(-n delta^2 / 2)`.
pub fn cross_term_bound(n: usize, delta: f64) -> Result<f64> {
    let (entropy, hoeffding) = cross_term_parts(n, delta)?;
    Ok(entropy + hoeffding)
}

fn cross_term_parts(n: usize, delta: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if delta <= 0.0 || delta >= 0.5 {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} outside (0, 1/2)"
        )));
    }
    let h = binary_entropy(delta)?;
    let entropy = (1.0 - n as f64 * (1.0 - h)).exp2();
    let hoeffding = 2.0 * hoeffding_tail(n, delta)?;
    Ok((entropy, hoeffding))
}

/// Grid step for the default bound optimisation.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

/// Minimises the per-round bound over the deviation parameter:
/// `epsilon(n) = inf over delta in (0, 1/2)` of [`cross_term_bound`].
///
/// Deterministic: a dense grid of the given step locates the basin, then
/// golden-section refinement narrows it to relative width 1e-6.
pub fn binding_bound_with_step(n: usize, step: f64) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if !(step > 0.0 && step < 0.25) {
        return Err(Error::InvalidInput(format!("bad grid step {step}")));
    }
    let objective = |delta: f64| -> f64 {
        let (a, b) = cross_term_parts(n, delta).expect("grid point inside (0, 1/2)");
        a + b
    };

    let mut best_delta = step;
    let mut best_value = f64::INFINITY;
    let mut k = 1usize;
    loop {
        let delta = k as f64 * step;
        if delta >= 0.5 {
            break;
        }
        let value = objective(delta);
        if value < best_value {
            best_value = value;
            best_delta = delta;
        }
        k += 1;
    }

    // Golden-section refinement inside the bracketing grid cells.
    let mut a = (best_delta - step).max(f64::MIN_POSITIVE);
    let mut b = (best_delta + step).min(0.5 - 1e-12);
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    while (b - a) > 1e-6 * (0.5 * (a + b)) {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    let delta_star = 0.5 * (a + b);
    let (term_entropy, term_hoeffding) = cross_term_parts(n, delta_star)?;
    Ok(BoundReport {
        n,
        delta_star,
        epsilon: term_entropy + term_hoeffding,
        term_entropy,
        term_hoeffding,
    })
}

/// [`binding_bound_with_step`] at the default grid step of 1e-3.
pub fn binding_bound(n: usize) -> Result<BoundReport> {
    binding_bound_with_step(n, DEFAULT_GRID_STEP)
}
