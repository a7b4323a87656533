//! Cheating strategies and the no-signalling machinery of the binding
//! analysis.
//!
//! The two spacelike-separated openings of a split commitment induce a
//! 2-input/2-output joint conditional distribution ([`JointOutcomeTable`]):
//! inputs are the commanded bits, outputs are the verifier's per-side
//! accept/reject decisions. Separated agents can only produce
//! no-signalling tables, and no-signalling alone already forces
//! `p0 + p1 <= 1 + alpha`; the quantum analysis then bounds `alpha`.
//!
//! This module provides the table checks, the polytope optimisation that
//! shows the no-signalling bound tight, a family of concrete attacks on the
//! measurement-outcome protocol (rotated-basis measurement, coin flip,
//! honest baselines), the classical global-command cheat, the local-command
//! optimum, and the string-commitment composability counterexample.

// Index loops over the fixed 2x2x2x2 table read better than enumerate
// chains: the indices are the commanded bits and flags themselves.
#![allow(clippy::needless_range_loop)]

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::bounds::binding_bound;
use crate::error::{Error, Result};
use crate::protocols::{
    kent_per_agent_test, AliceRegister, Flag, KentInstance, Opening, Partition,
};
use crate::quantum::{
    epr_pair_labeled, measure_and_remove_rotated, measure_qubits, measurement_branches,
    measurement_branches_rotated, Basis, QubitId,
};
use crate::rng::SimRng;
use crate::spacetime::CommandModel;

/// Tolerance for exact (analytic) table checks.
const TABLE_TOL: f64 = 1e-9;

/// The joint conditional distribution of the two openings:
/// `P(bob_flag, brian_flag | b, b_prime)` for commanded bits `b`, `b_prime`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOutcomeTable {
    /// `probs[b][b_prime][bob][brian]` with flag index 0 = accept.
    probs: [[[[f64; 2]; 2]; 2]; 2],
}

fn flag_index(flag: Flag) -> usize {
    match flag {
        Flag::Accept => 0,
        Flag::Reject => 1,
    }
}

impl JointOutcomeTable {
    /// Builds a table, checking non-negativity and that each quarter (each
    /// fixed input pair) sums to 1 within 1e-9.
    pub fn new(probs: [[[[f64; 2]; 2]; 2]; 2]) -> Result<Self> {
        for b in 0..2 {
            for bp in 0..2 {
                let quarter = &probs[b][bp];
                let mut total = 0.0;
                for row in quarter {
                    for &p in row {
                        if p < -1e-12 {
                            return Err(Error::InvalidInput(format!(
                                "negative probability {p} at inputs ({b}, {bp})"
                            )));
                        }
                        total += p;
                    }
                }
                if (total - 1.0).abs() > TABLE_TOL {
                    return Err(Error::InvalidInput(format!(
                        "quarter ({b}, {bp}) sums to {total}, expected 1"
                    )));
                }
            }
        }
        Ok(Self { probs })
    }

    /// Probability of the flag pair given the commanded bits.
    pub fn get(&self, b: u8, b_prime: u8, bob: Flag, brian: Flag) -> f64 {
        self.probs[b as usize][b_prime as usize][flag_index(bob)][flag_index(brian)]
    }

    /// `P(accept, accept | 0, 0)`: the probability of successfully opening 0.
    pub fn p0(&self) -> f64 {
        self.get(0, 0, Flag::Accept, Flag::Accept)
    }

    /// `P(accept, accept | 1, 1)`: the probability of successfully opening 1.
    pub fn p1(&self) -> f64 {
        self.get(1, 1, Flag::Accept, Flag::Accept)
    }

    /// `P(accept, accept | 0, 1)`: the cross term bounded by the analysis.
    pub fn alpha(&self) -> f64 {
        self.get(0, 1, Flag::Accept, Flag::Accept)
    }

    /// Convex mixture of tables.
    pub fn mixture(parts: &[(f64, &JointOutcomeTable)]) -> Result<Self> {
        let mut probs = [[[[0.0f64; 2]; 2]; 2]; 2];
        for (w, table) in parts {
            for b in 0..2 {
                for bp in 0..2 {
                    for u in 0..2 {
                        for v in 0..2 {
                            probs[b][bp][u][v] += w * table.probs[b][bp][u][v];
                        }
                    }
                }
            }
        }
        Self::new(probs)
    }

    /// Product of independent per-side response distributions:
    /// `P(u, v | b, b') = bob_accept[b]^u-ish * brian_accept[b']`.
    pub fn product(bob_accept: [f64; 2], brian_accept: [f64; 2]) -> Result<Self> {
        let mut probs = [[[[0.0f64; 2]; 2]; 2]; 2];
        for b in 0..2 {
            for bp in 0..2 {
                for (u, pu) in [bob_accept[b], 1.0 - bob_accept[b]].into_iter().enumerate() {
                    for (v, pv) in [brian_accept[bp], 1.0 - brian_accept[bp]]
                        .into_iter()
                        .enumerate()
                    {
                        probs[b][bp][u][v] = pu * pv;
                    }
                }
            }
        }
        Self::new(probs)
    }

    /// The sixteen cells in canonical order, for serialisation.
    pub fn cells(&self) -> Vec<TableCell> {
        let mut cells = Vec::with_capacity(16);
        for b in 0..2u8 {
            for b_prime in 0..2u8 {
                for bob in [Flag::Accept, Flag::Reject] {
                    for brian in [Flag::Accept, Flag::Reject] {
                        cells.push(TableCell {
                            b,
                            b_prime,
                            bob,
                            brian,
                            probability: self.get(b, b_prime, bob, brian),
                        });
                    }
                }
            }
        }
        cells
    }

    /// Rebuilds a table from cells (all sixteen must be present exactly
    /// once).
    pub fn from_cells(cells: &[TableCell]) -> Result<Self> {
        if cells.len() != 16 {
            return Err(Error::InvalidInput(format!(
                "{} cells, expected 16",
                cells.len()
            )));
        }
        let mut probs = [[[[f64::NAN; 2]; 2]; 2]; 2];
        for cell in cells {
            if cell.b > 1 || cell.b_prime > 1 {
                return Err(Error::InvalidInput("input bits must be 0 or 1".into()));
            }
            let slot = &mut probs[cell.b as usize][cell.b_prime as usize][flag_index(cell.bob)]
                [flag_index(cell.brian)];
            if !slot.is_nan() {
                return Err(Error::InvalidInput("duplicate table cell".into()));
            }
            *slot = cell.probability;
        }
        Self::new(probs)
    }
}

/// One serialisable cell of a [`JointOutcomeTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    /// Commanded bit on the principal side.
    pub b: u8,
    /// Commanded bit on the delegate side.
    pub b_prime: u8,
    /// The verifier's decision for the principal's opening.
    pub bob: Flag,
    /// The verifier's decision for the delegate's opening.
    pub brian: Flag,
    /// Probability of this flag pair given the inputs.
    pub probability: f64,
}

impl Serialize for JointOutcomeTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells().serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointOutcomeTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cells = Vec::<TableCell>::deserialize(d)?;
        Self::from_cells(&cells).map_err(serde::de::Error::custom)
    }
}

/// One marginal mismatch found by [`check_no_signalling`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalViolation {
    /// Which side's marginal depends on the other side's input:
    /// `"bob"` or `"brian"`.
    pub side: String,
    /// The fixed input on the violating side.
    pub own_input: u8,
    /// The flag whose marginal differs.
    pub flag: Flag,
    /// Marginal with the other input at 0 and at 1.
    pub marginals: (f64, f64),
}

/// Verifies both no-signalling marginals within `tol`: the principal-side
/// flag distribution must not depend on the delegate's input and vice
/// versa. Empty list = no-signalling.
pub fn check_no_signalling_with_tol(table: &JointOutcomeTable, tol: f64) -> Vec<MarginalViolation> {
    let mut violations = Vec::new();
    for own in 0..2u8 {
        for flag in [Flag::Accept, Flag::Reject] {
            // Bob-side marginal as a function of Brian's input.
            let bob_marginal = |other: u8| -> f64 {
                table.get(own, other, flag, Flag::Accept)
                    + table.get(own, other, flag, Flag::Reject)
            };
            let (m0, m1) = (bob_marginal(0), bob_marginal(1));
            if (m0 - m1).abs() > tol {
                violations.push(MarginalViolation {
                    side: "bob".into(),
                    own_input: own,
                    flag,
                    marginals: (m0, m1),
                });
            }
            // Brian-side marginal as a function of Bob's input.
            let brian_marginal = |other: u8| -> f64 {
                table.get(other, own, Flag::Accept, flag)
                    + table.get(other, own, Flag::Reject, flag)
            };
            let (m0, m1) = (brian_marginal(0), brian_marginal(1));
            if (m0 - m1).abs() > tol {
                violations.push(MarginalViolation {
                    side: "brian".into(),
                    own_input: own,
                    flag,
                    marginals: (m0, m1),
                });
            }
        }
    }
    violations
}

/// [`check_no_signalling_with_tol`] at the analytic tolerance 1e-9.
pub fn check_no_signalling(table: &JointOutcomeTable) -> Vec<MarginalViolation> {
    check_no_signalling_with_tol(table, TABLE_TOL)
}

/// Both sides of the no-signalling binding inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BindingSumCheck {
    /// `p0 + p1`.
    pub lhs: f64,
    /// `1 + alpha`.
    pub rhs: f64,
    /// Whether `lhs <= rhs + 1e-9`.
    pub holds: bool,
}

/// Evaluates `p0 + p1 <= 1 + alpha` on a no-signalling table; a signalling
/// table is a precondition error.
pub fn binding_sum_check(table: &JointOutcomeTable) -> Result<BindingSumCheck> {
    let violations = check_no_signalling(table);
    if let Some(v) = violations.first() {
        return Err(Error::SignallingTable(format!(
            "{} marginal at input {} differs: {:?}",
            v.side, v.own_input, v.marginals
        )));
    }
    let lhs = table.p0() + table.p1();
    let rhs = 1.0 + table.alpha();
    Ok(BindingSumCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + TABLE_TOL,
    })
}

/// The 24 vertices of the no-signalling polytope for two binary inputs and
/// binary outputs: 16 deterministic product boxes and 8 maximally
/// correlating boxes.
pub fn ns_polytope_vertices() -> Vec<JointOutcomeTable> {
    let mut vertices = Vec::with_capacity(24);
    // Deterministic: each side maps its input to a fixed flag.
    for bob_map in 0..4u8 {
        for brian_map in 0..4u8 {
            let mut probs = [[[[0.0f64; 2]; 2]; 2]; 2];
            for b in 0..2 {
                for bp in 0..2 {
                    let u = ((bob_map >> b) & 1) as usize;
                    let v = ((brian_map >> bp) & 1) as usize;
                    probs[b][bp][u][v] = 1.0;
                }
            }
            vertices.push(JointOutcomeTable::new(probs).expect("deterministic box"));
        }
    }
    // Correlating boxes: flags (as bits, accept = 0) satisfy
    // u XOR v = (b AND b') XOR xb XOR y b' XOR z.
    for x in 0..2usize {
        for y in 0..2usize {
            for z in 0..2usize {
                let mut probs = [[[[0.0f64; 2]; 2]; 2]; 2];
                for b in 0..2 {
                    for bp in 0..2 {
                        let parity = (b & bp) ^ (x * b) ^ (y * bp) ^ z;
                        for u in 0..2 {
                            let v = u ^ parity;
                            probs[b][bp][u][v] = 0.5;
                        }
                    }
                }
                vertices.push(JointOutcomeTable::new(probs).expect("correlating box"));
            }
        }
    }
    vertices
}

/// Maximises `p0 + p1` over the no-signalling polytope subject to
/// `alpha <= alpha_cap`.
///
/// The optimum of a linear objective over the polytope cut by one halfspace
/// sits either on a vertex that satisfies the cap or on a segment between
/// two vertices where `alpha` crosses the cap exactly, so enumerating
/// vertices and vertex pairs is exact. The result equals `1 + alpha_cap`.
pub fn max_p0_plus_p1(alpha_cap: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha_cap) {
        return Err(Error::InvalidInput(format!(
            "alpha cap {alpha_cap} outside [0, 1]"
        )));
    }
    let vertices = ns_polytope_vertices();
    let objective = |t: &JointOutcomeTable| t.p0() + t.p1();
    let mut best = f64::NEG_INFINITY;
    for v in &vertices {
        if v.alpha() <= alpha_cap {
            best = best.max(objective(v));
        }
    }
    for u in &vertices {
        for v in &vertices {
            let (au, av) = (u.alpha(), v.alpha());
            if au < alpha_cap && alpha_cap < av {
                let t = (alpha_cap - au) / (av - au);
                best = best.max(objective(u) + t * (objective(v) - objective(u)));
            }
        }
    }
    Ok(best)
}

/// A random no-signalling table: a convex mixture of random product boxes,
/// sometimes with one correlating vertex mixed in.
pub fn random_no_signalling_table(rng: &mut SimRng) -> JointOutcomeTable {
    let components = 2 + rng.below(3);
    let mut parts: Vec<(f64, JointOutcomeTable)> = Vec::new();
    let mut weights: Vec<f64> = (0..components).map(|_| rng.uniform() + 1e-6).collect();
    if rng.uniform() < 0.3 {
        let vertex = ns_polytope_vertices()
            .into_iter()
            .nth(16 + rng.below(8))
            .expect("correlating vertex present");
        parts.push((rng.uniform() + 1e-6, vertex));
    }
    for w in weights.drain(..) {
        let table = JointOutcomeTable::product(
            [rng.uniform(), rng.uniform()],
            [rng.uniform(), rng.uniform()],
        )
        .expect("product box");
        parts.push((w, table));
    }
    let total: f64 = parts.iter().map(|(w, _)| w).sum();
    let normalised: Vec<(f64, &JointOutcomeTable)> =
        parts.iter().map(|(w, t)| (w / total, t)).collect();
    JointOutcomeTable::mixture(&normalised).expect("mixture of no-signalling tables")
}

// ---------------------------------------------------------------------------
// Attacks on the measurement-outcome protocol.
// ---------------------------------------------------------------------------

/// The opening behaviour of the two committer agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    /// Commit honestly to `bit`; both agents claim the commanded bit with
    /// the honest string.
    Honest {
        /// The honestly committed bit.
        bit: u8,
    },
    /// Flip a fair coin `c` before committing, commit honestly to `c`, and
    /// open `c` regardless of the command.
    CoinFlip,
    /// Measure every qubit in the basis rotated by `theta` before the
    /// split; both agents claim the commanded bit with the measured string.
    IntermediateBasis {
        /// Rotation angle in `[0, pi/4]`.
        theta: f64,
    },
}

/// A named attack with its command model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackStrategy {
    /// The per-agent opening behaviour.
    pub kind: AttackKind,
    /// How commands reach the agents.
    pub command: CommandModel,
}

impl AttackStrategy {
    /// Builds a strategy, rejecting command-dependent delegate behaviour
    /// under local command.
    pub fn new(kind: AttackKind, command: CommandModel) -> Result<Self> {
        if command == CommandModel::Local {
            match kind {
                AttackKind::Honest { .. } | AttackKind::IntermediateBasis { .. } => {
                    return Err(Error::InvalidInput(
                        "delegate behaviour depends on the command; requires global command".into(),
                    ));
                }
                AttackKind::CoinFlip => {}
            }
        }
        if let AttackKind::IntermediateBasis { theta } = kind {
            if !(0.0..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&theta) {
                return Err(Error::InvalidInput(format!(
                    "theta {theta} outside [0, pi/4]"
                )));
            }
        }
        if let AttackKind::Honest { bit } = kind {
            if bit > 1 {
                return Err(Error::InvalidInput(format!("bit {bit}")));
            }
        }
        Ok(Self { kind, command })
    }

    /// Global-command strategy.
    pub fn global(kind: AttackKind) -> Result<Self> {
        Self::new(kind, CommandModel::Global)
    }

    /// Display name.
    pub fn name(&self) -> String {
        match self.kind {
            AttackKind::Honest { bit } => format!("honest-{bit}"),
            AttackKind::CoinFlip => "coin-flip".into(),
            AttackKind::IntermediateBasis { theta } => format!("intermediate-basis({theta:.6})"),
        }
    }

    fn measurement_angle(&self) -> Option<f64> {
        match self.kind {
            AttackKind::Honest { bit } => Some(if bit == 0 {
                0.0
            } else {
                std::f64::consts::FRAC_PI_4
            }),
            AttackKind::IntermediateBasis { theta } => Some(theta),
            AttackKind::CoinFlip => None,
        }
    }
}

/// Exact and sampled cheating figures for one attack at one round count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    /// Attack name.
    pub name: String,
    /// Rounds per basis.
    pub n: usize,
    /// Probability of successfully opening 0.
    pub p0: f64,
    /// Probability of successfully opening 1.
    pub p1: f64,
    /// Joint probability of opening 0 on one side and 1 on the other.
    pub alpha: f64,
    /// The principal agent's test-pass probability in the cross
    /// configuration.
    pub pass_probability: f64,
    /// The binding bound `epsilon(n)` the attack is measured against.
    pub bound: f64,
    /// Whether `p0 + p1 <= 1 + bound` (with the analytic tolerance).
    pub satisfied: bool,
    /// Monte-Carlo estimates, when trials were requested.
    pub monte_carlo: Option<McEstimate>,
}

/// Monte-Carlo cross-check of the analytic figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    /// Number of sampled protocol runs.
    pub trials: usize,
    /// Empirical probability of successfully opening 0.
    pub p0_hat: f64,
    /// Empirical probability of successfully opening 1.
    pub p1_hat: f64,
    /// Empirical cross term.
    pub alpha_hat: f64,
    /// Bernoulli standard error for `p0_hat`.
    pub p0_se: f64,
    /// Bernoulli standard error for `p1_hat`.
    pub p1_se: f64,
}

/// Exact per-round probability that the verifier's outcome matches the
/// committer's when the committer measures his half of an entangled pair in
/// the `theta`-rotated basis and the verifier measures hers in
/// `alice_basis`. Computed by branch enumeration, no sampling.
pub fn per_round_agreement(theta: f64, alice_basis: Basis) -> Result<f64> {
    let alice_q = QubitId(0);
    let bob_q = QubitId(1);
    let pair = epr_pair_labeled(alice_q, bob_q);
    let mut agree = 0.0;
    for (bits, p, post) in measurement_branches_rotated(&pair, &[bob_q], theta)? {
        let t = bits[0];
        for (s, ps, _) in measurement_branches(&post, &[alice_q], alice_basis)? {
            if s[0] == t {
                agree += p * ps;
            }
        }
    }
    Ok(agree)
}

/// Exact cheating figures `(p0, p1, alpha, pass_probability)` for an attack.
fn exact_figures(strategy: &AttackStrategy, n: usize) -> Result<(f64, f64, f64, f64)> {
    match strategy.kind {
        AttackKind::CoinFlip => {
            // Successful opening of d requires the coin to equal d; the
            // honest test then passes with certainty. The two coins cannot
            // both happen, so the cross term vanishes.
            Ok((0.5, 0.5, 0.0, 0.5))
        }
        AttackKind::Honest { .. } | AttackKind::IntermediateBasis { .. } => {
            let theta = strategy
                .measurement_angle()
                .expect("measured attacks have an angle");
            let q0 = per_round_agreement(theta, Basis::Computational)?;
            let q1 = per_round_agreement(theta, Basis::Hadamard)?;
            let p0 = q0.powi(n as i32);
            let p1 = q1.powi(n as i32);
            // Tests for the two claims read disjoint round sets, and both
            // agents report the same string, so the cross term factorises.
            let alpha = p0 * p1;
            Ok((p0, p1, alpha, p0))
        }
    }
}

/// Outcome of one sampled attack run: whether the opening of each bit
/// would have been accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AttackTrialOutcome {
    /// The opening of bit 0 succeeded.
    pub opens_zero: bool,
    /// The opening of bit 1 succeeded.
    pub opens_one: bool,
}

/// Samples one full per-round protocol run under the attack and scores the
/// two opening events with the verifier's per-agent test machinery.
pub fn sample_attack_trial(
    strategy: &AttackStrategy,
    n: usize,
    rng: &mut SimRng,
) -> Result<AttackTrialOutcome> {
    let coin = match strategy.kind {
        AttackKind::CoinFlip => Some(rng.bit()),
        _ => None,
    };
    let theta = match strategy.kind {
        AttackKind::CoinFlip => {
            if coin == Some(0) {
                0.0
            } else {
                std::f64::consts::FRAC_PI_4
            }
        }
        _ => strategy.measurement_angle().expect("angle"),
    };

    // Commit phase: the committer measures everything in the rotated
    // basis; the verifier later measures along her partition.
    let mut committed = BitString::zeros(0);
    let mut alice_states = Vec::with_capacity(2 * n);
    for round in 0..2 * n {
        let a = QubitId(2 * round as u32);
        let b = QubitId(2 * round as u32 + 1);
        let pair = epr_pair_labeled(a, b);
        let (t, alice_half) = measure_and_remove_rotated(&pair, b, theta, rng)?;
        committed.push(t);
        alice_states.push(alice_half);
    }
    let partition = Partition::sample(n, rng);
    let mut alice_outcomes = BitString::zeros(0);
    for (round, state) in alice_states.iter().enumerate() {
        let (bits, _) = measure_qubits(
            state,
            &[QubitId(2 * round as u32)],
            partition.basis_of(round),
            rng,
        )?;
        alice_outcomes.push(bits[0]);
    }
    let instance = KentInstance {
        n,
        alice_register: AliceRegister::PerRound(alice_states),
        partition,
        alice_outcomes,
        bob_opening: Some(Opening {
            bit: 0,
            string: committed.clone(),
        }),
        brian_opening: Some(Opening {
            bit: 1,
            string: committed.clone(),
        }),
    };

    let passes = |claimed: u8| -> bool {
        kent_per_agent_test(&instance, crate::spacetime::BOB, claimed) == Flag::Accept
    };
    Ok(match coin {
        // Opening d succeeds when the coin chose d and the honest test
        // passes; both agents hold the same coin, so the two events are
        // mutually exclusive.
        Some(c) => AttackTrialOutcome {
            opens_zero: c == 0 && passes(0),
            opens_one: c == 1 && passes(1),
        },
        None => AttackTrialOutcome {
            opens_zero: passes(0),
            opens_one: passes(1),
        },
    })
}

/// Samples `trials` attack runs on per-trial streams of `seed`.
fn sample_figures(
    strategy: &AttackStrategy,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<McEstimate> {
    let mut count0 = 0usize;
    let mut count1 = 0usize;
    let mut count_alpha = 0usize;
    for trial in 0..trials {
        let mut rng = SimRng::for_trial(seed, trial as u64);
        let outcome = sample_attack_trial(strategy, n, &mut rng)?;
        count0 += outcome.opens_zero as usize;
        count1 += outcome.opens_one as usize;
        count_alpha += (outcome.opens_zero && outcome.opens_one) as usize;
    }
    let freq = |c: usize| c as f64 / trials as f64;
    let se = |p: f64| (p * (1.0 - p) / trials as f64).sqrt();
    let (p0_hat, p1_hat) = (freq(count0), freq(count1));
    Ok(McEstimate {
        trials,
        p0_hat,
        p1_hat,
        alpha_hat: freq(count_alpha),
        p0_se: se(p0_hat),
        p1_se: se(p1_hat),
    })
}

/// Evaluates an attack exactly, with an optional Monte-Carlo cross-check.
pub fn evaluate_attack(
    strategy: &AttackStrategy,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<AttackReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let (p0, p1, alpha, pass_probability) = exact_figures(strategy, n)?;
    let bound = binding_bound(n)?.epsilon;
    let monte_carlo = if trials > 0 {
        Some(sample_figures(strategy, n, trials, seed)?)
    } else {
        None
    };
    Ok(AttackReport {
        name: strategy.name(),
        n,
        p0,
        p1,
        alpha,
        pass_probability,
        bound,
        satisfied: p0 + p1 <= 1.0 + bound + TABLE_TOL,
        monte_carlo,
    })
}

/// The rotated-measurement attack family under global command.
pub fn intermediate_basis_attack(
    n: usize,
    theta: f64,
    trials: usize,
    seed: u64,
) -> Result<AttackReport> {
    let strategy = AttackStrategy::global(AttackKind::IntermediateBasis { theta })?;
    evaluate_attack(&strategy, n, trials, seed)
}

/// The superposition/coin attack: commit honestly to a fair coin and open
/// it regardless of the command. Saturates `p0 = p1 = 1/2`, the floor that
/// makes the weak binding definition the right target.
pub fn coin_flip_attack(n: usize, trials: usize, seed: u64) -> Result<AttackReport> {
    let strategy = AttackStrategy::global(AttackKind::CoinFlip)?;
    evaluate_attack(&strategy, n, trials, seed)
}

/// The exact no-signalling outcome table induced by an attack.
pub fn attack_outcome_table(strategy: &AttackStrategy, n: usize) -> Result<JointOutcomeTable> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let mut probs = [[[[0.0f64; 2]; 2]; 2]; 2];
    match strategy.kind {
        AttackKind::CoinFlip => {
            for b in 0..2usize {
                for bp in 0..2usize {
                    for c in 0..2usize {
                        // Coin c: the principal's opening of b succeeds iff
                        // c = b, the delegate's iff c = b'.
                        let u = usize::from(c != b);
                        let v = usize::from(c != bp);
                        probs[b][bp][u][v] += 0.5;
                    }
                }
            }
        }
        _ => {
            let theta = strategy.measurement_angle().expect("angle");
            let q = [
                per_round_agreement(theta, Basis::Computational)?.powi(n as i32),
                per_round_agreement(theta, Basis::Hadamard)?.powi(n as i32),
            ];
            for b in 0..2usize {
                for bp in 0..2usize {
                    if b == bp {
                        // Identical claims check identical positions of the
                        // shared string: perfectly correlated flags.
                        probs[b][bp][0][0] = q[b];
                        probs[b][bp][1][1] = 1.0 - q[b];
                    } else {
                        // Disjoint checked positions: independent flags.
                        for (u, pu) in [q[b], 1.0 - q[b]].into_iter().enumerate() {
                            for (v, pv) in [q[bp], 1.0 - q[bp]].into_iter().enumerate() {
                                probs[b][bp][u][v] = pu * pv;
                            }
                        }
                    }
                }
            }
        }
    }
    JointOutcomeTable::new(probs)
}

/// The classical global-command cheat on the pre-agreed-bit protocol: both
/// agents simply announce the commanded bit, so every opening is accepted
/// and `p0 + p1 = 2`. The bound field carries the local-command value 0
/// that this cheat breaks.
pub fn classical_global_cheat(seed: u64) -> Result<AttackReport> {
    // Simulated confirmation on top of the analytic value.
    let mut accepts = [0usize; 2];
    let trials = 64;
    for trial in 0..trials {
        for command in [0u8, 1] {
            let mut rng = SimRng::for_trial(seed, trial * 2 + command as u64);
            let _ = rng.uniform();
            // Both agents received the command and announce it.
            let x = command;
            let y = command;
            if x == command && y == command {
                accepts[command as usize] += 1;
            }
        }
    }
    assert_eq!(accepts, [trials as usize, trials as usize]);
    Ok(AttackReport {
        name: "classical-global-cheat".into(),
        n: 1,
        p0: 1.0,
        p1: 1.0,
        alpha: 1.0,
        pass_probability: 1.0,
        bound: 0.0,
        satisfied: false,
        monte_carlo: None,
    })
}

/// Exhaustively maximises `p0 + p1` over local-command strategies: the
/// principal picks a strategy distribution per command, the delegate picks
/// one fixed distribution. Linearity puts the optimum at deterministic
/// choices, so the search is over pure strategy pairs.
///
/// `accept(command, r, s)` is the probability that the verifier accepts the
/// opening of `command` when the agents play strategies `r` and `s`.
pub fn local_command_optimum<F>(r_count: usize, s_count: usize, accept: F) -> Result<f64>
where
    F: Fn(u8, usize, usize) -> f64,
{
    const LIMIT: usize = 64;
    if r_count == 0 || s_count == 0 {
        return Err(Error::InvalidInput("empty strategy set".into()));
    }
    if r_count > LIMIT || s_count > LIMIT {
        return Err(Error::StrategySpaceTooLarge {
            size: r_count.max(s_count),
            limit: LIMIT,
        });
    }
    let mut best = f64::NEG_INFINITY;
    for s in 0..s_count {
        let mut total = 0.0;
        for command in [0u8, 1] {
            let mut per_command = f64::NEG_INFINITY;
            for r in 0..r_count {
                let p = accept(command, r, s);
                if !(0.0..=1.0 + 1e-12).contains(&p) {
                    return Err(Error::InvalidInput(format!(
                        "accept probability {p} outside [0, 1]"
                    )));
                }
                per_command = per_command.max(p);
            }
            total += per_command;
        }
        best = best.max(total);
    }
    Ok(best)
}

/// [`local_command_optimum`] instantiated on the pre-agreed-bit protocol:
/// each agent's strategy is which bit to announce, and the verifier accepts
/// the opening of the commanded bit when both announcements equal it.
pub fn local_command_optimum_preagreed() -> f64 {
    local_command_optimum(2, 2, |command, r, s| {
        if r as u8 == command && s as u8 == command {
            1.0
        } else {
            0.0
        }
    })
    .expect("2x2 strategy space")
}

/// The string-commitment counterexample: a verifier that accepts anything
/// with probability 1/2 is weakly binding with epsilon = 0 per bit, yet the
/// string success probabilities sum to `2^(n-1)`.
///
/// Returns `(per_bit_epsilon, string_sum)`.
pub fn composability_counterexample(n: usize) -> Result<(f64, f64)> {
    if !(1..=20).contains(&n) {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..=20")));
    }
    // Per bit the verifier accepts either opening with probability 1/2,
    // so the weak-binding excess p0 + p1 - 1 vanishes.
    let (p0, p1) = (0.5, 0.5);
    let per_bit_epsilon = (p0 + p1) - 1.0;
    // Per string: every one of the 2^n strings is unveiled successfully
    // with probability 1/2; accumulate rather than shortcut.
    let mut string_sum = 0.0;
    for _ in 0..(1u64 << n) {
        string_sum += 0.5;
    }
    Ok((per_bit_epsilon, string_sum))
}

/// How [`alpha_decomposition_check`] estimates the two routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaEstimator {
    /// Exact branch-enumeration products.
    Analytic,
    /// Monte-Carlo joint-event and conditional frequencies.
    Sampled {
        /// Number of sampled runs.
        trials: usize,
        /// Base seed for the per-trial streams.
        seed: u64,
    },
}

/// The cross term computed along two routes that must agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaDecomposition {
    /// Joint-event probability: both tests pass at once.
    pub direct: f64,
    /// The factorised route: the principal's pass probability times the
    /// delegate's conditional pass probability on the state conditioned on
    /// the principal passing.
    pub factored: f64,
}

/// Computes `alpha` directly as a joint event and via the factorisation
/// `p * Pr[delegate passes | principal passed]`.
pub fn alpha_decomposition_check(
    strategy: &AttackStrategy,
    n: usize,
    estimator: AlphaEstimator,
) -> Result<AlphaDecomposition> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    match estimator {
        AlphaEstimator::Analytic => alpha_decomposition_analytic(strategy, n),
        AlphaEstimator::Sampled { trials, seed } => {
            alpha_decomposition_sampled(strategy, n, trials, seed)
        }
    }
}

fn alpha_decomposition_analytic(strategy: &AttackStrategy, n: usize) -> Result<AlphaDecomposition> {
    match strategy.kind {
        AttackKind::CoinFlip => {
            // Direct: the two coins cannot disagree with themselves.
            // Factored: p = Pr[coin = 0] = 1/2, conditional pass = 0.
            Ok(AlphaDecomposition {
                direct: 0.0,
                factored: 0.5 * 0.0,
            })
        }
        _ => {
            let theta = strategy.measurement_angle().expect("angle");
            // Direct: one pass over a concrete partition, multiplying the
            // per-round joint-agreement probability of whichever basis the
            // verifier uses at that round.
            let partition = Partition::from_z(n, (0..n).collect())?;
            let mut direct = 1.0;
            for round in 0..2 * n {
                direct *= per_round_agreement(theta, partition.basis_of(round))?;
            }
            // Factored route: the principal's test touches only the
            // computational rounds; conditioning on passing leaves the
            // remaining rounds' branch ensembles untouched, and the
            // delegate's conditional pass probability is their product.
            let mut pass = 1.0;
            for _ in 0..n {
                pass *= per_round_agreement(theta, Basis::Computational)?;
            }
            let mut conditional = 1.0;
            for _ in 0..n {
                conditional *= per_round_agreement(theta, Basis::Hadamard)?;
            }
            Ok(AlphaDecomposition {
                direct,
                factored: pass * conditional,
            })
        }
    }
}

fn alpha_decomposition_sampled(
    strategy: &AttackStrategy,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<AlphaDecomposition> {
    if trials == 0 {
        return Err(Error::InvalidInput("sampled mode needs trials >= 1".into()));
    }
    let mc = sample_figures(strategy, n, trials, seed)?;
    // Direct: raw joint frequency. Factored: pass frequency times the
    // conditional frequency among passing samples.
    let direct = mc.alpha_hat;
    let factored = if mc.p0_hat == 0.0 {
        0.0
    } else {
        mc.p0_hat * (mc.alpha_hat / mc.p0_hat)
    };
    Ok(AlphaDecomposition { direct, factored })
}
