//! Executable state machines for the three bit-commitment protocols.
//!
//! * Secret sharing under an alpha split: the committer XOR-shares the bit
//!   between the two receiver agents.
//! * Pre-agreed bit under a beta split with local command: both committer
//!   agents independently announce a bit, the verifier accepts when both
//!   match the commanded bit.
//! * Commitment by transmitting measurement outcomes under a beta split:
//!   the committer measures 2n halves of entangled pairs in the basis named
//!   by the bit, both agents later report the bit and the full outcome
//!   string, and the verifier spot-checks against her own measurements.
//!
//! Each runner returns a timestamped [`ProtocolTranscript`] that can be
//! checked against its split model with
//! [`crate::spacetime::validate_transcript`].

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::quantum::{
    epr_pair_labeled, measure_and_remove, measure_qubits, measurement_branches, trace_distance,
    Basis, DensityOperator, QubitId, StateVector,
};
use crate::rng::SimRng;
use crate::spacetime::{AgentId, Phase, SplitModel, ALICE, AMY, BOB, BRIAN};

/// Payload of one protocol message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    /// Classical bits.
    Bits(BitString),
    /// Hand-over of quantum registers, referenced by qubit identifier.
    Qubits(Vec<QubitId>),
    /// An unveiling: the claimed bit with its proof string.
    Opening {
        /// Claimed committed bit.
        bit: u8,
        /// Proof string accompanying the claim.
        string: BitString,
    },
}

/// One timestamped message between located agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    /// Phase during which the message is sent.
    pub phase: Phase,
    /// Sending agent.
    pub sender: AgentId,
    /// Receiving agent.
    pub receiver: AgentId,
    /// Message contents.
    pub payload: Payload,
}

/// Alice's final verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// The opening was accepted.
    Accept,
    /// The opening was rejected.
    Reject,
}

/// Record of one protocol run: ordered messages, the declared split model,
/// and the verifier's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    declared_split: SplitModel,
    messages: Vec<Message>,
    flag: Option<Flag>,
    committed_bit: Option<u8>,
    proof: Option<BitString>,
}

impl ProtocolTranscript {
    /// Starts an empty transcript under a declared split model.
    pub fn new(declared_split: SplitModel) -> Self {
        Self {
            declared_split,
            messages: Vec::new(),
            flag: None,
            committed_bit: None,
            proof: None,
        }
    }

    /// Appends a message; phases must be non-decreasing.
    pub fn send(&mut self, phase: Phase, sender: AgentId, receiver: AgentId, payload: Payload) {
        debug_assert!(
            self.messages.last().map_or(true, |m| m.phase <= phase),
            "message phases must be non-decreasing"
        );
        self.messages.push(Message {
            phase,
            sender,
            receiver,
            payload,
        });
    }

    /// Records the verifier's verdict and the opened data.
    pub fn finish(&mut self, flag: Flag, committed_bit: Option<u8>, proof: Option<BitString>) {
        self.flag = Some(flag);
        self.committed_bit = committed_bit;
        self.proof = proof;
    }

    /// The declared split model.
    pub fn declared_split(&self) -> SplitModel {
        self.declared_split
    }

    /// All messages in order.
    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    /// The verdict, set during verify.
    pub fn flag(&self) -> Option<Flag> {
        self.flag
    }

    /// The bit the verifier read from the opening, when accepted.
    pub fn committed_bit(&self) -> Option<u8> {
        self.committed_bit
    }

    /// The proof payload the verifier read.
    pub fn proof(&self) -> Option<&BitString> {
        self.proof.as_ref()
    }
}

/// Trace distance between the verifier's views of the two commitments,
/// together with the guessing probability it induces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HidingReport {
    /// Trace distance between the commit-phase reduced states for the two
    /// committed bits.
    pub trace_distance: f64,
    /// `1/2 + trace_distance/2`: the best early-guess probability.
    pub p_guess: f64,
}

impl HidingReport {
    fn from_distance(trace_distance: f64) -> Self {
        Self {
            trace_distance,
            p_guess: 0.5 + 0.5 * trace_distance,
        }
    }
}

// ---------------------------------------------------------------------------
// Protocol 1: bit commitment from secret sharing (alpha split).
// ---------------------------------------------------------------------------

/// What a curious receiver-side agent does with its share before the open
/// phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecretSharingAdversary {
    /// Guess the committed bit from the principal's share alone.
    GuessFromAliceShare,
    /// Guess the committed bit from the delegate's share alone.
    GuessFromAmyShare,
}

/// Outcome of one secret-sharing run.
#[derive(Debug, Clone, PartialEq)]
pub struct SecretSharingRun {
    /// Full message record.
    pub transcript: ProtocolTranscript,
    /// The bit reconstructed in the open phase.
    pub opened_bit: u8,
    /// The adversary's early guess, when a strategy was supplied.
    pub adversary_guess: Option<u8>,
}

/// Runs the secret-sharing commitment: the committer draws a random mask
/// `r` and sends `b XOR r` to the principal receiver and `r` to her agent;
/// after the split ends they reconstruct `b` by XOR.
pub fn run_secret_sharing(
    bit: u8,
    adversary: Option<SecretSharingAdversary>,
    seed: u64,
) -> Result<SecretSharingRun> {
    run_secret_sharing_with_rng(bit, adversary, &mut SimRng::from_seed(seed))
}

/// [`run_secret_sharing`] on a caller-provided randomness handle.
pub fn run_secret_sharing_with_rng(
    bit: u8,
    adversary: Option<SecretSharingAdversary>,
    rng: &mut SimRng,
) -> Result<SecretSharingRun> {
    if bit > 1 {
        return Err(Error::InvalidInput(format!("committed bit {bit}")));
    }
    let mask = rng.bit();
    let alice_share = bit ^ mask;
    let amy_share = mask;

    let mut transcript = ProtocolTranscript::new(SplitModel::alpha());
    transcript.send(
        Phase::Commit,
        BOB,
        ALICE,
        Payload::Bits(BitString::new(vec![alice_share])?),
    );
    transcript.send(
        Phase::Commit,
        BOB,
        AMY,
        Payload::Bits(BitString::new(vec![amy_share])?),
    );

    // An early guess can only read one share; each share is an unbiased
    // coin, so any fixed rule is a blind guess.
    let adversary_guess = adversary.map(|strategy| match strategy {
        SecretSharingAdversary::GuessFromAliceShare => alice_share,
        SecretSharingAdversary::GuessFromAmyShare => amy_share,
    });

    // The alpha split ends with the wait phase; the receiver agents may
    // now pool their shares.
    transcript.send(
        Phase::Open,
        AMY,
        ALICE,
        Payload::Bits(BitString::new(vec![amy_share])?),
    );
    let opened_bit = alice_share ^ amy_share;
    transcript.finish(
        Flag::Accept,
        Some(opened_bit),
        Some(BitString::new(vec![alice_share, amy_share])?),
    );
    Ok(SecretSharingRun {
        transcript,
        opened_bit,
        adversary_guess,
    })
}

/// Exact per-agent hiding check for the secret-sharing protocol: each
/// receiver agent's view is a fresh unbiased coin regardless of the
/// committed bit, so both reduced states are exactly I/2.
pub fn hiding_check_secret_sharing() -> Result<(HidingReport, HidingReport)> {
    let q = vec![QubitId(0)];
    let view = |share_of_bit: fn(u8, u8) -> u8| -> Result<f64> {
        let mut per_bit = Vec::new();
        for bit in [0u8, 1] {
            // Average the share over the uniform mask, encoded as a
            // computational-basis state.
            let mut weights = [0.0f64; 2];
            for mask in [0u8, 1] {
                weights[share_of_bit(bit, mask) as usize] += 0.5;
            }
            per_bit.push(DensityOperator::from_diagonal(&weights, q.clone())?);
        }
        trace_distance(&per_bit[0], &per_bit[1])
    };
    let alice = view(|bit, mask| bit ^ mask)?;
    let amy = view(|_bit, mask| mask)?;
    Ok((
        HidingReport::from_distance(alice),
        HidingReport::from_distance(amy),
    ))
}

// ---------------------------------------------------------------------------
// Protocol 2: pre-agreed bit under local command (beta split).
// ---------------------------------------------------------------------------

/// The principal committer agent's opening rule; it may read the command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BobStrategy {
    /// Announce the pre-agreed bit.
    OpenPreagreed {
        /// The bit agreed with the partner agent during commit.
        bit: u8,
    },
    /// Announce whatever the command says.
    FollowCommand,
    /// Announce a fixed bit.
    SendFixed(u8),
    /// Announce 1 with a command-dependent probability.
    Randomized {
        /// `p_one[c]` is the probability of announcing 1 given command `c`.
        p_one: [f64; 2],
    },
}

impl BobStrategy {
    fn submit(&self, command: u8, rng: &mut SimRng) -> u8 {
        match self {
            BobStrategy::OpenPreagreed { bit } => *bit,
            BobStrategy::FollowCommand => command,
            BobStrategy::SendFixed(bit) => *bit,
            BobStrategy::Randomized { p_one } => rng.bernoulli(p_one[command as usize]),
        }
    }
}

/// The delegate committer agent's opening rule. Under local command the
/// type has no access to the command value at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BrianStrategy {
    /// Announce the pre-agreed bit.
    OpenPreagreed {
        /// The bit agreed with the partner agent during commit.
        bit: u8,
    },
    /// Announce a fixed bit.
    SendFixed(u8),
    /// Announce 1 with a fixed probability.
    Randomized {
        /// Probability of announcing 1.
        p_one: f64,
    },
}

impl BrianStrategy {
    fn submit(&self, rng: &mut SimRng) -> u8 {
        match self {
            BrianStrategy::OpenPreagreed { bit } => *bit,
            BrianStrategy::SendFixed(bit) => *bit,
            BrianStrategy::Randomized { p_one } => rng.bernoulli(*p_one),
        }
    }
}

/// Outcome of one local-command run.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCommandRun {
    /// Full message record.
    pub transcript: ProtocolTranscript,
    /// The two announced bits (principal, delegate).
    pub submitted: (u8, u8),
    /// The verifier's verdict.
    pub flag: Flag,
}

/// Runs the pre-agreed-bit protocol under local command: only the principal
/// agent learns `command`; the verifier accepts the opening of `command`
/// when both announced bits equal it.
pub fn run_local_command(
    bob: &BobStrategy,
    brian: &BrianStrategy,
    command: u8,
    seed: u64,
) -> Result<LocalCommandRun> {
    run_local_command_with_rng(bob, brian, command, &mut SimRng::from_seed(seed))
}

/// [`run_local_command`] on a caller-provided randomness handle.
pub fn run_local_command_with_rng(
    bob: &BobStrategy,
    brian: &BrianStrategy,
    command: u8,
    rng: &mut SimRng,
) -> Result<LocalCommandRun> {
    if command > 1 {
        return Err(Error::InvalidInput(format!("command bit {command}")));
    }
    let mut transcript =
        ProtocolTranscript::new(SplitModel::beta(crate::spacetime::CommandModel::Local));

    // Commit-phase coordination between the committer agents is allowed;
    // for the honest strategy it carries the agreed bit.
    let agreement = match bob {
        BobStrategy::OpenPreagreed { bit } => BitString::new(vec![*bit])?,
        _ => BitString::zeros(0),
    };
    transcript.send(Phase::Commit, BOB, BRIAN, Payload::Bits(agreement));

    let x = bob.submit(command, rng);
    let y = brian.submit(rng);
    transcript.send(
        Phase::Open,
        BOB,
        ALICE,
        Payload::Bits(BitString::new(vec![x])?),
    );
    transcript.send(
        Phase::Open,
        BRIAN,
        ALICE,
        Payload::Bits(BitString::new(vec![y])?),
    );

    let flag = if x == command && y == command {
        Flag::Accept
    } else {
        Flag::Reject
    };
    transcript.finish(
        flag,
        (flag == Flag::Accept).then_some(command),
        Some(BitString::new(vec![x, y])?),
    );
    Ok(LocalCommandRun {
        transcript,
        submitted: (x, y),
        flag,
    })
}

// ---------------------------------------------------------------------------
// Protocol 3: commitment by transmitting measurement outcomes (beta split).
// ---------------------------------------------------------------------------

/// How the joint quantum state is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KentSimMode {
    /// One small register per entangled pair. Rounds are independent, so
    /// this is exact and fast; the default.
    PerRound,
    /// One joint register for all of the verifier's qubits, built pair by
    /// pair with destructive committer measurements. Exponential in `n`;
    /// usable up to `n = 11`.
    FullState,
}

/// When the verifier performs her own measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureTiming {
    /// Before receiving the openings. Her qubits never leave her lab, so
    /// the statistics cannot depend on this choice.
    BeforeOpen,
    /// After receiving the openings; the default.
    AfterOpen,
}

/// Which physical variant of the protocol runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KentVariant {
    /// The verifier prepares entangled pairs and keeps one half of each;
    /// the default.
    Purified,
    /// The verifier sends single qubits prepared in random BB84 states and
    /// keeps only the classical preparation data.
    PrepareAndMeasure,
}

/// Configuration of the measurement-outcome protocol runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KentConfig {
    /// Rounds per basis; the committer measures `2n` qubits.
    pub n: usize,
    /// Simulation strategy.
    pub mode: KentSimMode,
    /// Verifier measurement timing.
    pub timing: MeasureTiming,
    /// Physical variant.
    pub variant: KentVariant,
}

impl KentConfig {
    /// Default configuration: per-round simulation of the purified variant
    /// with the verifier measuring after the open phase.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            mode: KentSimMode::PerRound,
            timing: MeasureTiming::AfterOpen,
            variant: KentVariant::Purified,
        }
    }
}

/// The verifier's index partition: which rounds she measures in each basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    z: Vec<usize>,
    x: Vec<usize>,
}

impl Partition {
    /// Samples a uniformly random size-`n` subset of `0..2n` for the
    /// computational-basis rounds; the complement is measured in the
    /// Hadamard basis.
    pub fn sample(n: usize, rng: &mut SimRng) -> Self {
        let z = rng.subset(2 * n, n);
        let x = (0..2 * n).filter(|k| !z.contains(k)).collect();
        Self { z, x }
    }

    /// Builds a partition from an explicit computational-basis set.
    pub fn from_z(n: usize, z: Vec<usize>) -> Result<Self> {
        let mut sorted = z;
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != n || sorted.iter().any(|&k| k >= 2 * n) {
            return Err(Error::InvalidInput("bad partition".into()));
        }
        let x = (0..2 * n)
            .filter(|k| sorted.binary_search(k).is_err())
            .collect();
        Ok(Self { z: sorted, x })
    }

    /// Rounds measured in the computational basis.
    pub fn z(&self) -> &[usize] {
        &self.z
    }

    /// Rounds measured in the Hadamard basis.
    pub fn x(&self) -> &[usize] {
        &self.x
    }

    /// The verifier's basis for one round.
    pub fn basis_of(&self, round: usize) -> Basis {
        if self.z.binary_search(&round).is_ok() {
            Basis::Computational
        } else {
            Basis::Hadamard
        }
    }

    /// The rounds spot-checked against an opening of `claimed` (the rounds
    /// the verifier measured in the same basis).
    pub fn checked_positions(&self, claimed: u8) -> &[usize] {
        if claimed == 0 {
            &self.z
        } else {
            &self.x
        }
    }
}

/// One agent's unveiling: the claimed bit and the reported string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opening {
    /// Claimed committed bit.
    pub bit: u8,
    /// Reported outcome string of length `2n`.
    pub string: BitString,
}

/// The verifier's retained qubits after the commit phase.
#[derive(Debug, Clone, PartialEq)]
pub enum AliceRegister {
    /// One single-qubit state per round (per-round simulation).
    PerRound(Vec<StateVector>),
    /// One joint state over all rounds (full-state simulation).
    Joint(StateVector),
    /// Nothing quantum retained (prepare-and-measure variant).
    Classical,
}

/// Everything the verifier holds when deciding a measurement-outcome run.
#[derive(Debug, Clone, PartialEq)]
pub struct KentInstance {
    /// Rounds per basis.
    pub n: usize,
    /// The verifier's retained qubits (state at the end of commit).
    pub alice_register: AliceRegister,
    /// Her secret basis partition.
    pub partition: Partition,
    /// Her own measurement outcomes `S` (or preparation bits), length `2n`.
    pub alice_outcomes: BitString,
    /// The principal agent's opening, if any.
    pub bob_opening: Option<Opening>,
    /// The delegate agent's opening, if any.
    pub brian_opening: Option<Opening>,
}

/// Qubit labels: the verifier keeps even ids, the committer receives odd.
fn alice_qubit(round: usize) -> QubitId {
    QubitId(2 * round as u32)
}

fn bob_qubit(round: usize) -> QubitId {
    QubitId(2 * round as u32 + 1)
}

/// Runs the honest protocol under the default configuration.
pub fn run_kent_honest(n: usize, bit: u8, seed: u64) -> Result<(ProtocolTranscript, KentInstance)> {
    run_kent_honest_with(KentConfig::new(n), bit, seed)
}

/// Runs the honest protocol: pair creation and hand-over, the committer's
/// `2n` measurements in the basis named by `bit`, the split, both openings,
/// the verifier's partitioned measurements and her three checks.
pub fn run_kent_honest_with(
    config: KentConfig,
    bit: u8,
    seed: u64,
) -> Result<(ProtocolTranscript, KentInstance)> {
    run_kent_honest_with_rng(config, bit, &mut SimRng::from_seed(seed))
}

/// [`run_kent_honest_with`] on a caller-provided randomness handle.
pub fn run_kent_honest_with_rng(
    config: KentConfig,
    bit: u8,
    rng: &mut SimRng,
) -> Result<(ProtocolTranscript, KentInstance)> {
    if config.n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if bit > 1 {
        return Err(Error::InvalidInput(format!("committed bit {bit}")));
    }
    let n = config.n;
    let command_model = crate::spacetime::CommandModel::Local;
    let mut transcript = ProtocolTranscript::new(SplitModel::beta(command_model));
    let basis = Basis::from_bit(bit);

    transcript.send(
        Phase::Commit,
        ALICE,
        BOB,
        Payload::Qubits((0..2 * n).map(bob_qubit).collect()),
    );

    // Commit: the committer measures everything he received; the verifier's
    // register and her outcome string are produced according to the variant
    // and simulation mode.
    let mut committed_string = BitString::zeros(0);
    let mut alice_register;
    let partition;
    let alice_outcomes;
    match config.variant {
        KentVariant::Purified => {
            match config.mode {
                KentSimMode::PerRound => {
                    let mut kept = Vec::with_capacity(2 * n);
                    for round in 0..2 * n {
                        let pair = epr_pair_labeled(alice_qubit(round), bob_qubit(round));
                        let (t, alice_half) =
                            measure_and_remove(&pair, bob_qubit(round), basis, rng)?;
                        committed_string.push(t);
                        kept.push(alice_half);
                    }
                    alice_register = AliceRegister::PerRound(kept);
                }
                KentSimMode::FullState => {
                    let mut joint = StateVector::empty();
                    for round in 0..2 * n {
                        joint = joint
                            .tensor(&epr_pair_labeled(alice_qubit(round), bob_qubit(round)))?;
                        let (t, rest) = measure_and_remove(&joint, bob_qubit(round), basis, rng)?;
                        committed_string.push(t);
                        joint = rest;
                    }
                    alice_register = AliceRegister::Joint(joint);
                }
            }
            partition = Partition::sample(n, rng);
            // Timing is configurable because the verifier's qubits never
            // leave her lab; both orders must produce identical statistics.
            match config.timing {
                MeasureTiming::BeforeOpen => {
                    alice_outcomes = measure_alice_register(&mut alice_register, &partition, rng)?;
                }
                MeasureTiming::AfterOpen => {
                    alice_outcomes = BitString::zeros(0); // filled in below
                }
            }
        }
        KentVariant::PrepareAndMeasure => {
            // The verifier picks the partition and random bits up front,
            // prepares each qubit accordingly and keeps only the classical
            // data.
            partition = Partition::sample(n, rng);
            let mut prepared = BitString::zeros(0);
            for _ in 0..2 * n {
                prepared.push(rng.bit());
            }
            for round in 0..2 * n {
                let mut qubit =
                    StateVector::basis_state(&prepared.restrict(&[round]), vec![bob_qubit(round)])?;
                if partition.basis_of(round) == Basis::Hadamard {
                    let h = crate::linalg::cr(std::f64::consts::FRAC_1_SQRT_2);
                    qubit.apply_one_qubit(bob_qubit(round), &[[h, h], [h, -h]])?;
                }
                let (t, _) = measure_and_remove(&qubit, bob_qubit(round), basis, rng)?;
                committed_string.push(t);
            }
            alice_register = AliceRegister::Classical;
            alice_outcomes = prepared;
        }
    }

    // End of commit: the committer splits; both agents hold (bit, string).
    transcript.send(
        Phase::Commit,
        BOB,
        BRIAN,
        Payload::Opening {
            bit,
            string: committed_string.clone(),
        },
    );

    // Open: both agents report independently.
    let opening = Opening {
        bit,
        string: committed_string.clone(),
    };
    transcript.send(
        Phase::Open,
        BOB,
        ALICE,
        Payload::Opening {
            bit,
            string: committed_string.clone(),
        },
    );
    transcript.send(
        Phase::Open,
        BRIAN,
        ALICE,
        Payload::Opening {
            bit,
            string: committed_string.clone(),
        },
    );

    let alice_outcomes = if matches!(config.variant, KentVariant::Purified)
        && matches!(config.timing, MeasureTiming::AfterOpen)
    {
        measure_alice_register(&mut alice_register, &partition, rng)?
    } else {
        alice_outcomes
    };

    let instance = KentInstance {
        n,
        alice_register,
        partition,
        alice_outcomes,
        bob_opening: Some(opening.clone()),
        brian_opening: Some(opening),
    };

    let flag = kent_verify(&instance);
    transcript.finish(
        flag,
        (flag == Flag::Accept).then_some(bit),
        Some(committed_string),
    );
    Ok((transcript, instance))
}

/// Measures the verifier's register along the partition, leaving the
/// register in place, and returns her `2n`-bit outcome string.
fn measure_alice_register(
    register: &mut AliceRegister,
    partition: &Partition,
    rng: &mut SimRng,
) -> Result<BitString> {
    let mut outcomes = BitString::zeros(0);
    match register {
        AliceRegister::PerRound(states) => {
            for (round, state) in states.iter_mut().enumerate() {
                let (bits, post) =
                    measure_qubits(state, &[alice_qubit(round)], partition.basis_of(round), rng)?;
                outcomes.push(bits[0]);
                *state = post;
            }
        }
        AliceRegister::Joint(state) => {
            let rounds = state.labels().len();
            let mut work = state.clone();
            for round in 0..rounds {
                let (bits, post) =
                    measure_qubits(&work, &[alice_qubit(round)], partition.basis_of(round), rng)?;
                outcomes.push(bits[0]);
                work = post;
            }
            *state = work;
        }
        AliceRegister::Classical => {
            return Err(Error::InvalidInput(
                "no quantum register to measure in the prepare-and-measure variant".into(),
            ));
        }
    }
    Ok(outcomes)
}

/// The verifier's three checks: matching claimed bits, matching strings,
/// and string-vs-outcome consistency on the rounds she measured in the
/// claimed basis. A missing opening is scored as a rejection.
pub fn kent_verify(instance: &KentInstance) -> Flag {
    let (Some(bob), Some(brian)) = (&instance.bob_opening, &instance.brian_opening) else {
        return Flag::Reject;
    };
    if bob.bit != brian.bit || bob.bit > 1 {
        return Flag::Reject;
    }
    if bob.string != brian.string {
        return Flag::Reject;
    }
    if bob.string.len() != 2 * instance.n {
        return Flag::Reject;
    }
    for &k in instance.partition.checked_positions(bob.bit) {
        if bob.string[k] != instance.alice_outcomes[k] {
            return Flag::Reject;
        }
    }
    Flag::Accept
}

/// The per-agent acceptance test: the named agent's reported string must
/// agree with the verifier's outcomes on every round she measured in the
/// basis named by `claimed`.
pub fn kent_per_agent_test(instance: &KentInstance, agent: AgentId, claimed: u8) -> Flag {
    let opening = match agent {
        a if a == BOB => &instance.bob_opening,
        a if a == BRIAN => &instance.brian_opening,
        _ => return Flag::Reject,
    };
    let Some(opening) = opening else {
        return Flag::Reject;
    };
    if claimed > 1 || opening.string.len() != 2 * instance.n {
        return Flag::Reject;
    }
    for &k in instance.partition.checked_positions(claimed) {
        if opening.string[k] != instance.alice_outcomes[k] {
            return Flag::Reject;
        }
    }
    Flag::Accept
}

/// Hiding check for the measurement-outcome protocol: the trace distance
/// between the verifier's commit-phase reduced states for the two
/// commitments.
///
/// Per round the committer's measurement leaves the verifier's half in an
/// exactly computable two-branch mixture, and the joint state is a product
/// across rounds. For `n <= 3` the joint reduced states are also built
/// directly and compared; for larger `n` the product structure gives the
/// exact upper bound `sum of per-round distances`, which is what is
/// returned. The seed cross-checks the enumeration against one sampled
/// commit execution.
pub fn hiding_check_kent(n: usize, seed: u64) -> Result<HidingReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    // Per-round reduced state for each committed bit.
    let reduced_for = |bit: u8| -> Result<DensityOperator> {
        let pair = epr_pair_labeled(alice_qubit(0), bob_qubit(0));
        let branches = measurement_branches(&pair, &[bob_qubit(0)], Basis::from_bit(bit))?;
        let parts: Vec<(f64, DensityOperator)> = branches
            .iter()
            .map(|(_, p, st)| Ok((*p, st.partial_trace(&[alice_qubit(0)])?)))
            .collect::<Result<_>>()?;
        DensityOperator::mixture(&parts)
    };
    let per_round = trace_distance(&reduced_for(0)?, &reduced_for(1)?)?;
    let bound = per_round * 2.0 * n as f64;

    let distance = if n <= 3 {
        // Direct joint computation: enumerate the committer's outcome
        // strings on the full 2n-pair state and average the verifier's
        // conditional states.
        let joint_reduced = |bit: u8| -> Result<DensityOperator> {
            let mut state = StateVector::empty();
            for round in 0..2 * n {
                state = state.tensor(&epr_pair_labeled(alice_qubit(round), bob_qubit(round)))?;
            }
            let bob_targets: Vec<QubitId> = (0..2 * n).map(bob_qubit).collect();
            let alice_targets: Vec<QubitId> = (0..2 * n).map(alice_qubit).collect();
            let branches = measurement_branches(&state, &bob_targets, Basis::from_bit(bit))?;
            let parts: Vec<(f64, DensityOperator)> = branches
                .iter()
                .map(|(_, p, st)| Ok((*p, st.partial_trace(&alice_targets)?)))
                .collect::<Result<_>>()?;
            DensityOperator::mixture(&parts)
        };
        let exact = trace_distance(&joint_reduced(0)?, &joint_reduced(1)?)?;
        debug_assert!(exact <= bound + 1e-12);
        exact
    } else {
        bound
    };

    // Machinery cross-check: one sampled commit must collapse the
    // verifier's qubit onto a branch of the enumeration.
    let mut rng = SimRng::from_seed(seed);
    for bit in [0u8, 1] {
        let pair = epr_pair_labeled(alice_qubit(0), bob_qubit(0));
        let (_, sampled) = measure_and_remove(&pair, bob_qubit(0), Basis::from_bit(bit), &mut rng)?;
        let branches = measurement_branches(&pair, &[bob_qubit(0)], Basis::from_bit(bit))?;
        let matches_branch = branches.iter().any(|(_, _, st)| {
            let reduced = st.partial_trace(&[alice_qubit(0)]).expect("one qubit kept");
            let sampled_op = DensityOperator::from_state(&sampled);
            trace_distance(&reduced, &sampled_op).is_ok_and(|d| d < 1e-9)
        });
        if !matches_branch {
            return Err(Error::InvalidInput(
                "sampled commit state missing from branch enumeration".into(),
            ));
        }
    }

    Ok(HidingReport::from_distance(distance))
}
