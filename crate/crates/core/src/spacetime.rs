//! Minkowski geometry (1+1 dimensions, light speed 1), protocol phases,
//! split models and transcript validation.
//!
//! Splits are modelled as phase-indexed forbidden sender/receiver pairs.
//! An optional geometric validator checks messages against explicit agent
//! locations and light cones; the geometric constraints are strictly
//! stronger than the phase-based ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::ProtocolTranscript;

/// An event in 1+1-dimensional Minkowski space, units where light speed = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    /// Spatial coordinate.
    pub x: f64,
    /// Time coordinate.
    pub t: f64,
}

impl SpacetimePoint {
    /// Builds a point with finite coordinates.
    pub fn new(x: f64, t: f64) -> Result<Self> {
        if !x.is_finite() || !t.is_finite() {
            return Err(Error::InvalidInput(format!(
                "non-finite coordinates ({x}, {t})"
            )));
        }
        Ok(Self { x, t })
    }
}

/// The four phases of a commitment protocol, in temporal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// The committing interaction.
    Commit,
    /// Separator during which the commitment is in force.
    Wait,
    /// The unveiling interaction.
    Open,
    /// Local verification producing the accept/reject flag.
    Verify,
}

impl Phase {
    /// All phases in order.
    pub const ALL: [Phase; 4] = [Phase::Commit, Phase::Wait, Phase::Open, Phase::Verify];
}

/// Which party, if any, is split into two non-communicating agents, and
/// during which phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    /// No split: both parties act as single agents.
    None,
    /// The receiver of the commitment is split during commit and wait.
    Alpha,
    /// The committer is split during wait and open.
    Beta,
}

impl SplitKind {
    /// The party that is split, if any.
    pub fn split_party(self) -> Option<Party> {
        match self {
            SplitKind::None => None,
            SplitKind::Alpha => Some(Party::Alice),
            SplitKind::Beta => Some(Party::Bob),
        }
    }

    /// The phases during which the split is in force.
    pub fn split_phases(self) -> &'static [Phase] {
        match self {
            SplitKind::None => &[],
            SplitKind::Alpha => &[Phase::Commit, Phase::Wait],
            SplitKind::Beta => &[Phase::Wait, Phase::Open],
        }
    }
}

/// Whether the external verifier announces the bit to open to one agent or
/// to both. Meaningful only under a beta split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandModel {
    /// Only the principal committer agent learns the commanded bit.
    Local,
    /// Both committer agents learn the commanded bit.
    Global,
}

/// A split model: which split is imposed and how open commands arrive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitModel {
    /// The phase-indexed split.
    pub kind: SplitKind,
    /// Command delivery model.
    pub command: CommandModel,
}

impl SplitModel {
    /// Alpha split (the command model is irrelevant there; fixed to local).
    pub fn alpha() -> Self {
        Self {
            kind: SplitKind::Alpha,
            command: CommandModel::Local,
        }
    }

    /// Beta split with the given command model.
    pub fn beta(command: CommandModel) -> Self {
        Self {
            kind: SplitKind::Beta,
            command,
        }
    }

    /// No split.
    pub fn none() -> Self {
        Self {
            kind: SplitKind::None,
            command: CommandModel::Local,
        }
    }
}

/// One of the two protocol parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    /// The receiver/verifier of the commitment.
    Alice,
    /// The committer.
    Bob,
}

/// Principal or delegated agent of a party.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// The party itself (Alice, Bob).
    Principal,
    /// The delegated second agent (Amy, Brian).
    Agent,
}

/// One located actor: a party together with its role.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId {
    /// The party the agent belongs to.
    pub party: Party,
    /// Principal or delegate.
    pub role: Role,
}

/// Alice, the verifying principal.
pub const ALICE: AgentId = AgentId {
    party: Party::Alice,
    role: Role::Principal,
};
/// Amy, Alice's delegated agent.
pub const AMY: AgentId = AgentId {
    party: Party::Alice,
    role: Role::Agent,
};
/// Bob, the committing principal.
pub const BOB: AgentId = AgentId {
    party: Party::Bob,
    role: Role::Principal,
};
/// Brian, Bob's delegated agent.
pub const BRIAN: AgentId = AgentId {
    party: Party::Bob,
    role: Role::Agent,
};

impl std::fmt::Display for AgentId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match (self.party, self.role) {
            (Party::Alice, Role::Principal) => "Alice",
            (Party::Alice, Role::Agent) => "Amy",
            (Party::Bob, Role::Principal) => "Bob",
            (Party::Bob, Role::Agent) => "Brian",
        };
        write!(f, "{name}")
    }
}

/// Strictly spacelike separation: `|dx| > |dt|`. Lightlike pairs count as
/// causally connected, because a light-speed signal reaches them.
pub fn spacelike_separated(p: SpacetimePoint, q: SpacetimePoint) -> bool {
    (p.x - q.x).abs() > (p.t - q.t).abs()
}

/// True when `p` lies in the causal past of `q` (lightlike included).
pub fn causally_precedes(p: SpacetimePoint, q: SpacetimePoint) -> bool {
    let dt = q.t - p.t;
    dt >= 0.0 && (q.x - p.x).abs() <= dt
}

/// The latest point of the common causal past of two events: either the
/// earlier event itself when the two are causally ordered, or the apex
/// where the two past-cone boundaries cross.
pub fn latest_common_past(q: SpacetimePoint, r: SpacetimePoint) -> SpacetimePoint {
    if causally_precedes(q, r) {
        return q;
    }
    if causally_precedes(r, q) {
        return r;
    }
    let (left, right) = if q.x <= r.x { (q, r) } else { (r, q) };
    SpacetimePoint {
        x: 0.5 * (left.x + right.x + left.t - right.t),
        t: 0.5 * (left.t + right.t + left.x - right.x),
    }
}

/// One rule violation found in a transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Index of the offending message in the transcript.
    pub message_index: usize,
    /// Phase the message was sent in.
    pub phase: Phase,
    /// Sender of the message.
    pub sender: AgentId,
    /// Receiver of the message.
    pub receiver: AgentId,
    /// Description of the broken rule.
    pub reason: String,
}

fn check_well_formed(transcript: &ProtocolTranscript) -> Result<()> {
    let mut last = Phase::Commit;
    for (i, msg) in transcript.messages().iter().enumerate() {
        if msg.phase < last {
            return Err(Error::MalformedTranscript(format!(
                "message {i} in phase {:?} after phase {last:?}",
                msg.phase
            )));
        }
        if msg.sender == msg.receiver {
            return Err(Error::MalformedTranscript(format!(
                "message {i} sent from {} to itself",
                msg.sender
            )));
        }
        last = msg.phase;
    }
    Ok(())
}

/// Checks every message of a transcript against the split model's
/// forbidden-edge rules. An empty violation list means the transcript is
/// valid.
pub fn validate_transcript(
    transcript: &ProtocolTranscript,
    model: &SplitModel,
) -> Result<Vec<Violation>> {
    check_well_formed(transcript)?;
    let Some(split_party) = model.kind.split_party() else {
        return Ok(Vec::new());
    };
    let phases = model.kind.split_phases();
    let mut violations = Vec::new();
    for (i, msg) in transcript.messages().iter().enumerate() {
        let within_party = msg.sender.party == split_party && msg.receiver.party == split_party;
        if within_party && phases.contains(&msg.phase) {
            violations.push(Violation {
                message_index: i,
                phase: msg.phase,
                sender: msg.sender,
                receiver: msg.receiver,
                reason: format!(
                    "{} -> {} forbidden during {:?} under the {:?} split",
                    msg.sender, msg.receiver, msg.phase, model.kind
                ),
            });
        }
    }
    Ok(violations)
}

/// Phase-indexed agent locations for the geometric validator.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AgentLocations {
    positions: BTreeMap<(AgentId, Phase), SpacetimePoint>,
}

/// One row of the serialised location table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationEntry {
    /// The located agent.
    pub agent: AgentId,
    /// Phase the location applies to.
    pub phase: Phase,
    /// Where the agent sits.
    pub at: SpacetimePoint,
}

impl Serialize for AgentLocations {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<LocationEntry> = self
            .positions
            .iter()
            .map(|(&(agent, phase), &at)| LocationEntry { agent, phase, at })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AgentLocations {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<LocationEntry>::deserialize(d)?;
        let mut locations = Self::new();
        for e in entries {
            locations.place(e.agent, e.phase, e.at);
        }
        Ok(locations)
    }
}

impl AgentLocations {
    /// Empty location table.
    pub fn new() -> Self {
        Self::default()
    }

    /// Records where an agent sits during a phase.
    pub fn place(&mut self, agent: AgentId, phase: Phase, at: SpacetimePoint) {
        self.positions.insert((agent, phase), at);
    }

    /// Location of an agent during a phase, if recorded.
    pub fn get(&self, agent: AgentId, phase: Phase) -> Option<SpacetimePoint> {
        self.positions.get(&(agent, phase)).copied()
    }

    /// Everyone shares one location through all phases; every message is
    /// trivially causal.
    pub fn co_located(at: SpacetimePoint) -> Self {
        let mut locations = Self::new();
        for phase in Phase::ALL {
            for agent in [ALICE, AMY, BOB, BRIAN] {
                locations.place(agent, phase, at);
            }
        }
        locations
    }

    /// The canonical single-shot geometry: everyone commits at the apex
    /// point, the two openings happen at two spacelike-separated points one
    /// time unit later.
    pub fn canonical_two_opening() -> Self {
        let apex = SpacetimePoint { x: 0.0, t: 0.0 };
        let left = SpacetimePoint { x: -1.0, t: 1.0 };
        let right = SpacetimePoint { x: 1.0, t: 1.0 };
        let mut locations = Self::new();
        for phase in [Phase::Commit, Phase::Wait] {
            for agent in [ALICE, AMY, BOB, BRIAN] {
                locations.place(agent, phase, apex);
            }
        }
        for phase in [Phase::Open, Phase::Verify] {
            for agent in [ALICE, BOB] {
                locations.place(agent, phase, left);
            }
            for agent in [AMY, BRIAN] {
                locations.place(agent, phase, right);
            }
        }
        locations
    }
}

/// Stricter geometric validation: every message must fit inside the light
/// cone of its sender's location, i.e. the receiver's location must lie in
/// the causal future of the sender's.
pub fn validate_transcript_geometric(
    transcript: &ProtocolTranscript,
    locations: &AgentLocations,
) -> Result<Vec<Violation>> {
    check_well_formed(transcript)?;
    let mut violations = Vec::new();
    for (i, msg) in transcript.messages().iter().enumerate() {
        let from = locations.get(msg.sender, msg.phase).ok_or_else(|| {
            Error::MalformedTranscript(format!(
                "no location for {} during {:?}",
                msg.sender, msg.phase
            ))
        })?;
        let to = locations.get(msg.receiver, msg.phase).ok_or_else(|| {
            Error::MalformedTranscript(format!(
                "no location for {} during {:?}",
                msg.receiver, msg.phase
            ))
        })?;
        if !causally_precedes(from, to) {
            violations.push(Violation {
                message_index: i,
                phase: msg.phase,
                sender: msg.sender,
                receiver: msg.receiver,
                reason: format!(
                    "({}, {}) -> ({}, {}) requires faster-than-light signalling",
                    from.x, from.t, to.x, to.t
                ),
            });
        }
    }
    Ok(violations)
}
