//! Experiment configuration: the unit of reproducibility.
//!
//! A configuration fully determines every byte of output. Seeds are always
//! explicit; trial `k` runs on the stream derived from `(seed, k)`, so any
//! single trial can be replayed in isolation.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use relbc::adversaries::AttackKind;
use relbc::spacetime::{AgentLocations, CommandModel, SplitKind, SplitModel};

/// Current version of every file schema this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

/// Which protocol a simulation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum ProtocolKind {
    /// XOR secret sharing under an alpha split.
    SecretSharing,
    /// Pre-agreed bit under a beta split with local command.
    LocalCommand,
    /// Commitment by transmitting measurement outcomes under a beta split.
    Kent,
}

/// Output file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "snake_case")]
#[clap(rename_all = "snake_case")]
pub enum OutputFormat {
    /// Comma-separated rows with a header line.
    Csv,
    /// Pretty-printed JSON with a `schema_version` field.
    #[default]
    Json,
}

/// A batch experiment: protocol, split model, size, trial count and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Protocol to run.
    pub protocol: ProtocolKind,
    /// Split model the transcripts are validated against.
    pub split: SplitModel,
    /// Rounds per basis (meaningful for the measurement-outcome protocol).
    pub n: usize,
    /// Number of trials.
    pub trials: usize,
    /// Explicit 64-bit seed; there is no ambient entropy.
    pub seed: u64,
    /// Optional attack replacing the honest committer agents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackKind>,
    /// Optional phase-indexed agent locations; when present, transcripts
    /// additionally run through the stricter light-cone validator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locations: Option<AgentLocations>,
    /// Optional output file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Output format.
    #[serde(default)]
    pub format: OutputFormat,
    /// Optional JSON-lines log with one transcript per trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcript_log: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Default split model for a protocol.
    pub fn default_split(protocol: ProtocolKind) -> SplitModel {
        match protocol {
            ProtocolKind::SecretSharing => SplitModel::alpha(),
            ProtocolKind::LocalCommand => SplitModel::beta(CommandModel::Local),
            ProtocolKind::Kent => SplitModel::beta(CommandModel::Local),
        }
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> anyhow::Result<()> {
        anyhow::ensure!(self.trials >= 1, "trials must be >= 1");
        anyhow::ensure!(self.n >= 1, "n must be >= 1");
        match self.protocol {
            ProtocolKind::SecretSharing => {
                anyhow::ensure!(
                    self.split.kind == SplitKind::Alpha,
                    "secret sharing runs under the alpha split"
                );
                anyhow::ensure!(self.attack.is_none(), "no attacks implemented here");
            }
            ProtocolKind::LocalCommand => {
                anyhow::ensure!(
                    self.split.kind == SplitKind::Beta,
                    "the pre-agreed-bit protocol runs under the beta split"
                );
            }
            ProtocolKind::Kent => {
                anyhow::ensure!(
                    self.split.kind == SplitKind::Beta,
                    "the measurement-outcome protocol runs under the beta split"
                );
                if self.attack.is_some() {
                    anyhow::ensure!(
                        self.split.command == CommandModel::Global
                            || matches!(self.attack, Some(AttackKind::CoinFlip)),
                        "command-dependent attacks need the global command model"
                    );
                }
            }
        }
        Ok(())
    }
}
