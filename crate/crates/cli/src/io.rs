//! Machine-readable output schemas and their parsers.
//!
//! Every file this crate writes round-trips losslessly through the parsers
//! here: floats are printed with Rust's shortest round-trip formatting and
//! parsed exactly. JSON documents carry a `schema_version` field; CSV files
//! carry a fixed header line.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use relbc::adversaries::{AttackReport, JointOutcomeTable, McEstimate};
use relbc::bounds::BoundReport;

use crate::config::{ProtocolKind, SCHEMA_VERSION};

/// Aggregated result of one batch experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    /// Output schema version.
    pub schema_version: u32,
    /// Protocol that ran.
    pub protocol: ProtocolKind,
    /// Rounds per basis.
    pub n: usize,
    /// Number of trials.
    pub trials: usize,
    /// Seed the experiment ran under.
    pub seed: u64,
    /// Number of accepted runs.
    pub accept_count: u64,
    /// `accept_count / trials`.
    pub accept_rate: f64,
    /// Bernoulli standard error of the accept rate.
    pub accept_rate_se: f64,
    /// Attack figures, when an attack was configured.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackSummary>,
}

/// Attack figures carried by a [`RunSummary`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackSummary {
    /// Attack name.
    pub name: String,
    /// Exact probability of successfully opening 0.
    pub p0: f64,
    /// Exact probability of successfully opening 1.
    pub p1: f64,
    /// Exact cross term.
    pub alpha: f64,
    /// The binding bound `epsilon(n)`.
    pub bound: f64,
    /// Whether `p0 + p1 <= 1 + bound`.
    pub satisfied: bool,
    /// Empirical estimate of `p0` (when trials sampled the attack).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_hat: Option<f64>,
    /// Empirical estimate of `p1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1_hat: Option<f64>,
    /// Standard error of `p0_hat`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0_se: Option<f64>,
    /// Standard error of `p1_hat`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p1_se: Option<f64>,
}

impl RunSummary {
    /// Bernoulli standard error helper.
    pub fn bernoulli_se(p: f64, trials: usize) -> f64 {
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

impl From<&AttackReport> for AttackSummary {
    fn from(report: &AttackReport) -> Self {
        let mc: Option<&McEstimate> = report.monte_carlo.as_ref();
        Self {
            name: report.name.clone(),
            p0: report.p0,
            p1: report.p1,
            alpha: report.alpha,
            bound: report.bound,
            satisfied: report.satisfied,
            p0_hat: mc.map(|m| m.p0_hat),
            p1_hat: mc.map(|m| m.p1_hat),
            p0_se: mc.map(|m| m.p0_se),
            p1_se: mc.map(|m| m.p1_se),
        }
    }
}

fn protocol_name(p: ProtocolKind) -> &'static str {
    match p {
        ProtocolKind::SecretSharing => "secret_sharing",
        ProtocolKind::LocalCommand => "local_command",
        ProtocolKind::Kent => "kent",
    }
}

fn parse_protocol(s: &str) -> Result<ProtocolKind> {
    Ok(match s {
        "secret_sharing" => ProtocolKind::SecretSharing,
        "local_command" => ProtocolKind::LocalCommand,
        "kent" => ProtocolKind::Kent,
        other => bail!("unknown protocol {other:?}"),
    })
}

fn opt_cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn parse_opt_f64(cell: &str) -> Result<Option<f64>> {
    if cell.is_empty() {
        return Ok(None);
    }
    Ok(Some(cell.parse::<f64>()?))
}

/// Header of the run-summary CSV schema.
pub const SUMMARY_CSV_HEADER: &str = "schema_version,protocol,n,trials,seed,accept_count,\
accept_rate,accept_rate_se,attack,p0,p1,alpha,bound,satisfied,p0_hat,p1_hat,p0_se,p1_se";

/// Serialises a summary as CSV (header plus one row).
pub fn summary_to_csv(summary: &RunSummary) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_CSV_HEADER);
    out.push('\n');
    let a = summary.attack.as_ref();
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        summary.schema_version,
        protocol_name(summary.protocol),
        summary.n,
        summary.trials,
        summary.seed,
        summary.accept_count,
        summary.accept_rate,
        summary.accept_rate_se,
        a.map(|x| x.name.clone()).unwrap_or_default(),
        opt_cell(&a.map(|x| x.p0)),
        opt_cell(&a.map(|x| x.p1)),
        opt_cell(&a.map(|x| x.alpha)),
        opt_cell(&a.map(|x| x.bound)),
        opt_cell(&a.map(|x| x.satisfied)),
        opt_cell(&a.and_then(|x| x.p0_hat)),
        opt_cell(&a.and_then(|x| x.p1_hat)),
        opt_cell(&a.and_then(|x| x.p0_se)),
        opt_cell(&a.and_then(|x| x.p1_se)),
    );
    out
}

/// Parses a summary back from its CSV form.
pub fn summary_from_csv(text: &str) -> Result<RunSummary> {
    let mut lines = text.lines();
    let header = lines.next().context("empty summary file")?;
    anyhow::ensure!(header == SUMMARY_CSV_HEADER, "unexpected header {header:?}");
    let row = lines.next().context("missing summary row")?;
    let cells: Vec<&str> = row.split(',').collect();
    anyhow::ensure!(cells.len() == 18, "expected 18 cells, got {}", cells.len());
    let attack = if cells[8].is_empty() {
        None
    } else {
        Some(AttackSummary {
            name: cells[8].to_string(),
            p0: cells[9].parse()?,
            p1: cells[10].parse()?,
            alpha: cells[11].parse()?,
            bound: cells[12].parse()?,
            satisfied: cells[13].parse()?,
            p0_hat: parse_opt_f64(cells[14])?,
            p1_hat: parse_opt_f64(cells[15])?,
            p0_se: parse_opt_f64(cells[16])?,
            p1_se: parse_opt_f64(cells[17])?,
        })
    };
    Ok(RunSummary {
        schema_version: cells[0].parse()?,
        protocol: parse_protocol(cells[1])?,
        n: cells[2].parse()?,
        trials: cells[3].parse()?,
        seed: cells[4].parse()?,
        accept_count: cells[5].parse()?,
        accept_rate: cells[6].parse()?,
        accept_rate_se: cells[7].parse()?,
        attack,
    })
}

/// Header of the bound-sweep CSV schema.
pub const BOUNDS_CSV_HEADER: &str = "n,delta_star,epsilon,term_entropy,term_hoeffding";

/// Serialises bound reports as CSV rows.
pub fn bounds_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::new();
    out.push_str(BOUNDS_CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.n, r.delta_star, r.epsilon, r.term_entropy, r.term_hoeffding
        );
    }
    out
}

/// Parses bound reports back from CSV.
pub fn bounds_from_csv(text: &str) -> Result<Vec<BoundReport>> {
    let mut lines = text.lines();
    let header = lines.next().context("empty bounds file")?;
    anyhow::ensure!(header == BOUNDS_CSV_HEADER, "unexpected header {header:?}");
    lines
        .map(|row| {
            let cells: Vec<&str> = row.split(',').collect();
            anyhow::ensure!(cells.len() == 5, "expected 5 cells, got {}", cells.len());
            Ok(BoundReport {
                n: cells[0].parse()?,
                delta_star: cells[1].parse()?,
                epsilon: cells[2].parse()?,
                term_entropy: cells[3].parse()?,
                term_hoeffding: cells[4].parse()?,
            })
        })
        .collect()
}

/// Versioned JSON wrapper for a list of bound reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsFile {
    /// Output schema version.
    pub schema_version: u32,
    /// One report per requested round count.
    pub reports: Vec<BoundReport>,
}

impl BoundsFile {
    /// Wraps reports under the current schema version.
    pub fn new(reports: Vec<BoundReport>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            reports,
        }
    }
}

/// Versioned JSON wrapper for a joint outcome table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableFile {
    /// Output schema version.
    pub schema_version: u32,
    /// The sixteen table cells.
    pub table: JointOutcomeTable,
}

impl TableFile {
    /// Wraps a table under the current schema version.
    pub fn new(table: JointOutcomeTable) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            table,
        }
    }
}

/// Header of the table CSV schema.
pub const TABLE_CSV_HEADER: &str = "b,b_prime,bob,brian,probability";

fn flag_name(flag: relbc::protocols::Flag) -> &'static str {
    match flag {
        relbc::protocols::Flag::Accept => "accept",
        relbc::protocols::Flag::Reject => "reject",
    }
}

fn parse_flag(cell: &str) -> Result<relbc::protocols::Flag> {
    Ok(match cell {
        "accept" => relbc::protocols::Flag::Accept,
        "reject" => relbc::protocols::Flag::Reject,
        other => bail!("unknown flag {other:?}"),
    })
}

/// Serialises a table as CSV, one cell per row.
pub fn table_to_csv(table: &JointOutcomeTable) -> String {
    let mut out = String::new();
    out.push_str(TABLE_CSV_HEADER);
    out.push('\n');
    for cell in table.cells() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            cell.b,
            cell.b_prime,
            flag_name(cell.bob),
            flag_name(cell.brian),
            cell.probability
        );
    }
    out
}

/// Parses a table back from CSV.
pub fn table_from_csv(text: &str) -> Result<JointOutcomeTable> {
    let mut lines = text.lines();
    let header = lines.next().context("empty table file")?;
    anyhow::ensure!(header == TABLE_CSV_HEADER, "unexpected header {header:?}");
    let cells = lines
        .map(|row| {
            let cols: Vec<&str> = row.split(',').collect();
            anyhow::ensure!(cols.len() == 5, "expected 5 cells, got {}", cols.len());
            Ok(relbc::adversaries::TableCell {
                b: cols[0].parse()?,
                b_prime: cols[1].parse()?,
                bob: parse_flag(cols[2])?,
                brian: parse_flag(cols[3])?,
                probability: cols[4].parse()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    JointOutcomeTable::from_cells(&cells).map_err(anyhow::Error::from)
}

/// Versioned JSON wrapper for a cq ensemble (the interchange schema for
/// quantum states produced by the core crate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFile {
    /// Output schema version.
    pub schema_version: u32,
    /// The ensemble: labels with probabilities and conditional states.
    pub ensemble: relbc::CqEnsemble,
}

impl EnsembleFile {
    /// Wraps an ensemble under the current schema version.
    pub fn new(ensemble: relbc::CqEnsemble) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            ensemble,
        }
    }
}

/// Versioned JSON wrapper for an attack report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackFile {
    /// Output schema version.
    pub schema_version: u32,
    /// The evaluated attack.
    pub report: AttackReport,
}

impl AttackFile {
    /// Wraps a report under the current schema version.
    pub fn new(report: AttackReport) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            report,
        }
    }
}

/// Pretty JSON with a trailing newline (the canonical byte encoding of
/// every JSON file this crate writes).
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}
