use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use relbc::adversaries::AttackKind;
use relbc::spacetime::{CommandModel, SplitKind, SplitModel};
use relbc_cli::commands::{
    cmd_attack, cmd_bounds, cmd_classical_cheat, cmd_composability, cmd_nosig_check, cmd_simulate,
    render_attack, render_bounds, render_summary, ViolationError, EXIT_ERROR, EXIT_OK,
    EXIT_VIOLATION,
};
use relbc_cli::config::{ExperimentConfig, OutputFormat, ProtocolKind};

/// Simulator and bound calculator for split-model bit commitment.
#[derive(Parser)]
#[command(name = "relbc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the binding bound epsilon(n) for a list of round counts.
    Bounds {
        /// Comma-separated round counts, e.g. 64,128,256.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a batch of protocol simulations.
    Simulate {
        /// JSON configuration file; overrides all other flags.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Protocol to run.
        #[arg(long, value_enum, default_value = "kent")]
        protocol: ProtocolKind,
        /// Rounds per basis.
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Number of trials.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Explicit seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Split model: none, alpha or beta.
        #[arg(long, value_enum)]
        split: Option<SplitArg>,
        /// Command model under the beta split.
        #[arg(long, value_enum, default_value = "local")]
        command: CommandArg,
        /// Attack replacing the honest committer agents.
        #[arg(long, value_enum)]
        attack: Option<AttackArg>,
        /// Rotation angle for the intermediate-basis attack (radians).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
        theta: f64,
        /// Per-trial transcript log (JSON lines).
        #[arg(long)]
        transcript_log: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate one attack exactly and, optionally, by sampling.
    Attack {
        /// Attack kind.
        #[arg(long, value_enum)]
        attack: AttackArg,
        /// Rotation angle for the intermediate-basis attack (radians).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
        theta: f64,
        /// Honest bit for the honest baseline.
        #[arg(long, default_value_t = 0)]
        bit: u8,
        /// Rounds per basis.
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Monte-Carlo trials (0 = analytic only).
        #[arg(long, default_value_t = 0)]
        trials: usize,
        /// Explicit seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the attack's exact joint outcome table.
        #[arg(long)]
        emit_table: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a joint-outcome-table file for no-signalling and report the
    /// binding inequality.
    NosigCheck {
        /// Path to a table JSON file.
        path: PathBuf,
    },
    /// Demonstrate that per-bit weak binding does not compose to string
    /// commitment.
    ComposabilityDemo {
        /// String length (1..=20).
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum SplitArg {
    None,
    Alpha,
    Beta,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum CommandArg {
    Local,
    Global,
}

impl From<CommandArg> for CommandModel {
    fn from(value: CommandArg) -> Self {
        match value {
            CommandArg::Local => CommandModel::Local,
            CommandArg::Global => CommandModel::Global,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum AttackArg {
    Honest,
    CoinFlip,
    IntermediateBasis,
    /// Both agents of the pre-agreed-bit protocol announce the commanded
    /// bit; ignores --n and --theta.
    ClassicalGlobalCheat,
}

fn attack_kind(arg: AttackArg, theta: f64, bit: u8) -> Option<AttackKind> {
    match arg {
        AttackArg::Honest => Some(AttackKind::Honest { bit }),
        AttackArg::CoinFlip => Some(AttackKind::CoinFlip),
        AttackArg::IntermediateBasis => Some(AttackKind::IntermediateBasis { theta }),
        AttackArg::ClassicalGlobalCheat => None,
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Bounds { n, output } => {
            let reports = cmd_bounds(&n, output.out.as_deref(), output.format)?;
            print!("{}", render_bounds(&reports));
            Ok(EXIT_OK)
        }
        Command::Simulate {
            config,
            protocol,
            n,
            trials,
            seed,
            split,
            command,
            attack,
            theta,
            transcript_log,
            output,
        } => {
            let config = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    serde_json::from_str::<ExperimentConfig>(&text)?
                }
                None => {
                    let split = match split {
                        None => ExperimentConfig::default_split(protocol),
                        Some(SplitArg::None) => SplitModel::none(),
                        Some(SplitArg::Alpha) => SplitModel::alpha(),
                        Some(SplitArg::Beta) => SplitModel {
                            kind: SplitKind::Beta,
                            command: command.into(),
                        },
                    };
                    ExperimentConfig {
                        protocol,
                        split,
                        n,
                        trials,
                        seed,
                        attack: attack.and_then(|a| attack_kind(a, theta, 0)),
                        locations: None,
                        output: output.out,
                        format: output.format,
                        transcript_log,
                    }
                }
            };
            let started = std::time::Instant::now();
            let summary = cmd_simulate(&config)?;
            print!("{}", render_summary(&summary));
            eprintln!("wall time: {:.3}s", started.elapsed().as_secs_f64());
            Ok(EXIT_OK)
        }
        Command::Attack {
            attack,
            theta,
            bit,
            n,
            trials,
            seed,
            emit_table,
            output,
        } => {
            let report = match attack_kind(attack, theta, bit) {
                Some(kind) => cmd_attack(
                    kind,
                    n,
                    trials,
                    seed,
                    output.out.as_deref(),
                    output.format,
                    emit_table.as_deref(),
                )?,
                None => cmd_classical_cheat(seed, output.out.as_deref(), output.format)?,
            };
            print!("{}", render_attack(&report));
            Ok(EXIT_OK)
        }
        Command::NosigCheck { path } => {
            let outcome = cmd_nosig_check(&path)?;
            print!("{}", outcome.rendered);
            Ok(outcome.exit_code)
        }
        Command::ComposabilityDemo { n } => {
            print!("{}", cmd_composability(n)?);
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are plain errors (exit 1); exit 2 is reserved for
    // validation violations.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            let code = if err.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_OK
            };
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            if err.downcast_ref::<ViolationError>().is_some() {
                eprintln!("validation violation:\n{err}");
                ExitCode::from(EXIT_VIOLATION as u8)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::from(EXIT_ERROR as u8)
            }
        }
    }
}
