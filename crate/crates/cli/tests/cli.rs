//! End-to-end tests of the `relbc` binary: exit codes, output files,
//! determinism and parser round-trips.

use std::path::Path;
use std::process::{Command, Output};

use relbc_cli::commands::{EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};
use relbc_cli::io::{bounds_from_csv, summary_from_csv};

fn relbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relbc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).expect("output file exists")
}

#[test]
fn bounds_csv_output_round_trips_and_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.csv");
    let result = relbc(&[
        "bounds",
        "--n",
        "64,128,256",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let text = String::from_utf8(read(&out)).unwrap();
    let reports = bounds_from_csv(&text).unwrap();
    assert_eq!(reports.len(), 3);
    assert!(reports[0].epsilon > reports[1].epsilon);
    assert!(reports[1].epsilon > reports[2].epsilon);
}

#[test]
fn repeated_n_produces_identical_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.csv");
    relbc(&[
        "bounds",
        "--n",
        "128,128",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(read(&out)).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], rows[1]);
}

#[test]
fn simulate_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    let log_a = dir.path().join("a.log");
    let log_b = dir.path().join("b.log");
    for (out, log) in [(&out_a, &log_a), (&out_b, &log_b)] {
        let result = relbc(&[
            "simulate",
            "--protocol",
            "kent",
            "--n",
            "4",
            "--trials",
            "200",
            "--seed",
            "7",
            "--transcript-log",
            log.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(result.status.code(), Some(EXIT_OK));
    }
    assert_eq!(read(&out_a), read(&out_b));
    assert_eq!(read(&log_a), read(&log_b));
    assert!(!read(&log_a).is_empty());
}

#[test]
fn simulate_accepts_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("summary.csv");
    let config = serde_json::json!({
        "protocol": "kent",
        "split": { "kind": "beta", "command": "local" },
        "n": 2,
        "trials": 100,
        "seed": 3,
        "output": out,
        "format": "csv",
    });
    let config_path = dir.path().join("config.json");
    std::fs::write(&config_path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    let result = relbc(&["simulate", "--config", config_path.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let summary = summary_from_csv(&String::from_utf8(read(&out)).unwrap()).unwrap();
    assert_eq!(summary.trials, 100);
    assert_eq!(summary.accept_count, 100);
    // Aggregation consistency: rate times trials is the integer count.
    assert_eq!(
        (summary.accept_rate * summary.trials as f64).round() as u64,
        summary.accept_count
    );
}

#[test]
fn nosig_check_accepts_an_attack_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    let result = relbc(&[
        "attack",
        "--attack",
        "intermediate-basis",
        "--theta",
        "0.2",
        "--n",
        "4",
        "--emit-table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let check = relbc(&["nosig-check", table.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(EXIT_OK));
    let text = stdout(&check);
    assert!(text.contains("no-signalling: ok"), "{text}");
    assert!(text.contains("holds"), "{text}");
}

#[test]
fn nosig_check_reports_binding_sum_equality_for_always_accept() {
    // Always-accept table: every input pair gives (accept, accept).
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("always.json");
    let mut cells = Vec::new();
    for b in 0..2 {
        for b_prime in 0..2 {
            for bob in ["accept", "reject"] {
                for brian in ["accept", "reject"] {
                    let p = if bob == "accept" && brian == "accept" {
                        1.0
                    } else {
                        0.0
                    };
                    cells.push(serde_json::json!({
                        "b": b, "b_prime": b_prime, "bob": bob, "brian": brian,
                        "probability": p,
                    }));
                }
            }
        }
    }
    let file = serde_json::json!({ "schema_version": 1, "table": cells });
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let check = relbc(&["nosig-check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(EXIT_OK));
    let text = stdout(&check);
    assert!(text.contains("p0+p1 = 2 <= 1+alpha = 2"), "{text}");
}

#[test]
fn nosig_check_flags_a_signalling_table() {
    // Hand-edited: Bob's accept marginal depends on Brian's input.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("signalling.json");
    let mut cells = Vec::new();
    for b in 0..2 {
        for b_prime in 0..2u8 {
            let bob_accept: f64 = if b_prime == 0 { 0.5 } else { 0.6 };
            for (bob, pu) in [("accept", bob_accept), ("reject", 1.0 - bob_accept)] {
                for (brian, pv) in [("accept", 0.5), ("reject", 0.5)] {
                    cells.push(serde_json::json!({
                        "b": b, "b_prime": b_prime, "bob": bob, "brian": brian,
                        "probability": pu * pv,
                    }));
                }
            }
        }
    }
    let file = serde_json::json!({ "schema_version": 1, "table": cells });
    std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap()).unwrap();
    let check = relbc(&["nosig-check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(EXIT_VIOLATION));
    assert!(stdout(&check).contains("VIOLATED"));
}

#[test]
fn parse_error_reports_line_information() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json\n").unwrap();
    let check = relbc(&["nosig-check", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(EXIT_ERROR));
    let err = String::from_utf8(check.stderr).unwrap();
    assert!(err.contains("line"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    let result = relbc(&["simulate", "--protocol", "nonsense"]);
    assert_eq!(result.status.code(), Some(EXIT_ERROR));
    let result = relbc(&["no-such-command"]);
    assert_eq!(result.status.code(), Some(EXIT_ERROR));
}

#[test]
fn attack_outputs_round_trip_and_match_analytic_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("attack.json");
    let result = relbc(&[
        "attack",
        "--attack",
        "coin-flip",
        "--n",
        "8",
        "--trials",
        "500",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let file: relbc_cli::io::AttackFile =
        serde_json::from_str(&String::from_utf8(read(&out)).unwrap()).unwrap();
    assert_eq!(file.report.p0, 0.5);
    assert_eq!(file.report.p1, 0.5);
    assert!(file.report.monte_carlo.is_some());
}

#[test]
fn emit_table_csv_feeds_nosig_check() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    let result = relbc(&[
        "attack",
        "--attack",
        "honest",
        "--bit",
        "0",
        "--n",
        "3",
        "--format",
        "csv",
        "--emit-table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let check = relbc(&["nosig-check", table.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(EXIT_OK));
    assert!(stdout(&check).contains("no-signalling: ok"));
}

#[test]
fn location_config_runs_the_geometric_validator() {
    use relbc::spacetime::{AgentLocations, Phase, SpacetimePoint, ALICE, AMY, BOB, BRIAN};
    let dir = tempfile::tempdir().unwrap();

    let run_with = |locations: AgentLocations, name: &str| {
        let config = serde_json::json!({
            "protocol": "secret_sharing",
            "split": { "kind": "alpha", "command": "local" },
            "n": 1,
            "trials": 20,
            "seed": 5,
            "locations": locations,
        });
        let path = dir.path().join(name);
        std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
        relbc(&["simulate", "--config", path.to_str().unwrap()])
    };

    // Co-located agents: every message is causal.
    let everyone_home = AgentLocations::co_located(SpacetimePoint { x: 0.0, t: 0.0 });
    let ok = run_with(everyone_home, "ok.json");
    assert_eq!(ok.status.code(), Some(EXIT_OK));

    // Separate the mask holder spacelike from the verifier during open:
    // her open-phase share hand-over becomes impossible.
    let mut split_apart = AgentLocations::new();
    for phase in Phase::ALL {
        for agent in [ALICE, BOB, BRIAN] {
            split_apart.place(agent, phase, SpacetimePoint { x: 0.0, t: 0.0 });
        }
        split_apart.place(AMY, phase, SpacetimePoint { x: 9.0, t: 0.0 });
    }
    let bad = run_with(split_apart, "bad.json");
    assert_eq!(bad.status.code(), Some(EXIT_VIOLATION));
    let err = String::from_utf8(bad.stderr).unwrap();
    assert!(err.contains("faster-than-light"), "{err}");
}

#[test]
fn simulate_attack_sampling_matches_analytic_figures() {
    use relbc_cli::commands::cmd_simulate;
    use relbc_cli::config::{ExperimentConfig, OutputFormat, ProtocolKind};
    let config = ExperimentConfig {
        protocol: ProtocolKind::Kent,
        split: relbc::spacetime::SplitModel::beta(relbc::spacetime::CommandModel::Global),
        n: 16,
        trials: 3000,
        seed: 21,
        attack: Some(relbc::adversaries::AttackKind::IntermediateBasis {
            theta: std::f64::consts::FRAC_PI_8,
        }),
        locations: None,
        output: None,
        format: OutputFormat::Json,
        transcript_log: None,
    };
    let summary = cmd_simulate(&config).unwrap();
    let attack = summary.attack.unwrap();
    let tol = |se: Option<f64>| 3.0 * se.unwrap().max(1e-3);
    assert!(
        (attack.p0_hat.unwrap() - attack.p0).abs() < tol(attack.p0_se),
        "p0 {} vs {}",
        attack.p0_hat.unwrap(),
        attack.p0
    );
    assert!(
        (attack.p1_hat.unwrap() - attack.p1).abs() < tol(attack.p1_se),
        "p1 {} vs {}",
        attack.p1_hat.unwrap(),
        attack.p1
    );
    // Aggregation consistency under alternating commands.
    assert_eq!(
        (summary.accept_rate * summary.trials as f64).round() as u64,
        summary.accept_count
    );
}

#[test]
fn composability_demo_prints_the_counterexample() {
    let result = relbc(&["composability-demo", "--n", "10"]);
    assert_eq!(result.status.code(), Some(EXIT_OK));
    let text = stdout(&result);
    assert!(text.contains("epsilon = 0"), "{text}");
    assert!(text.contains("sum = 512"), "{text}");
}
