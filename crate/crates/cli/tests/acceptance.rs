//! Acceptance suite: one test per verification criterion, each ending with
//! a `[PASS]` line naming the criterion and the measured quantity.
//!
//! Run with `cargo test -p relbc-cli --test acceptance -- --nocapture`.

use relbc::adversaries::{
    alpha_decomposition_check, binding_sum_check, classical_global_cheat,
    composability_counterexample, evaluate_attack, local_command_optimum_preagreed, max_p0_plus_p1,
    random_no_signalling_table, AlphaEstimator, AttackKind, AttackStrategy,
};
use relbc::bounds::{
    binding_bound, binding_bound_with_step, check_uncertainty_relation, cross_term_bound, CcqEntry,
    CcqState,
};
use relbc::protocols::{hiding_check_kent, hiding_check_secret_sharing};
use relbc::quantum::{Basis, DensityOperator, QubitId, StateVector};
use relbc::rng::SimRng;
use relbc::spacetime::SplitModel;
use relbc_cli::commands::cmd_simulate;
use relbc_cli::config::{ExperimentConfig, OutputFormat, ProtocolKind};

/// Every implemented attack: the nine-angle rotation grid, the coin flip
/// and the two honest baselines.
fn implemented_attacks() -> Vec<AttackStrategy> {
    let mut attacks = Vec::new();
    for k in 0..=8 {
        let theta = k as f64 * std::f64::consts::FRAC_PI_4 / 8.0;
        attacks.push(AttackStrategy::global(AttackKind::IntermediateBasis { theta }).unwrap());
    }
    attacks.push(AttackStrategy::global(AttackKind::CoinFlip).unwrap());
    attacks.push(AttackStrategy::global(AttackKind::Honest { bit: 0 }).unwrap());
    attacks.push(AttackStrategy::global(AttackKind::Honest { bit: 1 }).unwrap());
    attacks
}

fn honest_config(protocol: ProtocolKind, n: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        protocol,
        split: ExperimentConfig::default_split(protocol),
        n,
        trials: 10_000,
        seed,
        attack: None,
        locations: None,
        output: None,
        format: OutputFormat::Json,
        transcript_log: None,
    }
}

#[test]
fn criterion_01_perfect_correctness() {
    let mut batches = vec![
        (
            honest_config(ProtocolKind::SecretSharing, 1, 101),
            "secret sharing",
        ),
        (
            honest_config(ProtocolKind::LocalCommand, 1, 102),
            "pre-agreed bit",
        ),
    ];
    for (i, n) in [1usize, 4, 8].into_iter().enumerate() {
        batches.push((
            honest_config(ProtocolKind::Kent, n, 103 + i as u64),
            "measurement outcomes",
        ));
    }
    for (config, name) in &batches {
        let summary = cmd_simulate(config).unwrap();
        assert_eq!(
            summary.accept_count,
            10_000,
            "{name} n={} rejected {} honest runs",
            config.n,
            10_000 - summary.accept_count
        );
        assert_eq!(summary.accept_rate, 1.0);
    }
    println!(
        "[PASS] criterion 1: perfect correctness, {} batches x 10^4 honest runs all accepted",
        batches.len()
    );
}

#[test]
fn criterion_02_perfect_hiding() {
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let report = hiding_check_kent(n, 200 + n as u64).unwrap();
        assert!(
            report.trace_distance < 1e-12,
            "n={n}: distance {}",
            report.trace_distance
        );
        worst = worst.max(report.trace_distance);
    }
    let (alice, amy) = hiding_check_secret_sharing().unwrap();
    assert!(alice.trace_distance < 1e-12);
    assert!(amy.trace_distance < 1e-12);
    assert_eq!(alice.p_guess, 0.5);
    assert_eq!(amy.p_guess, 0.5);
    println!(
        "[PASS] criterion 2: perfect hiding, worst commit-phase trace distance {worst:.3e} < 1e-12"
    );
}

#[test]
fn criterion_03_no_signalling_binding_inequality() {
    let mut rng = SimRng::from_seed(303);
    let mut worst_slack: f64 = f64::INFINITY;
    for _ in 0..100_000 {
        let table = random_no_signalling_table(&mut rng);
        let check = binding_sum_check(&table).unwrap();
        assert!(
            check.lhs <= check.rhs + 1e-9,
            "violated: {} > {}",
            check.lhs,
            check.rhs
        );
        worst_slack = worst_slack.min(check.rhs - check.lhs);
    }
    for cap in [0.0, 0.25, 0.5, 1.0] {
        assert_eq!(max_p0_plus_p1(cap).unwrap(), 1.0 + cap, "cap {cap}");
    }
    println!(
        "[PASS] criterion 3: p0+p1 <= 1+alpha on 10^5 no-signalling tables \
         (min slack {worst_slack:.3e}) and the polytope maximum equals 1+alpha exactly"
    );
}

#[test]
fn criterion_04_binding_bound_pipeline() {
    // Strict decrease along doublings.
    let ns: Vec<usize> = std::iter::successors(Some(32usize), |&n| Some(n * 2))
        .take_while(|&n| n <= 4096)
        .collect();
    let reports: Vec<_> = ns.iter().map(|&n| binding_bound(n).unwrap()).collect();
    for pair in reports.windows(2) {
        assert!(
            pair[1].epsilon < pair[0].epsilon,
            "epsilon({}) = {} not below epsilon({}) = {}",
            pair[1].n,
            pair[1].epsilon,
            pair[0].n,
            pair[0].epsilon
        );
    }

    // epsilon(256) below 1e-4.
    let at_256 = binding_bound(256).unwrap().epsilon;
    assert!(at_256 < 1e-4, "epsilon(256) = {at_256}");

    // Per-round log2 slope stabilises beyond 256: consecutive doubling
    // slopes agree within 20%.
    let log_eps: Vec<(usize, f64)> = reports
        .iter()
        .filter(|r| r.n >= 256)
        .map(|r| (r.n, r.epsilon.log2()))
        .collect();
    let slopes: Vec<f64> = log_eps
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) as f64)
        .collect();
    for pair in slopes.windows(2) {
        let rel = (pair[1] - pair[0]).abs() / pair[0].abs();
        assert!(rel <= 0.2, "slope drift {rel} between doublings");
        assert!(pair[0] < 0.0 && pair[1] < 0.0);
    }

    // Grid step 1e-3 against 1e-4.
    for &n in &ns {
        let coarse = binding_bound_with_step(n, 1e-3).unwrap().epsilon;
        let fine = binding_bound_with_step(n, 1e-4).unwrap().epsilon;
        let rel = (coarse - fine).abs() / fine;
        assert!(rel < 1e-5, "n={n}: grid disagreement {rel}");
    }
    println!(
        "[PASS] criterion 4: epsilon(n) strictly decreasing over {ns:?}, \
         epsilon(256) = {at_256:.3e}, slopes within 20%, grids within 1e-5"
    );
}

#[test]
fn criterion_05_attack_domination() {
    let mut checked = 0;
    for n in [16usize, 32, 64] {
        let bound = binding_bound(n).unwrap();
        let alpha_cap = cross_term_bound(n, bound.delta_star).unwrap();
        for strategy in implemented_attacks() {
            let report = evaluate_attack(&strategy, n, 0, 0).unwrap();
            assert!(
                report.p0 + report.p1 <= 1.0 + bound.epsilon + 1e-12,
                "{} at n={n}: p0+p1 = {} exceeds 1+{}",
                strategy.name(),
                report.p0 + report.p1,
                bound.epsilon
            );
            assert!(
                report.alpha <= alpha_cap + 1e-12,
                "{} at n={n}: alpha = {} exceeds {}",
                strategy.name(),
                report.alpha,
                alpha_cap
            );
            checked += 1;
        }
    }
    println!(
        "[PASS] criterion 5: {checked} attack/size pairs dominated by the binding bound, \
         zero violations"
    );
}

#[test]
fn criterion_06_alpha_factorisation() {
    let mut worst: f64 = 0.0;
    for strategy in implemented_attacks() {
        for n in [1usize, 2, 4, 8, 16] {
            let d = alpha_decomposition_check(&strategy, n, AlphaEstimator::Analytic).unwrap();
            let gap = (d.direct - d.factored).abs();
            assert!(
                gap < 1e-9,
                "{} at n={n}: direct {} vs factored {}",
                strategy.name(),
                d.direct,
                d.factored
            );
            worst = worst.max(gap);
        }
    }
    println!(
        "[PASS] criterion 6: joint-event and factorised cross terms agree, \
         worst gap {worst:.3e} < 1e-9"
    );
}

#[test]
fn criterion_07_sampling_tail_bound() {
    // A string of 2n positions carrying exactly ceil(delta n) mismatches
    // (the boundary case maximising the joint event), a uniformly random
    // half sampled without replacement: the probability that the sampled
    // half is clean while the complement carries >= delta n mismatches is
    // bounded by the tail.
    let n = 50usize;
    let samples = 100_000;
    let mut rng = SimRng::from_seed(707);
    for delta in [0.1, 0.2, 0.3] {
        let bound = (-0.5 * n as f64 * delta * delta).exp();
        let mismatches = (delta * n as f64).ceil() as usize;
        let mut hits = 0usize;
        for _ in 0..samples {
            let picked = rng.subset(2 * n, n);
            // Mismatch positions 0..mismatches by symmetry of the uniform
            // partition law.
            let clean = picked.iter().all(|&k| k >= mismatches);
            let complement_errors = mismatches - picked.iter().filter(|&&k| k < mismatches).count();
            if clean && complement_errors >= (delta * n as f64).ceil() as usize {
                hits += 1;
            }
        }
        let freq = hits as f64 / samples as f64;
        let se = (freq * (1.0 - freq) / samples as f64).sqrt().max(1e-6);
        assert!(
            freq <= bound + 3.0 * se,
            "delta={delta}: frequency {freq} exceeds bound {bound}"
        );
    }
    println!(
        "[PASS] criterion 7: sampled joint-event frequency below exp(-n delta^2/2) \
         for delta in {{0.1, 0.2, 0.3}} at n=50, 10^5 samples each"
    );
}

fn random_mixed_state(labels: Vec<QubitId>, rng: &mut SimRng) -> DensityOperator {
    let dim = 1usize << labels.len();
    let pure_count = 1 + rng.below(3);
    let raw: Vec<f64> = (0..pure_count).map(|_| rng.uniform() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    let parts: Vec<(f64, DensityOperator)> = raw
        .iter()
        .map(|w| {
            let mut amps: Vec<relbc::Complex64> = (0..dim)
                .map(|_| relbc::Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5))
                .collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in amps.iter_mut() {
                *a /= norm;
            }
            let state = StateVector::new(amps, labels.clone()).unwrap();
            (w / total, DensityOperator::from_state(&state))
        })
        .collect();
    DensityOperator::mixture(&parts).unwrap()
}

#[test]
fn criterion_08_uncertainty_relation() {
    let mut rng = SimRng::from_seed(808);
    let mut min_margin = f64::INFINITY;
    for _ in 0..1000 {
        let qubits = 1 + rng.below(3);
        let labels: Vec<QubitId> = (0..qubits as u32).map(QubitId).collect();
        let b_count = 1 + rng.below(3);
        let c_count = 1 + rng.below(3);
        let raw: Vec<f64> = (0..b_count * c_count)
            .map(|_| rng.uniform() + 1e-3)
            .collect();
        let total: f64 = raw.iter().sum();
        let mut entries = Vec::new();
        for b in 0..b_count {
            for c in 0..c_count {
                entries.push(CcqEntry {
                    b_label: b.to_string(),
                    c_label: c.to_string(),
                    probability: raw[b * c_count + c] / total,
                    state: random_mixed_state(labels.clone(), &mut rng),
                });
            }
        }
        let state = CcqState::new(entries).unwrap();
        let check =
            check_uncertainty_relation(&state, Basis::Computational, Basis::Hadamard).unwrap();
        assert!(
            check.holds,
            "counterexample: lhs {} < rhs {}",
            check.lhs, check.rhs
        );
        min_margin = min_margin.min(check.lhs - check.rhs);
    }

    // Equality witness: the all-zero register.
    for n in 1..=3u32 {
        let labels: Vec<QubitId> = (0..n).map(QubitId).collect();
        let state = CcqState::unconditioned(DensityOperator::from_state(
            &StateVector::zero_state(labels).unwrap(),
        ));
        let check =
            check_uncertainty_relation(&state, Basis::Computational, Basis::Hadamard).unwrap();
        assert!(
            (check.lhs - check.rhs).abs() < 1e-9,
            "equality case off by {}",
            check.lhs - check.rhs
        );
    }
    println!(
        "[PASS] criterion 8: uncertainty relation holds on 1000 random ccq states \
         (min margin {min_margin:.3e} >= -1e-9) with equality at the all-zero register"
    );
}

#[test]
fn criterion_09_classical_impossibility() {
    let cheat = classical_global_cheat(42).unwrap();
    assert_eq!(cheat.p0 + cheat.p1, 2.0);
    assert!(!cheat.satisfied);
    let optimum = local_command_optimum_preagreed();
    assert_eq!(optimum, 1.0);
    println!(
        "[PASS] criterion 9: global-command classical cheat reaches p0+p1 = 2 exactly; \
         the local-command optimum is exactly 1"
    );
}

#[test]
fn criterion_10_composability_counterexample() {
    for n in 1..=20usize {
        let (per_bit, sum) = composability_counterexample(n).unwrap();
        assert_eq!(per_bit, 0.0, "n={n}");
        assert_eq!(sum, (1u64 << (n - 1)) as f64, "n={n}");
        if n <= 10 {
            let mut brute = 0.0;
            for _ in 0..(1u32 << n) {
                brute += 0.5;
            }
            assert_eq!(sum, brute, "n={n}");
        }
    }
    println!(
        "[PASS] criterion 10: per-bit epsilon 0 with string sum 2^(n-1) exactly for n <= 20, \
         matching enumeration for n <= 10"
    );
}

#[test]
fn criterion_11_byte_identical_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("summary-{run}.csv"));
        let log = dir.path().join(format!("log-{run}.jsonl"));
        let config = ExperimentConfig {
            protocol: ProtocolKind::Kent,
            split: SplitModel::beta(relbc::spacetime::CommandModel::Local),
            n: 4,
            trials: 500,
            seed: 1111,
            attack: None,
            locations: None,
            output: Some(out.clone()),
            format: OutputFormat::Csv,
            transcript_log: Some(log.clone()),
        };
        cmd_simulate(&config).unwrap();
        outputs.push((std::fs::read(&out).unwrap(), std::fs::read(&log).unwrap()));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "summary files differ");
    assert_eq!(outputs[0].1, outputs[1].1, "transcript logs differ");

    // The same through the binary, attack mode, JSON output.
    let mut files = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("attack-{run}.json"));
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_relbc"))
            .args([
                "attack",
                "--attack",
                "intermediate-basis",
                "--theta",
                "0.3",
                "--n",
                "8",
                "--trials",
                "200",
                "--seed",
                "9",
                "--out",
            ])
            .arg(&out)
            .status()
            .unwrap();
        assert!(status.success());
        files.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(files[0], files[1], "attack reports differ across runs");
    println!("[PASS] criterion 11: identical configurations produce byte-identical outputs");
}
