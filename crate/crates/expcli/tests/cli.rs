//! Black-box tests of the `expcli` binary: artifact layout, exit codes,
//! reproducibility, and the output-root environment variable.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use vivarium_core::SimulationConfig;

const BIN: &str = env!("CARGO_BIN_EXE_expcli");

/// Runs the binary with `VIVARIUM_OUT` cleared so ambient configuration
/// cannot leak into the tests.
fn expcli(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("VIVARIUM_OUT")
        .output()
        .expect("expcli spawns")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("expcli exits normally")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// A short, cheap run: small arena, few founders, no PPO update within
/// the horizon.
fn short_run_args<'a>(out: &'a str, seed: &'a str) -> Vec<&'a str> {
    vec![
        "run",
        "--preset",
        "small",
        "--set",
        "population.initial_agents=8",
        "--seed",
        seed,
        "--max-steps",
        "200",
        "--out",
        out,
    ]
}

#[test]
fn run_writes_artifacts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let output = expcli(&short_run_args(out.to_str().unwrap(), "3"));
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));

    for name in ["resolved_config.toml", "events.jsonl", "metrics.json"] {
        assert!(out.join(name).exists(), "missing {name}");
    }
    let resolved =
        SimulationConfig::from_toml(&fs::read_to_string(out.join("resolved_config.toml")).unwrap())
            .unwrap();
    assert_eq!(resolved.seed, 3);
    assert_eq!(resolved.max_steps, 200);
    assert_eq!(resolved.arena.width, 360.0);
    assert_eq!(resolved.population.initial_agents, 8);
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let output = expcli(&short_run_args(out.to_str().unwrap(), "7"));
        assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    }
    assert_eq!(
        fs::read(a.join("events.jsonl")).unwrap(),
        fs::read(b.join("events.jsonl")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("resolved_config.toml")).unwrap(),
        fs::read(b.join("resolved_config.toml")).unwrap()
    );
}

#[test]
fn unknown_override_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let output = expcli(&[
        "run",
        "--preset",
        "small",
        "--set",
        "arena.not_a_knob=1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("not_a_knob"), "{}", stderr(&output));
    assert!(!out.join("events.jsonl").exists(), "no run should start");
}

#[test]
fn out_of_range_value_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let output = expcli(&[
        "run",
        "--preset",
        "small",
        "--set",
        "reproduction.energy_share_ratio=1.5",
        "--out",
        dir.path().join("run").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(
        stderr(&output).contains("energy_share_ratio"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn null_model_preset_cannot_run_a_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let output = expcli(&[
        "run",
        "--preset",
        "random-walk-null",
        "--out",
        dir.path().join("run").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
    assert!(stderr(&output).contains("null-model"), "{}", stderr(&output));
}

#[test]
fn batch_then_analyze_produces_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let batch = dir.path().join("batch");
    let output = expcli(&[
        "batch",
        "--preset",
        "small",
        "--set",
        "population.initial_agents=8",
        "--max-steps",
        "200",
        "--seeds",
        "0..2",
        "--out",
        batch.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    assert!(batch.join("seed_0/events.jsonl").exists());
    assert!(batch.join("seed_1/events.jsonl").exists());
    assert!(batch.join("batch_summary.csv").exists());

    let analysis = dir.path().join("analysis");
    for (kind, file) in [
        ("population-curve", "population_curve.csv"),
        ("metrics-table", "metrics_table.csv"),
    ] {
        let output = expcli(&[
            "analyze",
            "--kind",
            kind,
            "--out",
            analysis.to_str().unwrap(),
            batch.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&output), 0, "{kind}: {}", stderr(&output));
        assert!(analysis.join(file).exists(), "missing {file}");
    }

    let metrics = fs::read_to_string(analysis.join("metrics_table.csv")).unwrap();
    let mut lines = metrics.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed,final_step,extinct,births,deaths,total_eaten,average_lifetime,consumption_per_agent_step"
    );
    let seeds: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(seeds, ["0", "1", "all"]);

    let curve = fs::read_to_string(analysis.join("population_curve.csv")).unwrap();
    assert!(curve.starts_with("seed,step,population\n"));
    // 200-step runs sampled at stride 1000: steps 0 and 200 per seed.
    assert_eq!(curve.lines().count(), 1 + 2 * 2);
}

#[test]
fn analyze_rejects_a_directory_without_runs() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let output = expcli(&[
        "analyze",
        "--kind",
        "metrics-table",
        "--out",
        dir.path().join("analysis").to_str().unwrap(),
        empty.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2);
}

#[test]
fn null_model_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("null");
    let output = expcli(&[
        "null-model",
        "--trials",
        "50",
        "--steps",
        "100",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    let csv = fs::read_to_string(out.join("null_model.csv")).unwrap();
    assert!(csv.starts_with("trial,w_food,w_act\n"));
    assert_eq!(csv.lines().count(), 51);
}

#[test]
fn out_root_env_var_supplies_the_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(BIN)
        .args([
            "null-model",
            "--trials",
            "5",
            "--steps",
            "10",
        ])
        .env("VIVARIUM_OUT", dir.path())
        .output()
        .expect("expcli spawns");
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    assert!(
        dir.path().join("null_model/null_model.csv").exists(),
        "artifacts should land under VIVARIUM_OUT"
    );
    assert!(
        !Path::new("runs").exists(),
        "the ./runs fallback must not be used when VIVARIUM_OUT is set"
    );
}
