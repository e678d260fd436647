//! Seeded runs and batches. Every run gets its own directory holding the
//! resolved configuration, the full event log as JSON lines, derived
//! metrics, and periodic checkpoints; a batch adds a summary table across
//! seeds. Reruns with the same configuration overwrite byte-identically.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vivarium_core::engine::{self, save_checkpoint};
use vivarium_core::SimulationConfig;

use crate::loader::write_resolved_config;
use crate::CliError;

/// One row of a batch summary; also the `run` subcommand's result.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub directory: PathBuf,
    pub final_step: u64,
    pub extinct: bool,
    pub births: u64,
    pub deaths: u64,
    pub total_eaten: u64,
    pub average_lifetime: Option<f64>,
    pub consumption_per_agent_step: Option<f64>,
    /// Set when the run failed; the other fields then hold zeros.
    pub error: Option<String>,
}

impl RunSummary {
    fn failed(seed: u64, directory: PathBuf, error: String) -> Self {
        RunSummary {
            seed,
            directory,
            final_step: 0,
            extinct: false,
            births: 0,
            deaths: 0,
            total_eaten: 0,
            average_lifetime: None,
            consumption_per_agent_step: None,
            error: Some(error),
        }
    }
}

/// Runs `config` to completion and writes all artifacts into `dir`:
/// `resolved_config.toml`, `events.jsonl`, `metrics.json`, and
/// `checkpoint_<step>.json` every `checkpoint_interval` steps.
pub fn run_one(config: &SimulationConfig, dir: &Path) -> Result<RunSummary, CliError> {
    write_resolved_config(config, dir)?;

    let interval = config.checkpoint_interval;
    let mut checkpoint_error: Option<String> = None;
    let output = engine::run_with(config, |simulation, _| {
        if interval > 0 && simulation.current_step() % interval == 0 && checkpoint_error.is_none() {
            let path = dir.join(format!("checkpoint_{:09}.json", simulation.current_step()));
            let result = File::create(&path)
                .map_err(|e| format!("cannot create {}: {e}", path.display()))
                .and_then(|file| {
                    save_checkpoint(simulation, BufWriter::new(file)).map_err(|e| e.to_string())
                });
            if let Err(error) = result {
                checkpoint_error = Some(error);
            }
        }
    })?;
    if let Some(error) = checkpoint_error {
        return Err(CliError::runtime(error));
    }

    let events_path = dir.join("events.jsonl");
    let file = File::create(&events_path)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", events_path.display())))?;
    let mut writer = BufWriter::new(file);
    engine::write_events(&mut writer, &output.full_log())
        .map_err(|e| CliError::runtime(e.to_string()))?;
    writer
        .flush()
        .map_err(|e| CliError::runtime(e.to_string()))?;

    let metrics_path = dir.join("metrics.json");
    let text = serde_json::to_string_pretty(&output.metrics)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    fs::write(&metrics_path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", metrics_path.display())))?;

    let m = &output.metrics;
    Ok(RunSummary {
        seed: config.seed,
        directory: dir.to_path_buf(),
        final_step: m.final_step,
        extinct: m.extinct,
        births: m.births,
        deaths: m.deaths,
        total_eaten: m.total_eaten,
        average_lifetime: m.average_lifetime,
        consumption_per_agent_step: m.consumption_per_agent_step,
        error: None,
    })
}

/// Runs one simulation per seed under `root/seed_<seed>/`. A failing seed
/// is reported in its summary row and does not stop the batch. Writes
/// `batch_summary.json` and `batch_summary.csv` at the root.
pub fn run_batch(
    base: &SimulationConfig,
    seeds: &[u64],
    root: &Path,
) -> Result<Vec<RunSummary>, CliError> {
    if seeds.is_empty() {
        return Err(CliError::config("batch needs at least one seed"));
    }
    fs::create_dir_all(root)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", root.display())))?;

    let mut summaries = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut config = base.clone();
        config.seed = seed;
        let dir = root.join(format!("seed_{seed}"));
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| run_one(&config, &dir)));
        let summary = match outcome {
            Ok(Ok(summary)) => summary,
            Ok(Err(error)) => RunSummary::failed(seed, dir, error.to_string()),
            Err(panic) => {
                let message = panic
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| panic.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "run panicked".to_string());
                RunSummary::failed(seed, dir, message)
            }
        };
        summaries.push(summary);
    }

    let json_path = root.join("batch_summary.json");
    let text = serde_json::to_string_pretty(&summaries)
        .map_err(|e| CliError::runtime(e.to_string()))?;
    fs::write(&json_path, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", json_path.display())))?;

    let csv_path = root.join("batch_summary.csv");
    let mut csv = String::from(
        "seed,final_step,extinct,births,deaths,total_eaten,average_lifetime,consumption_per_agent_step,error\n",
    );
    for s in &summaries {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.seed,
            s.final_step,
            s.extinct,
            s.births,
            s.deaths,
            s.total_eaten,
            s.average_lifetime.map(|v| v.to_string()).unwrap_or_default(),
            s.consumption_per_agent_step
                .map(|v| v.to_string())
                .unwrap_or_default(),
            s.error.as_deref().unwrap_or("")
        ));
    }
    fs::write(&csv_path, csv)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", csv_path.display())))?;

    Ok(summaries)
}

/// `--seeds` syntax: a comma-separated list (`0,3,17`) and/or half-open
/// ranges (`0..5`).
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let mut seeds = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if let Some((start, end)) = part.split_once("..") {
            let start: u64 = start
                .trim()
                .parse()
                .map_err(|_| CliError::config(format!("bad seed range start {start:?}")))?;
            let end: u64 = end
                .trim()
                .parse()
                .map_err(|_| CliError::config(format!("bad seed range end {end:?}")))?;
            if end <= start {
                return Err(CliError::config(format!("empty seed range {part:?}")));
            }
            seeds.extend(start..end);
        } else {
            seeds.push(
                part.parse()
                    .map_err(|_| CliError::config(format!("bad seed {part:?}")))?,
            );
        }
    }
    if seeds.is_empty() {
        return Err(CliError::config("no seeds given"));
    }
    Ok(seeds)
}
