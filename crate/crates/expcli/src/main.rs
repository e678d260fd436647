//! `expcli`: run, batch, analyze, and null-model experiments.
//!
//! Output root: `--out` if given, else the `VIVARIUM_OUT` environment
//! variable, else `./runs`. Exit codes: 0 on success, 2 on configuration
//! errors (including command-line misuse), 3 on runtime failures.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use vivarium_expcli::analysis::{discover_runs, export_analysis, AnalysisKind, DEFAULT_SCATTER_K};
use vivarium_expcli::loader::{load_config, Override};
use vivarium_expcli::nullmodel::run_null_model;
use vivarium_expcli::presets::{Preset, NULL_MODEL_STEPS, NULL_MODEL_TRIALS};
use vivarium_expcli::runner::{parse_seeds, run_batch, run_one};
use vivarium_expcli::CliError;

/// Environment variable naming the default output root.
const OUT_ROOT_VAR: &str = "VIVARIUM_OUT";

#[derive(Parser)]
#[command(name = "expcli", version, about = "Experiment runner for the vivarium simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML configuration file layered over the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment preset (baseline, small, large, centered, relocation,
    /// poor, poison, random-walk-null). Default: baseline.
    #[arg(long)]
    preset: Option<String>,
    /// Dotted-path overrides applied last, e.g.
    /// --set arena.foods.1.energy_gain=-0.4
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Simulation horizon override.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Output directory (default: output root / subcommand name).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded simulation run.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// RNG seed (default: the configuration's seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Independent runs over a seed list, with a summary table.
    Batch {
        #[command(flatten)]
        config: ConfigArgs,
        /// Seeds: comma-separated values and half-open ranges, e.g.
        /// "0,1,2" or "0..5".
        #[arg(long)]
        seeds: String,
    },
    /// CSV export over saved run directories.
    Analyze {
        /// One of: reward-scatter-last-k, reward-dynamics, metrics-table,
        /// extinction-table, population-curve.
        #[arg(long)]
        kind: String,
        /// Number of last-born agents in the reward scatter.
        #[arg(long, default_value_t = DEFAULT_SCATTER_K)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run directories (or batch roots holding seed_* subdirectories).
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
    /// Random-walk null model of the reward weights.
    NullModel {
        #[arg(long, default_value_t = NULL_MODEL_TRIALS)]
        trials: u32,
        #[arg(long, default_value_t = NULL_MODEL_STEPS)]
        steps: u32,
        /// Walk three weights instead of two.
        #[arg(long)]
        has_extra: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}

fn out_dir(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| {
        let root = std::env::var_os(OUT_ROOT_VAR)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("runs"));
        root.join(default_name)
    })
}

fn parse_overrides(set: &[String]) -> Result<Vec<Override>, CliError> {
    set.iter()
        .map(|s| Override::from_str(s).map_err(CliError::config))
        .collect()
}

fn parse_preset(name: &Option<String>) -> Result<Option<Preset>, CliError> {
    name.as_deref()
        .map(|n| Preset::from_str(n).map_err(CliError::config))
        .transpose()
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, seed } => {
            let resolved = load_config(
                config.config.as_deref(),
                parse_preset(&config.preset)?,
                &parse_overrides(&config.set)?,
                seed,
                config.max_steps,
            )?;
            let dir = out_dir(config.out, &format!("run_seed{}", resolved.seed));
            let summary = run_one(&resolved, &dir)?;
            println!(
                "seed {}: {} steps, extinct = {}, births = {}, eaten = {} -> {}",
                summary.seed,
                summary.final_step,
                summary.extinct,
                summary.births,
                summary.total_eaten,
                dir.display()
            );
            Ok(())
        }
        Command::Batch { config, seeds } => {
            let resolved = load_config(
                config.config.as_deref(),
                parse_preset(&config.preset)?,
                &parse_overrides(&config.set)?,
                None,
                config.max_steps,
            )?;
            let seeds = parse_seeds(&seeds)?;
            let root = out_dir(config.out, "batch");
            let summaries = run_batch(&resolved, &seeds, &root)?;
            let extinct = summaries.iter().filter(|s| s.extinct).count();
            let failed = summaries.iter().filter(|s| s.error.is_some()).count();
            for summary in &summaries {
                match &summary.error {
                    Some(error) => println!("seed {}: FAILED: {error}", summary.seed),
                    None => println!(
                        "seed {}: {} steps, extinct = {}",
                        summary.seed, summary.final_step, summary.extinct
                    ),
                }
            }
            println!(
                "{} runs, {extinct} extinct, {failed} failed -> {}",
                summaries.len(),
                root.display()
            );
            if failed > 0 {
                return Err(CliError::runtime(format!("{failed} of {} runs failed", summaries.len())));
            }
            Ok(())
        }
        Command::Analyze { kind, k, out, runs } => {
            let kind = AnalysisKind::from_str(&kind).map_err(CliError::config)?;
            let logs = discover_runs(&runs)?;
            let dir = out_dir(out, "analysis");
            let export = export_analysis(kind, k, &logs, &dir)?;
            println!(
                "{}: {} rows over {} runs -> {}",
                kind.name(),
                export.rows,
                logs.len(),
                export.path.display()
            );
            Ok(())
        }
        Command::NullModel {
            trials,
            steps,
            has_extra,
            seed,
            out,
        } => {
            let dir = out_dir(out, "null_model");
            let report = run_null_model(trials, steps, has_extra, seed, &dir)?;
            println!(
                "{} trials: {:.1}% of endpoints at the clip bounds, positive fractions ({:.3}, {:.3}) -> {}",
                report.trials,
                100.0 * report.bound_fraction,
                report.positive_fraction[0],
                report.positive_fraction[1],
                report.path.display()
            );
            Ok(())
        }
    }
}
