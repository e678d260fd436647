//! CSV exports over saved run directories. Every export replays the event
//! logs (`events.jsonl`) rather than trusting `metrics.json`, so the CSVs
//! are reproducible from the logs alone; `resolved_config.toml` supplies
//! the seed and the experiment's food kinds.
//!
//! Schemas (one header line, comma-separated, floats in shortest
//! round-trip notation):
//!
//! - `reward_scatter_last_k.csv`: `seed,agent_id,w_food,w_act[,w_poor|w_poison]`
//!   — the last `k` born agents of each run (all of them, with a warning,
//!   when a run has fewer than `k` births).
//! - `reward_dynamics.csv`: `seed,step,population,mean_w_food,mean_w_act[,...]`
//!   — strided per-seed mean weights over living agents, plus pooled rows
//!   (`seed` column `pooled`) weighted by population.
//! - `metrics_table.csv`: per-seed lifetime/consumption plus an `all` row
//!   aggregated over runs.
//! - `extinction_table.csv`: per-seed extinction flags plus an `all` row
//!   carrying the extinction rate.
//! - `population_curve.csv`: `seed,step,population` per-seed series.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use vivarium_core::arena::FoodKind;
use vivarium_core::engine::{
    compute_metrics, read_events, EventKind, EventRecord, Metrics, DEFAULT_METRIC_STRIDE,
};
use vivarium_core::SimulationConfig;

use crate::loader::read_resolved_config;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalysisKind {
    RewardScatterLastK,
    RewardDynamics,
    MetricsTable,
    ExtinctionTable,
    PopulationCurve,
}

pub const ALL_KINDS: [AnalysisKind; 5] = [
    AnalysisKind::RewardScatterLastK,
    AnalysisKind::RewardDynamics,
    AnalysisKind::MetricsTable,
    AnalysisKind::ExtinctionTable,
    AnalysisKind::PopulationCurve,
];

impl AnalysisKind {
    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::RewardScatterLastK => "reward-scatter-last-k",
            AnalysisKind::RewardDynamics => "reward-dynamics",
            AnalysisKind::MetricsTable => "metrics-table",
            AnalysisKind::ExtinctionTable => "extinction-table",
            AnalysisKind::PopulationCurve => "population-curve",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            AnalysisKind::RewardScatterLastK => "reward_scatter_last_k.csv",
            AnalysisKind::RewardDynamics => "reward_dynamics.csv",
            AnalysisKind::MetricsTable => "metrics_table.csv",
            AnalysisKind::ExtinctionTable => "extinction_table.csv",
            AnalysisKind::PopulationCurve => "population_curve.csv",
        }
    }
}

impl FromStr for AnalysisKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_KINDS.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ALL_KINDS.iter().map(|k| k.name()).collect();
            format!("unknown analysis kind {s:?}; expected one of {}", names.join(", "))
        })
    }
}

/// Default `k` of the last-k reward scatter.
pub const DEFAULT_SCATTER_K: usize = 5000;

/// One loaded run directory.
pub struct RunLog {
    pub seed: u64,
    pub config: SimulationConfig,
    pub events: Vec<EventRecord>,
    pub final_step: u64,
}

impl RunLog {
    /// The experiment's second food kind, if any; names the extra weight
    /// column.
    fn extra_kind(&self) -> Option<FoodKind> {
        self.config.arena.foods.get(1).map(|f| f.kind)
    }

    fn metrics(&self, stride: u64) -> Metrics {
        compute_metrics(&self.events, self.final_step, stride)
    }
}

/// A finished export: where it was written, how many data rows (header
/// excluded) it holds, and any warnings (also printed to stderr).
#[derive(Debug)]
pub struct Export {
    pub path: PathBuf,
    pub rows: usize,
    pub warnings: Vec<String>,
}

/// Loads a run directory written by [`crate::runner::run_one`]. The final
/// step is the last step covered by the log: the max event step, or the
/// configured horizon when the run outlived its last event.
pub fn load_run(dir: &Path) -> Result<RunLog, CliError> {
    let config = read_resolved_config(dir)?;
    let events_path = dir.join("events.jsonl");
    let file = File::open(&events_path)
        .map_err(|e| CliError::config(format!("cannot open {}: {e}", events_path.display())))?;
    let events = read_events(BufReader::new(file))
        .map_err(|e| CliError::runtime(format!("{}: {e}", events_path.display())))?;

    // metrics.json records the true final step (a run can end without a
    // final-step event); fall back to the log for hand-built directories.
    let metrics_path = dir.join("metrics.json");
    let final_step = match fs::read_to_string(&metrics_path) {
        Ok(text) => {
            let metrics: Metrics = serde_json::from_str(&text)
                .map_err(|e| CliError::runtime(format!("{}: {e}", metrics_path.display())))?;
            metrics.final_step
        }
        Err(_) => events.iter().map(|e| e.step).max().unwrap_or(0),
    };
    Ok(RunLog {
        seed: config.seed,
        config,
        events,
        final_step,
    })
}

/// Expands `paths` into run logs: a path containing `events.jsonl` is one
/// run; otherwise its `seed_*` subdirectories are loaded in seed order.
pub fn discover_runs(paths: &[PathBuf]) -> Result<Vec<RunLog>, CliError> {
    let mut runs = Vec::new();
    for path in paths {
        if path.join("events.jsonl").exists() {
            runs.push(load_run(path)?);
            continue;
        }
        let entries = fs::read_dir(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let mut subdirs: Vec<PathBuf> = entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.join("events.jsonl").exists())
            .collect();
        if subdirs.is_empty() {
            return Err(CliError::config(format!(
                "{} holds no run (no events.jsonl here or in subdirectories)",
                path.display()
            )));
        }
        subdirs.sort();
        let mut loaded: Vec<RunLog> = subdirs.iter().map(|p| load_run(p)).collect::<Result<_, _>>()?;
        loaded.sort_by_key(|r| r.seed);
        runs.append(&mut loaded);
    }
    if runs.is_empty() {
        return Err(CliError::config("no runs given"));
    }
    Ok(runs)
}

/// Runs one export and writes `<out_dir>/<kind file name>`.
pub fn export_analysis(
    kind: AnalysisKind,
    k: usize,
    runs: &[RunLog],
    out_dir: &Path,
) -> Result<Export, CliError> {
    if k == 0 {
        return Err(CliError::config("k must be >= 1"));
    }
    let extra = extra_column(runs)?;
    let (csv, rows, warnings) = match kind {
        AnalysisKind::RewardScatterLastK => scatter_csv(runs, k, extra),
        AnalysisKind::RewardDynamics => dynamics_csv(runs, extra),
        AnalysisKind::MetricsTable => metrics_csv(runs, extra),
        AnalysisKind::ExtinctionTable => extinction_csv(runs),
        AnalysisKind::PopulationCurve => population_csv(runs),
    };
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join(kind.file_name());
    fs::write(&path, csv)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
    for warning in &warnings {
        eprintln!("warning: {warning}");
    }
    Ok(Export { path, rows, warnings })
}

/// The extra weight column label shared by all runs: `None` for
/// single-food experiments. Mixing different second kinds in one export
/// would make the column meaningless, so it is rejected.
fn extra_column(runs: &[RunLog]) -> Result<Option<&'static str>, CliError> {
    let mut column: Option<Option<&'static str>> = None;
    for run in runs {
        let label = run.extra_kind().map(|kind| match kind {
            FoodKind::Poor => "w_poor",
            FoodKind::Poison => "w_poison",
            FoodKind::Normal => unreachable!("validated: second kind is never normal"),
        });
        match (column, label) {
            (None, _) => column = Some(label),
            (Some(Some(a)), Some(b)) if a != b => {
                return Err(CliError::config(format!(
                    "runs mix extra food kinds ({a} vs {b}); analyze them separately"
                )))
            }
            (Some(Some(_)), None) | (Some(None), Some(_)) => {
                return Err(CliError::config(
                    "runs mix single-food and two-food experiments; analyze them separately"
                        .to_string(),
                ))
            }
            _ => {}
        }
    }
    Ok(column.flatten())
}

fn scatter_csv(runs: &[RunLog], k: usize, extra: Option<&str>) -> (String, usize, Vec<String>) {
    let mut csv = match extra {
        Some(name) => format!("seed,agent_id,w_food,w_act,{name}\n"),
        None => "seed,agent_id,w_food,w_act\n".to_string(),
    };
    let mut rows = 0;
    let mut warnings = Vec::new();
    for run in runs {
        let births: Vec<(u64, &vivarium_core::reward::RewardParams)> = run
            .events
            .iter()
            .filter_map(|e| match &e.kind {
                EventKind::Birth { agent, weights, .. } => Some((*agent, weights)),
                _ => None,
            })
            .collect();
        if births.len() < k {
            warnings.push(format!(
                "seed {}: only {} agents were born, fewer than k = {k}; exporting all",
                run.seed,
                births.len()
            ));
        }
        let start = births.len().saturating_sub(k);
        for (agent, weights) in &births[start..] {
            match (extra, weights.w_extra) {
                (Some(_), Some(w)) => {
                    let _ = writeln!(
                        csv,
                        "{},{agent},{},{},{w}",
                        run.seed, weights.w_food, weights.w_act
                    );
                }
                (None, None) => {
                    let _ = writeln!(csv, "{},{agent},{},{}", run.seed, weights.w_food, weights.w_act);
                }
                // The founders of a two-food run always carry the weight,
                // so a mismatch means a corrupted log.
                _ => unreachable!("agent weight arity disagrees with the food set"),
            }
            rows += 1;
        }
    }
    (csv, rows, warnings)
}

fn dynamics_csv(runs: &[RunLog], extra: Option<&str>) -> (String, usize, Vec<String>) {
    let mut csv = match extra {
        Some(name) => format!("seed,step,population,mean_w_food,mean_w_act,mean_{name}\n"),
        None => "seed,step,population,mean_w_food,mean_w_act\n".to_string(),
    };
    let mut rows = 0;

    // (step -> (population sum, population-weighted weight sums)) across
    // seeds; every agent carries the extra weight whenever the experiment
    // has a second food, so population weighting pools it exactly.
    let mut pooled: BTreeMap<u64, (u64, f64, f64, f64)> = BTreeMap::new();
    for run in runs {
        let metrics = run.metrics(DEFAULT_METRIC_STRIDE);
        for point in &metrics.weight_series {
            let n = f64::from(point.population);
            match (extra, point.mean_w_extra) {
                (Some(_), Some(w)) => {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{w}",
                        run.seed, point.step, point.population, point.mean_w_food, point.mean_w_act
                    );
                }
                (None, None) => {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{}",
                        run.seed, point.step, point.population, point.mean_w_food, point.mean_w_act
                    );
                }
                _ => unreachable!("agent weight arity disagrees with the food set"),
            }
            rows += 1;
            let entry = pooled.entry(point.step).or_insert((0, 0.0, 0.0, 0.0));
            entry.0 += u64::from(point.population);
            entry.1 += n * point.mean_w_food;
            entry.2 += n * point.mean_w_act;
            entry.3 += n * point.mean_w_extra.unwrap_or(0.0);
        }
    }
    if runs.len() > 1 {
        for (step, (population, food, act, w_extra)) in pooled {
            let n = population as f64;
            match extra {
                Some(_) => {
                    let _ = writeln!(
                        csv,
                        "pooled,{step},{population},{},{},{}",
                        food / n,
                        act / n,
                        w_extra / n
                    );
                }
                None => {
                    let _ = writeln!(csv, "pooled,{step},{population},{},{}", food / n, act / n);
                }
            }
            rows += 1;
        }
    }
    (csv, rows, Vec::new())
}

fn metrics_csv(runs: &[RunLog], extra: Option<&str>) -> (String, usize, Vec<String>) {
    let mut csv = match extra {
        Some(name) => format!(
            "seed,final_step,extinct,births,deaths,total_eaten,eaten_normal,eaten_{},average_lifetime,consumption_per_agent_step\n",
            &name[2..]
        ),
        None => "seed,final_step,extinct,births,deaths,total_eaten,average_lifetime,consumption_per_agent_step\n"
            .to_string(),
    };
    let mut rows = 0;
    let mut lifetime_sum = 0.0;
    let mut total_deaths = 0u64;
    let mut total_eaten = 0u64;
    let mut total_agent_steps = 0u64;
    let mut totals = (0u64, 0u64, 0u64, 0u64, 0u64); // births, deaths, eaten, normal, extra

    for run in runs {
        let m = run.metrics(DEFAULT_METRIC_STRIDE);
        let eaten_normal = m.eaten_by_population.first().copied().unwrap_or(0);
        let eaten_extra = m.eaten_by_population.get(1).copied().unwrap_or(0);
        let lifetime = m.average_lifetime.map(|v| v.to_string()).unwrap_or_default();
        let consumption = m
            .consumption_per_agent_step
            .map(|v| v.to_string())
            .unwrap_or_default();
        match extra {
            Some(_) => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{eaten_normal},{eaten_extra},{lifetime},{consumption}",
                    run.seed, m.final_step, m.extinct, m.births, m.deaths, m.total_eaten
                );
            }
            None => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{lifetime},{consumption}",
                    run.seed, m.final_step, m.extinct, m.births, m.deaths, m.total_eaten
                );
            }
        }
        rows += 1;
        lifetime_sum += m.average_lifetime.unwrap_or(0.0) * m.deaths as f64;
        total_deaths += m.deaths;
        total_eaten += m.total_eaten;
        total_agent_steps += m.total_agent_steps;
        totals.0 += m.births;
        totals.1 += m.deaths;
        totals.2 += m.total_eaten;
        totals.3 += eaten_normal;
        totals.4 += eaten_extra;
    }

    let extinct_count = runs
        .iter()
        .filter(|r| r.metrics(DEFAULT_METRIC_STRIDE).extinct)
        .count();
    let max_step = runs.iter().map(|r| r.final_step).max().unwrap_or(0);
    let lifetime = if total_deaths > 0 {
        (lifetime_sum / total_deaths as f64).to_string()
    } else {
        String::new()
    };
    let consumption = if total_agent_steps > 0 {
        (total_eaten as f64 / total_agent_steps as f64).to_string()
    } else {
        String::new()
    };
    match extra {
        Some(_) => {
            let _ = writeln!(
                csv,
                "all,{max_step},{},{},{},{},{},{},{lifetime},{consumption}",
                extinct_count == runs.len(),
                totals.0,
                totals.1,
                totals.2,
                totals.3,
                totals.4
            );
        }
        None => {
            let _ = writeln!(
                csv,
                "all,{max_step},{},{},{},{},{lifetime},{consumption}",
                extinct_count == runs.len(),
                totals.0,
                totals.1,
                totals.2
            );
        }
    }
    rows += 1;
    (csv, rows, Vec::new())
}

fn extinction_csv(runs: &[RunLog]) -> (String, usize, Vec<String>) {
    let mut csv = String::from("seed,final_step,extinct\n");
    let mut extinct_count = 0usize;
    for run in runs {
        let extinct = run.metrics(DEFAULT_METRIC_STRIDE).extinct;
        extinct_count += usize::from(extinct);
        let _ = writeln!(csv, "{},{},{}", run.seed, run.final_step, u8::from(extinct));
    }
    // Aggregate row: the extinct column carries the rate over all runs.
    let _ = writeln!(csv, "all,,{}", extinct_count as f64 / runs.len() as f64);
    (csv, runs.len() + 1, Vec::new())
}

fn population_csv(runs: &[RunLog]) -> (String, usize, Vec<String>) {
    let mut csv = String::from("seed,step,population\n");
    let mut rows = 0;
    for run in runs {
        let metrics = run.metrics(DEFAULT_METRIC_STRIDE);
        for (step, population) in &metrics.population_series {
            let _ = writeln!(csv, "{},{step},{population}", run.seed);
            rows += 1;
        }
    }
    (csv, rows, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::{run_batch, run_one};
    use vivarium_core::arena::{FoodKindConfig, SpawnDistribution};

    fn tiny_config(seed: u64) -> SimulationConfig {
        let mut config = SimulationConfig::default();
        config.seed = seed;
        config.max_steps = 60;
        config.checkpoint_interval = 0;
        config.population.initial_agents = 5;
        config.rl.hidden_dim = 8;
        config.rl.hyper.rollout_steps = 16;
        config.rl.hyper.minibatch = 8;
        config.rl.actor_gain = 1.0;
        config
    }

    fn poison_config(seed: u64) -> SimulationConfig {
        let mut config = tiny_config(seed);
        config.arena.foods.push(FoodKindConfig {
            kind: FoodKind::Poison,
            energy_gain: -0.6,
            n_max: 40,
            growth_rate: 0.005,
            spawn: SpawnDistribution::Uniform,
        });
        config
    }

    fn lines(path: &Path) -> Vec<String> {
        fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn scatter_matches_birth_cardinality_and_warns() {
        let dir = tempfile::tempdir().unwrap();
        run_one(&tiny_config(1), dir.path()).unwrap();
        let runs = discover_runs(&[dir.path().to_path_buf()]).unwrap();
        let births = runs[0]
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Birth { .. }))
            .count();

        let out = tempfile::tempdir().unwrap();
        let export =
            export_analysis(AnalysisKind::RewardScatterLastK, 5000, &runs, out.path()).unwrap();
        assert_eq!(export.rows, births, "one row per birth when births < k");
        assert_eq!(export.warnings.len(), 1);
        let all = lines(&export.path);
        assert_eq!(all[0], "seed,agent_id,w_food,w_act");
        assert_eq!(all.len(), 1 + births);

        let export =
            export_analysis(AnalysisKind::RewardScatterLastK, 2, &runs, out.path()).unwrap();
        assert_eq!(export.rows, 2, "k truncates to the last k births");
        assert!(export.warnings.is_empty());
    }

    #[test]
    fn poison_runs_add_the_extra_column() {
        let dir = tempfile::tempdir().unwrap();
        run_one(&poison_config(2), dir.path()).unwrap();
        let runs = discover_runs(&[dir.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let export =
            export_analysis(AnalysisKind::RewardScatterLastK, 5000, &runs, out.path()).unwrap();
        assert_eq!(lines(&export.path)[0], "seed,agent_id,w_food,w_act,w_poison");
        let export = export_analysis(AnalysisKind::RewardDynamics, 1, &runs, out.path()).unwrap();
        assert_eq!(
            lines(&export.path)[0],
            "seed,step,population,mean_w_food,mean_w_act,mean_w_poison"
        );
    }

    #[test]
    fn mixed_experiments_are_rejected() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        run_one(&tiny_config(1), dir_a.path()).unwrap();
        run_one(&poison_config(1), dir_b.path()).unwrap();
        let runs =
            discover_runs(&[dir_a.path().to_path_buf(), dir_b.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let err = export_analysis(AnalysisKind::RewardDynamics, 1, &runs, out.path()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn dynamics_has_per_seed_plus_pooled_rows() {
        let root = tempfile::tempdir().unwrap();
        run_batch(&tiny_config(0), &[0, 1], root.path()).unwrap();
        let runs = discover_runs(&[root.path().to_path_buf()]).unwrap();
        assert_eq!(runs.len(), 2, "batch root expands to its seed runs");

        let out = tempfile::tempdir().unwrap();
        let export = export_analysis(AnalysisKind::RewardDynamics, 1, &runs, out.path()).unwrap();
        let all = lines(&export.path);
        let per_seed: usize = runs
            .iter()
            .map(|r| r.metrics(DEFAULT_METRIC_STRIDE).weight_series.len())
            .sum();
        let pooled = all.iter().filter(|l| l.starts_with("pooled,")).count();
        assert_eq!(export.rows, per_seed + pooled);
        assert_eq!(all.len(), 1 + export.rows);
        assert!(pooled > 0, "two seeds produce pooled rows");
    }

    #[test]
    fn pooled_dynamics_is_population_weighted() {
        let root = tempfile::tempdir().unwrap();
        run_batch(&tiny_config(0), &[0, 1], root.path()).unwrap();
        let runs = discover_runs(&[root.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let export = export_analysis(AnalysisKind::RewardDynamics, 1, &runs, out.path()).unwrap();

        // Re-derive the step-0 pooled row from the two step-0 seed rows.
        let all = lines(&export.path);
        let seed_rows: Vec<Vec<f64>> = all
            .iter()
            .filter(|l| !l.starts_with("seed") && !l.starts_with("pooled"))
            .map(|l| l.split(',').skip(1).map(|v| v.parse().unwrap()).collect())
            .filter(|row: &Vec<f64>| row[0] == 0.0)
            .collect();
        let pooled_row: Vec<f64> = all
            .iter()
            .find(|l| l.starts_with("pooled,0,"))
            .expect("pooled step-0 row")
            .split(',')
            .skip(1)
            .map(|v| v.parse().unwrap())
            .collect();
        let population: f64 = seed_rows.iter().map(|r| r[1]).sum();
        let mean_food: f64 =
            seed_rows.iter().map(|r| r[1] * r[2]).sum::<f64>() / population;
        assert_eq!(pooled_row[1], population);
        assert!((pooled_row[2] - mean_food).abs() < 1e-12);
    }

    #[test]
    fn extinction_table_counts_runs() {
        let root = tempfile::tempdir().unwrap();
        run_batch(&tiny_config(0), &[0, 1, 2], root.path()).unwrap();
        let runs = discover_runs(&[root.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let export =
            export_analysis(AnalysisKind::ExtinctionTable, 1, &runs, out.path()).unwrap();
        assert_eq!(export.rows, 4, "three seeds plus the aggregate row");
        let all = lines(&export.path);
        assert!(all.last().unwrap().starts_with("all,,"));
    }

    #[test]
    fn population_curve_matches_series_cardinality() {
        let dir = tempfile::tempdir().unwrap();
        run_one(&tiny_config(4), dir.path()).unwrap();
        let runs = discover_runs(&[dir.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let export =
            export_analysis(AnalysisKind::PopulationCurve, 1, &runs, out.path()).unwrap();
        let series = runs[0].metrics(DEFAULT_METRIC_STRIDE).population_series.len();
        assert_eq!(export.rows, series);
    }

    #[test]
    fn metrics_table_has_seed_rows_plus_aggregate() {
        let root = tempfile::tempdir().unwrap();
        run_batch(&tiny_config(0), &[0, 1], root.path()).unwrap();
        let runs = discover_runs(&[root.path().to_path_buf()]).unwrap();
        let out = tempfile::tempdir().unwrap();
        let export = export_analysis(AnalysisKind::MetricsTable, 1, &runs, out.path()).unwrap();
        assert_eq!(export.rows, 3);
        let all = lines(&export.path);
        assert!(all.last().unwrap().starts_with("all,"));
    }

    #[test]
    fn analysis_kind_names_round_trip() {
        for kind in ALL_KINDS {
            assert_eq!(kind.name().parse::<AnalysisKind>().unwrap(), kind);
        }
        assert!("reward-scatter".parse::<AnalysisKind>().is_err());
    }
}
