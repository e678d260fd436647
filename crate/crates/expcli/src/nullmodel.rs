//! The mutation random-walk null model: reward weights drifting under the
//! birth-time Cauchy mutation alone, with no selection. Endpoints of many
//! such walks show where drift pushes weights (pile-up at the clip
//! bounds), the reference against which evolved weight distributions are
//! read.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vivarium_core::lifecycle::{random_walk_characterization, MutationParams};

use crate::CliError;

/// Endpoint summary of one null-model export.
pub struct NullModelReport {
    pub path: PathBuf,
    pub trials: u32,
    /// Fraction of endpoints with at least one weight exactly at a clip
    /// bound: the points lying on the clip square's edge in a scatter of
    /// the endpoints. (Any single weight carries an atom of only a few
    /// percent at each bound, so the per-weight fraction is the wrong
    /// statistic for "how much of the cloud is visibly clipped".)
    pub bound_fraction: f64,
    /// Fraction of positive weights per column (w_food, w_act).
    pub positive_fraction: [f64; 2],
}

/// Runs `trials` independent walks of `steps` mutations from zero weights
/// and writes `null_model.csv` (`trial,w_food,w_act[,w_extra]`) into
/// `out_dir`.
pub fn run_null_model(
    trials: u32,
    steps: u32,
    has_extra: bool,
    seed: u64,
    out_dir: &Path,
) -> Result<NullModelReport, CliError> {
    if trials == 0 {
        return Err(CliError::config("null model needs at least one trial"));
    }
    let params = MutationParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let endpoints = random_walk_characterization(steps, trials, has_extra, &mut rng, &params);

    let mut csv = if has_extra {
        String::from("trial,w_food,w_act,w_extra\n")
    } else {
        String::from("trial,w_food,w_act\n")
    };
    let mut at_bound = 0u64;
    let mut positive = [0u64; 2];
    for (trial, weights) in endpoints.iter().enumerate() {
        let mut row = vec![weights.w_food, weights.w_act];
        if let Some(w) = weights.w_extra {
            row.push(w);
        }
        if row
            .iter()
            .any(|w| *w == params.clip_min || *w == params.clip_max)
        {
            at_bound += 1;
        }
        for (i, w) in row.iter().take(2).enumerate() {
            if *w > 0.0 {
                positive[i] += 1;
            }
        }
        let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
        let _ = writeln!(csv, "{trial},{}", cells.join(","));
    }

    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join("null_model.csv");
    fs::write(&path, csv)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;

    Ok(NullModelReport {
        path,
        trials,
        bound_fraction: at_bound as f64 / f64::from(trials),
        positive_fraction: [
            positive[0] as f64 / f64::from(trials),
            positive[1] as f64 / f64::from(trials),
        ],
    })
}
