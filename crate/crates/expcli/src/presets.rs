//! Named experiment presets: each is a set of overrides onto the default
//! simulation configuration, one per published experiment variant. The
//! constants here are tested byte-for-byte against the checked-in
//! reference table `presets_reference.toml`, which is the single source of
//! truth for per-experiment parameters.

use std::fmt;
use std::str::FromStr;

use vivarium_core::arena::{FoodKind, FoodKindConfig, SpawnDistribution};
use vivarium_core::SimulationConfig;

/// Std of the centered and relocating food Gaussians as a fraction of
/// arena width.
pub const FOOD_GAUSSIAN_STD_FRACTION: f64 = 0.1;
/// Foods eaten between relocations of the food-center corner.
pub const RELOCATION_PERIOD: u64 = 1000;
/// Corner inset of the relocating food center, as a fraction of each
/// arena dimension.
pub const RELOCATION_MARGIN_FRACTION: f64 = 0.2;

/// Trial count of the random-walk null model.
pub const NULL_MODEL_TRIALS: u32 = 1000;
/// Mutation steps per trial of the random-walk null model.
pub const NULL_MODEL_STEPS: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Baseline,
    Small,
    Large,
    Centered,
    Relocation,
    Poor,
    Poison,
    /// Mutation-drift null model; not a simulation preset. Selecting it
    /// for `run`/`batch` is a configuration error.
    RandomWalkNull,
}

pub const ALL_PRESETS: [Preset; 8] = [
    Preset::Baseline,
    Preset::Small,
    Preset::Large,
    Preset::Centered,
    Preset::Relocation,
    Preset::Poor,
    Preset::Poison,
    Preset::RandomWalkNull,
];

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Baseline => "baseline",
            Preset::Small => "small",
            Preset::Large => "large",
            Preset::Centered => "centered",
            Preset::Relocation => "relocation",
            Preset::Poor => "poor",
            Preset::Poison => "poison",
            Preset::RandomWalkNull => "random-walk-null",
        }
    }

    /// The fully-resolved simulation configuration of this preset
    /// (default seed and horizon; callers override those separately).
    /// `None` for the null model, which does not run a simulation.
    pub fn config(self) -> Option<SimulationConfig> {
        let mut config = SimulationConfig::default();
        match self {
            Preset::Baseline => {}
            Preset::Small => {
                config.arena.width = 360.0;
                config.arena.height = 360.0;
            }
            Preset::Large => {
                config.arena.width = 480.0;
                config.arena.height = 480.0;
            }
            Preset::Centered => {
                config.arena.foods[0].spawn = SpawnDistribution::CenteredGaussian {
                    std_fraction: FOOD_GAUSSIAN_STD_FRACTION,
                };
            }
            Preset::Relocation => {
                config.arena.foods[0].spawn = SpawnDistribution::RelocatingGaussian {
                    std_fraction: FOOD_GAUSSIAN_STD_FRACTION,
                    period: RELOCATION_PERIOD,
                    margin_fraction: RELOCATION_MARGIN_FRACTION,
                };
            }
            Preset::Poor => {
                config.arena.foods[0].n_max = 90;
                config.arena.foods[0].growth_rate = 0.015;
                config.arena.foods.push(FoodKindConfig {
                    kind: FoodKind::Poor,
                    energy_gain: 0.2,
                    n_max: 30,
                    growth_rate: 0.005,
                    spawn: SpawnDistribution::Uniform,
                });
            }
            Preset::Poison => {
                config.arena.foods[0].n_max = 120;
                config.arena.foods[0].growth_rate = 0.015;
                config.arena.foods.push(FoodKindConfig {
                    kind: FoodKind::Poison,
                    energy_gain: -0.6,
                    n_max: 40,
                    growth_rate: 0.005,
                    spawn: SpawnDistribution::Uniform,
                });
            }
            Preset::RandomWalkNull => return None,
        }
        Some(config)
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_PRESETS
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ALL_PRESETS.iter().map(|p| p.name()).collect();
                format!("unknown preset {s:?}; expected one of {}", names.join(", "))
            })
    }
}
