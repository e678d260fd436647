//! The full simulation configuration: one struct, serializable to TOML,
//! validated before any run. A `(SimulationConfig, seed)` pair fully
//! determines a run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{ArenaConfig, FoodKind, SpawnDistribution};
use crate::lifecycle::{BirthParams, HazardParams, MutationParams, ReproductionParams};
use crate::physics2d::WorldConfig;
use crate::reward::RewardConfig;
use crate::rl::PpoHyper;

/// Initial roster and the hard population limit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationConfig {
    pub initial_agents: u32,
    pub initial_energy: f64,
    pub capacity: u32,
}

impl Default for PopulationConfig {
    fn default() -> Self {
        PopulationConfig {
            initial_agents: 50,
            initial_energy: 20.0,
            capacity: 200,
        }
    }
}

/// Learner architecture and PPO hyperparameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RlConfig {
    pub hidden_dim: usize,
    /// Orthogonal gain of the actor head at init. Small values make
    /// newborn motion pure exploration noise; larger values give each
    /// newborn a persistent random motor bias. The default keeps typical
    /// newborn motor means inside the action clip range (so the policy
    /// gradient through actions stays alive) while still producing arena-
    /// scale sweeps.
    pub actor_gain: f64,
    pub hyper: PpoHyper,
}

impl Default for RlConfig {
    fn default() -> Self {
        RlConfig {
            hidden_dim: 64,
            actor_gain: 40.0,
            hyper: PpoHyper::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub seed: u64,
    pub max_steps: u64,
    /// Full-state checkpoint cadence in steps (0 disables checkpoints).
    pub checkpoint_interval: u64,
    pub arena: ArenaConfig,
    pub physics: WorldConfig,
    pub population: PopulationConfig,
    pub hazard: HazardParams,
    pub birth: BirthParams,
    pub mutation: MutationParams,
    pub reproduction: ReproductionParams,
    pub reward: RewardConfig,
    pub rl: RlConfig,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 0,
            max_steps: 1_000_000,
            checkpoint_interval: 100_000,
            arena: ArenaConfig::default(),
            physics: WorldConfig::default(),
            population: PopulationConfig::default(),
            hazard: HazardParams::default(),
            birth: BirthParams::default(),
            mutation: MutationParams::default(),
            reproduction: ReproductionParams::default(),
            reward: RewardConfig::default(),
            rl: RlConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent config: {0}")]
    Inconsistent(String),
    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("failed to read config: {0}")]
    Io(#[from] std::io::Error),
}

impl SimulationConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: SimulationConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Checks ranges and cross-field consistency. Every constructor path
    /// into the engine goes through this.
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(name: &str, v: f64) -> Result<(), ConfigError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange(format!("{name} must be positive, got {v}")))
            }
        }
        fn non_negative(name: &str, v: f64) -> Result<(), ConfigError> {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange(format!("{name} must be >= 0, got {v}")))
            }
        }
        fn unit_interval(name: &str, v: f64) -> Result<(), ConfigError> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange(format!("{name} must lie in [0, 1], got {v}")))
            }
        }

        let a = &self.arena;
        positive("arena.width", a.width)?;
        positive("arena.height", a.height)?;
        positive("arena.agent_radius", a.agent_radius)?;
        positive("arena.agent_mass", a.agent_mass)?;
        positive("arena.food_radius", a.food_radius)?;
        positive("arena.sensor_range_fraction", a.sensor_range_fraction)?;
        positive("arena.velocity_norm", a.velocity_norm)?;
        positive("arena.energy_norm", a.energy_norm)?;
        non_negative("arena.metabolic.e_basic", a.metabolic.e_basic)?;
        if a.metabolic.e_act < 0.0 {
            return Err(ConfigError::OutOfRange("arena.metabolic.e_act must be >= 0".into()));
        }
        if a.n_rays == 0 {
            return Err(ConfigError::OutOfRange("arena.n_rays must be >= 1".into()));
        }
        if a.action_min >= a.action_max {
            return Err(ConfigError::Inconsistent(format!(
                "arena action range is empty: [{}, {}]",
                a.action_min, a.action_max
            )));
        }
        if 2.0 * a.agent_radius >= a.width.min(a.height) {
            return Err(ConfigError::Inconsistent(
                "agents do not fit inside the arena".into(),
            ));
        }
        if a.foods.is_empty() {
            return Err(ConfigError::Inconsistent("at least one food kind is required".into()));
        }
        if a.foods.len() > 2 {
            return Err(ConfigError::Inconsistent(
                "at most two food kinds are supported (normal plus one other)".into(),
            ));
        }
        for (i, food) in a.foods.iter().enumerate() {
            if food.growth_rate < 0.0 || !food.growth_rate.is_finite() {
                return Err(ConfigError::OutOfRange(format!(
                    "arena.foods[{i}].growth_rate must be >= 0"
                )));
            }
            if !food.energy_gain.is_finite() {
                return Err(ConfigError::OutOfRange(format!(
                    "arena.foods[{i}].energy_gain must be finite"
                )));
            }
            match food.spawn {
                SpawnDistribution::Uniform => {}
                SpawnDistribution::CenteredGaussian { std_fraction } => {
                    positive(&format!("arena.foods[{i}].spawn.std_fraction"), std_fraction)?;
                }
                SpawnDistribution::RelocatingGaussian {
                    std_fraction,
                    period,
                    margin_fraction,
                } => {
                    positive(&format!("arena.foods[{i}].spawn.std_fraction"), std_fraction)?;
                    unit_interval(
                        &format!("arena.foods[{i}].spawn.margin_fraction"),
                        margin_fraction,
                    )?;
                    if period == 0 {
                        return Err(ConfigError::OutOfRange(format!(
                            "arena.foods[{i}].spawn.period must be >= 1"
                        )));
                    }
                }
            }
        }
        if a.foods[0].kind != FoodKind::Normal {
            return Err(ConfigError::Inconsistent(
                "arena.foods[0] must be the normal kind".into(),
            ));
        }
        if a.foods.len() == 2 && a.foods[0].kind == a.foods[1].kind {
            return Err(ConfigError::Inconsistent(
                "the two food kinds must differ".into(),
            ));
        }

        let w = &self.physics;
        positive("physics.dt", w.dt)?;
        if w.linear_damping < 0.0 || w.angular_damping < 0.0 {
            return Err(ConfigError::OutOfRange("physics damping must be >= 0".into()));
        }
        if w.solver.velocity_iterations == 0 || w.solver.position_iterations == 0 {
            return Err(ConfigError::OutOfRange("solver iterations must be >= 1".into()));
        }
        positive("physics.solver.penetration_slop", w.solver.penetration_slop)?;
        if !(0.0 < w.solver.position_correction_factor && w.solver.position_correction_factor <= 1.0)
        {
            return Err(ConfigError::OutOfRange(
                "physics.solver.position_correction_factor must lie in (0, 1]".into(),
            ));
        }
        unit_interval("physics.solver.restitution", w.solver.restitution)?;
        if w.solver.friction_coefficient < 0.0 {
            return Err(ConfigError::OutOfRange(
                "physics.solver.friction_coefficient must be >= 0".into(),
            ));
        }

        let p = &self.population;
        positive("population.initial_energy", p.initial_energy)?;
        if p.capacity == 0 {
            return Err(ConfigError::OutOfRange("population.capacity must be >= 1".into()));
        }
        if p.initial_agents > p.capacity {
            return Err(ConfigError::Inconsistent(format!(
                "initial_agents {} exceeds capacity {}",
                p.initial_agents, p.capacity
            )));
        }

        unit_interval("hazard.kappa_h", self.hazard.kappa_h)?;
        non_negative("hazard.alpha_e", self.hazard.alpha_e)?;
        if self.hazard.alpha_a < 0.0 {
            return Err(ConfigError::OutOfRange("hazard.alpha_a must be >= 0".into()));
        }
        positive("hazard.beta_a", self.hazard.beta_a)?;
        unit_interval("birth.kappa_b", self.birth.kappa_b)?;
        positive("mutation.cauchy_scale", self.mutation.cauchy_scale)?;
        if self.mutation.clip_min >= self.mutation.clip_max {
            return Err(ConfigError::Inconsistent("mutation weight range is empty".into()));
        }
        let eta = self.reproduction.energy_share_ratio;
        if !(0.0 < eta && eta < 1.0) {
            return Err(ConfigError::OutOfRange(format!(
                "reproduction.energy_share_ratio must lie in (0, 1), got {eta}"
            )));
        }
        positive(
            "reproduction.placement_std_fraction",
            self.reproduction.placement_std_fraction,
        )?;
        if self.reproduction.placement_attempts == 0 {
            return Err(ConfigError::OutOfRange(
                "reproduction.placement_attempts must be >= 1".into(),
            ));
        }
        positive("reward.init_std", self.reward.init_std)?;

        let h = &self.rl.hyper;
        if self.rl.hidden_dim == 0 {
            return Err(ConfigError::OutOfRange("rl.hidden_dim must be >= 1".into()));
        }
        positive("rl.actor_gain", self.rl.actor_gain)?;
        unit_interval("rl.hyper.gamma", h.gamma)?;
        unit_interval("rl.hyper.gae_lambda", h.gae_lambda)?;
        positive("rl.hyper.clip", h.clip)?;
        positive("rl.hyper.learning_rate", h.learning_rate)?;
        positive("rl.hyper.adam_eps", h.adam_eps)?;
        if h.value_coeff < 0.0 || h.entropy_coeff < 0.0 {
            return Err(ConfigError::OutOfRange(
                "rl.hyper value/entropy coefficients must be >= 0".into(),
            ));
        }
        if h.epochs == 0 {
            return Err(ConfigError::OutOfRange("rl.hyper.epochs must be >= 1".into()));
        }
        if h.rollout_steps == 0 {
            return Err(ConfigError::OutOfRange("rl.hyper.rollout_steps must be >= 1".into()));
        }
        if h.minibatch == 0 || h.minibatch > h.rollout_steps {
            return Err(ConfigError::Inconsistent(format!(
                "rl.hyper.minibatch {} must lie in [1, rollout_steps = {}]",
                h.minibatch, h.rollout_steps
            )));
        }
        Ok(())
    }
}
