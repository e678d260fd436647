//! The evolvable reward function: a linear form over per-kind food intake
//! and motor-action magnitude. Weights are heritable (mutated at birth, see
//! [`crate::lifecycle`]) and frozen for the agent's lifetime; the fixed
//! scale `c_act` keeps the action term commensurate with food terms.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Lower clip bound for every reward weight.
pub const WEIGHT_MIN: f64 = -10.0;
/// Upper clip bound for every reward weight.
pub const WEIGHT_MAX: f64 = 10.0;

/// Heritable reward weights. `w_extra` is the weight of the experiment's
/// second food kind (poor or poison) and is present exactly when the
/// experiment defines one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardParams {
    pub w_food: f64,
    pub w_act: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w_extra: Option<f64>,
}

impl RewardParams {
    pub fn zeros(has_extra: bool) -> Self {
        RewardParams {
            w_food: 0.0,
            w_act: 0.0,
            w_extra: has_extra.then_some(0.0),
        }
    }
}

/// Fixed (non-evolvable) reward constants.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardConfig {
    /// Scale of the action-magnitude term.
    pub c_act: f64,
    /// Standard deviation of founder weight sampling.
    pub init_std: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        RewardConfig {
            c_act: 0.01,
            init_std: 0.1,
        }
    }
}

/// r = w_food * n_normal + w_extra * n_extra + c_act * w_act * |a|.
pub fn compute_reward(
    params: &RewardParams,
    eaten_normal: u32,
    eaten_extra: u32,
    action_norm: f64,
    config: &RewardConfig,
) -> f64 {
    debug_assert!(eaten_extra == 0 || params.w_extra.is_some());
    let mut reward =
        params.w_food * f64::from(eaten_normal) + config.c_act * params.w_act * action_norm;
    if let Some(w_extra) = params.w_extra {
        reward += w_extra * f64::from(eaten_extra);
    }
    reward
}

/// Founder weights: each independently Normal(0, init_std), clipped to the
/// weight bounds. Draw order (w_food, w_act, w_extra) is fixed; it is part
/// of the determinism contract.
pub fn sample_initial_weights(
    rng: &mut impl Rng,
    config: &RewardConfig,
    has_extra: bool,
) -> RewardParams {
    let normal = Normal::new(0.0, config.init_std).expect("init_std must be finite and >= 0");
    let mut draw = || normal.sample(rng).clamp(WEIGHT_MIN, WEIGHT_MAX);
    RewardParams {
        w_food: draw(),
        w_act: draw(),
        w_extra: has_extra.then(|| draw()),
    }
}
