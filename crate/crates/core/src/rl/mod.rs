//! Per-agent learning stack: a small tanh MLP actor-critic over flat
//! parameter storage, diagonal-Gaussian action sampling, generalized
//! advantage estimation, and clipped-surrogate PPO driven by Adam.
//!
//! Every agent owns an independent learner; nothing is shared across
//! agents. All gradients are computed by hand-rolled backpropagation over
//! the flat parameter vector, which keeps updates allocation-light and
//! makes finite-difference verification straightforward.

pub mod adam;
pub mod buffer;
pub mod gae;
pub mod mlp;
pub mod ppo;

pub use adam::{adam_step, AdamState};
pub use buffer::{RolloutBuffer, Transition};
pub use gae::compute_gae;
pub use mlp::{Forward, PolicyParams, PolicyShape, ACTION_DIM};
pub use ppo::{ppo_update, prepare_rollout, PpoHyper, PreparedRollout, UpdateStats};

use rand::Rng;
use rand_distr::StandardNormal;

/// Fresh policy parameters and a zeroed optimizer for a newborn agent.
pub fn init_policy(rng: &mut impl Rng, shape: PolicyShape, actor_gain: f64) -> (PolicyParams, AdamState) {
    let params = mlp::init_params(rng, shape, actor_gain);
    let adam = AdamState::new(params.data().len());
    (params, adam)
}

/// Draws an action from the diagonal Gaussian `Normal(mean, diag(std^2))`
/// and returns its exact log-density. Clipping to the actuator range happens
/// downstream in the environment; the log-prob refers to the unclipped
/// sample.
pub fn sample_action(
    mean: [f64; ACTION_DIM],
    std: [f64; ACTION_DIM],
    rng: &mut impl Rng,
) -> ([f64; ACTION_DIM], f64) {
    let mut action = [0.0; ACTION_DIM];
    for (a, (&m, &s)) in action.iter_mut().zip(mean.iter().zip(std.iter())) {
        let z: f64 = rng.sample(StandardNormal);
        *a = m + s * z;
    }
    (action, gaussian_log_prob(&action, &mean, &std))
}

/// Log-density of `action` under the diagonal Gaussian.
pub fn gaussian_log_prob(
    action: &[f64; ACTION_DIM],
    mean: &[f64; ACTION_DIM],
    std: &[f64; ACTION_DIM],
) -> f64 {
    let ln_2pi = (2.0 * std::f64::consts::PI).ln();
    action
        .iter()
        .zip(mean.iter().zip(std.iter()))
        .map(|(&a, (&m, &s))| {
            let z = (a - m) / s;
            -0.5 * z * z - s.ln() - 0.5 * ln_2pi
        })
        .sum()
}
