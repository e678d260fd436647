//! Clipped-surrogate PPO over one full rollout buffer.
//!
//! The update pipeline: GAE over the buffer with a bootstrap value for the
//! step after the last transition, advantage normalization across the
//! rollout, then `epochs` passes of shuffled minibatches, each applying one
//! Adam step on the analytic gradient of
//!
//! L = -mean(min(ratio * A, clip(ratio) * A))
//!     + value_coeff * mean((V - R)^2)
//!     - entropy_coeff * H(policy).
//!
//! A non-finite loss or gradient anywhere aborts the whole update and
//! restores the pre-update parameters and optimizer state.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamState};
use super::buffer::RolloutBuffer;
use super::gae::compute_gae;
use super::mlp::{PolicyParams, ACTION_DIM};

/// Normalization guard so a zero-variance rollout maps to zero advantages.
const ADV_EPS: f64 = 1e-8;

/// PPO and rollout hyperparameters.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PpoHyper {
    pub gamma: f64,
    pub gae_lambda: f64,
    pub clip: f64,
    pub epochs: usize,
    pub minibatch: usize,
    pub entropy_coeff: f64,
    pub learning_rate: f64,
    pub adam_eps: f64,
    pub value_coeff: f64,
    /// Buffer capacity N: an update fires every N stored transitions.
    pub rollout_steps: usize,
}

impl Default for PpoHyper {
    fn default() -> Self {
        PpoHyper {
            gamma: 0.999,
            gae_lambda: 0.95,
            clip: 0.2,
            epochs: 10,
            minibatch: 256,
            entropy_coeff: 0.0,
            learning_rate: 3e-4,
            adam_eps: 1e-7,
            value_coeff: 0.5,
            rollout_steps: 1024,
        }
    }
}

/// Rollout data after GAE and advantage normalization, indexed by
/// minibatches during the update.
#[derive(Clone, Debug)]
pub struct PreparedRollout {
    pub observations: Vec<Vec<f64>>,
    pub actions: Vec<[f64; ACTION_DIM]>,
    pub old_log_probs: Vec<f64>,
    pub advantages: Vec<f64>,
    pub returns: Vec<f64>,
}

impl PreparedRollout {
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// Minibatch-averaged diagnostics of one update.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct UpdateStats {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
    pub aborted: bool,
}

/// Loss components of one minibatch evaluation.
#[derive(Clone, Copy, Debug)]
pub struct LossBreakdown {
    pub policy_loss: f64,
    pub value_loss: f64,
    pub entropy: f64,
}

/// Runs GAE over the buffer and normalizes advantages to mean 0, std 1
/// across the whole rollout.
pub fn prepare_rollout(
    buffer: &RolloutBuffer,
    bootstrap_value: f64,
    hyper: &PpoHyper,
) -> PreparedRollout {
    let transitions = buffer.transitions();
    let rewards: Vec<f64> = transitions.iter().map(|t| t.reward).collect();
    let values: Vec<f64> = transitions.iter().map(|t| t.value).collect();
    let dones: Vec<bool> = transitions.iter().map(|t| t.done).collect();
    let (mut advantages, returns) = compute_gae(
        &rewards,
        &values,
        bootstrap_value,
        &dones,
        hyper.gamma,
        hyper.gae_lambda,
    );

    let n = advantages.len() as f64;
    let mean = advantages.iter().sum::<f64>() / n;
    let var = advantages.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    for a in &mut advantages {
        *a = (*a - mean) / (std + ADV_EPS);
    }

    PreparedRollout {
        observations: transitions.iter().map(|t| t.observation.clone()).collect(),
        actions: transitions.iter().map(|t| t.action).collect(),
        old_log_probs: transitions.iter().map(|t| t.log_prob).collect(),
        advantages,
        returns,
    }
}

/// Loss and its analytic gradient (same layout as the parameter vector) over
/// the minibatch selected by `indices`.
pub fn minibatch_loss_and_grad(
    params: &PolicyParams,
    rollout: &PreparedRollout,
    indices: &[usize],
    hyper: &PpoHyper,
) -> (f64, Vec<f64>, LossBreakdown) {
    let shape = params.shape();
    let blocks = shape.blocks();
    let batch = indices.len() as f64;
    let mut grad = vec![0.0; shape.param_count()];
    let log_std = [params.log_std()[0], params.log_std()[1]];
    let std = [log_std[0].exp(), log_std[1].exp()];

    let mut policy_loss = 0.0;
    let mut value_loss = 0.0;

    for &i in indices {
        let obs = &rollout.observations[i];
        let cache = params.forward_cached(obs);
        let action = rollout.actions[i];
        let log_prob = super::gaussian_log_prob(&action, &cache.mean, &std);
        let ratio = (log_prob - rollout.old_log_probs[i]).exp();
        let advantage = rollout.advantages[i];

        let clipped_ratio = ratio.clamp(1.0 - hyper.clip, 1.0 + hyper.clip);
        let unclipped = ratio * advantage;
        let clipped = clipped_ratio * advantage;
        // min() gradient: through the unclipped branch only; the clipped
        // branch is selected strictly outside the clip band where its
        // derivative in ratio is zero.
        let (surrogate, d_surrogate_d_ratio) = if unclipped <= clipped {
            (unclipped, advantage)
        } else {
            (clipped, 0.0)
        };
        policy_loss += -surrogate;
        let g_log_prob = if d_surrogate_d_ratio == 0.0 {
            0.0
        } else {
            -d_surrogate_d_ratio * ratio / batch
        };

        let value_error = cache.value - rollout.returns[i];
        value_loss += value_error * value_error;
        let g_value = hyper.value_coeff * 2.0 * value_error / batch;

        let mut g_mean = [0.0; ACTION_DIM];
        for d in 0..ACTION_DIM {
            let inv_var = (-2.0 * log_std[d]).exp();
            let diff = action[d] - cache.mean[d];
            g_mean[d] = g_log_prob * diff * inv_var;
            grad[blocks.log_std.start + d] += g_log_prob * (diff * diff * inv_var - 1.0);
        }

        backprop(params, obs, &cache, g_mean, g_value, &mut grad);
    }

    // Diagonal-Gaussian entropy is state-independent: sum of log-stds plus
    // a constant per dimension.
    let entropy: f64 = log_std
        .iter()
        .map(|ls| ls + 0.5 * (1.0 + (2.0 * std::f64::consts::PI).ln()))
        .sum();
    for d in 0..ACTION_DIM {
        grad[blocks.log_std.start + d] -= hyper.entropy_coeff;
    }

    policy_loss /= batch;
    value_loss /= batch;
    let total = policy_loss + hyper.value_coeff * value_loss - hyper.entropy_coeff * entropy;
    (
        total,
        grad,
        LossBreakdown {
            policy_loss,
            value_loss,
            entropy,
        },
    )
}

/// Reverse pass through the shared trunk and both heads for one sample,
/// accumulating into `grad`.
fn backprop(
    params: &PolicyParams,
    obs: &[f64],
    cache: &super::mlp::ForwardCache,
    g_mean: [f64; ACTION_DIM],
    g_value: f64,
    grad: &mut [f64],
) {
    let shape = params.shape();
    let blocks = shape.blocks();
    let h = shape.hidden_dim;
    let o = shape.obs_dim;
    let data = params.data();

    let mut g_a2 = vec![0.0; h];
    for k in 0..ACTION_DIM {
        let row = blocks.w_actor.start + k * h;
        for j in 0..h {
            grad[row + j] += g_mean[k] * cache.a2[j];
            g_a2[j] += g_mean[k] * data[row + j];
        }
        grad[blocks.b_actor.start + k] += g_mean[k];
    }
    for j in 0..h {
        grad[blocks.w_critic.start + j] += g_value * cache.a2[j];
        g_a2[j] += g_value * data[blocks.w_critic.start + j];
    }
    grad[blocks.b_critic.start] += g_value;

    let mut g_a1 = vec![0.0; h];
    for i in 0..h {
        let g_z2 = g_a2[i] * (1.0 - cache.a2[i] * cache.a2[i]);
        let row = blocks.w2.start + i * h;
        for j in 0..h {
            grad[row + j] += g_z2 * cache.a1[j];
            g_a1[j] += g_z2 * data[row + j];
        }
        grad[blocks.b2.start + i] += g_z2;
    }

    for i in 0..h {
        let g_z1 = g_a1[i] * (1.0 - cache.a1[i] * cache.a1[i]);
        let row = blocks.w1.start + i * o;
        for j in 0..o {
            grad[row + j] += g_z1 * obs[j];
        }
        grad[blocks.b1.start + i] += g_z1;
    }
}

/// Full PPO update over a filled buffer. Minibatch order is drawn from
/// `rng`; identical inputs and RNG state produce identical parameters.
pub fn ppo_update(
    params: &mut PolicyParams,
    adam: &mut AdamState,
    buffer: &RolloutBuffer,
    bootstrap_value: f64,
    hyper: &PpoHyper,
    rng: &mut impl Rng,
) -> UpdateStats {
    assert!(buffer.is_full(), "PPO update requires a full rollout buffer");
    let rollout = prepare_rollout(buffer, bootstrap_value, hyper);
    let params_snapshot = params.data().to_vec();
    let adam_snapshot = adam.clone();

    let mut indices: Vec<usize> = (0..rollout.len()).collect();
    let mut stats = UpdateStats::default();
    let mut batches = 0usize;

    for _ in 0..hyper.epochs {
        indices.shuffle(rng);
        for chunk in indices.chunks(hyper.minibatch) {
            let (loss, grad, parts) = minibatch_loss_and_grad(params, &rollout, chunk, hyper);
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                params.data_mut().copy_from_slice(&params_snapshot);
                *adam = adam_snapshot;
                return UpdateStats {
                    aborted: true,
                    ..UpdateStats::default()
                };
            }
            adam_step(
                params.data_mut(),
                &grad,
                adam,
                hyper.learning_rate,
                hyper.adam_eps,
            );
            stats.policy_loss += parts.policy_loss;
            stats.value_loss += parts.value_loss;
            stats.entropy += parts.entropy;
            batches += 1;
        }
    }

    stats.policy_loss /= batches as f64;
    stats.value_loss /= batches as f64;
    stats.entropy /= batches as f64;
    stats
}
