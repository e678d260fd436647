//! The actor-critic network: a shared two-layer tanh trunk with an actor
//! head (action means), a state-independent log-std vector, and a critic
//! head. All parameters live in one flat `Vec<f64>` addressed through a
//! block layout, so the optimizer and gradient checks treat the policy as a
//! plain vector.

use ndarray::{ArrayView1, ArrayView2};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// Actions are (left force, right force).
pub const ACTION_DIM: usize = 2;

/// Network dimensions. Two hidden layers of `hidden_dim` are fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyShape {
    pub obs_dim: usize,
    pub hidden_dim: usize,
}

/// Offsets of each parameter block in the flat vector.
pub(crate) struct Blocks {
    pub w1: Range<usize>,
    pub b1: Range<usize>,
    pub w2: Range<usize>,
    pub b2: Range<usize>,
    pub w_actor: Range<usize>,
    pub b_actor: Range<usize>,
    pub w_critic: Range<usize>,
    pub b_critic: Range<usize>,
    pub log_std: Range<usize>,
}

impl PolicyShape {
    pub(crate) fn blocks(&self) -> Blocks {
        let (o, h) = (self.obs_dim, self.hidden_dim);
        let mut cursor = 0;
        let mut next = |len: usize| {
            let range = cursor..cursor + len;
            cursor += len;
            range
        };
        Blocks {
            w1: next(h * o),
            b1: next(h),
            w2: next(h * h),
            b2: next(h),
            w_actor: next(ACTION_DIM * h),
            b_actor: next(ACTION_DIM),
            w_critic: next(h),
            b_critic: next(1),
            log_std: next(ACTION_DIM),
        }
    }

    pub fn param_count(&self) -> usize {
        self.blocks().log_std.end
    }
}

/// Flat parameter storage plus its shape.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolicyParams {
    shape: PolicyShape,
    data: Vec<f64>,
}

/// Outputs of a forward pass.
#[derive(Clone, Copy, Debug)]
pub struct Forward {
    pub mean: [f64; ACTION_DIM],
    pub std: [f64; ACTION_DIM],
    pub value: f64,
}

/// Forward pass with the intermediate activations backprop needs.
pub(crate) struct ForwardCache {
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub mean: [f64; ACTION_DIM],
    pub value: f64,
}

impl PolicyParams {
    pub fn zeros(shape: PolicyShape) -> Self {
        PolicyParams {
            shape,
            data: vec![0.0; shape.param_count()],
        }
    }

    pub fn shape(&self) -> PolicyShape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn log_std(&self) -> &[f64] {
        &self.data[self.shape.blocks().log_std]
    }

    pub(crate) fn matrix(
        &self,
        range: Range<usize>,
        rows: usize,
        cols: usize,
    ) -> ArrayView2<'_, f64> {
        ArrayView2::from_shape((rows, cols), &self.data[range]).expect("block shape")
    }

    /// Deterministic forward pass: action means, stds (exp of log-std), and
    /// the value estimate.
    pub fn forward(&self, obs: &[f64]) -> Forward {
        let cache = self.forward_cached(obs);
        let log_std = self.log_std();
        Forward {
            mean: cache.mean,
            std: [log_std[0].exp(), log_std[1].exp()],
            value: cache.value,
        }
    }

    pub(crate) fn forward_cached(&self, obs: &[f64]) -> ForwardCache {
        let (o, h) = (self.shape.obs_dim, self.shape.hidden_dim);
        assert_eq!(obs.len(), o, "observation dimension mismatch");
        let blocks = self.shape.blocks();
        let obs = ArrayView1::from(obs);

        let w1 = self.matrix(blocks.w1, h, o);
        let b1 = &self.data[blocks.b1];
        let mut a1 = w1.dot(&obs).to_vec();
        for (a, b) in a1.iter_mut().zip(b1) {
            *a = (*a + b).tanh();
        }

        let w2 = self.matrix(blocks.w2, h, h);
        let b2 = &self.data[blocks.b2];
        let mut a2 = w2.dot(&ArrayView1::from(&a1[..])).to_vec();
        for (a, b) in a2.iter_mut().zip(b2) {
            *a = (*a + b).tanh();
        }

        let w_actor = self.matrix(blocks.w_actor, ACTION_DIM, h);
        let b_actor = &self.data[blocks.b_actor];
        let mean_arr = w_actor.dot(&ArrayView1::from(&a2[..]));
        let mean = [mean_arr[0] + b_actor[0], mean_arr[1] + b_actor[1]];

        let w_critic = ArrayView1::from(&self.data[blocks.w_critic]);
        let value = w_critic.dot(&ArrayView1::from(&a2[..])) + self.data[blocks.b_critic][0];

        ForwardCache { a1, a2, mean, value }
    }
}

/// Orthogonally initialized parameters: trunk gain sqrt(2), actor head gain
/// `actor_gain`, critic head gain 1, biases and log-std zero. A small actor
/// gain keeps newborn behavior driven by the unit-std exploration noise; a
/// large one gives each newborn a persistent random motor bias.
pub fn init_params(rng: &mut impl Rng, shape: PolicyShape, actor_gain: f64) -> PolicyParams {
    let (o, h) = (shape.obs_dim, shape.hidden_dim);
    let mut params = PolicyParams::zeros(shape);
    let blocks = shape.blocks();
    let sqrt2 = std::f64::consts::SQRT_2;
    params.data[blocks.w1].copy_from_slice(&orthogonal(rng, h, o, sqrt2));
    params.data[blocks.w2].copy_from_slice(&orthogonal(rng, h, h, sqrt2));
    params.data[blocks.w_actor].copy_from_slice(&orthogonal(rng, ACTION_DIM, h, actor_gain));
    params.data[blocks.w_critic].copy_from_slice(&orthogonal(rng, 1, h, 1.0));
    params
}

/// Row-major `rows x cols` matrix with orthonormal rows (columns when
/// rows > cols) scaled by `gain`, built by modified Gram-Schmidt over
/// standard-normal draws.
fn orthogonal(rng: &mut impl Rng, rows: usize, cols: usize, gain: f64) -> Vec<f64> {
    let mut data: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    if rows <= cols {
        gram_schmidt_rows(&mut data, rows, cols);
    } else {
        // Orthonormalize the transpose, then transpose back.
        let mut t = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                t[c * rows + r] = data[r * cols + c];
            }
        }
        gram_schmidt_rows(&mut t, cols, rows);
        for r in 0..rows {
            for c in 0..cols {
                data[r * cols + c] = t[c * rows + r];
            }
        }
    }
    for x in &mut data {
        *x *= gain;
    }
    data
}

fn gram_schmidt_rows(data: &mut [f64], rows: usize, cols: usize) {
    for i in 0..rows {
        for j in 0..i {
            let dot: f64 = (0..cols).map(|c| data[i * cols + c] * data[j * cols + c]).sum();
            for c in 0..cols {
                data[i * cols + c] -= dot * data[j * cols + c];
            }
        }
        let norm: f64 = (0..cols)
            .map(|c| data[i * cols + c] * data[i * cols + c])
            .sum::<f64>()
            .sqrt();
        // Standard-normal rows are almost surely independent; a degenerate
        // row would mean the RNG produced an exact linear combination.
        assert!(norm > 1e-12, "degenerate row in orthogonal init");
        for c in 0..cols {
            data[i * cols + c] /= norm;
        }
    }
}
