//! Adam over the flat parameter vector, with bias-corrected moments and the
//! conventional beta values 0.9 / 0.999.

use serde::{Deserialize, Serialize};

const BETA_1: f64 = 0.9;
const BETA_2: f64 = 0.999;

/// First/second moment accumulators plus the step counter.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(param_count: usize) -> Self {
        AdamState {
            m: vec![0.0; param_count],
            v: vec![0.0; param_count],
            t: 0,
        }
    }
}

/// One bias-corrected Adam step in place.
pub fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState, lr: f64, eps: f64) {
    assert_eq!(params.len(), grads.len());
    assert_eq!(params.len(), state.m.len());
    state.t += 1;
    let m_correction = 1.0 - BETA_1.powi(state.t as i32);
    let v_correction = 1.0 - BETA_2.powi(state.t as i32);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = BETA_1 * state.m[i] + (1.0 - BETA_1) * g;
        state.v[i] = BETA_2 * state.v[i] + (1.0 - BETA_2) * g * g;
        let m_hat = state.m[i] / m_correction;
        let v_hat = state.v[i] / v_correction;
        params[i] -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_but_advances_counter() {
        let mut params = vec![1.0, -2.0, 0.5];
        let mut state = AdamState::new(3);
        adam_step(&mut params, &[0.0; 3], &mut state, 3e-4, 1e-7);
        assert_eq!(params, vec![1.0, -2.0, 0.5]);
        assert_eq!(state.t, 1);
    }

    #[test]
    fn first_step_moves_by_learning_rate_against_gradient_sign() {
        // With zeroed moments, bias correction cancels the gradient
        // magnitude: delta = -lr * g / (|g| + eps') ~ -lr * sign(g).
        let lr = 3e-4;
        for &g in &[5.0, -0.2, 1e3] {
            let mut params = vec![0.0];
            let mut state = AdamState::new(1);
            adam_step(&mut params, &[g], &mut state, lr, 1e-7);
            let delta = params[0];
            assert!(delta.abs() <= lr * (1.0 + 1e-9), "delta = {delta}");
            assert!((delta.abs() - lr).abs() < 1e-3 * lr);
            assert_eq!(delta.signum(), -g.signum());
        }
    }

    #[test]
    fn identical_calls_produce_identical_results() {
        let grads: Vec<f64> = (0..8).map(|i| (i as f64 - 3.5) * 0.1).collect();
        let run = || {
            let mut params: Vec<f64> = (0..8).map(|i| i as f64).collect();
            let mut state = AdamState::new(8);
            for _ in 0..5 {
                adam_step(&mut params, &grads, &mut state, 3e-4, 1e-7);
            }
            (params, state.m, state.v)
        };
        assert_eq!(run(), run());
    }
}
