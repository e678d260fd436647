//! Fixed-capacity rollout storage. The engine triggers a PPO update exactly
//! when the buffer fills, then clears it; an agent dying mid-rollout simply
//! drops the partial buffer with its state.

use serde::{Deserialize, Serialize};

use super::ACTION_DIM;

/// One environment step as seen by the learner.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transition {
    pub observation: Vec<f64>,
    pub action: [f64; ACTION_DIM],
    pub log_prob: f64,
    pub value: f64,
    pub reward: f64,
    pub done: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RolloutBuffer {
    capacity: usize,
    transitions: Vec<Transition>,
}

impl RolloutBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        RolloutBuffer {
            capacity,
            transitions: Vec::with_capacity(capacity),
        }
    }

    /// Appends a transition. The engine must drain a full buffer before
    /// storing more; pushing past capacity is a pipeline bug.
    pub fn push(&mut self, transition: Transition) {
        assert!(self.transitions.len() < self.capacity, "rollout buffer overflow");
        self.transitions.push(transition);
    }

    pub fn is_full(&self) -> bool {
        self.transitions.len() == self.capacity
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn clear(&mut self) {
        self.transitions.clear();
    }
}
