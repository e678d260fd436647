//! Generalized advantage estimation over a finished rollout.

/// Computes GAE advantages and returns-to-go.
///
/// delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t, with V_T taken from
/// `bootstrap_value`; A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1};
/// returns_t = A_t + V_t. Done flags cut both the bootstrap and the
/// advantage recursion.
pub fn compute_gae(
    rewards: &[f64],
    values: &[f64],
    bootstrap_value: f64,
    dones: &[bool],
    gamma: f64,
    lambda: f64,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(rewards.len(), values.len());
    assert_eq!(rewards.len(), dones.len());
    let n = rewards.len();
    let mut advantages = vec![0.0; n];
    let mut carry = 0.0;
    for t in (0..n).rev() {
        let next_value = if t + 1 < n { values[t + 1] } else { bootstrap_value };
        let mask = if dones[t] { 0.0 } else { 1.0 };
        let delta = rewards[t] + gamma * next_value * mask - values[t];
        carry = delta + gamma * lambda * mask * carry;
        advantages[t] = carry;
    }
    let returns = advantages
        .iter()
        .zip(values)
        .map(|(a, v)| a + v)
        .collect();
    (advantages, returns)
}
