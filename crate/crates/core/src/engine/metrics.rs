//! Run summaries derived by replaying the event log. Nothing here reads
//! simulation state: the log alone determines every number, so metrics
//! can be recomputed offline from a saved JSONL file.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::reward::RewardParams;

use super::{EventKind, EventRecord};

/// Sampling stride of the population and weight series.
pub const DEFAULT_METRIC_STRIDE: u64 = 1000;

/// Mean reward weights over the live population at one sampled step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightPoint {
    pub step: u64,
    pub population: u32,
    pub mean_w_food: f64,
    pub mean_w_act: f64,
    /// `None` when no live agent carries the extra-food weight.
    pub mean_w_extra: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Metrics {
    pub final_step: u64,
    pub extinct: bool,
    /// Birth events, founders included.
    pub births: u64,
    pub deaths: u64,
    pub total_eaten: u64,
    pub eaten_by_population: Vec<u64>,
    /// Mean age at death; `None` when nothing died.
    pub average_lifetime: Option<f64>,
    /// Steps lived, summed over all agents; survivors contribute their
    /// age at the final step.
    pub total_agent_steps: u64,
    pub consumption_per_agent_step: Option<f64>,
    /// (step, live agents) every `stride` steps plus the final step.
    pub population_series: Vec<(u64, u32)>,
    /// Mean weights on the same sampling grid, empty steps skipped.
    pub weight_series: Vec<WeightPoint>,
}

/// Replays `events` (sorted by step, as the engine emits them) up to and
/// including `final_step`.
pub fn compute_metrics(events: &[EventRecord], final_step: u64, stride: u64) -> Metrics {
    assert!(stride > 0, "metric stride must be positive");
    let mut alive: BTreeMap<u64, (u64, RewardParams)> = BTreeMap::new();
    let mut births = 0u64;
    let mut deaths = 0u64;
    let mut total_eaten = 0u64;
    let mut eaten_by_population: Vec<u64> = Vec::new();
    let mut lifetime_sum = 0u64;
    let mut total_agent_steps = 0u64;
    let mut population_series = Vec::new();
    let mut weight_series = Vec::new();

    let mut cursor = 0usize;
    for step in 0..=final_step {
        while cursor < events.len() && events[cursor].step == step {
            match &events[cursor].kind {
                EventKind::Birth { agent, weights, .. } => {
                    births += 1;
                    alive.insert(*agent, (step, *weights));
                }
                EventKind::Death { agent, age, .. } => {
                    deaths += 1;
                    lifetime_sum += age;
                    total_agent_steps += age;
                    alive.remove(agent);
                }
                EventKind::Eat { population, .. } => {
                    total_eaten += 1;
                    if eaten_by_population.len() <= *population {
                        eaten_by_population.resize(population + 1, 0);
                    }
                    eaten_by_population[*population] += 1;
                }
                EventKind::Update { .. } | EventKind::Relocation { .. } => {}
            }
            cursor += 1;
        }
        if step % stride == 0 || step == final_step {
            population_series.push((step, alive.len() as u32));
            if let Some(point) = mean_weights(step, &alive) {
                weight_series.push(point);
            }
        }
    }
    debug_assert_eq!(cursor, events.len(), "events past final_step");

    for &(birth_step, _) in alive.values() {
        total_agent_steps += final_step - birth_step;
    }
    Metrics {
        final_step,
        extinct: alive.is_empty(),
        births,
        deaths,
        total_eaten,
        eaten_by_population,
        average_lifetime: (deaths > 0).then(|| lifetime_sum as f64 / deaths as f64),
        total_agent_steps,
        consumption_per_agent_step: (total_agent_steps > 0)
            .then(|| total_eaten as f64 / total_agent_steps as f64),
        population_series,
        weight_series,
    }
}

fn mean_weights(step: u64, alive: &BTreeMap<u64, (u64, RewardParams)>) -> Option<WeightPoint> {
    if alive.is_empty() {
        return None;
    }
    let n = alive.len() as f64;
    let mut sum_food = 0.0;
    let mut sum_act = 0.0;
    let mut sum_extra = 0.0;
    let mut extra_count = 0u64;
    for (_, weights) in alive.values() {
        sum_food += weights.w_food;
        sum_act += weights.w_act;
        if let Some(w) = weights.w_extra {
            sum_extra += w;
            extra_count += 1;
        }
    }
    Some(WeightPoint {
        step,
        population: alive.len() as u32,
        mean_w_food: sum_food / n,
        mean_w_act: sum_act / n,
        mean_w_extra: (extra_count > 0).then(|| sum_extra / extra_count as f64),
    })
}
