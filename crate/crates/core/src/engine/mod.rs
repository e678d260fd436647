//! The simulation engine: arena, lifecycle, and per-agent PPO learners
//! coupled into one deterministic step loop.
//!
//! The step counter is 1-based; step 0 is initialization (food stock,
//! founder placement, founder weights and policies). One step runs:
//!
//!   1. each live agent, in id order, observes, runs a PPO update if its
//!      rollout buffer is full, samples an action, and applies motors;
//!   2. the physics world advances one tick;
//!   3. mouth contacts consume food, lowest agent id winning contested
//!      items;
//!   4. energies metabolize and each agent stores its transition;
//!   5. food populations regrow and possibly relocate;
//!   6. birth draws then death draws resolve over the agents that began
//!      the step, in id order; children skip their own birth step.
//!
//! Every random draw comes from a stateless substream keyed by
//! (purpose, step, index), so a run resumed from a checkpoint continues
//! bit-exactly.

mod checkpoint;
mod events;
mod metrics;

pub use checkpoint::{load_checkpoint, save_checkpoint, CheckpointError, CHECKPOINT_VERSION};
pub use events::{read_events, write_events, EventKind, EventLogError, EventRecord};
pub use metrics::{compute_metrics, Metrics, WeightPoint, DEFAULT_METRIC_STRIDE};

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arena::{metabolize, Arena, ArenaConfig, FoodKind};
use crate::config::{ConfigError, SimulationConfig};
use crate::lifecycle::{birth_probability, hazard, mutate_weights, split_energy, try_place_child};
use crate::physics2d::{BodyId, Contact, ContactTarget};
use crate::reward::{compute_reward, sample_initial_weights, RewardParams};
use crate::rl::{
    init_policy, ppo_update, sample_action, AdamState, PolicyParams, PolicyShape, RolloutBuffer,
    Transition, ACTION_DIM,
};
use crate::rngs::{substream, StreamPurpose};
use crate::vec2::Vec2;

/// Rejection-sampling budget for placing one founder uniformly.
const INIT_PLACEMENT_ATTEMPTS: usize = 1000;

/// One live agent. Agent ids and body ids come from different counters,
/// but both are assigned in birth order and never reused, so the agents
/// vector is sorted by id and by body id simultaneously.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AgentState {
    pub id: u64,
    pub body: BodyId,
    pub energy: f64,
    pub birth_step: u64,
    pub parent: Option<u64>,
    pub reward: RewardParams,
    pub policy: PolicyParams,
    pub adam: AdamState,
    pub buffer: RolloutBuffer,
}

/// Per-agent energy bookkeeping for one step, in agent id order.
#[derive(Clone, Debug)]
pub struct AgentAudit {
    pub agent: u64,
    pub energy_before: f64,
    pub food_gain: f64,
    pub clipped_action: [f64; ACTION_DIM],
    pub energy_after: f64,
}

#[derive(Clone, Debug)]
pub struct BirthAudit {
    pub parent: u64,
    pub child: u64,
    pub parent_energy_before: f64,
    pub parent_energy_after: f64,
    pub child_energy: f64,
}

#[derive(Clone, Debug)]
pub struct DeathAudit {
    pub agent: u64,
    pub energy: f64,
}

/// Exact energy ledger of one step. Replaying `agents` through
/// `metabolize`, then applying `births` and removing `deaths`, reproduces
/// `total_energy_after` from `total_energy_before` bit-for-bit.
#[derive(Clone, Debug)]
pub struct StepAudit {
    pub step: u64,
    pub total_energy_before: f64,
    pub total_energy_after: f64,
    pub agents: Vec<AgentAudit>,
    pub births: Vec<BirthAudit>,
    pub deaths: Vec<DeathAudit>,
}

pub struct StepOutput {
    pub events: Vec<EventRecord>,
    pub audit: StepAudit,
}

/// Action decided in phase 1, settled against the world in phases 2-4.
struct PendingAction {
    observation: Vec<f64>,
    action: [f64; ACTION_DIM],
    log_prob: f64,
    value: f64,
    clipped: [f64; ACTION_DIM],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Simulation {
    config: SimulationConfig,
    arena: Arena,
    /// Sorted by id; children append at the end with fresh ids.
    agents: Vec<AgentState>,
    next_agent_id: u64,
    step: u64,
    /// Contacts produced by the latest physics tick; next step's
    /// observations read them.
    contacts: Vec<Contact>,
    extinct: bool,
    /// Founder birth records (step 0). Kept apart from step events so a
    /// zero-step run has an empty step log.
    founding_events: Vec<EventRecord>,
}

impl Simulation {
    pub fn new(config: SimulationConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut arena = Arena::new(config.arena.clone(), config.physics);
        for population in 0..config.arena.foods.len() {
            let mut rng = substream(config.seed, StreamPurpose::FoodSpawn, 0, population as u64);
            arena.spawn_owed_foods(population, &mut rng);
        }

        let shape = PolicyShape {
            obs_dim: arena.observation_dim(),
            hidden_dim: config.rl.hidden_dim,
        };
        let has_extra = config.arena.foods.len() > 1;
        let founders = u64::from(config.population.initial_agents);
        let mut agents = Vec::with_capacity(founders as usize);
        let mut founding_events = Vec::with_capacity(founders as usize);
        for index in 0..founders {
            let mut placement = substream(config.seed, StreamPurpose::InitPlacement, 0, index);
            let center = sample_free_spot(&arena, &config.arena, &mut placement).ok_or_else(|| {
                ConfigError::Inconsistent(
                    "could not place all initial agents; the arena is too crowded".into(),
                )
            })?;
            let orientation = placement.gen_range(-PI..PI);
            let body = arena.add_agent_body(center, orientation);

            let mut weight_rng = substream(config.seed, StreamPurpose::InitWeights, 0, index);
            let weights = sample_initial_weights(&mut weight_rng, &config.reward, has_extra);
            let mut policy_rng = substream(config.seed, StreamPurpose::PolicyInit, 0, index);
            let (policy, adam) = init_policy(&mut policy_rng, shape, config.rl.actor_gain);

            founding_events.push(EventRecord {
                step: 0,
                kind: EventKind::Birth {
                    agent: index,
                    parent: None,
                    energy: config.population.initial_energy,
                    weights,
                },
            });
            agents.push(AgentState {
                id: index,
                body,
                energy: config.population.initial_energy,
                birth_step: 0,
                parent: None,
                reward: weights,
                policy,
                adam,
                buffer: RolloutBuffer::new(config.rl.hyper.rollout_steps),
            });
        }

        let contacts = arena.contacts_now();
        let extinct = agents.is_empty();
        Ok(Simulation {
            config,
            arena,
            agents,
            next_agent_id: founders,
            step: 0,
            contacts,
            extinct,
            founding_events,
        })
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn population(&self) -> usize {
        self.agents.len()
    }

    /// Number of completed steps; also the step stamp of the next events.
    pub fn current_step(&self) -> u64 {
        self.step
    }

    pub fn is_extinct(&self) -> bool {
        self.extinct
    }

    /// Founder birth records, all stamped step 0.
    pub fn founding_events(&self) -> &[EventRecord] {
        &self.founding_events
    }

    fn policy_shape(&self) -> PolicyShape {
        PolicyShape {
            obs_dim: self.arena.observation_dim(),
            hidden_dim: self.config.rl.hidden_dim,
        }
    }

    /// Advances one step and returns its events and energy audit. Safe to
    /// call on an extinct simulation: food keeps regrowing, nothing else
    /// happens.
    pub fn step(&mut self) -> StepOutput {
        let step = self.step + 1;
        let seed = self.config.seed;
        let populations = self.config.arena.foods.len();
        let mut events = Vec::new();
        let mut audit = StepAudit {
            step,
            total_energy_before: self.agents.iter().map(|a| a.energy).sum(),
            total_energy_after: 0.0,
            agents: Vec::with_capacity(self.agents.len()),
            births: Vec::new(),
            deaths: Vec::new(),
        };
        let corners_before: Vec<Option<usize>> = (0..populations)
            .map(|population| self.arena.relocation_corner(population))
            .collect();

        // Last step's deaths and eats removed bodies; their contacts no
        // longer exist for observation purposes.
        let world = &self.arena.world;
        self.contacts.retain(|contact| {
            world.body(contact.body_a).is_some()
                && match contact.body_b {
                    ContactTarget::Body(id) => world.body(id).is_some(),
                    ContactTarget::Wall(_) => true,
                }
        });

        // Phase 1: observe, learn, act.
        let hyper = self.config.rl.hyper;
        let mut pending: Vec<PendingAction> = Vec::with_capacity(self.agents.len());
        for agent in &mut self.agents {
            let observation =
                self.arena
                    .build_observation(agent.body, agent.energy, &self.contacts);
            let mut forward = agent.policy.forward(&observation);
            if agent.buffer.is_full() {
                // The pre-update value estimate bootstraps the rollout tail.
                let mut shuffle = substream(seed, StreamPurpose::PpoShuffle, step, agent.id);
                let stats = ppo_update(
                    &mut agent.policy,
                    &mut agent.adam,
                    &agent.buffer,
                    forward.value,
                    &hyper,
                    &mut shuffle,
                );
                agent.buffer.clear();
                events.push(EventRecord {
                    step,
                    kind: EventKind::Update {
                        agent: agent.id,
                        policy_loss: stats.policy_loss,
                        value_loss: stats.value_loss,
                        entropy: stats.entropy,
                        aborted: stats.aborted,
                    },
                });
                forward = agent.policy.forward(&observation);
            }
            let mut action_rng = substream(seed, StreamPurpose::Action, step, agent.id);
            let (action, log_prob) = sample_action(forward.mean, forward.std, &mut action_rng);
            let clipped = self.arena.apply_motor_action(agent.body, action);
            pending.push(PendingAction {
                observation,
                action,
                log_prob,
                value: forward.value,
                clipped,
            });
        }

        // Phase 2: physics.
        self.contacts = self.arena.world.step();

        // Phase 3: eating.
        let eat_events = self.arena.process_eating(&self.contacts);
        let mut food_gain = vec![0.0; self.agents.len()];
        let mut eaten_normal = vec![0u32; self.agents.len()];
        let mut eaten_extra = vec![0u32; self.agents.len()];
        let mut eaten_per_population = vec![0u32; populations];
        for eat in &eat_events {
            let index = self
                .agents
                .binary_search_by_key(&eat.agent_body, |a| a.body)
                .expect("eating body belongs to a live agent");
            let food = self.config.arena.foods[eat.population];
            food_gain[index] += food.energy_gain;
            if food.kind == FoodKind::Normal {
                eaten_normal[index] += 1;
            } else {
                eaten_extra[index] += 1;
            }
            eaten_per_population[eat.population] += 1;
            events.push(EventRecord {
                step,
                kind: EventKind::Eat {
                    agent: self.agents[index].id,
                    population: eat.population,
                    food_kind: food.kind,
                },
            });
        }

        // Phase 4: metabolize and store transitions.
        let metabolic = self.config.arena.metabolic;
        let reward_config = self.config.reward;
        for (index, (agent, decided)) in
            self.agents.iter_mut().zip(pending.into_iter()).enumerate()
        {
            let energy_before = agent.energy;
            let energy_after =
                metabolize(energy_before, food_gain[index], decided.clipped, &metabolic);
            agent.energy = energy_after;
            let action_norm =
                (decided.clipped[0] * decided.clipped[0] + decided.clipped[1] * decided.clipped[1])
                    .sqrt();
            let reward = compute_reward(
                &agent.reward,
                eaten_normal[index],
                eaten_extra[index],
                action_norm,
                &reward_config,
            );
            agent.buffer.push(Transition {
                observation: decided.observation,
                action: decided.action,
                log_prob: decided.log_prob,
                value: decided.value,
                reward,
                done: false,
            });
            audit.agents.push(AgentAudit {
                agent: agent.id,
                energy_before,
                food_gain: food_gain[index],
                clipped_action: decided.clipped,
                energy_after,
            });
        }

        // Phase 5: food regrowth and relocation.
        for population in 0..populations {
            let mut rng = substream(seed, StreamPurpose::FoodSpawn, step, population as u64);
            self.arena
                .regenerate_food(population, eaten_per_population[population], &mut rng);
            let corner = self.arena.relocation_corner(population);
            if corner != corners_before[population] {
                events.push(EventRecord {
                    step,
                    kind: EventKind::Relocation {
                        population,
                        corner: corner.expect("corner changes only for relocating spawns"),
                    },
                });
            }
        }

        // Phase 6: births then deaths over the agents that began the step.
        // An id is removed only at its own turn, so the lookups cannot miss.
        let capacity = self.config.population.capacity as usize;
        let eta = self.config.reproduction.energy_share_ratio;
        let snapshot: Vec<u64> = self.agents.iter().map(|a| a.id).collect();
        for id in snapshot {
            let index = self
                .agents
                .binary_search_by_key(&id, |a| a.id)
                .expect("agent survives until its own turn");

            // At capacity the birth draw is suppressed outright; no RNG is
            // consumed and no energy moves.
            if self.agents.len() < capacity {
                let parent_energy = self.agents[index].energy;
                let probability = birth_probability(parent_energy, &self.config.birth);
                let draw: f64 = substream(seed, StreamPurpose::Birth, step, id).gen();
                if draw < probability {
                    let parent_center = self
                        .arena
                        .world
                        .body(self.agents[index].body)
                        .expect("live agent has a body")
                        .center;
                    let mut placement =
                        substream(seed, StreamPurpose::ChildPlacement, step, id);
                    // A failed placement cancels the birth; the parent keeps
                    // its full energy.
                    if let Some(center) = try_place_child(
                        parent_center,
                        self.config.arena.agent_radius,
                        self.config.arena.size(),
                        &self.arena.world,
                        &mut placement,
                        &self.config.reproduction,
                    ) {
                        let orientation = placement.gen_range(-PI..PI);
                        let (parent_after, child_energy) = split_energy(parent_energy, eta);
                        let child_id = self.next_agent_id;
                        self.next_agent_id += 1;
                        let mut mutation = substream(seed, StreamPurpose::Mutation, step, id);
                        let weights =
                            mutate_weights(&self.agents[index].reward, &mut mutation, &self.config.mutation);
                        let mut policy_rng =
                            substream(seed, StreamPurpose::PolicyInit, step, child_id);
                        let (policy, adam) =
                            init_policy(&mut policy_rng, self.policy_shape(), self.config.rl.actor_gain);
                        let body = self.arena.add_agent_body(center, orientation);
                        self.agents[index].energy = parent_after;
                        events.push(EventRecord {
                            step,
                            kind: EventKind::Birth {
                                agent: child_id,
                                parent: Some(id),
                                energy: child_energy,
                                weights,
                            },
                        });
                        audit.births.push(BirthAudit {
                            parent: id,
                            child: child_id,
                            parent_energy_before: parent_energy,
                            parent_energy_after: parent_after,
                            child_energy,
                        });
                        self.agents.push(AgentState {
                            id: child_id,
                            body,
                            energy: child_energy,
                            birth_step: step,
                            parent: Some(id),
                            reward: weights,
                            policy,
                            adam,
                            buffer: RolloutBuffer::new(hyper.rollout_steps),
                        });
                    }
                }
            }

            let index = self
                .agents
                .binary_search_by_key(&id, |a| a.id)
                .expect("agent survives until its own turn");
            let age = step - self.agents[index].birth_step;
            let probability = hazard(age as f64, self.agents[index].energy, &self.config.hazard);
            let draw: f64 = substream(seed, StreamPurpose::Death, step, id).gen();
            if draw < probability {
                let agent = self.agents.remove(index);
                self.arena.remove_agent_body(agent.body);
                events.push(EventRecord {
                    step,
                    kind: EventKind::Death {
                        agent: id,
                        age,
                        energy: agent.energy,
                    },
                });
                audit.deaths.push(DeathAudit {
                    agent: id,
                    energy: agent.energy,
                });
            }
        }

        audit.total_energy_after = self.agents.iter().map(|a| a.energy).sum();
        self.extinct = self.agents.is_empty();
        self.step = step;
        StepOutput { events, audit }
    }
}

/// Uniform rejection sampling of a free agent spot over the whole arena.
fn sample_free_spot(arena: &Arena, config: &ArenaConfig, rng: &mut impl Rng) -> Option<Vec2> {
    let radius = config.agent_radius;
    for _ in 0..INIT_PLACEMENT_ATTEMPTS {
        let center = Vec2::new(
            rng.gen_range(radius..config.width - radius),
            rng.gen_range(radius..config.height - radius),
        );
        if arena.spot_is_free(center, radius) {
            return Some(center);
        }
    }
    None
}

pub struct RunOutput {
    pub simulation: Simulation,
    /// Founder birth records (step 0).
    pub founding_events: Vec<EventRecord>,
    /// Events from steps 1 through the final step.
    pub step_events: Vec<EventRecord>,
    pub metrics: Metrics,
}

impl RunOutput {
    /// Founders followed by step events: the canonical log.
    pub fn full_log(&self) -> Vec<EventRecord> {
        let mut log = self.founding_events.clone();
        log.extend(self.step_events.iter().cloned());
        log
    }
}

/// Runs until `config.max_steps` or extinction, whichever comes first.
pub fn run(config: &SimulationConfig) -> Result<RunOutput, ConfigError> {
    run_with(config, |_, _| {})
}

/// Like [`run`], invoking `on_step` after every step with the simulation
/// state and that step's output (checkpointing, progress, early probes).
pub fn run_with(
    config: &SimulationConfig,
    mut on_step: impl FnMut(&Simulation, &StepOutput),
) -> Result<RunOutput, ConfigError> {
    let mut simulation = Simulation::new(config.clone())?;
    let founding_events = simulation.founding_events.clone();
    let mut step_events = Vec::new();
    while simulation.step < config.max_steps && !simulation.extinct {
        let output = simulation.step();
        on_step(&simulation, &output);
        step_events.extend(output.events);
    }

    let mut log = founding_events.clone();
    log.extend(step_events.iter().cloned());
    let metrics = compute_metrics(&log, simulation.step, DEFAULT_METRIC_STRIDE);
    Ok(RunOutput {
        simulation,
        founding_events,
        step_events,
        metrics,
    })
}
