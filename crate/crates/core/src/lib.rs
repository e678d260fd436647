//! Deterministic embodied-evolution foraging simulator.
//!
//! A population of circular agents forages in a walled 2D arena. Each agent
//! carries a heritable linear reward function (weights over food intake and
//! motor effort) and learns to maximize it during its lifetime with PPO.
//! Agents reproduce and die through energy- and age-dependent birth and
//! hazard rules, so selection over reward weights emerges from population
//! dynamics rather than a centralized fitness ranking.
//!
//! The crate is organized around the simulation pipeline:
//!
//! - [`physics2d`]: rigid circles vs. static wall segments, sequential
//!   impulses with projected accumulated impulses and position correction.
//! - [`arena`]: food populations and regeneration, ray/collision sensing,
//!   motor-force application, metabolism.
//! - [`lifecycle`]: hazard and birth probabilities, survival curve,
//!   Cauchy weight mutation, child placement, energy sharing.
//! - [`reward`]: the evolvable reward function itself.
//! - [`rl`]: per-agent tanh-MLP actor-critic, GAE, clipped-surrogate PPO,
//!   Adam.
//! - [`engine`]: the step loop tying everything together, the event log,
//!   metrics, and checkpoints.
//!
//! Every run is a pure function of `(SimulationConfig, seed)`: random draws
//! come from counter-derived substreams (see [`rngs`]) and all iteration
//! orders are fixed, so two runs of the same configuration produce
//! byte-identical event logs.

pub mod arena;
pub mod config;
pub mod engine;
pub mod lifecycle;
pub mod physics2d;
pub mod reward;
pub mod rl;
pub mod rngs;
pub mod stats;
pub mod vec2;

pub use config::SimulationConfig;
pub use engine::Simulation;
pub use vec2::Vec2;
