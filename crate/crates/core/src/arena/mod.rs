//! The foraging environment: a walled rectangle holding agent bodies and
//! regenerating food populations, plus the sensing, eating, motor,
//! and metabolism rules that connect agents to it.
//!
//! The arena owns the physics [`World`]. Agents and foods are circles; food
//! circles are static sensors, so they are seen and eaten but never push
//! anything. Agent-relative geometry uses bearings in [-pi, pi), with the
//! frontal arc (mouth and range sensors) spanning 120 degrees.

pub mod food;
pub mod observe;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lifecycle::position_is_free;
use crate::physics2d::{
    detect_contacts, Body, BodyId, Contact, ContactTarget, WallSegment, World, WorldConfig,
};
use crate::vec2::{wrap_angle, Vec2};

/// Half-angle of the frontal arc shared by the mouth and the range sensors.
pub const FRONT_HALF_ANGLE: f64 = std::f64::consts::FRAC_PI_3;

/// Food taxonomy. A single experiment uses `Normal` plus at most one other
/// kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoodKind {
    Normal,
    Poor,
    Poison,
}

/// Where new food appears.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SpawnDistribution {
    /// Uniform over the arena interior.
    Uniform,
    /// Isotropic Gaussian at the arena center, std as a fraction of width.
    CenteredGaussian { std_fraction: f64 },
    /// Isotropic Gaussian whose center advances clockwise through the four
    /// corners (inset by `margin_fraction` of each dimension) after every
    /// `period` foods eaten from this population.
    RelocatingGaussian {
        std_fraction: f64,
        period: u64,
        margin_fraction: f64,
    },
}

/// Static configuration of one food population.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoodKindConfig {
    pub kind: FoodKind,
    /// Energy gained (or lost, for poison) by eating one item.
    pub energy_gain: f64,
    pub n_max: u32,
    pub growth_rate: f64,
    pub spawn: SpawnDistribution,
}

/// Per-step metabolic costs.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetabolicParams {
    pub e_basic: f64,
    pub e_act: f64,
}

impl Default for MetabolicParams {
    fn default() -> Self {
        MetabolicParams {
            e_basic: 0.001,
            e_act: 2e-5,
        }
    }
}

/// Arena geometry, body constants, sensing layout, and food populations.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaConfig {
    pub width: f64,
    pub height: f64,
    pub agent_radius: f64,
    pub agent_mass: f64,
    /// Foods are static sensors, so their radius sets only the sensing
    /// and eating cross-section, not any collision response.
    pub food_radius: f64,
    /// Rays spread evenly across the frontal 120-degree arc.
    pub n_rays: usize,
    /// Max ray range as a fraction of arena width.
    pub sensor_range_fraction: f64,
    /// Velocity components are divided by this in observations.
    pub velocity_norm: f64,
    /// Energy is divided by this in observations.
    pub energy_norm: f64,
    pub action_min: f64,
    pub action_max: f64,
    pub foods: Vec<FoodKindConfig>,
    pub metabolic: MetabolicParams,
}

impl Default for ArenaConfig {
    fn default() -> Self {
        ArenaConfig {
            width: 480.0,
            height: 360.0,
            agent_radius: 10.0,
            agent_mass: 1.0,
            food_radius: 10.0,
            n_rays: 16,
            sensor_range_fraction: 0.5,
            velocity_norm: 20.0,
            energy_norm: 20.0,
            action_min: -20.0,
            action_max: 80.0,
            foods: vec![FoodKindConfig {
                kind: FoodKind::Normal,
                energy_gain: 1.0,
                n_max: 100,
                growth_rate: 0.02,
                spawn: SpawnDistribution::Uniform,
            }],
            metabolic: MetabolicParams::default(),
        }
    }
}

impl ArenaConfig {
    pub fn size(&self) -> Vec2 {
        Vec2::new(self.width, self.height)
    }

    pub fn sensor_range(&self) -> f64 {
        self.sensor_range_fraction * self.width
    }
}

/// Mutable state of one food population.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoodPopulationState {
    /// The fractional food-count accumulator n_t.
    pub accumulator: f64,
    /// Live food body ids, sorted.
    pub items: Vec<BodyId>,
    /// Cumulative eaten count, drives spawn-center relocation.
    pub total_eaten: u64,
}

/// One food consumed by one agent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EatEvent {
    pub agent_body: BodyId,
    pub food_body: BodyId,
    pub population: usize,
}

/// The environment: physics world, walls, and food populations. Body ids
/// for agents and foods come from one monotone counter and are never
/// reused.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arena {
    pub config: ArenaConfig,
    pub world: World,
    pub populations: Vec<FoodPopulationState>,
    next_body_id: u64,
}

impl Arena {
    pub fn new(config: ArenaConfig, world_config: WorldConfig) -> Self {
        let mut world = World::new(world_config);
        let w = config.width;
        let h = config.height;
        let corners = [
            Vec2::new(0.0, 0.0),
            Vec2::new(w, 0.0),
            Vec2::new(w, h),
            Vec2::new(0.0, h),
        ];
        for i in 0..4 {
            world.walls.push(WallSegment {
                a: corners[i],
                b: corners[(i + 1) % 4],
            });
        }
        let populations = config
            .foods
            .iter()
            .map(|f| FoodPopulationState {
                accumulator: f64::from(f.n_max),
                items: Vec::new(),
                total_eaten: 0,
            })
            .collect();
        Arena {
            config,
            world,
            populations,
            next_body_id: 0,
        }
    }

    pub fn allocate_body_id(&mut self) -> BodyId {
        let id = BodyId(self.next_body_id);
        self.next_body_id += 1;
        id
    }

    /// Inserts a dynamic agent circle and returns its body id.
    pub fn add_agent_body(&mut self, center: Vec2, orientation: f64) -> BodyId {
        let id = self.allocate_body_id();
        let mut body =
            Body::dynamic_circle(id, center, self.config.agent_radius, self.config.agent_mass);
        body.orientation = wrap_angle(orientation);
        self.world.insert_body(body);
        id
    }

    pub fn remove_agent_body(&mut self, id: BodyId) {
        self.world.remove_body(id);
    }

    /// Population index of a food body, `None` for agents.
    pub fn food_population_of(&self, id: BodyId) -> Option<usize> {
        self.populations
            .iter()
            .position(|p| p.items.binary_search(&id).is_ok())
    }

    pub fn is_agent_body(&self, id: BodyId) -> bool {
        self.world.body(id).is_some() && self.food_population_of(id).is_none()
    }

    /// Contacts at the current configuration, without stepping. Used to
    /// seed observations before the first physics step.
    pub fn contacts_now(&self) -> Vec<Contact> {
        detect_contacts(self.world.bodies(), &self.world.walls)
    }

    /// Clips the (left, right) motor action to the actuator range and
    /// applies the resulting thrust and differential-drive torque to the
    /// body's accumulators. Returns the clipped action.
    pub fn apply_motor_action(&mut self, body_id: BodyId, action: [f64; 2]) -> [f64; 2] {
        let clipped = [
            action[0].clamp(self.config.action_min, self.config.action_max),
            action[1].clamp(self.config.action_min, self.config.action_max),
        ];
        let body = self.world.body_mut(body_id).expect("live agent body");
        let heading = Vec2::from_angle(body.orientation);
        body.force += heading * (clipped[0] + clipped[1]);
        body.torque += body.radius * (clipped[1] - clipped[0]);
        clipped
    }

    /// Consumes foods whose contact bearing lies within the mouth arc.
    /// Each food goes to at most one agent; on simultaneous touches the
    /// lowest body id (the oldest agent) wins. Consumed food bodies are
    /// removed and per-population eaten counters advance. Events come back
    /// sorted by food id.
    pub fn process_eating(&mut self, contacts: &[Contact]) -> Vec<EatEvent> {
        let mut winners: BTreeMap<BodyId, (BodyId, usize)> = BTreeMap::new();
        for contact in contacts {
            let ContactTarget::Body(second) = contact.body_b else {
                continue;
            };
            let first = contact.body_a;
            let (agent, food, population) = if let Some(p) = self.food_population_of(second) {
                (first, second, p)
            } else if let Some(p) = self.food_population_of(first) {
                (second, first, p)
            } else {
                continue;
            };
            if !self.is_agent_body(agent) {
                continue;
            }
            let body = self.world.body(agent).expect("agent body");
            let bearing =
                wrap_angle((contact.contact_point - body.center).angle() - body.orientation);
            if bearing.abs() <= FRONT_HALF_ANGLE {
                winners
                    .entry(food)
                    .and_modify(|(best, _)| {
                        if agent < *best {
                            *best = agent;
                        }
                    })
                    .or_insert((agent, population));
            }
        }

        let mut events = Vec::with_capacity(winners.len());
        for (food, (agent, population)) in winners {
            self.world.remove_body(food);
            let state = &mut self.populations[population];
            let index = state.items.binary_search(&food).expect("eaten food tracked");
            state.items.remove(index);
            state.total_eaten += 1;
            events.push(EatEvent {
                agent_body: agent,
                food_body: food,
                population,
            });
        }
        events
    }

    /// True when a disc of `radius` at `center` fits inside the arena
    /// without touching any body.
    pub fn spot_is_free(&self, center: Vec2, radius: f64) -> bool {
        position_is_free(center, radius, self.config.size(), &self.world)
    }
}

/// Energy after one step: food gains minus action cost (L2 norm of the
/// clipped action) minus basal cost. Energy is unbounded in both
/// directions; starvation is the hazard function's business.
pub fn metabolize(energy: f64, food_gain: f64, clipped_action: [f64; 2], params: &MetabolicParams) -> f64 {
    let action_norm =
        (clipped_action[0] * clipped_action[0] + clipped_action[1] * clipped_action[1]).sqrt();
    energy + food_gain - params.e_act * action_norm - params.e_basic
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_arena() -> Arena {
        let config = ArenaConfig {
            width: 200.0,
            height: 200.0,
            ..ArenaConfig::default()
        };
        Arena::new(config, WorldConfig::default())
    }

    /// Inserts one food body directly into the first population.
    fn place_food(arena: &mut Arena, center: Vec2) -> BodyId {
        let id = arena.allocate_body_id();
        arena
            .world
            .insert_body(Body::static_sensor(id, center, arena.config.food_radius));
        arena.populations[0].items.push(id);
        arena.populations[0].items.sort();
        id
    }

    #[test]
    fn motor_action_is_clipped() {
        let mut arena = small_arena();
        let agent = arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
        let clipped = arena.apply_motor_action(agent, [100.0, -50.0]);
        assert_eq!(clipped, [80.0, -20.0]);
    }

    #[test]
    fn zero_action_applies_nothing() {
        let mut arena = small_arena();
        let agent = arena.add_agent_body(Vec2::new(100.0, 100.0), 0.7);
        arena.apply_motor_action(agent, [0.0, 0.0]);
        let body = arena.world.body(agent).unwrap();
        assert_eq!(body.force, Vec2::ZERO);
        assert_eq!(body.torque, 0.0);
    }

    #[test]
    fn symmetric_action_gives_pure_thrust() {
        let mut arena = small_arena();
        let agent = arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
        arena.apply_motor_action(agent, [80.0, 80.0]);
        let body = arena.world.body(agent).unwrap();
        assert_relative_eq!(body.force.x, 160.0);
        assert_relative_eq!(body.force.y, 0.0);
        assert_eq!(body.torque, 0.0);
    }

    #[test]
    fn asymmetric_action_turns_toward_stronger_side() {
        let mut arena = small_arena();
        let agent = arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
        // Stronger right motor turns left: positive (counterclockwise)
        // torque with lever arm equal to the body radius.
        arena.apply_motor_action(agent, [10.0, 30.0]);
        let body = arena.world.body(agent).unwrap();
        assert_relative_eq!(body.torque, 10.0 * 20.0);
    }

    #[test]
    fn contact_in_mouth_is_eaten() {
        let mut arena = small_arena();
        let agent = arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
        let food = place_food(&mut arena, Vec2::new(113.0, 100.0));
        let contacts = arena.contacts_now();
        let events = arena.process_eating(&contacts);
        assert_eq!(
            events,
            vec![EatEvent {
                agent_body: agent,
                food_body: food,
                population: 0
            }]
        );
        assert!(arena.world.body(food).is_none());
        assert_eq!(arena.populations[0].total_eaten, 1);
        assert!(arena.populations[0].items.is_empty());
    }

    #[test]
    fn contact_at_ninety_degrees_is_not_eaten() {
        let mut arena = small_arena();
        arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
        place_food(&mut arena, Vec2::new(100.0, 113.0));
        let contacts = arena.contacts_now();
        assert!(arena.process_eating(&contacts).is_empty());
        assert_eq!(arena.populations[0].items.len(), 1);
    }

    #[test]
    fn simultaneous_touch_goes_to_lowest_id() {
        let mut arena = small_arena();
        let first = arena.add_agent_body(Vec2::new(87.0, 100.0), 0.0);
        let _second = arena.add_agent_body(Vec2::new(113.0, 100.0), std::f64::consts::PI);
        let food = place_food(&mut arena, Vec2::new(100.0, 100.0));
        let contacts = arena.contacts_now();
        let events = arena.process_eating(&contacts);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].agent_body, first);
        assert_eq!(events[0].food_body, food);
    }

    #[test]
    fn mouth_arc_fuzz_matches_bearing_rule() {
        let base = {
            let mut arena = small_arena();
            arena.add_agent_body(Vec2::new(100.0, 100.0), 0.0);
            place_food(&mut arena, Vec2::new(113.0, 100.0));
            arena
        };
        // Food sits at world bearing 0 from the agent; rotating the agent
        // by theta puts the contact at relative bearing -theta.
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..10_000 {
            let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let mut arena = base.clone();
            arena.world.body_mut(BodyId(0)).unwrap().orientation = theta;
            let contacts = arena.contacts_now();
            let eaten = !arena.process_eating(&contacts).is_empty();
            let bearing = wrap_angle(-theta);
            assert_eq!(eaten, bearing.abs() <= FRONT_HALF_ANGLE, "theta = {theta}");
        }
    }

    #[test]
    fn metabolize_matches_hand_computed_costs() {
        let params = MetabolicParams::default();
        let e = metabolize(20.0, 0.0, [80.0, 80.0], &params);
        assert_relative_eq!(
            e - 20.0,
            -2e-5 * 12800.0f64.sqrt() - 0.001,
            max_relative = 1e-12
        );
        let e = metabolize(5.0, 1.0, [0.0, 0.0], &params);
        assert_relative_eq!(e, 5.999);
        let e = metabolize(5.0, -0.6, [0.0, 0.0], &params);
        assert_relative_eq!(e, 4.399);
    }

    #[test]
    fn walls_enclose_the_arena() {
        let arena = small_arena();
        assert_eq!(arena.world.walls.len(), 4);
        // A body pushed past a wall is corrected back inside over steps.
        let mut arena = arena;
        let agent = arena.add_agent_body(Vec2::new(15.0, 100.0), std::f64::consts::PI);
        for _ in 0..50 {
            arena.apply_motor_action(agent, [80.0, 80.0]);
            arena.world.step();
        }
        let center = arena.world.body(agent).unwrap().center;
        assert!(center.x >= arena.config.agent_radius - 0.01, "x = {}", center.x);
    }
}
