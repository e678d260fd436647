//! Minimal deterministic 2D rigid-body engine: dynamic circles, static wall
//! segments, impulse-based contact resolution, raycasting.
//!
//! Scope is deliberately narrow. Bodies are circles only, walls are static
//! segments, and friction defaults to zero, which keeps the solver exact for
//! the overdamped arena dynamics this crate simulates. Sensor bodies take
//! part in contact detection and raycasts but are invisible to the solver,
//! so overlapping them never produces forces.
//!
//! Determinism contract: bodies are stored sorted by id, contacts are
//! emitted in (body_a, body_b) order, and every routine iterates in that
//! order. Identical inputs produce bit-identical outputs.

mod contact;
mod raycast;
mod solver;

pub use contact::detect_contacts;
pub use raycast::{raycast, RayHit};
pub use solver::{correct_positions, integrate, solve_velocities};

use serde::{Deserialize, Serialize};

use crate::vec2::{wrap_angle, Vec2};

/// Stable body identifier. Ids are assigned by the caller and never reused
/// within one world.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default,
)]
pub struct BodyId(pub u64);

/// A rigid circle. `inverse_mass == 0` marks a static body; static bodies
/// ignore forces and never move.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Body {
    pub id: BodyId,
    pub center: Vec2,
    /// Heading in radians, kept in [-pi, pi).
    pub orientation: f64,
    pub linear_velocity: Vec2,
    pub angular_velocity: f64,
    pub radius: f64,
    pub inverse_mass: f64,
    pub inverse_inertia: f64,
    /// Sensor bodies report contacts but are skipped by the solver.
    pub is_sensor: bool,
    /// Force accumulator, consumed and cleared by integration.
    pub force: Vec2,
    /// Torque accumulator, consumed and cleared by integration.
    pub torque: f64,
}

impl Body {
    /// A dynamic circle at rest. Inertia follows the solid-disk formula
    /// I = m r^2 / 2.
    pub fn dynamic_circle(id: BodyId, center: Vec2, radius: f64, mass: f64) -> Self {
        Body {
            id,
            center,
            orientation: 0.0,
            linear_velocity: Vec2::ZERO,
            angular_velocity: 0.0,
            radius,
            inverse_mass: 1.0 / mass,
            inverse_inertia: 2.0 / (mass * radius * radius),
            is_sensor: false,
            force: Vec2::ZERO,
            torque: 0.0,
        }
    }

    /// A static sensor circle: detected by contacts and rays, ignored by the
    /// solver, never moves.
    pub fn static_sensor(id: BodyId, center: Vec2, radius: f64) -> Self {
        Body {
            id,
            center,
            orientation: 0.0,
            linear_velocity: Vec2::ZERO,
            angular_velocity: 0.0,
            radius,
            inverse_mass: 0.0,
            inverse_inertia: 0.0,
            is_sensor: true,
            force: Vec2::ZERO,
            torque: 0.0,
        }
    }

    pub fn is_static(&self) -> bool {
        self.inverse_mass == 0.0
    }
}

/// Static wall segment with distinct endpoints.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WallSegment {
    pub a: Vec2,
    pub b: Vec2,
}

/// What a contact's second participant is: another body or a wall, the
/// latter identified by its index in the world's wall list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContactTarget {
    Body(BodyId),
    Wall(usize),
}

/// One overlapping pair. `normal` is unit length and points from `body_a`
/// toward `body_b`; `penetration_depth` is the overlap along it. Impulse
/// accumulators persist across solver sweeps within one call.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Contact {
    pub body_a: BodyId,
    pub body_b: ContactTarget,
    pub normal: Vec2,
    pub penetration_depth: f64,
    pub contact_point: Vec2,
    pub accumulated_normal_impulse: f64,
    pub accumulated_tangent_impulse: f64,
}

/// Iteration counts and contact-resolution constants.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub velocity_iterations: usize,
    pub position_iterations: usize,
    /// Penetration below this depth is tolerated and never corrected.
    pub penetration_slop: f64,
    /// Fraction of the excess penetration removed per relaxed sweep.
    pub position_correction_factor: f64,
    pub restitution: f64,
    pub friction_coefficient: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            velocity_iterations: 8,
            position_iterations: 8,
            penetration_slop: 0.005,
            position_correction_factor: 0.2,
            restitution: 0.0,
            friction_coefficient: 0.0,
        }
    }
}

/// World-level stepping constants. Damping follows the implicit form
/// v <- v / (1 + dt * d), which is unconditionally stable.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    pub dt: f64,
    pub linear_damping: f64,
    pub angular_damping: f64,
    pub solver: SolverConfig,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig {
            dt: 1.0,
            linear_damping: 10.0,
            angular_damping: 25.0,
            solver: SolverConfig::default(),
        }
    }
}

/// Container for one simulated scene. Bodies are kept sorted by id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct World {
    pub config: WorldConfig,
    pub walls: Vec<WallSegment>,
    bodies: Vec<Body>,
}

impl World {
    pub fn new(config: WorldConfig) -> Self {
        World {
            config,
            walls: Vec::new(),
            bodies: Vec::new(),
        }
    }

    /// Inserts a body, preserving id order. Panics on a duplicate id: id
    /// reuse would corrupt contact bookkeeping.
    pub fn insert_body(&mut self, body: Body) {
        match self.bodies.binary_search_by_key(&body.id, |b| b.id) {
            Ok(_) => panic!("duplicate body id {:?}", body.id),
            Err(pos) => self.bodies.insert(pos, body),
        }
    }

    pub fn remove_body(&mut self, id: BodyId) -> Option<Body> {
        match self.bodies.binary_search_by_key(&id, |b| b.id) {
            Ok(pos) => Some(self.bodies.remove(pos)),
            Err(_) => None,
        }
    }

    pub fn body(&self, id: BodyId) -> Option<&Body> {
        self.bodies
            .binary_search_by_key(&id, |b| b.id)
            .ok()
            .map(|pos| &self.bodies[pos])
    }

    pub fn body_mut(&mut self, id: BodyId) -> Option<&mut Body> {
        match self.bodies.binary_search_by_key(&id, |b| b.id) {
            Ok(pos) => Some(&mut self.bodies[pos]),
            Err(_) => None,
        }
    }

    /// Bodies in id order.
    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    /// Adds `force` (and `torque`) to the body's accumulators for the next
    /// step.
    pub fn apply_force(&mut self, id: BodyId, force: Vec2, torque: f64) {
        if let Some(body) = self.body_mut(id) {
            body.force += force;
            body.torque += torque;
        }
    }

    /// Advances the world one step: accumulated forces and damping update
    /// velocities, contact impulses remove approach velocities, positions
    /// advance, and residual penetration is corrected. Returns the contacts
    /// present at the final configuration (including sensor overlaps).
    pub fn step(&mut self) -> Vec<Contact> {
        let dt = self.config.dt;
        let lin = 1.0 / (1.0 + dt * self.config.linear_damping);
        let ang = 1.0 / (1.0 + dt * self.config.angular_damping);
        for body in &mut self.bodies {
            if body.is_static() {
                continue;
            }
            body.linear_velocity += body.force * (body.inverse_mass * dt);
            body.angular_velocity += body.torque * body.inverse_inertia * dt;
            body.linear_velocity = body.linear_velocity * lin;
            body.angular_velocity *= ang;
            body.force = Vec2::ZERO;
            body.torque = 0.0;
        }

        let mut contacts = detect_contacts(&self.bodies, &self.walls);
        solve_velocities(&mut self.bodies, &mut contacts, &self.config.solver);

        for body in &mut self.bodies {
            if body.is_static() {
                continue;
            }
            body.center += body.linear_velocity * dt;
            body.orientation = wrap_angle(body.orientation + body.angular_velocity * dt);
        }

        correct_positions(&mut self.bodies, &self.walls, &self.config.solver);
        detect_contacts(&self.bodies, &self.walls)
    }

    /// Nearest ray hit within `max_range`, skipping `ignore` (normally the
    /// caster's own body).
    pub fn raycast(
        &self,
        origin: Vec2,
        direction: Vec2,
        max_range: f64,
        ignore: Option<BodyId>,
    ) -> Option<RayHit> {
        raycast(&self.bodies, &self.walls, origin, direction, max_range, ignore)
    }

    /// Total kinetic energy of the dynamic bodies.
    pub fn kinetic_energy(&self) -> f64 {
        self.bodies
            .iter()
            .filter(|b| !b.is_static())
            .map(|b| {
                let lin = 0.5 * b.linear_velocity.length_squared() / b.inverse_mass;
                let ang = if b.inverse_inertia > 0.0 {
                    0.5 * b.angular_velocity * b.angular_velocity / b.inverse_inertia
                } else {
                    0.0
                };
                lin + ang
            })
            .sum()
    }
}

/// Index of `id` in a slice sorted by id. Panics if absent: contacts always
/// refer to live bodies.
pub(crate) fn body_index(bodies: &[Body], id: BodyId) -> usize {
    bodies
        .binary_search_by_key(&id, |b| b.id)
        .expect("contact refers to a missing body")
}
