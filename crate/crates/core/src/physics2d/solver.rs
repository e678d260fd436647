//! Sequential-impulse velocity solver, positional correction, and the
//! semi-implicit Euler integrator.
//!
//! The velocity solver is projected Gauss-Seidel over contact impulses: each
//! sweep removes the relative approach velocity at every contact, and the
//! accumulated normal impulse is clamped to be non-negative. With zero
//! restitution every impulse application weakly decreases kinetic energy,
//! which the property tests rely on.

use crate::vec2::{wrap_angle, Vec2};

use super::{body_index, detect_contacts, Body, Contact, ContactTarget, SolverConfig, WallSegment};

/// Residual penetration beyond the slop tolerated after position correction.
pub const POSITION_TOLERANCE: f64 = 1e-6;

/// Upper bound on full-projection polish sweeps. Relaxed sweeps alone decay
/// penetration geometrically and can leave more than the tolerance, so
/// correction finishes with full projections until the bound holds.
const MAX_POLISH_SWEEPS: usize = 64;

struct ContactPlan {
    contact_index: usize,
    index_a: usize,
    /// None for wall contacts; walls act as static bodies.
    index_b: Option<usize>,
    /// Restitution target, zero unless bodies approach at solve start.
    bias: f64,
}

/// Runs `velocity_iterations` sweeps of sequential impulses over the solid
/// contacts. Sensor contacts and static-static pairs are skipped. Impulse
/// accumulators live on the contacts and stay non-negative (normal) or
/// friction-clamped (tangent).
pub fn solve_velocities(bodies: &mut [Body], contacts: &mut [Contact], config: &SolverConfig) {
    let mut plans = Vec::with_capacity(contacts.len());
    for (contact_index, contact) in contacts.iter().enumerate() {
        let index_a = body_index(bodies, contact.body_a);
        let index_b = match contact.body_b {
            ContactTarget::Body(id) => Some(body_index(bodies, id)),
            ContactTarget::Wall(_) => None,
        };
        if bodies[index_a].is_sensor
            || index_b.map_or(false, |ib| bodies[ib].is_sensor)
        {
            continue;
        }
        let vn0 = {
            let (a, b) = pair(bodies, index_a, index_b);
            let (ra, rb) = arms(contact, a, b);
            relative_velocity(a, ra, b, rb).dot(contact.normal)
        };
        plans.push(ContactPlan {
            contact_index,
            index_a,
            index_b,
            bias: config.restitution * vn0.min(0.0),
        });
    }

    for _ in 0..config.velocity_iterations {
        for plan in &plans {
            let contact = &mut contacts[plan.contact_index];
            let (a, mut b) = pair_mut(bodies, plan.index_a, plan.index_b);
            let (ra, rb) = arms(contact, a, b.as_deref());

            let normal = contact.normal;
            let k_normal = effective_mass(a, ra, b.as_deref(), rb, normal);
            if k_normal > 0.0 {
                let vn = relative_velocity(a, ra, b.as_deref(), rb).dot(normal);
                let delta = -(vn + plan.bias) / k_normal;
                let new_total = (contact.accumulated_normal_impulse + delta).max(0.0);
                let applied = new_total - contact.accumulated_normal_impulse;
                contact.accumulated_normal_impulse = new_total;
                apply_impulse(a, ra, b.as_deref_mut(), rb, normal * applied);
            }

            if config.friction_coefficient > 0.0 {
                let tangent = normal.perp();
                let k_tangent = effective_mass(a, ra, b.as_deref(), rb, tangent);
                if k_tangent > 0.0 {
                    let vt = relative_velocity(a, ra, b.as_deref(), rb).dot(tangent);
                    let delta = -vt / k_tangent;
                    let limit = config.friction_coefficient * contact.accumulated_normal_impulse;
                    let new_total =
                        (contact.accumulated_tangent_impulse + delta).clamp(-limit, limit);
                    let applied = new_total - contact.accumulated_tangent_impulse;
                    contact.accumulated_tangent_impulse = new_total;
                    apply_impulse(a, ra, b.as_deref_mut(), rb, tangent * applied);
                }
            }
        }
    }
}

/// Removes penetration beyond `penetration_slop`: `position_iterations`
/// relaxed sweeps scaled by the correction factor, then full-projection
/// sweeps until the residual excess is at most [`POSITION_TOLERANCE`].
/// Contacts are re-detected every sweep so corrections compose. Static
/// bodies and sensor contacts never move anything.
pub fn correct_positions(bodies: &mut [Body], walls: &[WallSegment], config: &SolverConfig) {
    for _ in 0..config.position_iterations {
        correction_sweep(
            bodies,
            walls,
            config.position_correction_factor,
            config.penetration_slop,
        );
    }
    for _ in 0..MAX_POLISH_SWEEPS {
        if max_excess(bodies, walls, config.penetration_slop) <= POSITION_TOLERANCE {
            break;
        }
        correction_sweep(bodies, walls, 1.0, config.penetration_slop);
    }
}

fn correction_sweep(bodies: &mut [Body], walls: &[WallSegment], factor: f64, slop: f64) {
    let contacts = detect_contacts(bodies, walls);
    for contact in &contacts {
        let excess = contact.penetration_depth - slop;
        if excess <= 0.0 {
            continue;
        }
        let index_a = body_index(bodies, contact.body_a);
        let index_b = match contact.body_b {
            ContactTarget::Body(id) => Some(body_index(bodies, id)),
            ContactTarget::Wall(_) => None,
        };
        if bodies[index_a].is_sensor
            || index_b.map_or(false, |ib| bodies[ib].is_sensor)
        {
            continue;
        }
        let inv_a = bodies[index_a].inverse_mass;
        let inv_b = index_b.map_or(0.0, |ib| bodies[ib].inverse_mass);
        let total = inv_a + inv_b;
        if total == 0.0 {
            continue;
        }
        let push = contact.normal * (factor * excess / total);
        bodies[index_a].center -= push * inv_a;
        if let Some(ib) = index_b {
            bodies[ib].center += push * inv_b;
        }
    }
}

/// Deepest solid-contact penetration beyond the slop, zero when separated.
pub fn max_excess(bodies: &[Body], walls: &[WallSegment], slop: f64) -> f64 {
    detect_contacts(bodies, walls)
        .iter()
        .filter(|c| {
            let a_sensor = bodies[body_index(bodies, c.body_a)].is_sensor;
            let b_sensor = match c.body_b {
                ContactTarget::Body(id) => bodies[body_index(bodies, id)].is_sensor,
                ContactTarget::Wall(_) => false,
            };
            !a_sensor && !b_sensor
        })
        .map(|c| c.penetration_depth - slop)
        .fold(0.0, f64::max)
}

/// Semi-implicit Euler: accumulated forces update velocities first, then
/// positions advance with the new velocities. Static bodies are unchanged
/// and keep their accumulators cleared.
pub fn integrate(bodies: &mut [Body], dt: f64) {
    for body in bodies {
        if body.is_static() {
            body.force = Vec2::ZERO;
            body.torque = 0.0;
            continue;
        }
        body.linear_velocity += body.force * (body.inverse_mass * dt);
        body.angular_velocity += body.torque * body.inverse_inertia * dt;
        body.center += body.linear_velocity * dt;
        body.orientation = wrap_angle(body.orientation + body.angular_velocity * dt);
        body.force = Vec2::ZERO;
        body.torque = 0.0;
    }
}

fn pair<'a>(bodies: &'a [Body], ia: usize, ib: Option<usize>) -> (&'a Body, Option<&'a Body>) {
    (&bodies[ia], ib.map(|i| &bodies[i]))
}

/// Splits the slice into disjoint mutable references; detection guarantees
/// `ia < ib` because contacts order the pair by id and bodies are id-sorted.
fn pair_mut<'a>(
    bodies: &'a mut [Body],
    ia: usize,
    ib: Option<usize>,
) -> (&'a mut Body, Option<&'a mut Body>) {
    match ib {
        Some(ib) => {
            debug_assert!(ia < ib);
            let (left, right) = bodies.split_at_mut(ib);
            (&mut left[ia], Some(&mut right[0]))
        }
        None => (&mut bodies[ia], None),
    }
}

fn arms(contact: &Contact, a: &Body, b: Option<&Body>) -> (Vec2, Vec2) {
    let ra = contact.contact_point - a.center;
    let rb = b.map_or(Vec2::ZERO, |b| contact.contact_point - b.center);
    (ra, rb)
}

fn relative_velocity(a: &Body, ra: Vec2, b: Option<&Body>, rb: Vec2) -> Vec2 {
    let va = a.linear_velocity + ra.perp() * a.angular_velocity;
    let vb = b.map_or(Vec2::ZERO, |b| b.linear_velocity + rb.perp() * b.angular_velocity);
    vb - va
}

fn effective_mass(a: &Body, ra: Vec2, b: Option<&Body>, rb: Vec2, axis: Vec2) -> f64 {
    let mut k = a.inverse_mass + a.inverse_inertia * ra.cross(axis) * ra.cross(axis);
    if let Some(b) = b {
        k += b.inverse_mass + b.inverse_inertia * rb.cross(axis) * rb.cross(axis);
    }
    k
}

fn apply_impulse(a: &mut Body, ra: Vec2, b: Option<&mut Body>, rb: Vec2, impulse: Vec2) {
    a.linear_velocity -= impulse * a.inverse_mass;
    a.angular_velocity -= a.inverse_inertia * ra.cross(impulse);
    if let Some(b) = b {
        b.linear_velocity += impulse * b.inverse_mass;
        b.angular_velocity += b.inverse_inertia * rb.cross(impulse);
    }
}
