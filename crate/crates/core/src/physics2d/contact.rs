//! Contact detection: spatial-hash broadphase over circle pairs plus
//! brute-force circle-segment tests against the walls.

use std::collections::HashMap;

use crate::vec2::Vec2;

use super::{Body, Contact, ContactTarget, WallSegment};

/// Contacts for every overlapping circle-circle and circle-wall pair.
///
/// `bodies` must be sorted by id (the `World` invariant). Output is ordered
/// body-body pairs first, sorted by (body_a, body_b), then body-wall pairs
/// sorted by (body, wall index); within a pair `body_a` has the smaller id.
/// Pairs where both circles are sensors are omitted: nothing ever consumes
/// them.
pub fn detect_contacts(bodies: &[Body], walls: &[WallSegment]) -> Vec<Contact> {
    let mut contacts = Vec::new();

    for (ia, ib) in candidate_pairs(bodies) {
        let a = &bodies[ia];
        let b = &bodies[ib];
        if a.is_sensor && b.is_sensor {
            continue;
        }
        if let Some(contact) = circle_circle(a, b) {
            contacts.push(contact);
        }
    }

    for body in bodies {
        for (wall_index, wall) in walls.iter().enumerate() {
            if let Some(contact) = circle_segment(body, wall, wall_index) {
                contacts.push(contact);
            }
        }
    }

    contacts
}

/// Candidate index pairs (ia < ib) from a uniform grid with cell size twice
/// the largest radius, so every overlapping pair shares at least one cell.
/// Pairs are deduplicated and returned sorted, which fixes the contact order
/// independently of hash-map iteration.
fn candidate_pairs(bodies: &[Body]) -> Vec<(usize, usize)> {
    if bodies.len() < 2 {
        return Vec::new();
    }
    let max_radius = bodies.iter().map(|b| b.radius).fold(0.0, f64::max);
    let cell = (2.0 * max_radius).max(1e-9);

    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (index, body) in bodies.iter().enumerate() {
        let min_x = ((body.center.x - body.radius) / cell).floor() as i64;
        let max_x = ((body.center.x + body.radius) / cell).floor() as i64;
        let min_y = ((body.center.y - body.radius) / cell).floor() as i64;
        let max_y = ((body.center.y + body.radius) / cell).floor() as i64;
        for gx in min_x..=max_x {
            for gy in min_y..=max_y {
                grid.entry((gx, gy)).or_default().push(index);
            }
        }
    }

    let mut pairs = Vec::new();
    for slot in grid.values() {
        for (k, &ia) in slot.iter().enumerate() {
            for &ib in &slot[k + 1..] {
                pairs.push(if ia < ib { (ia, ib) } else { (ib, ia) });
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn circle_circle(a: &Body, b: &Body) -> Option<Contact> {
    let delta = b.center - a.center;
    let radius_sum = a.radius + b.radius;
    let dist_sq = delta.length_squared();
    if dist_sq >= radius_sum * radius_sum {
        return None;
    }
    let dist = dist_sq.sqrt();
    // Coincident centers have no defined normal; any unit vector separates.
    let normal = if dist > 1e-12 {
        delta / dist
    } else {
        Vec2::new(1.0, 0.0)
    };
    let depth = radius_sum - dist;
    Some(Contact {
        body_a: a.id,
        body_b: ContactTarget::Body(b.id),
        normal,
        penetration_depth: depth,
        contact_point: a.center + normal * (a.radius - 0.5 * depth),
        accumulated_normal_impulse: 0.0,
        accumulated_tangent_impulse: 0.0,
    })
}

/// Walls are one-sided: the half-plane to the left of `a -> b` is the solid
/// interior that bodies are confined to. Within the segment's span the
/// penetration is measured from the signed line distance, so a fast body
/// whose center crosses the wall line is still pushed back toward the
/// interior instead of being ejected on the far side. Beyond the endpoints
/// the contact falls back to two-sided rounding against the endpoint.
fn circle_segment(body: &Body, wall: &WallSegment, wall_index: usize) -> Option<Contact> {
    let ab = wall.b - wall.a;
    let t = (body.center - wall.a).dot(ab) / ab.length_squared();
    let (normal, depth, closest) = if (0.0..=1.0).contains(&t) {
        let inward = ab.perp().normalized();
        let s = (body.center - wall.a).dot(inward);
        if s >= body.radius {
            return None;
        }
        (-inward, body.radius - s, wall.a + ab * t)
    } else {
        let endpoint = if t < 0.0 { wall.a } else { wall.b };
        let delta = endpoint - body.center;
        let dist_sq = delta.length_squared();
        if dist_sq >= body.radius * body.radius || dist_sq <= 1e-24 {
            return None;
        }
        let dist = dist_sq.sqrt();
        (delta / dist, body.radius - dist, endpoint)
    };
    Some(Contact {
        body_a: body.id,
        body_b: ContactTarget::Wall(wall_index),
        normal,
        penetration_depth: depth,
        contact_point: closest,
        accumulated_normal_impulse: 0.0,
        accumulated_tangent_impulse: 0.0,
    })
}
