//! Nearest-hit raycasting against circles and wall segments. Brute force:
//! ray counts are small (tens per step) and scenes hold at most a few
//! hundred objects.

use crate::vec2::Vec2;

use super::{Body, BodyId, ContactTarget, WallSegment};

/// Closest intersection along a ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayHit {
    pub distance: f64,
    pub point: Vec2,
    pub target: ContactTarget,
}

/// Nearest hit within `max_range` along `direction` (unit length) from
/// `origin`. `ignore` excludes one body, normally the caster itself. At
/// exactly equal distances the earlier candidate wins: bodies in id order,
/// then walls in index order.
pub fn raycast(
    bodies: &[Body],
    walls: &[WallSegment],
    origin: Vec2,
    direction: Vec2,
    max_range: f64,
    ignore: Option<BodyId>,
) -> Option<RayHit> {
    debug_assert!((direction.length() - 1.0).abs() < 1e-9);
    let mut best: Option<RayHit> = None;
    let mut best_distance = max_range;

    for body in bodies {
        if Some(body.id) == ignore {
            continue;
        }
        if let Some(t) = ray_circle(origin, direction, body.center, body.radius) {
            if t < best_distance {
                best_distance = t;
                best = Some(RayHit {
                    distance: t,
                    point: origin + direction * t,
                    target: ContactTarget::Body(body.id),
                });
            }
        }
    }

    for (index, wall) in walls.iter().enumerate() {
        if let Some(t) = ray_segment(origin, direction, wall.a, wall.b) {
            if t < best_distance {
                best_distance = t;
                best = Some(RayHit {
                    distance: t,
                    point: origin + direction * t,
                    target: ContactTarget::Wall(index),
                });
            }
        }
    }

    best
}

/// Smallest non-negative ray parameter hitting the circle. A ray starting
/// inside reports the exit point.
pub fn ray_circle(origin: Vec2, direction: Vec2, center: Vec2, radius: f64) -> Option<f64> {
    let oc = origin - center;
    let b = oc.dot(direction);
    let c = oc.length_squared() - radius * radius;
    let discriminant = b * b - c;
    if discriminant < 0.0 {
        return None;
    }
    let sqrt_d = discriminant.sqrt();
    let t_near = -b - sqrt_d;
    if t_near >= 0.0 {
        return Some(t_near);
    }
    let t_far = -b + sqrt_d;
    if t_far >= 0.0 {
        return Some(t_far);
    }
    None
}

/// Ray parameter at the segment crossing, if the forward ray reaches it.
/// Parallel (including collinear) configurations report no hit.
pub fn ray_segment(origin: Vec2, direction: Vec2, a: Vec2, b: Vec2) -> Option<f64> {
    let seg = b - a;
    let denom = direction.cross(seg);
    if denom.abs() < 1e-12 {
        return None;
    }
    let to_a = a - origin;
    let t = to_a.cross(seg) / denom;
    let s = to_a.cross(direction) / denom;
    if t >= 0.0 && (0.0..=1.0).contains(&s) {
        Some(t)
    } else {
        None
    }
}
