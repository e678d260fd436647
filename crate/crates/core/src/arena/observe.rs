//! Egocentric observations: frontal range sensors, contact sectors, and
//! proprioception, flattened into one vector.
//!
//! Layout, in order:
//! 1. `n_rays` blocks of `1 + kind_count` values: normalized hit distance
//!    (1.0 on miss) then a one-hot over what was hit.
//! 2. `SECTOR_COUNT * kind_count` touch flags, sectors ordered
//!    counterclockwise from the front-left boundary.
//! 3. Four self-state values: orientation / pi, velocity / velocity_norm
//!    (two components), energy / energy_norm.
//!
//! Kind indices: 0 is another agent, 1..=k are the food populations in
//! config order, and the last index is a wall.

use crate::physics2d::{Contact, ContactTarget};
use crate::vec2::{wrap_angle, Vec2};

use super::{Arena, FRONT_HALF_ANGLE};
use crate::physics2d::BodyId;

/// Number of 60-degree touch sectors around the body.
pub const SECTOR_COUNT: usize = 6;

/// Sector index for a relative bearing in [-pi, pi). Sector 0 is
/// [-60, 0) degrees, sector 1 is [0, 60), and indices continue
/// counterclockwise around the back.
pub fn sector_of(bearing: f64) -> usize {
    let idx = ((bearing + FRONT_HALF_ANGLE) / FRONT_HALF_ANGLE).floor() as i64;
    idx.rem_euclid(SECTOR_COUNT as i64) as usize
}

impl Arena {
    /// Distinguishable target kinds: agent, each food population, wall.
    pub fn kind_count(&self) -> usize {
        2 + self.config.foods.len()
    }

    pub fn observation_dim(&self) -> usize {
        self.config.n_rays * (1 + self.kind_count()) + SECTOR_COUNT * self.kind_count() + 4
    }

    fn kind_index(&self, target: ContactTarget) -> usize {
        match target {
            ContactTarget::Wall(_) => self.kind_count() - 1,
            ContactTarget::Body(id) => match self.food_population_of(id) {
                Some(population) => 1 + population,
                None => 0,
            },
        }
    }

    /// Ray bearings relative to the heading: evenly spaced across the
    /// frontal arc, endpoints included. An odd count puts one ray dead
    /// ahead.
    pub fn ray_angles(&self) -> Vec<f64> {
        let n = self.config.n_rays;
        if n == 1 {
            return vec![0.0];
        }
        (0..n)
            .map(|i| -FRONT_HALF_ANGLE + 2.0 * FRONT_HALF_ANGLE * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Builds the observation for one agent. `contacts` must be the
    /// contact set from the most recent detection pass; rays ignore the
    /// observer's own body but see everything else, sensors included.
    pub fn build_observation(&self, body_id: BodyId, energy: f64, contacts: &[Contact]) -> Vec<f64> {
        let body = self.world.body(body_id).expect("live agent body");
        let kinds = self.kind_count();
        let range = self.config.sensor_range();
        let mut obs = vec![0.0; self.observation_dim()];

        for (i, relative) in self.ray_angles().into_iter().enumerate() {
            let direction = Vec2::from_angle(body.orientation + relative);
            let base = i * (1 + kinds);
            match self.world.raycast(body.center, direction, range, Some(body_id)) {
                Some(hit) => {
                    obs[base] = hit.distance / range;
                    obs[base + 1 + self.kind_index(hit.target)] = 1.0;
                }
                None => obs[base] = 1.0,
            }
        }

        let sector_base = self.config.n_rays * (1 + kinds);
        for contact in contacts {
            let other = if contact.body_a == body_id {
                contact.body_b
            } else if contact.body_b == ContactTarget::Body(body_id) {
                ContactTarget::Body(contact.body_a)
            } else {
                continue;
            };
            let bearing =
                wrap_angle((contact.contact_point - body.center).angle() - body.orientation);
            let slot = sector_base + sector_of(bearing) * kinds + self.kind_index(other);
            obs[slot] = 1.0;
        }

        let self_base = sector_base + SECTOR_COUNT * kinds;
        obs[self_base] = body.orientation / std::f64::consts::PI;
        obs[self_base + 1] = body.linear_velocity.x / self.config.velocity_norm;
        obs[self_base + 2] = body.linear_velocity.y / self.config.velocity_norm;
        obs[self_base + 3] = energy / self.config.energy_norm;
        obs
    }
}
