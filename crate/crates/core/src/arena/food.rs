//! Food regeneration, spawning, and spawn-center relocation.
//!
//! Each population tracks a fractional accumulator n_t with
//! n_{t+1} = min(n_t + g - eaten_t, n_max). Whenever floor(n_t) exceeds the
//! number of live items, new foods spawn at positions drawn from the
//! population's distribution until the counts agree or placement fails.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::physics2d::Body;
use crate::vec2::Vec2;

use super::{Arena, SpawnDistribution};

/// Placement attempts per food before the spawn is skipped for this step.
const SPAWN_ATTEMPTS: usize = 100;

impl Arena {
    /// Advances one population's accumulator by one step and spawns any
    /// foods it now owes. `eaten_this_step` must count only this
    /// population's losses.
    pub fn regenerate_food(
        &mut self,
        population: usize,
        eaten_this_step: u32,
        rng: &mut impl Rng,
    ) {
        let config = self.config.foods[population];
        let state = &mut self.populations[population];
        state.accumulator = (state.accumulator + config.growth_rate - f64::from(eaten_this_step))
            .min(f64::from(config.n_max));
        // Eaten foods are a subset of live items, and live items never
        // exceed floor(n_t), so the accumulator cannot go negative.
        debug_assert!(state.accumulator >= 0.0);
        self.spawn_owed_foods(population, rng);
    }

    /// Spawns foods while the accumulator's floor exceeds the live count.
    /// A placement failure skips the remaining spawns; the accumulator is
    /// untouched, so the debt carries to the next step.
    pub fn spawn_owed_foods(&mut self, population: usize, rng: &mut impl Rng) {
        while (self.populations[population].accumulator.floor() as i64)
            > self.populations[population].items.len() as i64
        {
            let Some(center) = self.sample_spawn_position(population, rng) else {
                break;
            };
            let id = self.allocate_body_id();
            self.world
                .insert_body(Body::static_sensor(id, center, self.config.food_radius));
            let items = &mut self.populations[population].items;
            // Ids are monotone, so pushing keeps the list sorted.
            debug_assert!(items.last().is_none_or(|last| *last < id));
            items.push(id);
        }
    }

    /// Draws a free position from the population's spawn distribution,
    /// or `None` after `SPAWN_ATTEMPTS` collisions or out-of-bounds draws.
    fn sample_spawn_position(&self, population: usize, rng: &mut impl Rng) -> Option<Vec2> {
        let r = self.config.food_radius;
        for _ in 0..SPAWN_ATTEMPTS {
            let candidate = match self.config.foods[population].spawn {
                SpawnDistribution::Uniform => Vec2::new(
                    rng.gen_range(r..self.config.width - r),
                    rng.gen_range(r..self.config.height - r),
                ),
                SpawnDistribution::CenteredGaussian { std_fraction } => {
                    let center = self.config.size() * 0.5;
                    gaussian_around(center, std_fraction * self.config.width, rng)
                }
                SpawnDistribution::RelocatingGaussian { std_fraction, .. } => {
                    let center = self.spawn_center(population);
                    gaussian_around(center, std_fraction * self.config.width, rng)
                }
            };
            if self.spot_is_free(candidate, r) {
                return Some(candidate);
            }
        }
        None
    }

    /// Corner index (0..4) of a relocating spawn distribution, `None` for
    /// the other distributions. Advances once per `period` foods eaten.
    pub fn relocation_corner(&self, population: usize) -> Option<usize> {
        match self.config.foods[population].spawn {
            SpawnDistribution::RelocatingGaussian { period, .. } => {
                Some(((self.populations[population].total_eaten / period) % 4) as usize)
            }
            _ => None,
        }
    }

    /// Current center of the population's spawn distribution. For the
    /// relocating distribution the center advances clockwise through the
    /// inset corners, starting top-left, once per `period` foods eaten.
    pub fn spawn_center(&self, population: usize) -> Vec2 {
        match self.config.foods[population].spawn {
            SpawnDistribution::Uniform | SpawnDistribution::CenteredGaussian { .. } => {
                self.config.size() * 0.5
            }
            SpawnDistribution::RelocatingGaussian { margin_fraction, .. } => {
                let corner = self.relocation_corner(population).expect("relocating spawn");
                let mx = margin_fraction * self.config.width;
                let my = margin_fraction * self.config.height;
                let (w, h) = (self.config.width, self.config.height);
                match corner {
                    0 => Vec2::new(mx, h - my),
                    1 => Vec2::new(w - mx, h - my),
                    2 => Vec2::new(w - mx, my),
                    _ => Vec2::new(mx, my),
                }
            }
        }
    }

    /// Total live food items across populations.
    pub fn food_count(&self) -> usize {
        self.populations.iter().map(|p| p.items.len()).sum()
    }
}

fn gaussian_around(center: Vec2, std: f64, rng: &mut impl Rng) -> Vec2 {
    let normal = Normal::new(0.0, std).expect("positive spawn std");
    Vec2::new(center.x + normal.sample(rng), center.y + normal.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::{ArenaConfig, FoodKind, FoodKindConfig};
    use crate::physics2d::WorldConfig;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arena_with(food: FoodKindConfig) -> Arena {
        let config = ArenaConfig {
            width: 480.0,
            height: 360.0,
            // Small items keep placement rejections (which bias the
            // spawn-distribution statistics under test) negligible.
            food_radius: 4.0,
            foods: vec![food],
            ..ArenaConfig::default()
        };
        Arena::new(config, WorldConfig::default())
    }

    fn uniform_food(n_max: u32, growth_rate: f64) -> FoodKindConfig {
        FoodKindConfig {
            kind: FoodKind::Normal,
            energy_gain: 1.0,
            n_max,
            growth_rate,
            spawn: SpawnDistribution::Uniform,
        }
    }

    #[test]
    fn accumulator_tracks_growth_minus_eaten() {
        let mut arena = arena_with(uniform_food(100, 0.02));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        arena.populations[0].accumulator = 99.5;
        arena.regenerate_food(0, 2, &mut rng);
        assert_relative_eq!(arena.populations[0].accumulator, 97.52, max_relative = 1e-12);
    }

    #[test]
    fn accumulator_caps_at_n_max() {
        let mut arena = arena_with(uniform_food(100, 0.02));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        arena.populations[0].accumulator = 100.0;
        arena.regenerate_food(0, 0, &mut rng);
        assert_relative_eq!(arena.populations[0].accumulator, 100.0);
    }

    #[test]
    fn crossing_an_integer_spawns_one_food() {
        let mut arena = arena_with(uniform_food(100, 0.2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        arena.populations[0].accumulator = 5.9;
        arena.spawn_owed_foods(0, &mut rng);
        assert_eq!(arena.populations[0].items.len(), 5);
        arena.regenerate_food(0, 0, &mut rng);
        assert_relative_eq!(arena.populations[0].accumulator, 6.1, max_relative = 1e-12);
        assert_eq!(arena.populations[0].items.len(), 6);
    }

    #[test]
    fn initial_stock_fills_to_n_max() {
        let mut arena = arena_with(uniform_food(100, 0.02));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        arena.spawn_owed_foods(0, &mut rng);
        assert_eq!(arena.populations[0].items.len(), 100);
        assert_eq!(arena.food_count(), 100);
        // Every food is fully inside and none overlap.
        for &id in &arena.populations[0].items {
            let body = arena.world.body(id).unwrap();
            assert!(body.is_sensor);
            assert!(body.center.x >= 4.0 && body.center.x <= 476.0);
            assert!(body.center.y >= 4.0 && body.center.y <= 356.0);
        }
        let bodies = arena.world.bodies();
        for i in 0..bodies.len() {
            for j in (i + 1)..bodies.len() {
                let gap = (bodies[i].center - bodies[j].center).length();
                assert!(gap >= bodies[i].radius + bodies[j].radius);
            }
        }
    }

    #[test]
    fn crowded_arena_skips_spawns_without_losing_debt() {
        // An arena too small for its quota: placement fails and the
        // accumulator keeps the debt.
        let config = ArenaConfig {
            width: 30.0,
            height: 30.0,
            foods: vec![uniform_food(50, 0.02)],
            ..ArenaConfig::default()
        };
        let mut arena = Arena::new(config, WorldConfig::default());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        arena.spawn_owed_foods(0, &mut rng);
        let placed = arena.populations[0].items.len();
        assert!(placed < 50, "placed {placed} in a 30x30 arena");
        assert_relative_eq!(arena.populations[0].accumulator, 50.0);
    }

    #[test]
    fn centered_gaussian_concentrates_near_center() {
        let food = FoodKindConfig {
            spawn: SpawnDistribution::CenteredGaussian { std_fraction: 0.1 },
            ..uniform_food(100, 0.02)
        };
        let mut arena = arena_with(food);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        arena.spawn_owed_foods(0, &mut rng);
        let center = Vec2::new(240.0, 180.0);
        let mean_distance: f64 = arena.populations[0]
            .items
            .iter()
            .map(|&id| (arena.world.body(id).unwrap().center - center).length())
            .sum::<f64>()
            / arena.populations[0].items.len() as f64;
        // The 2D Gaussian radius has mean std * sqrt(pi / 2) ~ 60.2;
        // rejections near walls bias it slightly but not past 90.
        assert!(mean_distance < 90.0, "mean distance {mean_distance}");
    }

    #[test]
    fn relocation_advances_clockwise_after_each_period() {
        let food = FoodKindConfig {
            spawn: SpawnDistribution::RelocatingGaussian {
                std_fraction: 0.1,
                period: 1000,
                margin_fraction: 0.2,
            },
            ..uniform_food(100, 0.02)
        };
        let mut arena = arena_with(food);
        let corners = [
            Vec2::new(96.0, 288.0),
            Vec2::new(384.0, 288.0),
            Vec2::new(384.0, 72.0),
            Vec2::new(96.0, 72.0),
        ];
        assert_eq!(arena.spawn_center(0), corners[0]);
        arena.populations[0].total_eaten = 999;
        assert_eq!(arena.spawn_center(0), corners[0]);
        arena.populations[0].total_eaten = 1000;
        assert_eq!(arena.spawn_center(0), corners[1]);
        arena.populations[0].total_eaten = 2500;
        assert_eq!(arena.spawn_center(0), corners[2]);
        arena.populations[0].total_eaten = 3999;
        assert_eq!(arena.spawn_center(0), corners[3]);
        arena.populations[0].total_eaten = 4000;
        assert_eq!(arena.spawn_center(0), corners[0]);
    }

    #[test]
    fn accumulator_never_leaves_bounds_under_random_traffic() {
        let mut arena = arena_with(uniform_food(20, 0.4));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        arena.spawn_owed_foods(0, &mut rng);
        let mut reference = arena.populations[0].accumulator;
        for _ in 0..2000 {
            let live = arena.populations[0].items.len();
            let eaten = if live == 0 {
                0
            } else {
                rng.gen_range(0..=live.min(3)) as u32
            };
            // Remove the eaten foods directly, oldest first.
            for _ in 0..eaten {
                let id = arena.populations[0].items[0];
                arena.world.remove_body(id);
                arena.populations[0].items.remove(0);
                arena.populations[0].total_eaten += 1;
            }
            arena.regenerate_food(0, eaten, &mut rng);
            reference = (reference + 0.4 - f64::from(eaten)).min(20.0);
            let acc = arena.populations[0].accumulator;
            assert_relative_eq!(acc, reference, max_relative = 1e-9);
            assert!((0.0..=20.0).contains(&acc));
            assert!(arena.populations[0].items.len() as f64 <= acc.floor() + 0.5);
        }
    }
}
