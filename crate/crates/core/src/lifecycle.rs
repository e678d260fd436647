//! Demography: per-step hazard and birth probabilities, the closed-form
//! survival curve, reproduction (energy split, child placement), and
//! heritable-weight mutation.
//!
//! All functions are pure given an explicit RNG, so callers control draw
//! order and the whole module stays deterministic under the engine's
//! substream scheme.

use rand::Rng;
use rand_distr::{Cauchy, Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::physics2d::World;
use crate::reward::RewardParams;
use crate::vec2::Vec2;

/// Hazard h(t, e) = kappa_h / (1 + alpha_e * exp(beta_he * e))
///                + alpha_a * exp(beta_a * t).
///
/// The energy term falls with energy (well-fed agents rarely die), the age
/// term grows exponentially and dominates near the maximum lifetime.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HazardParams {
    pub kappa_h: f64,
    pub alpha_e: f64,
    pub beta_he: f64,
    pub alpha_a: f64,
    pub beta_a: f64,
}

impl Default for HazardParams {
    fn default() -> Self {
        HazardParams {
            kappa_h: 0.01,
            alpha_e: 0.02,
            beta_he: 0.2,
            alpha_a: 2e-7,
            beta_a: 4e-6,
        }
    }
}

/// Which way the birth sigmoid faces. `Increasing` (the default) makes birth
/// more likely at high energy; `Decreasing` is kept selectable for audits of
/// the opposite orientation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BirthOrientation {
    #[default]
    Increasing,
    Decreasing,
}

/// Birth probability b(e) = kappa_b / (1 + exp(-+ beta_b * e)), saturating
/// at kappa_b.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirthParams {
    pub kappa_b: f64,
    pub beta_b: f64,
    #[serde(default)]
    pub orientation: BirthOrientation,
}

impl Default for BirthParams {
    fn default() -> Self {
        BirthParams {
            kappa_b: 4e-4,
            beta_b: 0.1,
            orientation: BirthOrientation::Increasing,
        }
    }
}

/// Cauchy mutation noise applied to each inherited weight, then clipped.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationParams {
    pub cauchy_scale: f64,
    pub clip_min: f64,
    pub clip_max: f64,
}

impl Default for MutationParams {
    fn default() -> Self {
        MutationParams {
            cauchy_scale: 0.02,
            clip_min: crate::reward::WEIGHT_MIN,
            clip_max: crate::reward::WEIGHT_MAX,
        }
    }
}

/// Energy sharing and child placement.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproductionParams {
    /// Fraction of the parent's energy inherited by the child.
    pub energy_share_ratio: f64,
    /// Placement Gaussian std as a fraction of arena width.
    pub placement_std_fraction: f64,
    pub placement_attempts: u32,
}

impl Default for ReproductionParams {
    fn default() -> Self {
        ReproductionParams {
            energy_share_ratio: 0.4,
            placement_std_fraction: 0.08,
            placement_attempts: 10,
        }
    }
}

/// Per-step death probability, clamped to [0, 1]. Overflow-safe: huge
/// positive energies drive the energy term to 0, huge ages saturate at 1.
pub fn hazard(age: f64, energy: f64, params: &HazardParams) -> f64 {
    let energy_term = params.kappa_h / (1.0 + params.alpha_e * (params.beta_he * energy).exp());
    let age_term = params.alpha_a * (params.beta_a * age).exp();
    (energy_term + age_term).clamp(0.0, 1.0)
}

/// Survival to `age` at fixed energy: exp of the negative cumulative hazard.
/// The hazard integrates in closed form, with `exp_m1` keeping the age term
/// accurate for small `beta_a * age`.
pub fn survival(age: f64, energy: f64, params: &HazardParams) -> f64 {
    let energy_hazard =
        params.kappa_h / (1.0 + params.alpha_e * (params.beta_he * energy).exp());
    let cumulative =
        energy_hazard * age + (params.alpha_a / params.beta_a) * (params.beta_a * age).exp_m1();
    (-cumulative).exp()
}

/// Per-step reproduction probability, bounded by `kappa_b`.
pub fn birth_probability(energy: f64, params: &BirthParams) -> f64 {
    let exponent = match params.orientation {
        BirthOrientation::Increasing => -params.beta_b * energy,
        BirthOrientation::Decreasing => params.beta_b * energy,
    };
    params.kappa_b / (1.0 + exponent.exp())
}

/// Each weight independently perturbed by Cauchy(0, scale) noise, clipped to
/// the weight bounds. Draw order (w_food, w_act, w_extra) is fixed.
pub fn mutate_weights(
    parent: &RewardParams,
    rng: &mut impl Rng,
    params: &MutationParams,
) -> RewardParams {
    let cauchy = Cauchy::new(0.0, params.cauchy_scale).expect("cauchy_scale must be positive");
    let mut perturb =
        |w: f64| (w + cauchy.sample(rng)).clamp(params.clip_min, params.clip_max);
    RewardParams {
        w_food: perturb(parent.w_food),
        w_act: perturb(parent.w_act),
        w_extra: parent.w_extra.map(&mut perturb),
    }
}

/// Endpoints of `trials` independent random walks of `steps` mutations from
/// the zero weights: the null model for where drift alone takes the weights.
pub fn random_walk_characterization(
    steps: u32,
    trials: u32,
    has_extra: bool,
    rng: &mut impl Rng,
    params: &MutationParams,
) -> Vec<RewardParams> {
    (0..trials)
        .map(|_| {
            let mut weights = RewardParams::zeros(has_extra);
            for _ in 0..steps {
                weights = mutate_weights(&weights, rng, params);
            }
            weights
        })
        .collect()
}

/// (parent_energy', child_energy) after reproduction. The child takes
/// eta * e and the parent keeps the exact remainder, so the total is
/// conserved bit-for-bit.
pub fn split_energy(parent_energy: f64, eta: f64) -> (f64, f64) {
    let child = eta * parent_energy;
    (parent_energy - child, child)
}

/// True when a disc at `center` lies fully inside the arena rectangle
/// [0, w] x [0, h] and overlaps no existing body.
pub fn position_is_free(center: Vec2, radius: f64, arena_size: Vec2, world: &World) -> bool {
    if center.x < radius
        || center.y < radius
        || center.x > arena_size.x - radius
        || center.y > arena_size.y - radius
    {
        return false;
    }
    world.bodies().iter().all(|body| {
        (body.center - center).length_squared()
            >= (radius + body.radius) * (radius + body.radius)
    })
}

/// Samples up to `placement_attempts` positions from an isotropic Gaussian
/// around the parent (std = placement_std_fraction * arena width) and
/// returns the first conflict-free one. `None` cancels the birth.
pub fn try_place_child(
    parent_center: Vec2,
    child_radius: f64,
    arena_size: Vec2,
    world: &World,
    rng: &mut impl Rng,
    params: &ReproductionParams,
) -> Option<Vec2> {
    let std = params.placement_std_fraction * arena_size.x;
    let normal = Normal::new(0.0, std).expect("placement std must be finite and >= 0");
    for _ in 0..params.placement_attempts {
        let candidate =
            parent_center + Vec2::new(normal.sample(rng), normal.sample(rng));
        if position_is_free(candidate, child_radius, arena_size, world) {
            return Some(candidate);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics2d::{Body, BodyId, WorldConfig};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hazard_matches_direct_evaluation() {
        let p = HazardParams::default();
        assert_relative_eq!(
            hazard(0.0, 0.0, &p),
            0.01 / 1.02 + 2e-7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hazard(0.0, 20.0, &p),
            0.01 / (1.0 + 0.02 * 4.0f64.exp()) + 2e-7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            hazard(1e6, 20.0, &p),
            0.01 / (1.0 + 0.02 * 4.0f64.exp()) + 2e-7 * 4.0f64.exp(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn hazard_is_monotone_on_a_grid() {
        let p = HazardParams::default();
        for i in 0..100 {
            let age = i as f64 * 1e4;
            for j in 0..99 {
                let e0 = -10.0 + j as f64 * 0.5;
                let e1 = e0 + 0.5;
                assert!(hazard(age, e0, &p) >= hazard(age, e1, &p));
            }
        }
        for j in 0..100 {
            let e = -10.0 + j as f64 * 0.5;
            for i in 0..99 {
                let t0 = i as f64 * 1e4;
                assert!(hazard(t0 + 1e4, e, &p) >= hazard(t0, e, &p));
            }
        }
    }

    #[test]
    fn hazard_is_overflow_safe() {
        let p = HazardParams::default();
        for &e in &[-1e4, 1e4] {
            let h = hazard(0.0, e, &p);
            assert!(h.is_finite() && (0.0..=1.0).contains(&h), "h = {h}");
        }
        assert_eq!(hazard(1e12, 0.0, &p), 1.0);
    }

    #[test]
    fn survival_starts_at_one_and_decreases() {
        let p = HazardParams::default();
        assert_eq!(survival(0.0, 5.0, &p), 1.0);
        let mut last = 1.0;
        for i in 1..=100 {
            let s = survival(i as f64 * 1e4, 5.0, &p);
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn survival_orders_by_energy() {
        let p = HazardParams::default();
        assert!(survival(1e5, 20.0, &p) > survival(1e5, 0.0, &p));
    }

    #[test]
    fn survival_matches_trapezoid_integration() {
        // Numeric oracle: trapezoid rule over the hazard at fixed energy.
        let p = HazardParams::default();
        let t_end = 1e5;
        let n = 100_000;
        let dt = t_end / n as f64;
        let energy = 20.0;
        let mut integral = 0.0;
        for i in 0..n {
            let a = hazard(i as f64 * dt, energy, &p);
            let b = hazard((i + 1) as f64 * dt, energy, &p);
            integral += 0.5 * (a + b) * dt;
        }
        let expected = (-integral).exp();
        assert!((survival(t_end, energy, &p) - expected).abs() < 1e-6);
    }

    #[test]
    fn birth_matches_direct_evaluation() {
        let p = BirthParams::default();
        assert_relative_eq!(birth_probability(0.0, &p), 2e-4, max_relative = 1e-12);
        assert_relative_eq!(
            birth_probability(20.0, &p),
            4e-4 / (1.0 + (-2.0f64).exp()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn birth_increases_and_saturates() {
        let p = BirthParams::default();
        let mut last = 0.0;
        for i in -100..=100 {
            let b = birth_probability(i as f64, &p);
            assert!(b >= last && b <= p.kappa_b);
            last = b;
        }
        assert_relative_eq!(birth_probability(1e4, &p), p.kappa_b, max_relative = 1e-9);
    }

    #[test]
    fn decreasing_orientation_mirrors_increasing() {
        let inc = BirthParams::default();
        let dec = BirthParams {
            orientation: BirthOrientation::Decreasing,
            ..inc
        };
        assert_relative_eq!(
            birth_probability(7.0, &inc),
            birth_probability(-7.0, &dec),
            max_relative = 1e-12
        );
    }

    #[test]
    fn mutation_respects_clip_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = MutationParams::default();
        let parent = RewardParams {
            w_food: 9.99,
            w_act: -9.99,
            w_extra: Some(0.0),
        };
        for _ in 0..10_000 {
            let child = mutate_weights(&parent, &mut rng, &params);
            for w in [child.w_food, child.w_act, child.w_extra.unwrap()] {
                assert!((params.clip_min..=params.clip_max).contains(&w));
            }
        }
    }

    #[test]
    fn mutation_median_magnitude_equals_scale() {
        // |Cauchy(0, s)| has median exactly s.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let params = MutationParams::default();
        let parent = RewardParams::zeros(false);
        let mut magnitudes: Vec<f64> = (0..100_000)
            .map(|_| mutate_weights(&parent, &mut rng, &params).w_food.abs())
            .collect();
        magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = magnitudes[magnitudes.len() / 2];
        assert!(
            (median - params.cauchy_scale).abs() < 0.05 * params.cauchy_scale,
            "median = {median}"
        );
    }

    #[test]
    fn random_walk_zero_steps_stays_at_origin() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let endpoints =
            random_walk_characterization(0, 10, false, &mut rng, &MutationParams::default());
        assert!(endpoints.iter().all(|p| *p == RewardParams::zeros(false)));
    }

    #[test]
    fn long_random_walk_reaches_clip_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let params = MutationParams::default();
        let endpoints = random_walk_characterization(1000, 200, false, &mut rng, &params);
        let at_bound = endpoints
            .iter()
            .filter(|p| p.w_food.abs() == params.clip_max || p.w_act.abs() == params.clip_max)
            .count();
        assert!(at_bound > 0, "no walk reached a clip bound");
    }

    #[test]
    fn energy_split_matches_eta() {
        let (parent, child) = split_energy(20.0, 0.4);
        assert_relative_eq!(parent, 12.0);
        assert_relative_eq!(child, 8.0);
        let (parent, child) = split_energy(13.7, 0.0);
        assert_eq!(child, 0.0);
        assert_eq!(parent, 13.7);
    }

    #[test]
    fn placement_in_empty_arena_uses_first_sample() {
        let world = World::new(WorldConfig::default());
        let arena = Vec2::new(480.0, 360.0);
        let params = ReproductionParams::default();
        let mut rng_a = ChaCha8Rng::seed_from_u64(5);
        let placed =
            try_place_child(Vec2::new(240.0, 180.0), 10.0, arena, &world, &mut rng_a, &params)
                .expect("empty arena placement");
        // Re-derive the first Gaussian sample from the same stream.
        let mut rng_b = ChaCha8Rng::seed_from_u64(5);
        let normal = Normal::new(0.0, params.placement_std_fraction * arena.x).unwrap();
        let expected = Vec2::new(240.0 + normal.sample(&mut rng_b), 180.0 + normal.sample(&mut rng_b));
        assert_eq!(placed, expected);
    }

    #[test]
    fn boxed_in_parent_fails_to_place() {
        // Tile the whole arena with bodies so no free disc exists.
        let mut world = World::new(WorldConfig::default());
        let arena = Vec2::new(100.0, 100.0);
        let mut id = 0;
        for gx in 0..10 {
            for gy in 0..10 {
                world.insert_body(Body::dynamic_circle(
                    BodyId(id),
                    Vec2::new(gx as f64 * 10.0 + 5.0, gy as f64 * 10.0 + 5.0),
                    7.0,
                    1.0,
                ));
                id += 1;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let placed = try_place_child(
            Vec2::new(50.0, 50.0),
            5.0,
            arena,
            &world,
            &mut rng,
            &ReproductionParams::default(),
        );
        assert_eq!(placed, None);
    }

    #[test]
    fn overlapping_position_is_rejected() {
        let mut world = World::new(WorldConfig::default());
        world.insert_body(Body::static_sensor(BodyId(0), Vec2::new(50.0, 50.0), 4.0));
        let arena = Vec2::new(100.0, 100.0);
        assert!(!position_is_free(Vec2::new(52.0, 50.0), 10.0, arena, &world));
        assert!(position_is_free(Vec2::new(30.0, 30.0), 10.0, arena, &world));
        // Outside or straddling the boundary is never free.
        assert!(!position_is_free(Vec2::new(5.0, 50.0), 10.0, arena, &world));
    }

    proptest! {
        #[test]
        fn split_conserves_energy(e in -50.0..200.0f64, eta in 0.0..=1.0f64) {
            // (e - c) + c can differ from e by one rounding step, never more.
            let (parent, child) = split_energy(e, eta);
            prop_assert!((parent + child - e).abs() <= e.abs() * f64::EPSILON);
        }
    }
}
