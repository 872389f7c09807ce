use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::{effective_potential, potential_minimum, turning_points, NumericsError};
use crate::region::ExtendedReal;
use crate::systems::{SemitoricSystem, SystemError};

/// Samples drawn from one seeded substream.
pub const MC_BLOCK: usize = 4096;

const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub n_samples: usize,
}

impl McEstimate {
    /// Whether `target` lies within `k` standard errors.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_err.max(f64::EPSILON)
    }
}

/// Sum and sum of squares of `n` draws of `sample`, block by block; the
/// blocks use independent ChaCha streams so the result does not depend on
/// how they are scheduled.
fn block_moments(n: usize, seed: u64, sample: impl Fn(&mut ChaCha8Rng) -> f64 + Sync) -> (f64, f64) {
    let blocks = n.div_ceil(MC_BLOCK);
    let run = |b: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        let count = MC_BLOCK.min(n - b * MC_BLOCK);
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..count {
            let v = sample(&mut rng);
            s += v;
            s2 += v * v;
        }
        (s, s2)
    };
    #[cfg(feature = "parallel")]
    let parts: Vec<(f64, f64)> = (0..blocks).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(f64, f64)> = (0..blocks).map(run).collect();
    parts.into_iter().fold((0.0, 0.0), |(a, b), (s, s2)| (a + s, b + s2))
}

fn estimate(scale: f64, n: usize, (s, s2): (f64, f64)) -> McEstimate {
    let nf = n as f64;
    let mean = s / nf;
    let var = (s2 / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    McEstimate {
        value: scale * mean,
        std_err: scale * (var / nf).sqrt(),
        n_samples: n,
    }
}

/// Monte Carlo estimate of the normalized volume of `J⁻¹(x) ∩ {H < below_y}`,
/// with `H` the unproperized second component.
///
/// Sphere systems sample the reduced sphere uniformly and weight by the
/// fiber density; the pendulum samples a box around the reduced orbit in
/// `(θ, p_θ)` and needs a finite `below_y`.
pub fn mc_fiber_volume(
    s: &SemitoricSystem,
    x: f64,
    below_y: ExtendedReal,
    n_samples: usize,
    seed: u64,
) -> Result<McEstimate, SystemError> {
    if n_samples < MIN_SAMPLES {
        return Err(SystemError::InvalidParameter(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    if !s.metadata.j_image.contains(x) {
        return Err(SystemError::OutsideImage(x));
    }
    if s.is_pendulum() {
        if !below_y.is_finite() {
            return Err(
                NumericsError::Sampler("pendulum fibers are not compact; below_y must be finite".into()).into(),
            );
        }
        let energy = below_y.value();
        let (_, u_min) = potential_minimum(x);
        if energy <= u_min {
            return Ok(McEstimate {
                value: 0.0,
                std_err: 0.0,
                n_samples,
            });
        }
        let orbit = turning_points(x, energy)?;
        let (lo, w) = (orbit.turning_lo, orbit.turning_hi - orbit.turning_lo);
        let pmax = (2.0 * (energy - u_min)).sqrt();
        let inside = |rng: &mut ChaCha8Rng| {
            let theta = lo + w * rng.gen::<f64>();
            let p = pmax * (2.0 * rng.gen::<f64>() - 1.0);
            if 0.5 * p * p + effective_potential(x, theta) < energy {
                1.0
            } else {
                0.0
            }
        };
        let area = w * 2.0 * pmax;
        return Ok(estimate(
            area / (2.0 * std::f64::consts::PI),
            n_samples,
            block_moments(n_samples, seed, inside),
        ));
    }
    let cap = below_y.value();
    let weight = |rng: &mut ChaCha8Rng| {
        let v: [f64; 3] = UnitSphere.sample(rng);
        let z2 = v[2];
        if z2 < cap && s.in_domain_values(x, z2) {
            s.density(x, z2)
        } else {
            0.0
        }
    };
    // Sphere area 4π over the 2π normalization.
    Ok(estimate(2.0, n_samples, block_moments(n_samples, seed, weight)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{pendulum_action, QuadratureSpec};
    use crate::systems::{make_system, SystemParams};

    fn sys(name: &str) -> SemitoricSystem {
        make_system(name, &SystemParams::default()).unwrap()
    }

    #[test]
    fn toric_full_sphere() {
        let e = mc_fiber_volume(&sys("toric_s2s2"), 0.0, ExtendedReal::POS_INF, 100_000, 7).unwrap();
        assert!(e.agrees_with(2.0, 3.0), "{e:?}");
    }

    #[test]
    fn coupled_m_hemisphere() {
        let s = sys("coupled_m");
        let full = mc_fiber_volume(&s, -0.5, ExtendedReal::POS_INF, 100_000, 11).unwrap();
        assert!(full.agrees_with(2.0, 3.0), "{full:?}");
        let half = mc_fiber_volume(&s, -0.5, 0.0.into(), 100_000, 11).unwrap();
        assert!(half.agrees_with(1.0, 3.0), "{half:?}");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let s = sys("coupled_m");
        let a = mc_fiber_volume(&s, 0.4, ExtendedReal::POS_INF, 20_000, 3).unwrap();
        let b = mc_fiber_volume(&s, 0.4, ExtendedReal::POS_INF, 20_000, 3).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = mc_fiber_volume(&s, 0.4, ExtendedReal::POS_INF, 20_000, 4).unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn pendulum_oracle_matches_action() {
        let s = sys("spherical_pendulum");
        let e = mc_fiber_volume(&s, 0.4, 0.5.into(), 200_000, 5).unwrap();
        let a = pendulum_action(0.4, 0.5, &QuadratureSpec::default()).unwrap();
        assert!(e.agrees_with(a, 3.0), "{e:?} vs {a}");
        assert!(mc_fiber_volume(&s, 0.4, ExtendedReal::POS_INF, 20_000, 5).is_err());
        assert!(mc_fiber_volume(&s, 0.4, 0.5.into(), 100, 5).is_err());
    }
}
