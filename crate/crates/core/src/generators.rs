//! Seeded sample generators.
//!
//! All randomness comes from SplitMix64 (state increment `0x9E3779B97F4A7C15`,
//! output mixer multipliers `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB`),
//! seeded directly with the user seed. A uniform double in `[0, 1)` is
//! `(next_u64() >> 11) * 2^-53`. Draws are consumed in point order, then
//! coordinate order, so the samples are reproducible in any language.

use std::f64::consts::TAU;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Angles `k / n` on the unit-circumference circle.
pub fn circle_sample(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::input("circle sample needs n >= 1"));
    }
    Ok((0..n).map(|k| k as f64 / n as f64).collect())
}

pub const DEFAULT_SOLENOID_ITERATIONS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolenoidParams {
    pub iterations: usize,
    pub n: usize,
    pub seed: u64,
}

impl SolenoidParams {
    pub fn new(n: usize, seed: u64) -> Self {
        SolenoidParams {
            iterations: DEFAULT_SOLENOID_ITERATIONS,
            n,
            seed,
        }
    }
}

/// One application of the solenoid map on `(phi, x, z)`.
pub fn solenoid_step([phi, x, z]: [f64; 3]) -> [f64; 3] {
    let angle = TAU * phi;
    [(2.0 * phi).rem_euclid(1.0), x / 3.0 + angle.cos(), z / 3.0 + angle.sin()]
}

/// Embeds `(phi, x, z)` into R^3 around a torus of radius 1.
pub fn solenoid_embed([phi, x, z]: [f64; 3]) -> [f64; 3] {
    let angle = TAU * phi;
    let radial = 1.0 + x / 3.0;
    [angle.cos() * radial, angle.sin() * radial, z]
}

/// Uniform seeds `phi` in `[0, 1)`, `x, z` in `[-1.5, 1.5)`, pushed forward
/// `iterations` times and embedded.
pub fn solenoid_sample(params: &SolenoidParams) -> Result<Vec<[f64; 3]>> {
    if params.n == 0 || params.iterations == 0 {
        return Err(Error::input("solenoid sample needs n >= 1 and iterations >= 1"));
    }
    let mut rng = rng(params.seed);
    Ok((0..params.n)
        .map(|_| {
            let phi = uniform(&mut rng);
            let x = 3.0 * uniform(&mut rng) - 1.5;
            let z = 3.0 * uniform(&mut rng) - 1.5;
            let mut p = [phi, x, z];
            for _ in 0..params.iterations {
                p = solenoid_step(p);
            }
            solenoid_embed(p)
        })
        .collect())
}

/// `n` uniform points in `[0, 1)^dim`.
pub fn random_cloud(n: usize, dim: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 || dim == 0 {
        return Err(Error::input("random cloud needs n >= 1 and dim >= 1"));
    }
    let mut rng = rng(seed);
    Ok((0..n)
        .map(|_| (0..dim).map(|_| uniform(&mut rng)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of SplitMix64 seeded with 0.
        let mut r = rng(0);
        assert_eq!(r.next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(r.next_u64(), 0x6E789E6AA1B965F4);
    }

    #[test]
    fn circle_examples() {
        assert_eq!(circle_sample(4).unwrap(), vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(circle_sample(1).unwrap(), vec![0.0]);
        let c = circle_sample(32).unwrap();
        assert!(c.windows(2).all(|w| w[1] - w[0] == 1.0 / 32.0));
        assert!(circle_sample(0).is_err());
    }

    #[test]
    fn solenoid_step_examples() {
        let p = solenoid_step([0.0, 0.0, 0.0]);
        assert_eq!(p, [0.0, 1.0, 0.0]);
        let e = solenoid_embed(p);
        assert!((e[0] - 4.0 / 3.0).abs() < 1e-15 && e[1].abs() < 1e-15 && e[2] == 0.0);

        let q = solenoid_step([0.5, 0.0, 0.0]);
        assert_eq!(q[0], 0.0);
        assert_eq!(q[1], -1.0);
        assert!(q[2].abs() < 1e-15);
    }

    #[test]
    fn solenoid_is_deterministic_and_bounded() {
        let params = SolenoidParams::new(200, 7);
        let a = solenoid_sample(&params).unwrap();
        assert_eq!(a, solenoid_sample(&params).unwrap());
        for [x, y, z] in a {
            assert!(x * x + y * y <= 1.5f64.powi(2) + 1e-12);
            assert!(z.abs() <= 1.5);
        }
    }

    #[test]
    fn random_cloud_examples() {
        let a = random_cloud(3, 2, 11).unwrap();
        assert_eq!(a, random_cloud(3, 2, 11).unwrap());
        assert_ne!(a, random_cloud(3, 2, 12).unwrap());
        assert!(a.iter().flatten().all(|&c| (0.0..1.0).contains(&c)));
        assert_eq!(random_cloud(1, 4, 0).unwrap().len(), 1);
    }
}
