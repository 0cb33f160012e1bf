//! Seeded random sampling of points, directions and automorphisms.
//!
//! Every randomized check takes an explicit [`Rng`] built from a `u64` seed
//! so that runs are reproducible across platforms.

use num_complex::Complex64;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quat::Quaternion;
use crate::seed::RationalSeed;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rules a random point must satisfy before it is used in a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    /// Minimum `|Im q|`.
    pub min_r: f64,
    /// Minimum distance from `t + i r` to any pole of the seed.
    pub min_pole_distance: f64,
}

impl Default for Admissibility {
    fn default() -> Self {
        Self { min_r: 0.1, min_pole_distance: 0.2 }
    }
}

impl Admissibility {
    pub fn admits(&self, seed: &RationalSeed, q: Quaternion) -> bool {
        let r = q.imag_norm();
        r > self.min_r && seed.pole_distance(Complex64::new(q.t, r)) > self.min_pole_distance
    }
}

/// Uniform point in the box `[lo, hi]⁴`.
pub fn uniform_point(rng: &mut Rng, lo: f64, hi: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
        rng.random_range(lo..hi),
    )
}

/// `n` admissible points drawn uniformly from `[lo, hi]⁴` by rejection.
pub fn admissible_points(
    seed: &RationalSeed,
    rng: &mut Rng,
    lo: f64,
    hi: f64,
    n: usize,
    adm: Admissibility,
) -> Vec<Quaternion> {
    let poles = seed.poles();
    let admits = |q: Quaternion| {
        let r = q.imag_norm();
        let z = Complex64::new(q.t, r);
        r > adm.min_r && poles.iter().all(|p| (p - z).norm() > adm.min_pole_distance)
    };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let q = uniform_point(rng, lo, hi);
        if admits(q) {
            out.push(q);
        }
    }
    out
}

/// Uniformly distributed unit quaternion.
pub fn unit_quaternion(rng: &mut Rng) -> Quaternion {
    loop {
        let q = uniform_point(rng, -1.0, 1.0);
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            let u = q / n;
            // renormalize once more so |u| is within an ulp or two of 1
            return u / u.norm();
        }
    }
}

/// Uniformly distributed unit imaginary quaternion.
pub fn unit_direction(rng: &mut Rng) -> Quaternion {
    loop {
        let q = Quaternion::new(
            0.0,
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q / n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<_> = (0..5).map({ let mut r = rng(7); move |_| uniform_point(&mut r, -2.0, 2.0) }).collect();
        let b: Vec<_> = (0..5).map({ let mut r = rng(7); move |_| uniform_point(&mut r, -2.0, 2.0) }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn admissible_points_respect_rules() {
        let seed: RationalSeed = "(z^2+1)/z".parse().unwrap();
        let mut r = rng(0);
        let pts = admissible_points(&seed, &mut r, -2.0, 2.0, 200, Admissibility::default());
        assert_eq!(pts.len(), 200);
        for q in pts {
            assert!(q.imag_norm() > 0.1);
            assert!(q.norm() > 0.2);
            assert!(q.max_abs() <= 2.0);
        }
    }

    #[test]
    fn units_are_unit() {
        let mut r = rng(3);
        for _ in 0..100 {
            assert!((unit_quaternion(&mut r).norm() - 1.0).abs() <= 1e-15);
            let d = unit_direction(&mut r);
            assert_eq!(d.t, 0.0);
            assert!((d.norm() - 1.0).abs() <= 1e-15);
        }
    }
}
