//! Jacobians of lifted maps, the singular set, the component invariant of
//! the zero spheres on the imaginary slice, and the dichotomy sampling.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dirac::{self, QuaternionField, StencilSpec, EPS_RHS};
use crate::error::{Error, Result};
use crate::lift::LiftedSolution;
use crate::quat::{Quaternion, EPS_AXIS};
use crate::sampling::{self, Admissibility, Rng};
use crate::seed::{RationalSeed, SeedClass, ZeroRadiusList, EPS_ZERO};

pub type Matrix4 = [[f64; 4]; 4];

/// `J[i][m] = ∂ fᵢ / ∂ x_m` with components and coordinates ordered `t, x, y, z`.
pub fn jacobian_matrix<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<Matrix4> {
    let d = dirac::partials(f, q, s)?;
    let mut m = [[0.0; 4]; 4];
    for (col, dq) in d.iter().enumerate() {
        for (row, v) in dq.to_array().into_iter().enumerate() {
            m[row][col] = v;
        }
    }
    Ok(m)
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Matrix4) -> f64 {
    let mut det = 1.0;
    for c in 0..4 {
        let p = (c..4)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..4 {
            let factor = m[r][c] / m[c][c];
            for k in c..4 {
                m[r][k] -= factor * m[c][k];
            }
        }
    }
    det
}

/// Closed form `|F′(z)|² (v/r)²` at `z = t + i r`.
///
/// The `(t, r)` block contributes the holomorphic Jacobian `|F′|²` and each
/// of the two angular directions is stretched by `v/r`.
pub fn jacobian_det_analytic(seed: &RationalSeed, q: Quaternion) -> Result<f64> {
    lift_det_analytic(&LiftedSolution::new(seed.clone()), q)
}

/// [`jacobian_det_analytic`] reusing the lift's cached derivative.
pub fn lift_det_analytic(f: &LiftedSolution, q: Quaternion) -> Result<f64> {
    let d = q.decompose()?;
    let z = Complex64::new(d.t, d.r);
    let v_over_r = f.seed().eval_complex(z)?.im / d.r;
    let fp = f.derivative_seed().eval_complex(z)?;
    Ok(fp.norm_sqr() * v_over_r * v_over_r)
}

/// Limit of the closed form on the real axis, `F′(t)⁴`.
pub fn jacobian_det_on_axis(seed: &RationalSeed, t: f64) -> Result<f64> {
    Ok(seed.derivative().eval_real(t)?.powi(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Locus {
    Regular,
    /// `F′ = 0`
    CriticalSeed,
    /// `v = 0` off the real axis
    RealLocus,
    /// `u = v = 0`
    Zero,
}

impl Locus {
    pub fn name(self) -> &'static str {
        match self {
            Locus::Regular => "Regular",
            Locus::CriticalSeed => "CriticalSeed",
            Locus::RealLocus => "RealLocus",
            Locus::Zero => "Zero",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobianSample {
    pub point: Quaternion,
    pub matrix: Matrix4,
    pub det_fd: f64,
    pub det_analytic: f64,
    pub u: f64,
    pub v: f64,
    pub derivative_norm: f64,
    pub locus: Locus,
    /// Residuals of the left and right operator; absent within `EPS_RHS` of
    /// the real axis.
    pub residual_left: Option<f64>,
    pub residual_right: Option<f64>,
}

impl JacobianSample {
    /// `u = v = 0` off the real axis.
    pub fn on_zero_set(&self) -> bool {
        self.point.imag_norm() > EPS_AXIS && self.u.abs() + self.v.abs() <= EPS_ZERO
    }

    pub fn on_real_locus(&self) -> bool {
        self.point.imag_norm() > EPS_AXIS && self.v.abs() <= EPS_ZERO
    }

    pub fn is_critical_seed(&self) -> bool {
        self.derivative_norm <= EPS_ZERO
    }

    pub fn is_singular(&self) -> bool {
        self.locus != Locus::Regular || self.det_analytic.abs() <= EPS_ZERO
    }
}

/// On the real axis the map is singular only where `F′(t) = 0`, so axis
/// points are either critical or regular.
fn classify_point(u: f64, v: f64, on_axis: bool, derivative_norm: f64) -> Locus {
    if on_axis {
        return if derivative_norm <= EPS_ZERO { Locus::CriticalSeed } else { Locus::Regular };
    }
    if u.abs() + v.abs() <= EPS_ZERO {
        Locus::Zero
    } else if v.abs() <= EPS_ZERO {
        Locus::RealLocus
    } else if derivative_norm <= EPS_ZERO {
        Locus::CriticalSeed
    } else {
        Locus::Regular
    }
}

/// Finite-difference Jacobian of a lift together with the closed form,
/// the point's locus and the operator residuals.
pub fn jacobian(f: &LiftedSolution, q: Quaternion, s: StencilSpec) -> Result<JacobianSample> {
    let r = q.imag_norm();
    let on_axis = r <= EPS_AXIS;
    let (u, v, fp, det_analytic) = if on_axis {
        let u = f.seed().eval_real(q.t)?;
        let fp = f.derivative_seed().eval_real(q.t)?;
        (u, 0.0, fp.abs(), fp.powi(4))
    } else {
        let (u, v) = f.radial_values(q.t, r)?;
        let fp = f.derivative_at(q.t, r)?.norm();
        (u, v, fp, lift_det_analytic(f, q)?)
    };
    let matrix = jacobian_matrix(f, q, s)?;
    let (residual_left, residual_right) = if r > EPS_RHS {
        let (l, rr) = dirac::residual_both(f, q, s)?;
        (Some(l), Some(rr))
    } else {
        (None, None)
    };
    Ok(JacobianSample {
        point: q,
        det_fd: determinant(matrix),
        matrix,
        det_analytic,
        u,
        v,
        derivative_norm: fp,
        locus: classify_point(u, v, on_axis, fp),
        residual_left,
        residual_right,
    })
}

/// Axis-aligned box `[lo_m, hi_m]` per coordinate `t, x, y, z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl Box4 {
    pub fn uniform(lo: f64, hi: f64) -> Self {
        Self { lo: [lo; 4], hi: [hi; 4] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    /// Samples in grid-major order (`t` slowest, `z` fastest).
    pub samples: Vec<JacobianSample>,
    /// Grid points skipped because the lift could not be evaluated there.
    pub skipped: usize,
}

/// Sample the lift on a regular grid of `resolution` points per axis.
/// `stencil` defaults to [`StencilSpec::default_at`] at each point.
pub fn scan(f: &LiftedSolution, region: Box4, resolution: usize, stencil: Option<StencilSpec>) -> Result<ScanResult> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} (must be at least 2)")));
    }
    let coord = |axis: usize, k: usize| {
        let (lo, hi) = (region.lo[axis], region.hi[axis]);
        lo + (hi - lo) * k as f64 / (resolution - 1) as f64
    };
    let total = resolution.pow(4);
    let results: Vec<Option<JacobianSample>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let k = [
                idx / resolution.pow(3),
                (idx / resolution.pow(2)) % resolution,
                (idx / resolution) % resolution,
                idx % resolution,
            ];
            let q = Quaternion::new(coord(0, k[0]), coord(1, k[1]), coord(2, k[2]), coord(3, k[3]));
            let s = stencil.unwrap_or_else(|| StencilSpec::default_at(q));
            jacobian(f, q, s).ok()
        })
        .collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    Ok(ScanResult { samples: results.into_iter().flatten().collect(), skipped })
}

/// Rays cast from the origin of the imaginary space.
pub const RAY_COUNT: usize = 64;
/// Samples per ray.
pub const RAY_SAMPLES: usize = 512;
const RAY_START: f64 = 0.05;

/// Zeros of the lift found along the ray `r ↦ r·d`, `r ∈ (RAY_START, r_max]`.
///
/// Sign changes of `u` or `v` between samples are bisected; local minima of
/// `|f|` that show no sign change (even-multiplicity zeros) are refined by
/// golden-section search. A candidate counts as a zero when `|f|` there is
/// negligible against the size of `f` along the ray.
pub fn ray_zeros(f: &LiftedSolution, direction: Quaternion, r_max: f64) -> Vec<f64> {
    let d = direction / direction.norm();
    let uv = |r: f64| -> Option<(f64, f64)> {
        let w = f.eval(d * r).ok()?;
        Some((w.t, w.imag().dot(d)))
    };
    let step = (r_max - RAY_START) / (RAY_SAMPLES - 1) as f64;
    let rs: Vec<f64> = (0..RAY_SAMPLES).map(|k| RAY_START + step * k as f64).collect();
    let vals: Vec<Option<(f64, f64)>> = rs.iter().map(|&r| uv(r)).collect();
    let scale = 1.0
        + vals
            .iter()
            .flatten()
            .map(|(u, v)| u.hypot(*v))
            .fold(0.0, f64::max);
    let zero_tol = 1e-8 * scale;
    let mut zeros: Vec<f64> = Vec::new();
    let push = |r: f64, zeros: &mut Vec<f64>| {
        if !zeros.iter().any(|z| (z - r).abs() <= 1e-6) {
            zeros.push(r);
        }
    };
    let magnitude = |r: f64| uv(r).map_or(f64::INFINITY, |(u, v)| u.hypot(v));

    for k in 0..RAY_SAMPLES {
        let Some((u0, v0)) = vals[k] else { continue };
        if u0 == 0.0 && v0 == 0.0 {
            push(rs[k], &mut zeros);
            continue;
        }
        let Some(Some((u1, v1))) = vals.get(k + 1) else { continue };
        for comp in 0..2 {
            let (a, b) = if comp == 0 { (u0, *u1) } else { (v0, *v1) };
            if a * b < 0.0 {
                let pick = |r: f64| uv(r).map(|w| if comp == 0 { w.0 } else { w.1 });
                if let Some(root) = bisect(pick, rs[k], rs[k + 1]) {
                    if magnitude(root) <= zero_tol {
                        push(root, &mut zeros);
                    }
                }
            }
        }
    }
    // even-multiplicity zeros: local minima of |f| that never change sign
    let mags: Vec<f64> = vals
        .iter()
        .map(|v| v.map_or(f64::INFINITY, |(u, v)| u.hypot(v)))
        .collect();
    for k in 1..RAY_SAMPLES - 1 {
        if mags[k] <= mags[k - 1] && mags[k] <= mags[k + 1] && mags[k].is_finite() {
            let r = golden_min(magnitude, rs[k - 1], rs[k + 1]);
            if magnitude(r) <= 1e-6 * scale && !zeros.iter().any(|z| (z - r).abs() <= 1e-4) {
                push(r, &mut zeros);
            }
        }
    }
    zeros.sort_by(f64::total_cmp);
    zeros
}

fn bisect(g: impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64) -> Option<f64> {
    let mut ga = g(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m)?;
        if gm == 0.0 {
            return Some(m);
        }
        if (gm < 0.0) == (ga < 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if gc < gd {
            b = d;
            d = c;
            gd = gc;
            c = b - phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + phi * (b - a);
            gd = g(d);
        }
    }
    0.5 * (a + b)
}

/// Outer radius of the ray sampling for a seed with the given zero radii.
pub fn ray_extent(radii: &ZeroRadiusList) -> f64 {
    1.5 * radii.max_radius().unwrap_or(0.0) + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub n: usize,
    pub radii: ZeroRadiusList,
    pub verified_by_sampling: bool,
    /// Largest distance between a sampled zero and its certified radius;
    /// infinite when the counts disagree.
    pub max_radius_error: f64,
    pub rays: usize,
}

/// Allowed distance between a ray-sampled zero and the certified radius.
pub fn ray_tolerance(multiplicity: usize) -> f64 {
    if multiplicity <= 1 {
        1e-9
    } else {
        1e-4
    }
}

fn compare_to_certified(radii: &ZeroRadiusList, found: &[f64]) -> f64 {
    if found.len() != radii.len() {
        return f64::INFINITY;
    }
    radii
        .entries()
        .iter()
        .zip(found)
        .map(|(&(r, m), &s)| {
            let e = (r - s).abs();
            if e <= ray_tolerance(m) {
                e
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

fn sample_rays(f: &LiftedSolution, radii: &ZeroRadiusList, directions: &[Quaternion]) -> (bool, f64) {
    let extent = ray_extent(radii);
    let errors: Vec<f64> = directions
        .par_iter()
        .map(|&d| compare_to_certified(radii, &ray_zeros(f, d, extent)))
        .collect();
    let worst = errors.iter().copied().fold(0.0, f64::max);
    (worst.is_finite(), worst)
}

/// Component count of the imaginary slice, certified exactly and checked
/// against ray sampling.
pub fn component_report(seed: &RationalSeed, rng: &mut Rng) -> Result<ComponentReport> {
    let radii = seed.zero_radii()?;
    let directions: Vec<Quaternion> = (0..RAY_COUNT).map(|_| sampling::unit_direction(rng)).collect();
    let f = LiftedSolution::new(seed.clone());
    let (verified, worst) = sample_rays(&f, &radii, &directions);
    Ok(ComponentReport {
        n: radii.len() + 1,
        radii,
        verified_by_sampling: verified,
        max_radius_error: worst,
        rays: RAY_COUNT,
    })
}

/// The component count seen through each automorphism: rays are rotated by
/// `a` before sampling and the number of zeros found on them gives `n`.
/// Rays that disagree with each other yield `None` for that automorphism.
pub fn sampled_component_counts(
    seed: &RationalSeed,
    automorphisms: &[Quaternion],
    rng: &mut Rng,
) -> Result<Vec<Option<usize>>> {
    let radii = seed.zero_radii()?;
    let extent = ray_extent(&radii);
    let f = LiftedSolution::new(seed.clone());
    let base: Vec<Quaternion> = (0..RAY_COUNT).map(|_| sampling::unit_direction(rng)).collect();
    automorphisms
        .iter()
        .map(|&a| {
            let rotated = base
                .iter()
                .map(|&d| Quaternion::automorph(a, d))
                .collect::<Result<Vec<_>>>()?;
            let counts: Vec<usize> = rotated
                .par_iter()
                .map(|&d| ray_zeros(&f, d, extent).len() + 1)
                .collect();
            Ok(counts.iter().all(|&c| c == counts[0]).then(|| counts[0]))
        })
        .collect()
}

/// Whether every automorphism reproduces the certified component count.
pub fn invariance_check(seed: &RationalSeed, automorphisms: &[Quaternion], rng: &mut Rng) -> Result<bool> {
    let n = seed.component_count()?;
    Ok(sampled_component_counts(seed, automorphisms, rng)?
        .iter()
        .all(|&c| c == Some(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dichotomy {
    DiffeoAlmostEverywhere,
    TotallyDegenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyReport {
    pub verdict: Dichotomy,
    pub points: usize,
    /// Fraction of sampled points with `|det J| > EPS_ZERO`.
    pub nonsingular_fraction: f64,
}

pub const DICHOTOMY_SAMPLES: usize = 1000;

/// Classify a seed as totally degenerate or a local diffeomorphism almost
/// everywhere; a sampled non-singular fraction strictly between 1% and 99%
/// is reported as a violation.
pub fn dichotomy_verdict(seed: &RationalSeed, rng: &mut Rng, samples: usize) -> Result<DichotomyReport> {
    if seed.classify() == SeedClass::Degenerate {
        return Ok(DichotomyReport { verdict: Dichotomy::TotallyDegenerate, points: 0, nonsingular_fraction: 0.0 });
    }
    let f = LiftedSolution::new(seed.clone());
    let fraction = nonsingular_fraction(seed, rng, samples, |q| lift_det_analytic(&f, q))?;
    let verdict = if fraction >= 0.99 {
        Dichotomy::DiffeoAlmostEverywhere
    } else if fraction <= 0.01 {
        Dichotomy::TotallyDegenerate
    } else {
        return Err(Error::DichotomyViolation(fraction));
    };
    Ok(DichotomyReport { verdict, points: samples, nonsingular_fraction: fraction })
}

/// Fraction of `samples` admissible points in `[−2, 2]⁴` where `|det|`
/// exceeds `EPS_ZERO`.
pub fn nonsingular_fraction(
    seed: &RationalSeed,
    rng: &mut Rng,
    samples: usize,
    det: impl Fn(Quaternion) -> Result<f64> + Sync,
) -> Result<f64> {
    let pts = sampling::admissible_points(seed, rng, -2.0, 2.0, samples, Admissibility::default());
    let dets = pts.par_iter().map(|&q| det(q)).collect::<Result<Vec<_>>>()?;
    let good = dets.iter().filter(|d| d.abs() > EPS_ZERO).count();
    Ok(good as f64 / samples.max(1) as f64)
}
