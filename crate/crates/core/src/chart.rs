//! The four chiral Cauchy-Riemann equations in the `(t, r, α, β)` chart and
//! the two invertibility predicates attached to them.

use crate::dirac::{RadialPartials, StencilOrder, StencilSpec};
use crate::error::{Error, Result};
use crate::lift::LiftedSolution;
use crate::quat::{ChartPoint, Quaternion};
use crate::sampling::Rng;
use crate::seed::{SeedClass, EPS_ZERO};
use crate::singular;

/// Step used for chart-variable finite differences.
pub const H_CHART: f64 = 1e-3;

/// Smallest `sin β` at which the angular equations are evaluated.
pub const MIN_SIN_BETA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPartials {
    pub u_t: f64,
    pub u_r: f64,
    pub u_alpha: f64,
    pub u_beta: f64,
    pub v_t: f64,
    pub v_r: f64,
    pub v_alpha: f64,
    pub v_beta: f64,
    pub point: ChartPoint,
    pub provenance: Provenance,
}

impl ChartPartials {
    pub fn zero(point: ChartPoint) -> Self {
        Self {
            u_t: 0.0,
            u_r: 0.0,
            u_alpha: 0.0,
            u_beta: 0.0,
            v_t: 0.0,
            v_r: 0.0,
            v_alpha: 0.0,
            v_beta: 0.0,
            point,
            provenance: Provenance::Analytic,
        }
    }

    pub fn as_array(&self) -> [f64; 8] {
        [self.u_t, self.u_r, self.u_alpha, self.u_beta, self.v_t, self.v_r, self.v_alpha, self.v_beta]
    }

    /// Componentwise sum; the point and provenance of `self` are kept.
    pub fn add(&self, o: &Self) -> Self {
        Self {
            u_t: self.u_t + o.u_t,
            u_r: self.u_r + o.u_r,
            u_alpha: self.u_alpha + o.u_alpha,
            u_beta: self.u_beta + o.u_beta,
            v_t: self.v_t + o.v_t,
            v_r: self.v_r + o.v_r,
            v_alpha: self.v_alpha + o.v_alpha,
            v_beta: self.v_beta + o.v_beta,
            ..*self
        }
    }
}

/// A pair of real functions `(u, v)` on the chart.
pub trait ChartFunction: Sync {
    fn uv(&self, c: ChartPoint) -> Result<(f64, f64)>;
}

/// Reads `(u, v)` of a lift at a chart point by projecting `f` onto `1` and `ι`.
impl ChartFunction for LiftedSolution {
    fn uv(&self, c: ChartPoint) -> Result<(f64, f64)> {
        let f = self.eval(c.to_quaternion())?;
        Ok((f.t, f.imag().dot(c.iota())))
    }
}

/// Two closures `(u, v)` given directly in chart variables.
pub struct ChartPair<U, V> {
    pub u: U,
    pub v: V,
}

impl<U, V> ChartFunction for ChartPair<U, V>
where
    U: Fn(ChartPoint) -> f64 + Sync,
    V: Fn(ChartPoint) -> f64 + Sync,
{
    fn uv(&self, c: ChartPoint) -> Result<(f64, f64)> {
        Ok(((self.u)(c), (self.v)(c)))
    }
}

/// Exact partials of a lift: the angular ones vanish identically and the
/// radial ones come from `F′`.
pub fn chart_partials_analytic(f: &LiftedSolution, c: ChartPoint) -> Result<ChartPartials> {
    let RadialPartials { u_t, u_r, v_t, v_r } = RadialPartials::from_derivative(f.derivative_at(c.t, c.r)?);
    Ok(ChartPartials { u_t, u_r, v_t, v_r, ..ChartPartials::zero(c) })
}

/// Central differences in each chart variable.
pub fn chart_partials_fd<F: ChartFunction + ?Sized>(f: &F, c: ChartPoint, s: StencilSpec) -> Result<ChartPartials> {
    let reach = match s.order {
        StencilOrder::Second => s.h,
        StencilOrder::Fourth => 2.0 * s.h,
    };
    if c.r - reach <= 0.0 {
        return Err(Error::RegionViolation(format!("r = {} within stencil reach of the axis", c.r)));
    }
    if c.beta - reach <= 0.0 || c.beta + reach >= std::f64::consts::PI {
        return Err(Error::RegionViolation(format!("beta = {} within stencil reach of the pole", c.beta)));
    }
    let eval = |c: ChartPoint| f.uv(c).map_err(|e| Error::RegionViolation(format!("{e} at {c:?}")));
    let shift = |axis: usize, d: f64| {
        let mut p = c;
        match axis {
            0 => p.t += d,
            1 => p.r += d,
            2 => p.alpha += d,
            _ => p.beta += d,
        }
        p
    };
    let mut out = [(0.0, 0.0); 4];
    for (axis, slot) in out.iter_mut().enumerate() {
        let h = s.h;
        *slot = match s.order {
            StencilOrder::Second => {
                let (p, m) = (eval(shift(axis, h))?, eval(shift(axis, -h))?);
                ((p.0 - m.0) / (2.0 * h), (p.1 - m.1) / (2.0 * h))
            }
            StencilOrder::Fourth => {
                let (p1, m1) = (eval(shift(axis, h))?, eval(shift(axis, -h))?);
                let (p2, m2) = (eval(shift(axis, 2.0 * h))?, eval(shift(axis, -2.0 * h))?);
                let d = |a: f64, b: f64, c2: f64, d2: f64| (8.0 * (a - b) - (c2 - d2)) / (12.0 * h);
                (d(p1.0, m1.0, p2.0, m2.0), d(p1.1, m1.1, p2.1, m2.1))
            }
        };
    }
    Ok(ChartPartials {
        u_t: out[0].0,
        v_t: out[0].1,
        u_r: out[1].0,
        v_r: out[1].1,
        u_alpha: out[2].0,
        v_alpha: out[2].1,
        u_beta: out[3].0,
        v_beta: out[3].1,
        point: c,
        provenance: Provenance::FiniteDifference,
    })
}

/// Default chart stencil: order 4 with step [`H_CHART`].
pub fn chart_stencil() -> StencilSpec {
    StencilSpec { order: StencilOrder::Fourth, h: H_CHART }
}

/// Power of `sin β` dividing the α-derivatives in the angular equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngularWeight {
    /// `(sin β)⁻²`
    #[default]
    InverseSquare,
    /// `(sin β)⁻¹`, the round-sphere metric factor.
    Inverse,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrResiduals {
    pub e3: f64,
    pub e4: f64,
    pub e5: f64,
    pub e6: f64,
}

impl CrResiduals {
    pub fn max_abs(&self) -> f64 {
        self.e3.abs().max(self.e4.abs()).max(self.e5.abs()).max(self.e6.abs())
    }
}

/// `e3 = u_t − v_r`, `e4 = u_r + v_t`, `e5 = v_α w + u_β`, `e6 = u_α w − v_β`
/// with `w = (sin β)⁻²` (or `(sin β)⁻¹`).
pub fn cr_residuals(p: &ChartPartials, weight: AngularWeight) -> Result<CrResiduals> {
    let sb = p.point.beta.sin();
    if sb <= MIN_SIN_BETA {
        return Err(Error::PolarAxis);
    }
    let w = match weight {
        AngularWeight::InverseSquare => 1.0 / (sb * sb),
        AngularWeight::Inverse => 1.0 / sb,
    };
    Ok(CrResiduals {
        e3: p.u_t - p.v_r,
        e4: p.u_r + p.v_t,
        e5: p.v_alpha * w + p.u_beta,
        e6: p.u_alpha * w - p.v_beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P4StarCheck {
    /// All four of `u_t, u_r, v_t, v_r` vanish.
    pub antecedent: bool,
    /// Finite-difference Jacobian determinant, computed when the antecedent holds.
    pub det_fd: Option<f64>,
    /// The implication "vanishing t, r partials ⇒ not locally invertible".
    pub holds: bool,
}

/// If `∂f/∂t = ∂f/∂r = 0` at the point then `f` is not locally invertible
/// there: the Jacobian determinant must vanish.
pub fn p4_star(p: &ChartPartials, f: &LiftedSolution, q: Quaternion) -> Result<P4StarCheck> {
    let antecedent = [p.u_t, p.u_r, p.v_t, p.v_r].iter().all(|d| d.abs() <= EPS_ZERO);
    if !antecedent {
        return Ok(P4StarCheck { antecedent, det_fd: None, holds: true });
    }
    let s = StencilSpec::default_at(q);
    let det = singular::determinant(singular::jacobian_matrix(f, q, s)?);
    Ok(P4StarCheck { antecedent, det_fd: Some(det), holds: det.abs() <= 1e-6 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P4StarStarCheck {
    /// `∂(u, v)/∂α = ∂(u, v)/∂β = 0`, true for every lift.
    pub antecedent: bool,
    pub constant: bool,
    pub nonsingular_fraction: f64,
    pub holds: bool,
}

/// If the angular partials vanish, `f` is locally invertible unless it is
/// constant. Invertibility is judged by `|det J| > EPS_ZERO` on at least 99%
/// of `samples` random admissible points.
pub fn p4_star_star(f: &LiftedSolution, rng: &mut Rng, samples: usize) -> Result<P4StarStarCheck> {
    if f.seed().classify() == SeedClass::Degenerate {
        return Ok(P4StarStarCheck { antecedent: true, constant: true, nonsingular_fraction: 0.0, holds: true });
    }
    let fraction = singular::nonsingular_fraction(f.seed(), rng, samples, |q| {
        Ok(singular::determinant(singular::jacobian_matrix(f, q, StencilSpec::default_at(q))?))
    })?;
    Ok(P4StarStarCheck { antecedent: true, constant: false, nonsingular_fraction: fraction, holds: fraction >= 0.99 })
}
