//! Left and right Fueter-Dirac operators by central differences, the
//! right-hand side `−2v/r`, and the analytic assembly used as their oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lift::LiftedSolution;
use crate::quat::Quaternion;
use crate::seed::RationalSeed;

/// Closest distance to the real axis at which the right-hand side is formed.
pub const EPS_RHS: f64 = 0.05;

/// A quaternion-valued function of a quaternion. Evaluation must be
/// deterministic; an `Err` marks a point outside the evaluable region.
pub trait QuaternionField: Sync {
    fn eval(&self, q: Quaternion) -> Result<Quaternion>;
}

/// A field of the form `u(t, r) + ι v(t, r)` that can report its `(u, v)`.
pub trait RadialField: QuaternionField {
    fn radial_parts(&self, t: f64, r: f64) -> Result<(f64, f64)>;
}

impl QuaternionField for LiftedSolution {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        LiftedSolution::eval(self, q)
    }
}

impl RadialField for LiftedSolution {
    fn radial_parts(&self, t: f64, r: f64) -> Result<(f64, f64)> {
        self.radial_values(t, r)
    }
}

/// Wraps a closure as an everywhere-evaluable field.
pub struct FnField<F>(pub F);

impl<F> QuaternionField for FnField<F>
where
    F: Fn(Quaternion) -> Quaternion + Sync,
{
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok((self.0)(q))
    }
}

/// `q ↦ conj(q)`, with radial data `(u, v) = (t, −r)`. Not a solution; used
/// as a negative control.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConjugateField;

impl QuaternionField for ConjugateField {
    fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(q.conj())
    }
}

impl RadialField for ConjugateField {
    fn radial_parts(&self, t: f64, r: f64) -> Result<(f64, f64)> {
        Ok((t, -r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilOrder {
    Second,
    Fourth,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilSpec {
    pub order: StencilOrder,
    pub h: f64,
}

impl StencilSpec {
    pub fn new(order: u8, h: f64) -> Result<Self> {
        let order = match order {
            2 => StencilOrder::Second,
            4 => StencilOrder::Fourth,
            other => return Err(Error::InvalidArgument(format!("stencil order {other} (expected 2 or 4)"))),
        };
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("stencil step {h}")));
        }
        Ok(Self { order, h })
    }

    /// Order 4 with `h = 1e-2·(1 + |q|)`.
    pub fn default_at(q: Quaternion) -> Self {
        Self { order: StencilOrder::Fourth, h: 1e-2 * (1.0 + q.norm()) }
    }

    pub fn with_h(self, h: f64) -> Self {
        Self { h, ..self }
    }

    fn check(&self, q: Quaternion) -> Result<()> {
        if self.h <= 16.0 * f64::EPSILON * (1.0 + q.norm()) {
            return Err(Error::InvalidArgument(format!("step {} below roundoff scale at {q}", self.h)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

const BASIS: [Quaternion; 4] = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];

fn eval_in_region<F: QuaternionField + ?Sized>(f: &F, q: Quaternion) -> Result<Quaternion> {
    f.eval(q).map_err(|e| Error::RegionViolation(format!("{e} at {q}")))
}

/// Central-difference derivative of `f` along `dir` at `q`.
pub fn directional_derivative<F: QuaternionField + ?Sized>(
    f: &F,
    q: Quaternion,
    dir: Quaternion,
    s: StencilSpec,
) -> Result<Quaternion> {
    let h = s.h;
    let at = |k: f64| eval_in_region(f, q + dir * (k * h));
    Ok(match s.order {
        StencilOrder::Second => (at(1.0)? - at(-1.0)?) / (2.0 * h),
        StencilOrder::Fourth => {
            let (p1, m1, p2, m2) = (at(1.0)?, at(-1.0)?, at(2.0)?, at(-2.0)?);
            ((p1 - m1) * 8.0 - (p2 - m2)) / (12.0 * h)
        }
    })
}

/// `[∂t f, ∂x f, ∂y f, ∂z f]` at `q`.
pub fn partials<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<[Quaternion; 4]> {
    s.check(q)?;
    let mut out = [Quaternion::ZERO; 4];
    for (slot, dir) in out.iter_mut().zip(BASIS) {
        *slot = directional_derivative(f, q, dir, s)?;
    }
    Ok(out)
}

fn assemble(d: &[Quaternion; 4], side: Side) -> Quaternion {
    let mut acc = d[0];
    for m in 1..4 {
        acc += match side {
            Side::Left => BASIS[m] * d[m],
            Side::Right => d[m] * BASIS[m],
        };
    }
    acc
}

pub fn apply<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec, side: Side) -> Result<Quaternion> {
    Ok(assemble(&partials(f, q, s)?, side))
}

/// `∂t f + i ∂x f + j ∂y f + k ∂z f`.
pub fn apply_left<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<Quaternion> {
    apply(f, q, s, Side::Left)
}

/// `∂t f + (∂x f) i + (∂y f) j + (∂z f) k`.
pub fn apply_right<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<Quaternion> {
    apply(f, q, s, Side::Right)
}

/// Both sides from a single set of partials.
pub fn apply_both<F: QuaternionField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<(Quaternion, Quaternion)> {
    let d = partials(f, q, s)?;
    Ok((assemble(&d, Side::Left), assemble(&d, Side::Right)))
}

/// The real quaternion `−2 v(t, r) / r`.
pub fn rhs<F: RadialField + ?Sized>(f: &F, q: Quaternion) -> Result<Quaternion> {
    let r = q.imag_norm();
    if r <= EPS_RHS {
        return Err(Error::TooCloseToAxis(r));
    }
    let (_, v) = f.radial_parts(q.t, r)?;
    Ok(Quaternion::real(-2.0 * v / r))
}

/// `|apply_side(f) − rhs(f)|`.
pub fn residual<F: RadialField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec, side: Side) -> Result<f64> {
    let rhs = rhs(f, q)?;
    Ok((apply(f, q, s, side)? - rhs).norm())
}

/// Left and right residuals sharing one set of partials.
pub fn residual_both<F: RadialField + ?Sized>(f: &F, q: Quaternion, s: StencilSpec) -> Result<(f64, f64)> {
    let rhs = rhs(f, q)?;
    let (l, r) = apply_both(f, q, s)?;
    Ok(((l - rhs).norm(), (r - rhs).norm()))
}

/// First partials of `(u, v)` in `(t, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPartials {
    pub u_t: f64,
    pub u_r: f64,
    pub v_t: f64,
    pub v_r: f64,
}

/// Partials of `u = Re F`, `v = Im F` from `F′` via the Cauchy-Riemann
/// relations: `u_t = Re F′`, `v_t = Im F′`, `u_r = −Im F′`, `v_r = Re F′`.
pub fn analytic_partials(seed: &RationalSeed, t: f64, r: f64) -> Result<RadialPartials> {
    let d = seed.derivative().eval_complex(Complex64::new(t, r))?;
    Ok(RadialPartials::from_derivative(d))
}

impl RadialPartials {
    pub fn from_derivative(d: Complex64) -> Self {
        Self { u_t: d.re, u_r: -d.im, v_t: d.im, v_r: d.re }
    }
}

/// The operator applied to a lift, assembled in closed form:
/// `(u_t − v_r − 2v/r) + ι (v_t + u_r)`. Identical for both sides.
pub fn analytic_operator(f: &LiftedSolution, q: Quaternion) -> Result<Quaternion> {
    let d = q.decompose()?;
    let p = RadialPartials::from_derivative(f.derivative_at(d.t, d.r)?);
    let (_, v) = f.radial_values(d.t, d.r)?;
    Ok(Quaternion::real(p.u_t - p.v_r - 2.0 * v / d.r) + d.iota * (p.v_t + p.u_r))
}

/// Measured convergence of a stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convergence {
    /// Least-squares slope of `log error` against `log h`.
    Rate(f64),
    /// Every error sits at the roundoff floor; there is no truncation error
    /// to measure.
    Exact,
}

impl Convergence {
    /// The slope, or NaN for [`Convergence::Exact`].
    pub fn slope(self) -> f64 {
        match self {
            Convergence::Rate(s) => s,
            Convergence::Exact => f64::NAN,
        }
    }
}

/// Estimate the order of the stencil at `q` against a known exact value of
/// the operator.
pub fn convergence_order<F: QuaternionField + ?Sized>(
    f: &F,
    q: Quaternion,
    side: Side,
    order: StencilOrder,
    h_list: &[f64],
    reference: Quaternion,
) -> Result<(Convergence, Vec<f64>)> {
    if h_list.len() < 3 {
        return Err(Error::InvalidArgument("at least three step sizes are required".into()));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("step sizes must be strictly decreasing".into()));
    }
    let mut errors = Vec::with_capacity(h_list.len());
    let mut value_scale = 1.0 + reference.norm();
    for &h in h_list {
        let v = apply(f, q, StencilSpec { order, h }, side)?;
        value_scale = value_scale.max(1.0 + v.norm());
        errors.push((v - reference).norm());
    }
    // FD roundoff grows like ε·|f|/h; stay well above it
    let h_min = *h_list.last().unwrap();
    let floor = 1e3 * f64::EPSILON * value_scale * (1.0 + q.norm()) / h_min;
    if errors.iter().all(|&e| e <= floor) {
        return Ok((Convergence::Exact, errors));
    }
    let xs: Vec<f64> = h_list.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
    Ok((Convergence::Rate(least_squares_slope(&xs, &ys)), errors))
}

/// Convergence on a lift with the closed-form operator as reference.
pub fn convergence_order_lift(
    f: &LiftedSolution,
    q: Quaternion,
    side: Side,
    order: StencilOrder,
    h_list: &[f64],
) -> Result<(Convergence, Vec<f64>)> {
    let reference = analytic_operator(f, q)?;
    convergence_order(f, q, side, order, h_list, reference)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
