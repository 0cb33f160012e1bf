//! Lifting a seed `F = u + i v` to the quaternionic field
//! `f(q) = u(t, r) + ι_q v(t, r)` and the consistency checks that go with it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quat::{Quaternion, EPS_AXIS};
use crate::seed::RationalSeed;

/// `1 + max` of the norms being compared; the unit of every relative tolerance.
pub fn scale_of(values: &[Quaternion]) -> f64 {
    1.0 + values.iter().map(|q| q.norm()).fold(0.0, f64::max)
}

/// A seed together with its cached derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSolution {
    seed: RationalSeed,
    derivative: RationalSeed,
}

impl From<RationalSeed> for LiftedSolution {
    fn from(seed: RationalSeed) -> Self {
        Self::new(seed)
    }
}

impl LiftedSolution {
    pub fn new(seed: RationalSeed) -> Self {
        let derivative = seed.derivative();
        Self { seed, derivative }
    }

    pub fn seed(&self) -> &RationalSeed {
        &self.seed
    }

    pub fn derivative_seed(&self) -> &RationalSeed {
        &self.derivative
    }

    /// `(u, v)` at `z = t + i r`.
    pub fn radial_values(&self, t: f64, r: f64) -> Result<(f64, f64)> {
        let w = self.seed.eval_complex(Complex64::new(t, r))?;
        Ok((w.re, w.im))
    }

    /// `F′(t + i r)`.
    pub fn derivative_at(&self, t: f64, r: f64) -> Result<Complex64> {
        self.derivative.eval_complex(Complex64::new(t, r))
    }

    /// Evaluate `u + ι_q v`; on the real axis this is the real number `F(t)`.
    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        let r = q.imag_norm();
        if r <= EPS_AXIS {
            return Ok(Quaternion::real(self.seed.eval_real(q.t)?));
        }
        let w = self.seed.eval_complex(Complex64::new(q.t, r))?;
        let s = w.im / r;
        Ok(Quaternion::new(w.re, q.x * s, q.y * s, q.z * s))
    }

    /// `|f(a q a⁻¹) − a f(q) a⁻¹|`.
    pub fn equivariance_residual(&self, a: Quaternion, q: Quaternion) -> Result<f64> {
        let lhs = self.eval(Quaternion::automorph(a, q)?)?;
        let rhs = Quaternion::automorph(a, self.eval(q)?)?;
        Ok((lhs - rhs).norm())
    }

    /// `|u(q₁) − u(q₂)| + |v(q₁) − v(q₂)|` for two imaginary points of equal
    /// norm, with `(u, v)` read back from the lifted values by projection
    /// onto `1` and `ι_q`.
    pub fn radial_symmetry_residual(&self, q1: Quaternion, q2: Quaternion) -> Result<f64> {
        for q in [q1, q2] {
            if q.t != 0.0 {
                return Err(Error::InvalidArgument("points must be purely imaginary".into()));
            }
        }
        let (r1, r2) = (q1.imag_norm(), q2.imag_norm());
        if (r1 - r2).abs() > 1e-12 * (1.0 + r1.max(r2)) {
            return Err(Error::InvalidArgument(format!("norms differ: {r1} vs {r2}")));
        }
        let (u1, v1) = self.project(q1)?;
        let (u2, v2) = self.project(q2)?;
        Ok((u1 - u2).abs() + (v1 - v2).abs())
    }

    /// Recover `(u, v)` from `f(q)` using the decomposition of `q`.
    pub fn project(&self, q: Quaternion) -> Result<(f64, f64)> {
        let d = q.decompose()?;
        let f = self.eval(q)?;
        Ok((f.t, f.imag().dot(d.iota)))
    }
}

/// Pointwise check that lifting commutes with seed multiplication, together
/// with the commutator of the two lifted values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductConsistency {
    /// `|lift(F·G)(q) − lift(F)(q)·lift(G)(q)|`
    pub product: f64,
    /// `|f g − g f|`
    pub commutator: f64,
    /// `1 + max` norm of the compared values.
    pub scale: f64,
}

pub fn product_consistency_residual(
    f: &RationalSeed,
    g: &RationalSeed,
    q: Quaternion,
) -> Result<ProductConsistency> {
    let fg = LiftedSolution::new(f * g).eval(q)?;
    let fv = LiftedSolution::new(f.clone()).eval(q)?;
    let gv = LiftedSolution::new(g.clone()).eval(q)?;
    let (left, right) = (fv * gv, gv * fv);
    Ok(ProductConsistency {
        product: (fg - left).norm(),
        commutator: (left - right).norm(),
        scale: scale_of(&[fg, left, right]),
    })
}

/// `|lift(F+G)(q) − (lift(F)(q) + lift(G)(q))|` relative to scale.
pub fn sum_consistency_residual(f: &RationalSeed, g: &RationalSeed, q: Quaternion) -> Result<f64> {
    let s = LiftedSolution::new(f + g).eval(q)?;
    let fv = LiftedSolution::new(f.clone()).eval(q)?;
    let gv = LiftedSolution::new(g.clone()).eval(q)?;
    Ok((s - (fv + gv)).norm() / scale_of(&[s, fv + gv]))
}

/// `|lift(1/F)(q) − lift(F)(q)⁻¹|` relative to scale; `None` where `|F|` is
/// too small for the pointwise inverse to be meaningful.
pub fn inverse_consistency_residual(
    f: &RationalSeed,
    q: Quaternion,
    min_value: f64,
) -> Result<Option<f64>> {
    let fv = LiftedSolution::new(f.clone()).eval(q)?;
    if fv.norm() <= min_value {
        return Ok(None);
    }
    let inv = LiftedSolution::new(f.localize()?.inverse).eval(q)?;
    let pointwise = fv.inverse()?;
    Ok(Some((inv - pointwise).norm() / scale_of(&[inv, pointwise])))
}
