//! Quaternion arithmetic, the imaginary-part decomposition `q = t + r·ι`,
//! the `(t, r, α, β)` chart and inner automorphisms `q ↦ a q a⁻¹`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Below this imaginary norm a point is treated as lying on the real axis.
pub const EPS_AXIS: f64 = 1e-12;

/// Distance in `β` from the poles `{0, π}` at which the chart degenerates.
pub const EPS_POLAR: f64 = 1e-9;

/// Allowed deviation of `|a|` from 1 for automorphism generators.
pub const UNIT_TOL: f64 = 1e-12;

/// A quaternion `t + x·i + y·j + z·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    #[inline]
    pub const fn real(t: f64) -> Self {
        Self::new(t, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    /// Purely imaginary part `x·i + y·j + z·k`.
    #[inline]
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.t, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Norm of the imaginary part, the `r` of the decomposition.
    #[inline]
    pub fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Euclidean inner product on R⁴.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.t * other.t + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.t.abs().max(self.x.abs()).max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Multiplicative inverse `conj(q) / |q|²`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Split `q` as `t + r·ι` with `ι` a unit imaginary quaternion.
    pub fn decompose(self) -> Result<ImaginaryDecomposition> {
        let r = self.imag_norm();
        if r <= EPS_AXIS {
            return Err(Error::OnRealAxis(r));
        }
        Ok(ImaginaryDecomposition {
            t: self.t,
            r,
            iota: Self::new(0.0, self.x / r, self.y / r, self.z / r),
        })
    }

    /// Chart coordinates with `β` measured from the `+k` axis.
    pub fn to_chart(self) -> Result<ChartPoint> {
        let r = self.imag_norm();
        if r <= EPS_AXIS {
            return Err(Error::OnRealAxis(r));
        }
        let rho = self.x.hypot(self.y);
        let beta = rho.atan2(self.z);
        if beta < EPS_POLAR || PI - beta < EPS_POLAR {
            return Err(Error::PolarAxis);
        }
        let mut alpha = self.y.atan2(self.x);
        if alpha < 0.0 {
            alpha += TAU;
        }
        if alpha >= TAU {
            alpha = 0.0;
        }
        Ok(ChartPoint { t: self.t, r, alpha, beta })
    }

    /// Inner automorphism `a·q·a⁻¹` for unit `a`.
    ///
    /// The scalar part is carried over unchanged and the imaginary part is
    /// rotated, which is what conjugation by a unit quaternion does.
    pub fn automorph(a: Self, q: Self) -> Result<Self> {
        let n = a.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit(n));
        }
        let (w, u) = (a.t, [a.x, a.y, a.z]);
        let v = [q.x, q.y, q.z];
        let uv = cross(u, v);
        let uuv = cross(u, uv);
        Ok(Self::new(
            q.t,
            v[0] + 2.0 * (w * uv[0] + uuv[0]),
            v[1] + 2.0 * (w * uv[1] + uuv[1]),
            v[2] + 2.0 * (w * uv[2] + uuv[2]),
        ))
    }
}

#[inline]
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.t, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.t, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.t * o.t - self.x * o.x - self.y * o.y - self.z * o.z,
            self.t * o.x + self.x * o.t + self.y * o.z - self.z * o.y,
            self.t * o.y - self.x * o.z + self.y * o.t + self.z * o.x,
            self.t * o.z + self.x * o.y - self.y * o.x + self.z * o.t,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.t / s, self.x / s, self.y / s, self.z / s)
    }
}

/// `q = t + r·ι` with `r ≥ 0` and `ι` unit imaginary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryDecomposition {
    pub t: f64,
    pub r: f64,
    pub iota: Quaternion,
}

impl ImaginaryDecomposition {
    pub fn recompose(&self) -> Quaternion {
        Quaternion::new(
            self.t,
            self.r * self.iota.x,
            self.r * self.iota.y,
            self.r * self.iota.z,
        )
    }
}

/// A point of the `(t, r, α, β)` chart: `x = r sinβ cosα`, `y = r sinβ sinα`,
/// `z = r cosβ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ChartPoint {
    pub const fn new(t: f64, r: f64, alpha: f64, beta: f64) -> Self {
        Self { t, r, alpha, beta }
    }

    pub fn to_quaternion(self) -> Quaternion {
        let (sb, cb) = self.beta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        Quaternion::new(self.t, self.r * sb * ca, self.r * sb * sa, self.r * cb)
    }

    /// Unit imaginary direction `ι` of the chart point.
    pub fn iota(self) -> Quaternion {
        let (sb, cb) = self.beta.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        Quaternion::new(0.0, sb * ca, sb * sa, cb)
    }
}
