//! Real-coefficient rational seeds `F = P/Q` and their ring structure.
//!
//! Seeds are kept in canonical form (`gcd(P, Q) = 1`, `Q` monic), so two
//! seeds are equal exactly when their canonical coefficients agree.

pub mod parse;
pub mod poly;
pub mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use poly::{horner, rational_to_f64, Rational, RealPoly};

pub use parse::parse_seed;

/// Relative scale of the pole guard: `|Q(z)| ≤ EPS_POLE·(1 + |z|^deg Q)`.
pub const EPS_POLE: f64 = 1e-12;

/// Values at or below this magnitude count as zero.
pub const EPS_ZERO: f64 = 1e-10;

/// Width to which certified zero radii are refined.
pub const RADIUS_WIDTH: f64 = 1e-12;

/// A rational function with real coefficients in canonical form.
#[derive(Clone)]
pub struct RationalSeed {
    num: RealPoly,
    den: RealPoly,
    num_f64: Vec<f64>,
    den_f64: Vec<f64>,
}

impl PartialEq for RationalSeed {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl Eq for RationalSeed {}

impl RationalSeed {
    /// Build `num / den` in canonical form.
    pub fn new(num: RealPoly, den: RealPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let (num, den) = if num.is_zero() {
            (num, RealPoly::one())
        } else {
            let g = num.gcd(&den);
            let (n, d) = (num.exact_div(&g), den.exact_div(&g));
            let lc = d.leading().expect("nonzero").recip();
            (n.scale(&lc), d.scale(&lc))
        };
        Ok(Self::from_canonical(num, den))
    }

    fn from_canonical(num: RealPoly, den: RealPoly) -> Self {
        let num_f64 = num.to_f64_coeffs();
        let den_f64 = den.to_f64_coeffs();
        Self { num, den, num_f64, den_f64 }
    }

    pub fn polynomial(p: RealPoly) -> Self {
        Self::from_canonical(p, RealPoly::one())
    }

    pub fn zero() -> Self {
        Self::polynomial(RealPoly::zero())
    }

    pub fn one() -> Self {
        Self::polynomial(RealPoly::one())
    }

    /// The identity seed `z`.
    pub fn var() -> Self {
        Self::polynomial(RealPoly::var())
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(RealPoly::constant(c))
    }

    pub fn num(&self) -> &RealPoly {
        &self.num
    }

    pub fn den(&self) -> &RealPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn pow(&self, e: u32) -> Self {
        // coprime inputs stay coprime, and a monic power is monic
        Self::from_canonical(self.num.pow(e), self.den.pow(e))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroElement);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Quotient rule `(P′Q − PQ′) / Q²`.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Multiplicative inverse `Q/P` in the fraction field.
    pub fn localize(&self) -> Result<Localized> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let inverse = Self::new(self.den.clone(), self.num.clone())?;
        Ok(Localized { inverse, new_poles: self.num.monic() })
    }

    /// Evaluate at a complex point by Horner on numerator and denominator.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        let q = horner(&self.den_f64, z);
        let deg = self.den.degree().unwrap_or(0) as i32;
        if q.norm() <= EPS_POLE * (1.0 + z.norm().powi(deg)) {
            return Err(Error::NearPole);
        }
        Ok(horner(&self.num_f64, z) / q)
    }

    /// Real evaluation at a real point (real by Schwarz symmetry).
    pub fn eval_real(&self, t: f64) -> Result<f64> {
        self.eval_complex(Complex64::new(t, 0.0)).map(|w| w.re)
    }

    /// Poles of the seed in the complex plane, from the roots of `Q`.
    pub fn poles(&self) -> Vec<Complex64> {
        complex_roots(&self.den_f64)
    }

    /// Distance from `z` to the nearest pole; infinite for polynomials.
    pub fn pole_distance(&self, z: Complex64) -> f64 {
        self.poles()
            .iter()
            .map(|p| (p - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `p(i·r) = E(r) + i·O(r)` split of a polynomial seed.
    pub fn imaginary_axis_parts(&self) -> (RealPoly, RealPoly) {
        self.num.imaginary_axis_parts()
    }

    /// Certified positive radii `r` with `F(i·r) = 0`.
    pub fn zero_radii(&self) -> Result<ZeroRadiusList> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (e, o) = self.num.imaginary_axis_parts();
        let mut common = e.gcd(&o);
        let (de, dodd) = self.den.imaginary_axis_parts();
        let den_common = de.gcd(&dodd);
        // drop any factor shared with the denominator's imaginary-axis zeros
        loop {
            let g = common.gcd(&den_common);
            if g.is_constant() {
                break;
            }
            common = common.exact_div(&g);
        }
        let (common, _) = common.strip_zero_root();
        let width = Rational::new(BigInt::one(), BigInt::from(10u64.pow(12)));
        let two = Rational::from_integer(BigInt::from(2));
        let mut entries: Vec<(f64, usize)> = Vec::new();
        for (factor, multiplicity) in common.square_free_factors() {
            for (a, b) in roots::isolate_positive_roots(&factor, &width) {
                entries.push((rational_to_f64(&((a + b) / &two)), multiplicity));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(ZeroRadiusList { entries })
    }

    /// Number of regions the zero spheres cut the imaginary 3-space into.
    pub fn component_count(&self) -> Result<usize> {
        Ok(self.zero_radii()?.len() + 1)
    }

    pub fn classify(&self) -> SeedClass {
        if self.is_constant() {
            SeedClass::Degenerate
        } else {
            SeedClass::DiffeoAlmostEverywhere
        }
    }

    /// Whether `F(z0)` is far enough from zero to be inverted.
    pub fn algebraically_invertible_at(&self, z0: Complex64) -> Result<bool> {
        Ok(self.eval_complex(z0)?.norm() > EPS_ZERO)
    }
}

/// Result of inverting a seed: `1/F` together with the monic polynomial
/// whose zeros are the poles introduced by the inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct Localized {
    pub inverse: RationalSeed,
    pub new_poles: RealPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedClass {
    Degenerate,
    DiffeoAlmostEverywhere,
}

/// Strictly increasing positive radii with multiplicities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ZeroRadiusList {
    entries: Vec<(f64, usize)>,
}

impl ZeroRadiusList {
    pub fn radii(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn entries(&self) -> &[(f64, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_radius(&self) -> Option<f64> {
        self.entries.last().map(|e| e.0)
    }
}

/// Simultaneous-iteration (Aberth) roots of a real polynomial given in
/// ascending coefficients.
fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return vec![Complex64::new(-monic[0], 0.0)];
    }
    let dmonic: Vec<f64> = monic.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * bound, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let p = horner(&monic, z[k]);
            let dp = horner(&dmonic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::one() / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

impl Add for &RationalSeed {
    type Output = RationalSeed;
    fn add(self, rhs: &RationalSeed) -> RationalSeed {
        if self.den == rhs.den {
            return RationalSeed::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RationalSeed::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero")
    }
}

impl Sub for &RationalSeed {
    type Output = RationalSeed;
    fn sub(self, rhs: &RationalSeed) -> RationalSeed {
        self + &(-rhs)
    }
}

impl Mul for &RationalSeed {
    type Output = RationalSeed;
    fn mul(self, rhs: &RationalSeed) -> RationalSeed {
        RationalSeed::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero")
    }
}

impl Neg for &RationalSeed {
    type Output = RationalSeed;
    fn neg(self) -> RationalSeed {
        RationalSeed::from_canonical(-&self.num, self.den.clone())
    }
}

impl Neg for RationalSeed {
    type Output = RationalSeed;
    fn neg(self) -> RationalSeed {
        -&self
    }
}

impl Add for RationalSeed {
    type Output = RationalSeed;
    fn add(self, rhs: RationalSeed) -> RationalSeed {
        &self + &rhs
    }
}

impl Sub for RationalSeed {
    type Output = RationalSeed;
    fn sub(self, rhs: RationalSeed) -> RationalSeed {
        &self - &rhs
    }
}

impl Mul for RationalSeed {
    type Output = RationalSeed;
    fn mul(self, rhs: RationalSeed) -> RationalSeed {
        &self * &rhs
    }
}

/// Writes the seed back in the grammar accepted by [`parse_seed`].
impl fmt::Display for RationalSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalSeed({self})")
    }
}

impl std::str::FromStr for RationalSeed {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_seed(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seed(s: &str) -> RationalSeed {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(seed("z^2").eval_complex(c(1.0, 1.0)).unwrap(), c(0.0, 2.0));
        let z = c(-0.3, 2.7);
        assert_eq!(seed("z").eval_complex(z).unwrap(), z);
        assert_eq!(seed("1/z").eval_complex(c(0.0, 0.0)), Err(Error::NearPole));
    }

    #[test]
    fn schwarz_symmetry() {
        let f = seed("(z^3 - 2*z + 5)/(z^2 + 3/2)");
        for &(re, im) in &[(0.3, 1.1), (-2.0, 0.4), (1.5, -0.7)] {
            let w = f.eval_complex(c(re, im)).unwrap();
            let wc = f.eval_complex(c(re, -im)).unwrap();
            assert!((w.conj() - wc).norm() <= 1e-12 * w.norm());
        }
        assert_eq!(f.eval_complex(c(0.7, 0.0)).unwrap().im, 0.0);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(seed("z^2").derivative(), seed("2*z"));
        assert_eq!(seed("3").derivative(), RationalSeed::zero());
        assert_eq!(seed("1/z").derivative(), seed("-1/z^2"));
    }

    #[test]
    fn ring_examples() {
        let z = seed("z");
        assert_eq!(&z + &(-&z), RationalSeed::zero());
        assert_eq!(&seed("z^2+1") * &seed("z^2+4"), seed("z^4+5*z^2+4"));
    }

    #[test]
    fn localize_examples() {
        assert_eq!(seed("z").localize().unwrap().inverse, seed("1/z"));
        let loc = seed("z^2+1").localize().unwrap();
        assert_eq!(loc.inverse, seed("1/(z^2+1)"));
        assert_eq!(loc.new_poles, RealPoly::from_ints(&[1, 0, 1]));
        let mut poles = loc.inverse.poles();
        poles.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((poles[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((poles[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(RationalSeed::zero().localize(), Err(Error::ZeroElement));
    }

    #[test]
    fn canonical_form() {
        let f = RationalSeed::new(RealPoly::from_ints(&[2, 2]), RealPoly::from_ints(&[4, 2])).unwrap();
        assert_eq!(f.num(), &RealPoly::from_ints(&[1, 1]));
        assert_eq!(f.den(), &RealPoly::from_ints(&[2, 1]));
        assert_eq!(RationalSeed::new(RealPoly::one(), RealPoly::zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn zero_radii_examples() {
        assert!(seed("z").zero_radii().unwrap().is_empty());
        assert_eq!(seed("z^2+1").zero_radii().unwrap().radii(), vec![1.0]);
        let r = seed("(z^2+1)*(z^2+4)").zero_radii().unwrap();
        assert_eq!(r.radii(), vec![1.0, 2.0]);
        assert_eq!(RationalSeed::zero().zero_radii(), Err(Error::ZeroElement));
    }

    #[test]
    fn zero_radii_irrational_and_multiple() {
        // zeros at ±i√2 (double) and ±3i
        let r = seed("(z^2+2)^2*(z^2+9)").zero_radii().unwrap();
        assert_eq!(r.len(), 2);
        assert!((r.radii()[0] - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.multiplicities(), vec![2, 1]);
        // a zero off the imaginary axis does not contribute
        assert!(seed("z^2 - 2*z + 2").zero_radii().unwrap().is_empty());
        // zeros of the denominator are not zeros of F
        assert!(seed("1/(z^2+1)").zero_radii().unwrap().is_empty());
        assert_eq!(seed("(z^2+1)/z").zero_radii().unwrap().radii(), vec![1.0]);
    }

    #[test]
    fn component_count_examples() {
        assert_eq!(seed("z").component_count().unwrap(), 1);
        assert_eq!(seed("z^2+1").component_count().unwrap(), 2);
        assert_eq!(seed("(z^2+1)*(z^2+4)").component_count().unwrap(), 3);
        // a doubled sphere separates once
        assert_eq!(seed("(z^2+1)^2").component_count().unwrap(), 2);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(seed("5").classify(), SeedClass::Degenerate);
        assert_eq!(seed("z").classify(), SeedClass::DiffeoAlmostEverywhere);
        assert_eq!(seed("z^2").classify(), SeedClass::DiffeoAlmostEverywhere);
        assert_eq!(seed("0").classify(), SeedClass::Degenerate);
    }

    #[test]
    fn invertibility_examples() {
        assert!(!seed("z^2+1").algebraically_invertible_at(c(0.0, 1.0)).unwrap());
        assert!(seed("z").algebraically_invertible_at(c(1.0, 0.0)).unwrap());
        assert_eq!(seed("1/z").algebraically_invertible_at(c(0.0, 0.0)), Err(Error::NearPole));
    }

    #[test]
    fn poles_of_regression_seeds() {
        assert!(seed("z^3").poles().is_empty());
        let p = seed("(z^2+1)/z").poles();
        assert_eq!(p.len(), 1);
        assert!(p[0].norm() < 1e-15);
        let p = seed("1/(z^3 - 6*z^2 + 11*z - 6)").poles();
        let mut re: Vec<f64> = p.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    fn small_poly() -> impl Strategy<Value = RealPoly> {
        prop::collection::vec((-5i64..=5, 1i64..=3), 1..=5).prop_map(|cs| {
            RealPoly::from_coeffs(cs.into_iter().map(|(n, d)| poly::rational(n, d)).collect())
        })
    }

    fn small_seed() -> impl Strategy<Value = RationalSeed> {
        (small_poly(), small_poly().prop_filter("nonzero", |p| !p.is_zero()))
            .prop_map(|(n, d)| RationalSeed::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_commutes(f in small_seed(), g in small_seed()) {
            prop_assert_eq!(&f * &g, &g * &f);
        }

        #[test]
        fn localize_inverts(f in small_seed().prop_filter("nonzero", |f| !f.is_zero())) {
            let inv = f.localize().unwrap().inverse;
            prop_assert_eq!(&inv * &f, RationalSeed::one());
        }

        #[test]
        fn display_parse_round_trip(f in small_seed()) {
            let text = f.to_string();
            prop_assert_eq!(parse_seed(&text).unwrap(), f);
        }

        #[test]
        fn imaginary_axis_split_matches_eval(p in small_poly(), r in 0.01..3.0f64) {
            let f = RationalSeed::polynomial(p);
            let (e, o) = f.imaginary_axis_parts();
            let w = f.eval_complex(Complex64::new(0.0, r)).unwrap();
            let ev = horner(&e.to_f64_coeffs(), Complex64::new(r, 0.0)).re;
            let ov = horner(&o.to_f64_coeffs(), Complex64::new(r, 0.0)).re;
            let scale = 1.0 + w.norm();
            prop_assert!((w.re - ev).abs() <= 1e-12 * scale);
            prop_assert!((w.im - ov).abs() <= 1e-12 * scale);
        }
    }
}
