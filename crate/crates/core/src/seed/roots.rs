//! Certified real-root isolation with Sturm sequences over exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{Rational, RealPoly};

/// Sturm sequence `p, p′, −rem(p, p′), …`.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<RealPoly>,
}

impl SturmChain {
    pub fn new(p: &RealPoly) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let rem = -chain.last().unwrap().rem(&next);
            chain.push(next);
            next = rem;
        }
        Self { chain }
    }

    pub fn sign_variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for s in self.chain.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.sign_variations(a).saturating_sub(self.sign_variations(b))
    }
}

/// Cauchy bound: every root satisfies `|x| < 1 + max |aᵢ / aₙ|`.
pub fn root_bound(p: &RealPoly) -> Rational {
    let coeffs = p.coeffs();
    let Some((lead, rest)) = coeffs.split_last() else {
        return Rational::one();
    };
    let m = rest
        .iter()
        .map(|a| (a / lead).abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc });
    m + Rational::one()
}

/// Isolate every root of the square-free polynomial `p` in `(0, ∞)` and
/// refine each to an interval of width at most `width`. Roots hit exactly
/// by a bisection point are returned as degenerate intervals.
pub fn isolate_positive_roots(p: &RealPoly, width: &Rational) -> Vec<(Rational, Rational)> {
    if p.is_constant() {
        return Vec::new();
    }
    let sturm = SturmChain::new(p);
    let mut pending = vec![(Rational::zero(), root_bound(p))];
    let mut out = Vec::new();
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((a, b)) = pending.pop() {
        match sturm.count_in(&a, &b) {
            0 => {}
            1 => out.push(refine(p, &sturm, a, b, width)),
            _ => {
                let m = (&a + &b) / &two;
                pending.push((m.clone(), b));
                pending.push((a, m));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Bisect `(a, b]`, known to hold exactly one root, down to `width`.
fn refine(
    p: &RealPoly,
    sturm: &SturmChain,
    mut a: Rational,
    mut b: Rational,
    width: &Rational,
) -> (Rational, Rational) {
    let two = Rational::from_integer(BigInt::from(2));
    if p.sign_at(&b) == 0 {
        return (b.clone(), b);
    }
    while &b - &a > *width {
        let m = (&a + &b) / &two;
        if p.sign_at(&m) == 0 {
            return (m.clone(), m);
        }
        if sturm.count_in(&a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    let s = simplest_rational_in(&a, &b);
    if p.sign_at(&s) == 0 {
        return (s.clone(), s);
    }
    (a, b)
}

/// The rational with the smallest denominator in `[a, b]`, `0 ≤ a ≤ b`,
/// found by walking the continued-fraction expansions together.
pub fn simplest_rational_in(a: &Rational, b: &Rational) -> Rational {
    let fl = a.floor();
    if fl == *a {
        return a.clone();
    }
    if fl < b.floor() {
        return fl + Rational::one();
    }
    // same integer part: recurse on the reciprocals of the fractional parts
    let inner = simplest_rational_in(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}
