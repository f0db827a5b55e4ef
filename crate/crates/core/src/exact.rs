//! Exact rational arithmetic, closed intervals and orientation-preserving
//! similitudes.
//!
//! Every geometric predicate in the crate (endpoint comparisons, overlap
//! detection, residual equality) reduces to operations in this module, so
//! nothing here ever touches floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("malformed rational `{0}`: expected [-]digits[/digits]")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("contraction ratio {0} is not in (0, 1)")]
    RatioOutOfRange(Rational),
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Inverted { lo: Box<Rational>, hi: Box<Rational> },
}

/// Arbitrary-precision signed fraction, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ExactError> {
        let (n, d) = (numer.into(), denom.into());
        if d.is_zero() {
            return Err(ExactError::ZeroDenominator(format!("{n}/{d}")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }

    /// Panicking constructor for literals known to be valid.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Rational::new(numer, denom).expect("nonzero denominator")
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn pow(&self, exp: u32) -> Rational {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn min(self, other: Rational) -> Rational {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Rational) -> Rational {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`; only used where exactness has already ended
    /// (logarithms, spectral radii).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact conversion of a finite float. `None` for NaN and infinities.
    pub fn from_f64(x: f64) -> Option<Rational> {
        BigRational::from_float(x).map(Rational)
    }

    /// Fixed-point decimal rendering with `places` fractional digits,
    /// rounded half-to-even on the exact value.
    pub fn to_decimal(&self, places: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), places);
        let scaled = self.0.numer() * &scale;
        let den = self.0.denom();
        let (mut q, r) = scaled.abs().div_rem(den);
        let twice = &r * 2u32;
        match twice.cmp(den) {
            Ordering::Greater => q += 1u32,
            Ordering::Equal if q.is_odd() => q += 1u32,
            _ => {}
        }
        let negative = self.0.is_negative() && !q.is_zero();
        let digits = q.to_string();
        let digits = if digits.len() <= places {
            format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int_part, frac_part) = digits.split_at(digits.len() - places);
        let sign = if negative { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, ExactError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ExactError::Malformed(whole.to_string()));
    }
    BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(|| ExactError::Malformed(whole.to_string()))
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Grammar: `[-]digits[/digits]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (parse_digits(n, s)?, parse_digits(d, s)?),
            None => (parse_digits(body, s)?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator(s.to_string()));
        }
        let num = if negative { -num } else { num };
        Rational::new(num, den)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

/// Closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::Inverted { lo: Box::new(lo), hi: Box::new(hi) });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Closed intersection; a shared endpoint yields a degenerate interval.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = (&self.lo).max(&other.lo).clone();
        let hi = (&self.hi).min(&other.hi).clone();
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Contracting similitude `x -> ratio * x + offset` with `0 < ratio < 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    ratio: Rational,
    offset: Rational,
}

impl AffineMap {
    pub fn new(ratio: Rational, offset: Rational) -> Result<Self, ExactError> {
        if !ratio.is_positive() || ratio >= Rational::one() {
            return Err(ExactError::RatioOutOfRange(ratio));
        }
        Ok(AffineMap { ratio, offset })
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        &self.ratio * x + &self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> AffineMap {
        AffineMap {
            ratio: &self.ratio * &inner.ratio,
            offset: &self.ratio * &inner.offset + &self.offset,
        }
    }

    pub fn fixed_point(&self) -> Rational {
        &self.offset / (Rational::one() - &self.ratio)
    }

    pub fn apply_interval(&self, iv: &Interval) -> Interval {
        Interval {
            lo: self.apply(&iv.lo),
            hi: self.apply(&iv.hi),
        }
    }

    pub fn invert_apply(&self, y: &Rational) -> Rational {
        (y - &self.offset) / &self.ratio
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {}*x + {}", self.ratio, self.offset)
    }
}

pub fn compose(outer: &AffineMap, inner: &AffineMap) -> AffineMap {
    outer.compose(inner)
}

pub fn fixed_point(map: &AffineMap) -> Rational {
    map.fixed_point()
}

pub fn apply_interval(map: &AffineMap, iv: &Interval) -> Interval {
    map.apply_interval(iv)
}

pub fn invert_apply(map: &AffineMap, y: &Rational) -> Rational {
    map.invert_apply(y)
}

pub fn intersect(p: &Interval, q: &Interval) -> Option<Interval> {
    p.intersect(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn map(r: &str, b: &str) -> AffineMap {
        AffineMap::new(q(r), q(b)).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(q("4/25").to_string(), "4/25");
        assert_eq!(q("-6/4").to_string(), "-3/2");
        assert_eq!(q("10/5").to_string(), "2");
        assert_eq!(q("-0").to_string(), "0");
        assert!(matches!("1/0".parse::<Rational>(), Err(ExactError::ZeroDenominator(_))));
        for bad in ["", "-", "1/", "/2", "1.5", "+1", "1/-2", "a", "1 /2"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn decimal_rendering_rounds_half_even() {
        assert_eq!(q("1/8").to_decimal(2), "0.12");
        assert_eq!(q("3/8").to_decimal(2), "0.38");
        assert_eq!(q("-1/8").to_decimal(2), "-0.12");
        assert_eq!(q("1/3").to_decimal(9), "0.333333333");
        assert_eq!(q("2/3").to_decimal(9), "0.666666667");
        assert_eq!(q("-1/1000").to_decimal(2), "0.00");
        assert_eq!(q("7").to_decimal(3), "7.000");
        assert_eq!(q("5/2").to_decimal(0), "2");
    }

    #[test]
    fn compose_examples() {
        // (1/5)((1/5)x + 4/5) = x/25 + 4/25
        let h = compose(&map("1/5", "0"), &map("1/5", "4/5"));
        assert_eq!(h, map("1/25", "4/25"));
        let g = compose(&map("1/5", "4/5"), &map("1/5", "0"));
        assert_eq!(g, map("1/25", "4/5"));
        let half = map("1/2", "0");
        assert_eq!(compose(&half, &half), map("1/4", "0"));
        for x in ["0", "1", "5", "-7/3"] {
            let x = q(x);
            assert_eq!(h.apply(&x), map("1/5", "0").apply(&map("1/5", "4/5").apply(&x)));
        }
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_point(&map("1/5", "0")), q("0"));
        assert_eq!(fixed_point(&map("1/5", "4/5")), q("1"));
        assert_eq!(fixed_point(&map("1/25", "4/25")), q("1/6"));
    }

    #[test]
    fn apply_interval_examples() {
        let unit = Interval::new(q("0"), q("1")).unwrap();
        assert_eq!(apply_interval(&map("1/5", "0"), &unit), Interval::new(q("0"), q("1/5")).unwrap());
        assert_eq!(
            apply_interval(&map("1/5", "4/25"), &unit),
            Interval::new(q("4/25"), q("9/25")).unwrap()
        );
        let c = Interval::point(q("3/7"));
        let f = map("2/3", "1/9");
        assert_eq!(apply_interval(&f, &c), Interval::point(f.apply(&q("3/7"))));
    }

    #[test]
    fn invert_apply_examples() {
        assert_eq!(invert_apply(&map("1/5", "0"), &q("1/5")), q("1"));
        assert_eq!(invert_apply(&map("1/5", "4/25"), &q("1/5")), q("1/5"));
        assert_eq!(invert_apply(&map("1/5", "4/5"), &q("5/6")), q("1/6"));
    }

    #[test]
    fn intersect_examples() {
        let iv = |a: &str, b: &str| Interval::new(q(a), q(b)).unwrap();
        assert_eq!(intersect(&iv("0", "1/5"), &iv("4/25", "9/25")), Some(iv("4/25", "1/5")));
        assert_eq!(intersect(&iv("4/25", "9/25"), &iv("16/25", "21/25")), None);
        assert_eq!(intersect(&iv("0", "1"), &iv("1", "2")), Some(iv("1", "1")));
    }

    #[test]
    fn constructor_rejections() {
        assert!(AffineMap::new(q("1"), q("0")).is_err());
        assert!(AffineMap::new(q("0"), q("0")).is_err());
        assert!(AffineMap::new(q("-1/2"), q("0")).is_err());
        assert!(Interval::new(q("1"), q("0")).is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..500).prop_map(|(n, d)| Rational::frac(n, d))
    }

    fn arb_map() -> impl Strategy<Value = AffineMap> {
        (1i64..99, arb_rational()).prop_map(|(r, b)| AffineMap::new(Rational::frac(r, 100), b).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_function_composition(f in arb_map(), g in arb_map(), x in arb_rational()) {
            let h = compose(&f, &g);
            prop_assert_eq!(h.apply(&x), f.apply(&g.apply(&x)));
            prop_assert_eq!(h.ratio(), &(f.ratio() * g.ratio()));
        }

        #[test]
        fn fixed_point_is_fixed(f in arb_map()) {
            let p = fixed_point(&f);
            prop_assert_eq!(f.apply(&p), p);
        }

        #[test]
        fn invert_apply_inverts(f in arb_map(), x in arb_rational()) {
            prop_assert_eq!(invert_apply(&f, &f.apply(&x)), x.clone());
            prop_assert_eq!(f.apply(&invert_apply(&f, &x)), x);
        }

        #[test]
        fn apply_interval_preserves_orientation(f in arb_map(), a in arb_rational(), b in arb_rational()) {
            prop_assume!(a < b);
            let img = apply_interval(&f, &Interval::new(a, b).unwrap());
            prop_assert!(img.lo() < img.hi());
        }

        #[test]
        fn arithmetic_stays_normalized(a in arb_rational(), b in arb_rational()) {
            for r in [&a + &b, &a - &b, &a * &b] {
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(r.denom()).is_one());
            }
            if !b.is_zero() {
                let r = &a / &b;
                prop_assert!(r.denom().is_positive());
                prop_assert!(r.numer().gcd(r.denom()).is_one());
            }
        }

        #[test]
        fn text_round_trip(a in arb_rational()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
