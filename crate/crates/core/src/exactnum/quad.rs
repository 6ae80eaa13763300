use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, ParseError, Rational};

/// An element of a multiquadratic extension of the rationals, stored as
/// `sum(coeff * sqrt(radicand))` over distinct squarefree radicands.
///
/// Distinct squarefree radicands are linearly independent over Q, so two
/// values are equal exactly when their term maps are equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadNum {
    terms: BTreeMap<u64, Rational>,
}

impl QuadNum {
    pub fn zero() -> Self {
        QuadNum::default()
    }

    pub fn one() -> Self {
        QuadNum::from(Rational::one())
    }

    /// `coeff * sqrt(radicand)` for an arbitrary positive radicand; square
    /// factors are pulled out into the coefficient.
    pub fn term(coeff: Rational, radicand: u64) -> Result<Self, ExactError> {
        if radicand == 0 {
            return Ok(QuadNum::zero());
        }
        let (outer, inner) = square_decompose(radicand);
        let mut out = QuadNum::zero();
        out.add_term(inner, coeff * Rational::from(outer));
        Ok(out)
    }

    /// `sqrt(radicand)` for a positive integer radicand.
    pub fn sqrt_int(radicand: u64) -> Self {
        QuadNum::term(Rational::one(), radicand).expect("positive radicand")
    }

    fn add_term(&mut self, radicand: u64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(radicand).or_insert_with(Rational::zero);
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(r, c)| (*r, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&r| r == 1)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, factor: &Rational) -> QuadNum {
        if factor.is_zero() {
            return QuadNum::zero();
        }
        QuadNum {
            terms: self.terms.iter().map(|(r, c)| (*r, c * factor)).collect(),
        }
    }

    pub fn square(&self) -> QuadNum {
        self * self
    }

    /// Floating-point approximation; for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| c.to_f64() * (*r as f64).sqrt())
            .sum()
    }

    /// Exact sign, found by bracketing every radical between rational
    /// bounds and tightening until the bracket excludes zero. Terminates
    /// because a nonzero element is a nonzero real number.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.to_rational() {
            return r.signum();
        }
        let mut bits = 32u32;
        loop {
            let (lo, hi) = self.bounds(bits);
            if lo.signum() == Ordering::Greater {
                return Ordering::Greater;
            }
            if hi.signum() == Ordering::Less {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Rational lower and upper bounds, using radicals truncated to `bits`
    /// fractional bits.
    fn bounds(&self, bits: u32) -> (Rational, Rational) {
        let scale = BigInt::one() << bits;
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (&r, c) in &self.terms {
            let (root_lo, root_hi) = if r == 1 {
                (Rational::one(), Rational::one())
            } else {
                let shifted = BigUint::from(r) << (2 * bits);
                let s = BigInt::from_biguint(Sign::Plus, shifted.sqrt());
                (
                    Rational::new(s.clone(), scale.clone()),
                    Rational::new(s + 1, scale.clone()),
                )
            };
            if c.is_negative() {
                lo += &(c * &root_hi);
                hi += &(c * &root_lo);
            } else {
                lo += &(c * &root_lo);
                hi += &(c * &root_hi);
            }
        }
        (lo, hi)
    }
}

/// Writes `n = outer^2 * inner` with `inner` squarefree.
pub fn square_decompose(mut n: u64) -> (u64, u64) {
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            inner *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // whatever is left is 1 or a prime
    inner *= n;
    (outer, inner)
}

/// The exact nonnegative square root of a nonnegative rational.
pub fn sqrt_rational(r: &Rational) -> Result<QuadNum, ExactError> {
    if r.is_negative() {
        return Err(ExactError::NegativeRadicand(r.clone()));
    }
    if r.is_zero() {
        return Ok(QuadNum::zero());
    }
    let p = r
        .numer()
        .to_u64()
        .ok_or_else(|| ExactError::RadicandOverflow(r.clone()))?;
    let q = r
        .denom()
        .to_u64()
        .ok_or_else(|| ExactError::RadicandOverflow(r.clone()))?;
    // sqrt(p/q) = sqrt(p) * sqrt(q) / q
    let sp = QuadNum::sqrt_int(p);
    let sq = QuadNum::sqrt_int(q);
    Ok((&sp * &sq).scale(&Rational::new(1, q)))
}

/// Both roots of `a x^2 + b x + c = 0`, ordered as
/// `((-b - sqrt(disc)) / 2a, (-b + sqrt(disc)) / 2a)`.
pub fn solve_quadratic(
    a: &Rational,
    b: &Rational,
    c: &Rational,
) -> Result<(QuadNum, QuadNum), ExactError> {
    if a.is_zero() {
        return Err(ExactError::ZeroLeadingCoefficient);
    }
    let disc = b.square() - Rational::from(4) * a * c;
    if disc.is_negative() {
        return Err(ExactError::NegativeDiscriminant(disc));
    }
    let root = sqrt_rational(&disc)?;
    let inv = (Rational::from(2) * a).recip();
    let minus_b = QuadNum::from(-b);
    let lower = (&minus_b - &root).scale(&inv);
    let upper = (&minus_b + &root).scale(&inv);
    Ok((lower, upper))
}

impl From<Rational> for QuadNum {
    fn from(value: Rational) -> Self {
        let mut out = QuadNum::zero();
        out.add_term(1, value);
        out
    }
}

impl From<i64> for QuadNum {
    fn from(value: i64) -> Self {
        QuadNum::from(Rational::from(value))
    }
}

impl Add<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        let mut out = self.clone();
        for (&r, c) in &rhs.terms {
            out.add_term(r, c.clone());
        }
        out
    }
}

impl Sub<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        let mut out = self.clone();
        for (&r, c) in &rhs.terms {
            out.add_term(r, -c);
        }
        out
    }
}

impl Mul<&QuadNum> for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        let mut out = QuadNum::zero();
        for (&r1, c1) in &self.terms {
            for (&r2, c2) in &rhs.terms {
                // both squarefree: r1 r2 = g^2 (r1/g)(r2/g), the cofactors coprime
                let g = r1.gcd(&r2);
                let radicand = (r1 / g) * (r2 / g);
                out.add_term(radicand, c1 * c2 * Rational::from(g));
            }
        }
        out
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            terms: self.terms.iter().map(|(r, c)| (*r, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: QuadNum) -> QuadNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $method(self, rhs: &QuadNum) -> QuadNum {
                (&self).$method(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        if let (Some(a), Some(b)) = (self.to_rational(), other.to_rational()) {
            return a.cmp(&b);
        }
        (self - other).signum()
    }
}

/// Terms in increasing radicand order, joined by `+`; a rational term is
/// printed bare, the others as `c*sqrt(r)`.
impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (r, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if *r == 1 {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadNum {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Quad(s.to_string());
        let mut out = QuadNum::zero();
        if s == "0" {
            return Ok(out);
        }
        for part in s.split('+') {
            let (coeff, radicand) = match part.split_once("*sqrt(") {
                Some((c, rest)) => {
                    let r = rest.strip_suffix(')').ok_or_else(bad)?;
                    let r: u64 = r.parse().map_err(|_| bad())?;
                    (c, r)
                }
                None => (part, 1),
            };
            let coeff: Rational = coeff.parse().map_err(|_| bad())?;
            if coeff.is_zero() || radicand == 0 || square_decompose(radicand).0 != 1 {
                return Err(bad());
            }
            if out.terms.contains_key(&radicand) {
                return Err(bad());
            }
            out.terms.insert(radicand, coeff);
        }
        if out.to_string() != s {
            return Err(bad());
        }
        Ok(out)
    }
}

impl Serialize for QuadNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
