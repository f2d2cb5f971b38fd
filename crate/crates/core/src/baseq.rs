//! Base-q digits and truncations of positive rationals.
//!
//! For `t > 0` and an integer `q >= 2` the n-th digit is
//! `⌈t q^n - 1⌉ - q ⌈t q^(n-1) - 1⌉` and the n-th truncation is
//! `⌈t q^n - 1⌉ / q^n`. Truncations approach `t` strictly from below, so an
//! element of `Z[1/q]` has a non-terminating expansion ending in `q - 1`s.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(ExactRational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
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

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Round toward +∞.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self * base^exp` for a possibly negative exponent.
    pub fn scale_pow(&self, base: u64, exp: i64) -> Self {
        let factor = BigInt::from(base).pow(exp.unsigned_abs() as u32);
        if exp >= 0 {
            ExactRational(&self.0 * BigRational::from_integer(factor))
        } else {
            ExactRational(&self.0 / BigRational::from_integer(factor))
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `"a"` or `"a/b"` with decimal integers.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |pos: usize| Error::parse(pos, format!("invalid rational literal {s:?}"));
        let int = |text: &str, offset: usize| -> Result<BigInt> {
            let body = text.strip_prefix(['-', '+']).unwrap_or(text);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(offset));
            }
            text.parse::<BigInt>().map_err(|_| bad(offset))
        };
        match s.split_once('/') {
            None => Ok(ExactRational::from_integer(int(s, 0)?)),
            Some((n, d)) => {
                let numer = int(n.trim(), 0)?;
                let denom = int(d.trim(), n.len() + 1)?;
                if denom.is_zero() {
                    return Err(Error::parse(n.len() + 1, "zero denominator"));
                }
                Ok(ExactRational(BigRational::new(numer, denom)))
            }
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

fn check_args(t: &ExactRational, q: u64) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::domain(format!("base-q expansion needs t > 0, got {t}")));
    }
    if q < 2 {
        return Err(Error::domain(format!("base must be at least 2, got {q}")));
    }
    Ok(())
}

/// `⌈t q^n - 1⌉`, the largest integer strictly below `t q^n`.
fn ceil_below(t: &ExactRational, q: u64, n: i64) -> BigInt {
    let scaled = t.scale_pow(q, n);
    scaled.ceil() - 1
}

/// The n-th base-q digit of `t`.
pub fn digit(t: &ExactRational, q: u64, n: i64) -> Result<u64> {
    check_args(t, q)?;
    let d = ceil_below(t, q, n) - BigInt::from(q) * ceil_below(t, q, n - 1);
    d.to_u64()
        .filter(|&d| d < q)
        .ok_or_else(|| Error::invariant(format!("digit {d} of {t} outside [0, {q})")))
}

/// The n-th base-q truncation `⌈t q^n - 1⌉ / q^n`.
pub fn truncation(t: &ExactRational, q: u64, n: u32) -> Result<ExactRational> {
    check_args(t, q)?;
    let numer = ceil_below(t, q, n as i64);
    Ok(ExactRational(BigRational::new(
        numer,
        BigInt::from(q).pow(n),
    )))
}

/// Whether every prime dividing the denominator of `t` divides `q`.
pub fn is_in_z_inv_q(t: &ExactRational, q: u64) -> Result<bool> {
    check_args(t, q)?;
    let q = BigInt::from(q);
    let mut den = t.denom().clone();
    loop {
        let g = den.gcd(&q);
        if g.is_one() {
            return Ok(den.is_one());
        }
        while (&den % &g).is_zero() {
            den /= &g;
        }
    }
}

/// Smallest `e >= 1` such that `q' = q^e` satisfies `q'(q' - 1) t ∈ Z`.
///
/// In base `q'` the digits of `t` are then nonzero and constant from the
/// second digit on.
pub fn stabilize_base(t: &ExactRational, q: u64) -> Result<u32> {
    check_args(t, q)?;
    let (coprime, _) = split_denominator(t.denom(), q);
    // The part of the denominator coprime to q forces e to be a multiple of
    // the order of q modulo that part, so the loop terminates within
    // ord * (max prime-power exponent) steps.
    let limit = coprime
        .to_u64()
        .map(|c| c.saturating_mul(128).max(128))
        .unwrap_or(u64::MAX);
    let mut e: u32 = 1;
    loop {
        let qe = BigInt::from(q).pow(e);
        let prod = ExactRational(BigRational::from_integer(&qe * (&qe - 1u32))) * t.clone();
        if prod.is_integer() {
            return Ok(e);
        }
        if u64::from(e) >= limit {
            return Err(Error::budget(format!(
                "no stabilising power of {q} found for {t} within {limit} steps"
            )));
        }
        e += 1;
    }
}

/// Splits a denominator into (part coprime to q, part supported on q's primes).
fn split_denominator(den: &BigInt, q: u64) -> (BigInt, BigInt) {
    let q = BigInt::from(q);
    let mut coprime = den.clone();
    let mut supported = BigInt::one();
    loop {
        let g = coprime.gcd(&q);
        if g.is_one() {
            return (coprime, supported);
        }
        while (&coprime % &g).is_zero() {
            coprime /= &g;
            supported *= &g;
        }
    }
}

/// The complete digit sequence of a positive rational in base `q`, stored
/// as a preperiod followed by one period.
///
/// The expansion is driven by the remainder `r_n = t q^n - ⌈t q^n - 1⌉`,
/// which lies in `(0, 1]` and has denominator dividing that of `t`, so it
/// repeats after finitely many steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitExpansion {
    q: u64,
    /// Digits `t^(1), ..., t^(preperiod + period)`.
    digits: Vec<u64>,
    preperiod: usize,
    period: usize,
}

impl DigitExpansion {
    /// Detects the eventual period; `max_states` bounds the remainder orbit.
    pub fn new(t: &ExactRational, q: u64, max_states: usize) -> Result<Self> {
        check_args(t, q)?;
        let big_q = BigRational::from_integer(BigInt::from(q));
        let mut r = &t.0 - BigRational::from_integer(t.ceil() - 1);
        let mut seen: HashMap<BigRational, usize> = HashMap::new();
        let mut digits = Vec::new();
        loop {
            if let Some(&first) = seen.get(&r) {
                return Ok(DigitExpansion {
                    q,
                    digits,
                    preperiod: first,
                    period: seen.len() - first,
                });
            }
            if seen.len() >= max_states {
                return Err(Error::budget(format!(
                    "digit period of {t} in base {q} exceeds {max_states}"
                )));
            }
            seen.insert(r.clone(), seen.len());
            let scaled = &r * &big_q;
            let d: BigInt = scaled.ceil().to_integer() - 1;
            r = scaled - BigRational::from_integer(d.clone());
            digits.push(d.to_u64().expect("digit fits in u64"));
        }
    }

    pub fn base(&self) -> u64 {
        self.q
    }

    pub fn preperiod(&self) -> usize {
        self.preperiod
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// The n-th digit for `n >= 1`.
    pub fn digit(&self, n: usize) -> u64 {
        assert!(n >= 1, "digits are indexed from 1");
        let idx = n - 1;
        if idx < self.preperiod {
            self.digits[idx]
        } else {
            self.digits[self.preperiod + (idx - self.preperiod) % self.period]
        }
    }

    /// Whether all digits beyond the preperiod equal `q - 1`.
    pub fn eventually_maximal(&self) -> bool {
        self.digits[self.preperiod..].iter().all(|&d| d == self.q - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    /// Largest integer strictly below a/b, by plain integer division.
    fn oracle_ceil_below(a: i128, b: i128) -> i128 {
        (a - 1).div_euclid(b)
    }

    /// Digit via the ceiling formula evaluated on raw i128 fractions.
    fn oracle_digit(num: i128, den: i128, q: i128, n: u32) -> i128 {
        let hi = oracle_ceil_below(num * q.pow(n), den);
        let lo = oracle_ceil_below(num * q.pow(n - 1), den);
        hi - q * lo
    }

    #[test]
    fn digit_examples() {
        assert_eq!(digit(&r(1, 2), 5, 1).unwrap(), 2);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(digit(&r(1, 1), p, 1).unwrap(), p - 1);
        }
        let expected: Vec<u64> = (1..=5).map(|n| oracle_digit(2, 45, 3, n) as u64).collect();
        assert_eq!(expected, vec![0, 0, 1, 0, 1]);
        let got: Vec<u64> = (1..=5).map(|n| digit(&r(2, 45), 3, n).unwrap()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncation(&r(1, 2), 5, 1).unwrap(), r(2, 5));
        assert_eq!(oracle_ceil_below(2 * 3, 9), 0);
        assert_eq!(truncation(&r(2, 9), 3, 1).unwrap(), r(0, 1));
        assert_eq!(oracle_ceil_below(3 * 8, 7), 3);
        assert_eq!(truncation(&r(3, 7), 2, 3).unwrap(), r(3, 8));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(digit(&r(0, 1), 3, 1), Err(Error::Domain(_))));
        assert!(matches!(digit(&r(-1, 3), 3, 1), Err(Error::Domain(_))));
        assert!(matches!(truncation(&r(1, 3), 1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn z_inv_q_examples() {
        assert!(is_in_z_inv_q(&r(3, 8), 2).unwrap());
        assert!(!is_in_z_inv_q(&r(2, 45), 3).unwrap());
        assert!(is_in_z_inv_q(&r(1, 1), 7).unwrap());
        assert!(is_in_z_inv_q(&r(5, 36), 6).unwrap());
        assert!(!is_in_z_inv_q(&r(5, 36), 4).unwrap());
    }

    #[test]
    fn stabilize_examples() {
        assert_eq!(stabilize_base(&r(1, 2), 5).unwrap(), 1);
        // 3^4 = 81 is the first power with 9 | 3^e and 5 | 3^e - 1.
        assert_eq!((81 * 80 * 2) % 45, 0);
        assert_eq!(stabilize_base(&r(2, 45), 3).unwrap(), 4);
        assert_eq!(stabilize_base(&r(1, 3), 2).unwrap(), 2);
    }

    #[test]
    fn stabilized_digits_are_constant() {
        for (n, d, q) in [(2i64, 45i64, 3u64), (1, 3, 2), (3, 7, 2), (5, 6, 7), (2, 9, 3)] {
            let t = r(n, d);
            let e = stabilize_base(&t, q).unwrap();
            let big = q.pow(e);
            let second = digit(&t, big, 2).unwrap();
            assert_ne!(second, 0);
            for k in 3..8 {
                assert_eq!(digit(&t, big, k).unwrap(), second, "t={t} q={big} n={k}");
            }
        }
    }

    #[test]
    fn expansion_matches_direct_digits() {
        let t = r(2, 45);
        let exp = DigitExpansion::new(&t, 3, 1000).unwrap();
        for n in 1..40 {
            assert_eq!(exp.digit(n), digit(&t, 3, n as i64).unwrap());
        }
        assert!(!exp.eventually_maximal());
        let exp = DigitExpansion::new(&r(3, 8), 2, 1000).unwrap();
        assert!(exp.eventually_maximal());
        assert_eq!(exp.period(), 1);
    }

    #[test]
    fn rational_text_round_trip() {
        let t: ExactRational = "6/-4".parse().unwrap();
        assert_eq!(t, r(-3, 2));
        assert_eq!(t.to_string(), "-3/2");
        assert_eq!("7".parse::<ExactRational>().unwrap().to_string(), "7/1");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("1/x".parse::<ExactRational>().is_err());
        assert!("".parse::<ExactRational>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn truncation_recurrence(num in 1i64..500, den in 1i64..500, q in 2u64..12, n in 1u32..8) {
                let t = r(num, den);
                let prev = truncation(&t, q, n - 1).unwrap();
                let cur = truncation(&t, q, n).unwrap();
                let d = digit(&t, q, n as i64).unwrap();
                prop_assert!(d < q);
                let step = ExactRational::from_integer(d as i64).scale_pow(q, -(n as i64));
                prop_assert_eq!(&cur, &(prev + step));
                let eps = ExactRational::one().scale_pow(q, -(n as i64));
                prop_assert!(&(&t - &eps) <= &cur && cur < t);
            }

            #[test]
            fn floor_of_truncation_is_truncation(num in 1i64..500, den in 1i64..500, q in 2u64..8, e in 0u32..5, extra in 0u32..4) {
                let t = r(num, den);
                let big = truncation(&t, q, e + extra).unwrap();
                let scaled = big.scale_pow(q, e as i64).floor();
                let small = ExactRational::from_integer(scaled).scale_pow(q, -(e as i64));
                prop_assert_eq!(small, truncation(&t, q, e).unwrap());
            }
        }
    }
}
