//! Dense univariate polynomials over a [`FiniteField`].

use crate::algebra::field::FiniteField;

/// Ascending coefficients (packed field elements) with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<u64>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![1])
    }

    pub fn constant(c: u64) -> Self {
        UPoly::from_raw(vec![c])
    }

    /// `z - a`
    pub fn linear_root(field: &FiniteField, a: u64) -> Self {
        UPoly(vec![field.neg(a), 1])
    }

    pub fn from_coeffs(field: &FiniteField, coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.order()));
        UPoly::from_raw(coeffs)
    }

    pub fn from_raw(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn monic(&self, field: &FiniteField) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = field.inv(self.leading()).expect("leading coefficient is nonzero");
        self.scale(field, inv)
    }

    pub fn scale(&self, field: &FiniteField, c: u64) -> Self {
        UPoly::from_raw(self.0.iter().map(|&a| field.mul(a, c)).collect())
    }

    pub fn add(&self, field: &FiniteField, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        UPoly::from_raw((0..n).map(|i| field.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, field: &FiniteField, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        UPoly::from_raw((0..n).map(|i| field.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, field: &FiniteField, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        UPoly::from_raw(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, field: &FiniteField, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = field.inv(divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = field.mul(c, inv);
            quot[top - dd] = factor;
            for (i, &b) in divisor.0.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = field.sub(rem[idx], field.mul(factor, b));
            }
        }
        (UPoly::from_raw(quot), UPoly::from_raw(rem))
    }

    pub fn rem(&self, field: &FiniteField, divisor: &Self) -> Self {
        self.divrem(field, divisor).1
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, field: &FiniteField, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    pub fn derivative(&self, field: &FiniteField) -> Self {
        UPoly::from_raw(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| field.mul(c, field.from_int((i as u64 % field.characteristic()) as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, field: &FiniteField, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// `self^exp mod modulus`
    pub fn pow_mod(&self, field: &FiniteField, mut exp: u128, modulus: &Self) -> Self {
        let mut base = self.rem(field, modulus);
        let mut acc = UPoly::one().rem(field, modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(field, &base).rem(field, modulus);
            }
            base = base.mul(field, &base).rem(field, modulus);
            exp >>= 1;
        }
        acc
    }

    /// Rabin's test over `field`: `μ` of degree `k` is irreducible iff
    /// `μ | z^(q^k) - z` and `gcd(z^(q^(k/r)) - z, μ) = 1` for each prime `r | k`.
    pub fn is_irreducible(&self, field: &FiniteField) -> bool {
        let k = match self.degree() {
            None | Some(0) => return false,
            Some(k) => k,
        };
        if k == 1 {
            return true;
        }
        let q = field.order() as u128;
        let z = UPoly(vec![0, 1]);
        // frob[i] = z^(q^i) mod μ
        let mut frob = vec![z.rem(field, self)];
        for i in 1..=k {
            let next = frob[i - 1].pow_mod(field, q, self);
            frob.push(next);
        }
        if !frob[k].sub(field, &z).rem(field, self).is_zero() {
            return false;
        }
        prime_factors(k as u64).into_iter().all(|r| {
            let h = frob[k / r as usize].sub(field, &z);
            self.gcd(field, &h).degree() == Some(0)
        })
    }

    /// Renders the polynomial with prime-field coefficients in variable `var`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
