use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

/// Largest prime accepted as a characteristic. Products of two residues must
/// fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

/// Largest field order representable by packed elements.
pub const MAX_FIELD_ORDER: u64 = 1 << 62;

/// A prime `p`, checked by trial division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeCharacteristic(u64);

impl PrimeCharacteristic {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_CHARACTERISTIC {
            return Err(Error::domain(format!(
                "characteristic {p} exceeds the supported maximum {MAX_CHARACTERISTIC}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        Ok(PrimeCharacteristic(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The finite field `F_p[z]/(μ(z))` for a monic irreducible `μ` of degree `k`.
///
/// Elements are packed into a `u64` as `Σ c_i p^i` where `c_i` is the
/// coefficient of `z^i` in the canonical representative of degree `< k`.
/// Packed values below `p` are exactly the prime-field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    degree: usize,
    /// Monic modulus, ascending coefficients, length `degree + 1`.
    modulus: Vec<u64>,
    order: u64,
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Arc<Self>> {
        let p = PrimeCharacteristic::new(p)?.get();
        Ok(Arc::new(FiniteField {
            p,
            degree: 1,
            modulus: vec![0, 1],
            order: p,
        }))
    }

    /// `F_p[z]/(modulus)`; the modulus is normalised to be monic and must be
    /// irreducible of degree at least 1.
    pub fn extension(p: u64, modulus: &[u64]) -> Result<Arc<Self>> {
        let prime = FiniteField::prime(p)?;
        let mu = UPoly::from_coeffs(&prime, modulus.iter().map(|&c| c % p).collect());
        let degree = mu
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::domain("extension modulus must have degree at least 1"))?;
        let mu = mu.monic(&prime);
        if !mu.is_irreducible(&prime) {
            return Err(Error::domain(format!(
                "modulus {} is reducible over F_{p}",
                mu.display("z")
            )));
        }
        Self::with_irreducible(p, degree, mu.coeffs().to_vec())
    }

    fn with_irreducible(p: u64, degree: usize, modulus: Vec<u64>) -> Result<Arc<Self>> {
        let order = checked_pow(p, degree).filter(|&o| o <= MAX_FIELD_ORDER).ok_or_else(|| {
            Error::budget(format!("field of order {p}^{degree} is too large to represent"))
        })?;
        if degree == 1 {
            return FiniteField::prime(p);
        }
        Ok(Arc::new(FiniteField {
            p,
            degree,
            modulus,
            order,
        }))
    }

    /// `F_{p^k}` presented by the smallest monic irreducible of degree `k`,
    /// comparing coefficients from `z^(k-1)` down to the constant term.
    pub fn canonical(p: u64, k: usize) -> Result<Arc<Self>> {
        if k == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let prime = FiniteField::prime(p)?;
        if k == 1 {
            return Ok(prime);
        }
        let count = checked_pow(p, k)
            .filter(|&o| o <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::budget(format!("field F_{p}^{k} is too large")))?;
        for packed in 0..count {
            let mut coeffs = unpack(packed, p, k);
            coeffs.push(1);
            let mu = UPoly::from_coeffs(&prime, coeffs);
            if mu.is_irreducible(&prime) {
                return Self::with_irreducible(p, k, mu.coeffs().to_vec());
            }
        }
        Err(Error::invariant(format!("no irreducible polynomial of degree {k} over F_{p}")))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }

    /// The class of `z`; `None` for a prime field.
    pub fn generator(&self) -> Option<u64> {
        (self.degree > 1).then_some(self.p)
    }

    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn coeffs_of(&self, a: u64) -> Vec<u64> {
        unpack(a, self.p, self.degree)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> u64 {
        let reduced = self.reduce_poly(coeffs.iter().map(|&c| c % self.p).collect());
        pack(&reduced, self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b, p) = (a, b, self.p);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree {
            let c = (a % p + b % p) % p;
            out += c * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.degree == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let coeffs: Vec<u64> = self
            .coeffs_of(a)
            .into_iter()
            .map(|c| if c == 0 { 0 } else { self.p - c })
            .collect();
        pack(&coeffs, self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let (x, y) = (self.coeffs_of(a), self.coeffs_of(b));
        let mut prod = vec![0u64; 2 * self.degree - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi * yj) % self.p;
            }
        }
        pack(&self.reduce_poly(prod), self.p)
    }

    pub fn pow(&self, a: u64, mut exp: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::domain("division by zero in a finite field"));
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// The Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self, a: u64) -> u64 {
        if self.degree == 1 {
            a
        } else {
            self.pow(a, self.p)
        }
    }

    /// The inverse of the Frobenius automorphism.
    pub fn pth_root(&self, a: u64) -> u64 {
        if self.degree == 1 {
            a
        } else {
            self.pow(a, self.order / self.p)
        }
    }

    /// Reduces ascending coefficients modulo the field modulus.
    fn reduce_poly(&self, mut c: Vec<u64>) -> Vec<u64> {
        let k = self.degree;
        if k == 1 {
            let v = c.first().copied().unwrap_or(0) % self.p;
            // Only constants are meaningful over a prime field.
            return vec![v];
        }
        for top in (k..c.len()).rev() {
            let lead = c[top];
            if lead == 0 {
                continue;
            }
            for i in 0..k {
                let sub = lead * self.modulus[i] % self.p;
                let idx = top - k + i;
                c[idx] = (c[idx] + self.p - sub) % self.p;
            }
            c[top] = 0;
        }
        c.resize(k, 0);
        c
    }

    /// Renders an element as a polynomial in `var`.
    pub fn format_element(&self, a: u64, var: &str) -> String {
        if self.degree == 1 {
            return a.to_string();
        }
        let coeffs = self.coeffs_of(a);
        let mut parts = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
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
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    pub fn describe(&self) -> String {
        if self.degree == 1 {
            format!("F_{}", self.p)
        } else {
            let mu = UPoly::from_raw(self.modulus.clone());
            format!("F_{}[z]/({})", self.p, mu.display("z"))
        }
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn unpack(mut a: u64, p: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

fn pack(coeffs: &[u64], p: u64) -> u64 {
    coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// An element together with the field it lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    value: u64,
}

impl FieldElement {
    pub fn new(field: Arc<FiniteField>, value: u64) -> Result<Self> {
        if value >= field.order() {
            return Err(Error::domain(format!(
                "packed value {value} is not an element of {}",
                field.describe()
            )));
        }
        Ok(FieldElement { field, value })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn coefficients(&self) -> Vec<u64> {
        self.field.coeffs_of(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format_element(self.value, "u"))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field.describe())
    }
}
