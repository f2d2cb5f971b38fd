use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::algebra::field::FiniteField;
use crate::error::{Error, Result};

/// An exponent vector `λ`, ordered graded-lexicographically: total degree
/// first, then the exponent of `x_1`, then `x_2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Whether every exponent is below `bound`, i.e. `x^λ ∉ (x_1^bound, …, x_d^bound)`.
    pub fn in_box(&self, bound: u64) -> bool {
        self.0.iter().all(|&e| u64::from(e) < bound)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Positive weights `deg(x_i) = a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedGrading(Vec<u64>);

impl WeightedGrading {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w == 0) {
            return Err(Error::domain("weights must be positive integers"));
        }
        Ok(WeightedGrading(weights))
    }

    pub fn standard(nvars: usize) -> Self {
        WeightedGrading(vec![1; nvars])
    }

    pub fn weights(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `Σ a_i`, the degree of `x_1 ⋯ x_d`.
    pub fn weight_sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn degree_of(&self, m: &Monomial) -> u64 {
        self.0.iter().zip(m.exponents()).map(|(&a, &e)| a * u64::from(e)).sum()
    }
}

/// A sparse polynomial in `nvars` variables over one fixed finite field.
///
/// Terms are kept in a graded-lex ordered map and zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MvPolynomial {
    field: Arc<FiniteField>,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl MvPolynomial {
    pub fn zero(field: Arc<FiniteField>, nvars: usize) -> Self {
        MvPolynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Arc<FiniteField>, nvars: usize, c: u64) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn one(field: Arc<FiniteField>, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    /// The variable `x_{index+1}`.
    pub fn variable(field: Arc<FiniteField>, nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Self::monomial(field, Monomial(exps), 1)
    }

    pub fn monomial(field: Arc<FiniteField>, m: Monomial, c: u64) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(m, c);
        }
        MvPolynomial {
            field,
            nvars,
            terms,
        }
    }

    /// Builds a polynomial from terms, combining repeated monomials.
    pub fn from_terms(
        field: Arc<FiniteField>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, u64)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::mismatch(format!(
                    "monomial {m:?} does not have {nvars} variables"
                )));
            }
            if c >= field.order() {
                return Err(Error::domain(format!("coefficient {c} is not a field element")));
            }
            let entry = acc.entry(m).or_insert(0);
            *entry = field.add(*entry, c);
        }
        acc.retain(|_, c| *c != 0);
        Ok(MvPolynomial {
            field,
            nvars,
            terms: acc,
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The single monomial of a one-term polynomial.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.len() {
            1 => self.terms.keys().next(),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::mismatch(format!(
                "coefficient fields differ: {} vs {}",
                self.field.describe(),
                other.field.describe()
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::mismatch(format!(
                "ambient dimensions differ: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|k, c| k.neg(c))
    }

    pub fn scale(&self, c: u64) -> Self {
        self.map_coeffs(|k, a| k.mul(a, c))
    }

    fn map_coeffs(&self, f: impl Fn(&FiniteField, u64) -> u64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (m.clone(), f(&self.field, c)))
            .filter(|(_, c)| *c != 0)
            .collect();
        MvPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let k = &*self.field;
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let m = a
                    .checked_mul(b)
                    .ok_or_else(|| Error::budget("exponent overflow in multiplication"))?;
                let e = acc.entry(m).or_insert(0);
                *e = k.add(*e, k.mul(ca, cb));
            }
        }
        Ok(MvPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        })
    }

    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = MvPolynomial::one(self.field.clone(), self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f^p`, computed by scaling exponents and applying Frobenius to coefficients.
    pub fn frobenius(&self) -> Result<Self> {
        let p = self.characteristic() as u32;
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let exps = m
                    .0
                    .iter()
                    .map(|&e| e.checked_mul(p))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::budget("exponent overflow in Frobenius"))?;
                Ok((Monomial(exps), self.field.frobenius(c)))
            })
            .collect::<Result<_>>()?;
        Ok(MvPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        })
    }

    /// The unique `g` with `g^p = self`, if every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.characteristic() as u32;
        if self.terms.keys().any(|m| m.0.iter().any(|e| e % p != 0)) {
            return None;
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| (Monomial(m.0.iter().map(|e| e / p).collect()), self.field.pth_root(c)))
            .collect();
        Some(MvPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        })
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = MvPolynomial::zero(self.field.clone(), self.nvars);
        for (m, &c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let factor = self.field.from_int((u64::from(e) % self.characteristic()) as i64);
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), self.field.mul(c, factor));
        }
        out
    }

    pub fn eval(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.nvars {
            return Err(Error::mismatch("evaluation point has the wrong dimension"));
        }
        let k = &*self.field;
        Ok(self.terms.iter().fold(0, |acc, (m, &c)| {
            let v = m
                .0
                .iter()
                .zip(point)
                .fold(c, |v, (&e, &x)| k.mul(v, k.pow(x, u64::from(e))));
            k.add(acc, v)
        }))
    }

    /// `D` if every monomial has weighted degree `D`, `None` otherwise.
    pub fn weighted_degree(&self, w: &WeightedGrading) -> Result<Option<u64>> {
        if self.is_zero() {
            return Err(Error::domain("the zero polynomial has no degree"));
        }
        if w.len() != self.nvars {
            return Err(Error::mismatch(format!(
                "{} weights for {} variables",
                w.len(),
                self.nvars
            )));
        }
        let mut degrees = self.terms.keys().map(|m| w.degree_of(m));
        let first = degrees.next().expect("nonzero polynomial");
        Ok(degrees.all(|d| d == first).then_some(first))
    }

    /// Embeds into a ring with `nvars` variables, new variables appended.
    pub fn pad_vars(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars {
            return Err(Error::domain("cannot pad to fewer variables"));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut exps = m.0.clone();
                exps.resize(nvars, 0);
                (Monomial(exps), c)
            })
            .collect();
        Ok(MvPolynomial {
            field: self.field.clone(),
            nvars,
            terms,
        })
    }

    /// Moves the coefficients into `target`, which must contain the current
    /// field as its prime subfield.
    pub fn change_field(&self, target: &Arc<FiniteField>) -> Result<Self> {
        if self.field == *target {
            return Ok(self.clone());
        }
        if !self.field.is_prime_field() || self.characteristic() != target.characteristic() {
            return Err(Error::mismatch(format!(
                "cannot embed {} into {}",
                self.field.describe(),
                target.describe()
            )));
        }
        Ok(MvPolynomial {
            field: target.clone(),
            nvars: self.nvars,
            terms: self.terms.clone(),
        })
    }

    /// Substitutes `value` for the variable `var`, dropping it from the ring.
    pub fn specialize(&self, var: usize, value: u64) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::domain("variable index out of range"));
        }
        let mut out = MvPolynomial::zero(self.field.clone(), self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps.remove(var);
            out.add_term(
                Monomial(exps),
                self.field.mul(c, self.field.pow(value, u64::from(e))),
            );
        }
        Ok(out)
    }

    /// Coefficient of `x^target` on the given variables, as a polynomial in
    /// the remaining ones.
    pub fn coefficient_of(&self, vars: &[usize], target: &[u32]) -> Result<Self> {
        let keep: Vec<usize> = (0..self.nvars).filter(|i| !vars.contains(i)).collect();
        let mut out = MvPolynomial::zero(self.field.clone(), keep.len());
        for (m, &c) in &self.terms {
            if vars.iter().zip(target).all(|(&v, &t)| m.0[v] == t) {
                out.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c);
            }
        }
        Ok(out)
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero coefficient")),
        }
    }

    /// Exact quotient by `divisor`, or `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_compatible(divisor)?;
        let (lead_m, lead_c) = match divisor.leading_term() {
            None => return Err(Error::domain("division by zero polynomial")),
            Some((m, c)) => (m.clone(), c),
        };
        let inv = self.field.inv(lead_c)?;
        let mut rem = self.clone();
        let mut quot = MvPolynomial::zero(self.field.clone(), self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lead_m.divides(m) {
                return Ok(None);
            }
            let qm = Monomial(m.0.iter().zip(&lead_m.0).map(|(a, b)| a - b).collect());
            let qc = self.field.mul(c, inv);
            let term = MvPolynomial::monomial(self.field.clone(), qm.clone(), qc);
            rem = rem.sub(&term.mul(divisor)?)?;
            quot.add_term(qm, qc);
        }
        Ok(Some(quot))
    }

    /// Drops every monomial with an exponent `>= bound`.
    pub fn truncate_box(&self, bound: u64) -> Self {
        MvPolynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.in_box(bound))
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    /// A stable digest of field, ambient dimension and canonical text.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.describe().as_bytes());
        h.update(b"\n");
        h.update(self.nvars.to_string().as_bytes());
        h.update(b"\n");
        h.update(self.to_string().as_bytes());
        hex::encode(h.finalize())
    }

    pub(crate) fn variable_name(nvars: usize, i: usize) -> String {
        if nvars <= 3 {
            ["x", "y", "z"][i].to_string()
        } else {
            format!("x{}", i + 1)
        }
    }
}

impl fmt::Display for MvPolynomial {
    /// Canonical text: terms in descending graded-lex order, parseable back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, &c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            let coeff = self.field.format_element(c, "u");
            if c != 1 || m.is_one() {
                if coeff.contains(' ') {
                    factors.push(format!("({coeff})"));
                } else {
                    factors.push(coeff);
                }
            }
            for (i, &e) in m.0.iter().enumerate() {
                let name = Self::variable_name(self.nvars, i);
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MvPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field.describe())
    }
}

impl Serialize for MvPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Exact ring arithmetic; operands must share field and ambient dimension.
pub fn poly_arith(f: &MvPolynomial, g: &MvPolynomial, op: PolyOp) -> Result<MvPolynomial> {
    match op {
        PolyOp::Add => f.add(g),
        PolyOp::Sub => f.sub(g),
        PolyOp::Mul => f.mul(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;
    use rand::{Rng, SeedableRng};

    fn poly(text: &str, p: u64) -> MvPolynomial {
        parse_polynomial(text, &FiniteField::prime(p).unwrap(), None).unwrap()
    }

    #[test]
    fn frobenius_cross_term_vanishes() {
        let f = poly("x + y", 2);
        assert_eq!(poly_arith(&f, &f, PolyOp::Mul).unwrap(), poly("x^2 + y^2", 2));
        assert_eq!(f.mul(&MvPolynomial::one(f.field().clone(), 2)).unwrap(), f);
    }

    #[test]
    fn square_of_weighted_fixture_over_f16() {
        let f = poly("x^5*y + x^3*y^2 + x*y^3", 2);
        let sq = f.mul(&f).unwrap();
        assert_eq!(sq, poly("x^10*y^2 + x^6*y^4 + x^2*y^6", 2));
        // Independent check: both sides agree at random points of F_16^2.
        let k16 = FiniteField::canonical(2, 4).unwrap();
        let f16 = f.change_field(&k16).unwrap();
        let expected = poly("x^10*y^2 + x^6*y^4 + x^2*y^6", 2).change_field(&k16).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let pt = [rng.gen_range(0..16), rng.gen_range(0..16)];
            let v = f16.eval(&pt).unwrap();
            assert_eq!(k16.mul(v, v), expected.eval(&pt).unwrap());
        }
    }

    #[test]
    fn weighted_degrees() {
        let w12 = WeightedGrading::new(vec![1, 2]).unwrap();
        let w11 = WeightedGrading::standard(2);
        assert_eq!(poly("x*y*(x^4+x^2*y+y^2)", 2).weighted_degree(&w12).unwrap(), Some(7));
        assert_eq!(poly("x + y^2", 3).weighted_degree(&w11).unwrap(), None);
        assert_eq!(
            poly("x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)", 3).weighted_degree(&w11).unwrap(),
            Some(7)
        );
        assert!(MvPolynomial::zero(FiniteField::prime(3).unwrap(), 2)
            .weighted_degree(&w11)
            .is_err());
        assert!(WeightedGrading::new(vec![1, 0]).is_err());
    }

    #[test]
    fn mismatched_operands_rejected() {
        let a = poly("x", 3);
        let b = poly("x", 5);
        assert!(matches!(a.add(&b), Err(Error::Mismatch(_))));
        let c = poly("x", 3).pad_vars(3).unwrap();
        assert!(matches!(a.mul(&c), Err(Error::Mismatch(_))));
    }

    #[test]
    fn exact_division() {
        let f = poly("x*y*(x+y)*(x-y)", 5);
        let g = poly("x - y", 5);
        assert_eq!(f.div_exact(&g).unwrap().unwrap(), poly("x*y*(x+y)", 5));
        assert!(f.div_exact(&poly("x + 2*y", 5)).unwrap().is_none());
    }

    #[test]
    fn specialize_and_coefficients() {
        let g = poly("x*y*(x+y)*(x+z*y)", 5);
        assert_eq!(g.nvars(), 3);
        let at2 = g.specialize(2, 2).unwrap();
        assert_eq!(at2, poly("x*y*(x+y)*(x+2*y)", 5));
        let h = g.pow(2).unwrap().coefficient_of(&[0, 1], &[4, 4]).unwrap();
        // Coefficient of x^2 y^2 in (x+y)^2 (x+zy)^2 is z^2 + 4z + 1.
        assert_eq!(h.to_string(), "x^2 + 4*x + 1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(p: u64) -> impl Strategy<Value = MvPolynomial> {
            prop::collection::vec(((0u32..4, 0u32..4), 0u64..p), 0..6).prop_map(move |terms| {
                MvPolynomial::from_terms(
                    FiniteField::prime(p).unwrap(),
                    2,
                    terms.into_iter().map(|((a, b), c)| (Monomial::new(vec![a, b]), c)),
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn ring_laws(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
                prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
                prop_assert_eq!(
                    a.mul(&b).unwrap().mul(&c).unwrap(),
                    a.mul(&b.mul(&c).unwrap()).unwrap()
                );
                prop_assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
                );
            }

            #[test]
            fn evaluation_is_multiplicative(a in arb_poly(5), b in arb_poly(5), x in 0u64..5, y in 0u64..5) {
                let k = a.field().clone();
                let prod = a.mul(&b).unwrap().eval(&[x, y]).unwrap();
                prop_assert_eq!(prod, k.mul(a.eval(&[x, y]).unwrap(), b.eval(&[x, y]).unwrap()));
            }

            #[test]
            fn frobenius_matches_pth_power(a in arb_poly(3)) {
                prop_assert_eq!(a.frobenius().unwrap(), a.pow(3).unwrap());
                prop_assert_eq!(a.frobenius().unwrap().pth_root().unwrap(), a);
            }
        }
    }
}
