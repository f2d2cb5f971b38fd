//! Polynomials reduced modulo `m^[q] = (x_1^q, …, x_d^q)`.
//!
//! Every surviving monomial lies in the box `0 <= λ_i < q`, so exponent
//! vectors pack into a single mixed-radix key `Σ λ_i q^i`. Adding a monomial
//! that stays inside the box is then plain integer addition of keys.

use std::collections::HashMap;

use crate::algebra::field::FiniteField;
use crate::algebra::poly::{Monomial, MvPolynomial};
use crate::error::{Error, Result};

/// Boxes with at most this many cells use a dense accumulator.
const DENSE_LIMIT: u64 = 1 << 22;

/// Largest supported box (`q^d`), so that keys never overflow.
pub(crate) const MAX_BOX: u64 = 1 << 62;

pub(crate) fn box_cells(q: u64, nvars: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..nvars {
        acc = acc.checked_mul(q)?;
    }
    (acc <= MAX_BOX).then_some(acc)
}

/// A term of the multiplier, prepared for one radix.
#[derive(Debug, Clone)]
pub(crate) struct ShiftTerm {
    exps: Vec<u64>,
    key: u64,
    coeff: u64,
}

/// Terms of `f` that lie inside the box of radix `q`.
pub(crate) fn shift_terms(f: &MvPolynomial, q: u64) -> Vec<ShiftTerm> {
    f.terms()
        .filter(|(m, _)| m.in_box(q))
        .map(|(m, c)| {
            let exps: Vec<u64> = m.exponents().iter().map(|&e| u64::from(e)).collect();
            ShiftTerm {
                key: pack(&exps, q),
                exps,
                coeff: c,
            }
        })
        .collect()
}

fn pack(exps: &[u64], q: u64) -> u64 {
    exps.iter().rev().fold(0u64, |acc, &e| acc * q + e)
}

fn unpack_into(mut key: u64, q: u64, out: &mut [u64]) {
    for slot in out.iter_mut() {
        *slot = key % q;
        key /= q;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BoxPoly {
    q: u64,
    nvars: usize,
    /// Sorted by key, no zero coefficients.
    terms: Vec<(u64, u64)>,
}

impl BoxPoly {
    pub(crate) fn one(nvars: usize) -> Self {
        BoxPoly {
            q: 1,
            nvars,
            terms: vec![(0, 1)],
        }
    }

    pub(crate) fn radix(&self) -> u64 {
        self.q
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn keys(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|&(k, _)| k)
    }

    pub(crate) fn monomial_of(&self, key: u64) -> Monomial {
        let mut exps = vec![0u64; self.nvars];
        unpack_into(key, self.q, &mut exps);
        Monomial::new(exps.into_iter().map(|e| e as u32).collect())
    }

    /// The graded-lex smallest monomial in the support.
    pub(crate) fn smallest_monomial(&self) -> Option<Monomial> {
        self.terms.iter().map(|&(k, _)| self.monomial_of(k)).min()
    }

    /// `self^p` reduced modulo `m^[pq]`; nothing is dropped because
    /// `p λ_i <= p(q - 1) < pq`.
    pub(crate) fn frobenius_lift(&self, field: &FiniteField) -> Result<Self> {
        let p = field.characteristic();
        let q_new = self
            .q
            .checked_mul(p)
            .filter(|&q| box_cells(q, self.nvars).is_some())
            .ok_or_else(|| too_large(self.q.saturating_mul(p), self.nvars))?;
        let mut exps = vec![0u64; self.nvars];
        let mut terms: Vec<(u64, u64)> = self
            .terms
            .iter()
            .map(|&(k, c)| {
                unpack_into(k, self.q, &mut exps);
                exps.iter_mut().for_each(|e| *e *= p);
                (pack(&exps, q_new), field.frobenius(c))
            })
            .collect();
        terms.sort_unstable();
        Ok(BoxPoly {
            q: q_new,
            nvars: self.nvars,
            terms,
        })
    }

    /// `self * f` reduced modulo `m^[q]`, where `shifts` are the terms of `f`
    /// prepared for this radix.
    pub(crate) fn mul_shifts(
        &self,
        shifts: &[ShiftTerm],
        field: &FiniteField,
        max_terms: usize,
    ) -> Result<Self> {
        let q = self.q;
        let cells = box_cells(q, self.nvars).ok_or_else(|| too_large(q, self.nvars))?;
        let mut coords = vec![0u64; self.nvars];
        let mut terms: Vec<(u64, u64)>;
        if cells <= DENSE_LIMIT {
            let mut acc = vec![0u64; cells as usize];
            for &(key, c) in &self.terms {
                unpack_into(key, q, &mut coords);
                for s in shifts {
                    if coords.iter().zip(&s.exps).all(|(a, b)| a + b < q) {
                        let slot = &mut acc[(key + s.key) as usize];
                        *slot = field.add(*slot, field.mul(c, s.coeff));
                    }
                }
            }
            terms = acc
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c != 0)
                .map(|(k, c)| (k as u64, c))
                .collect();
        } else {
            let mut acc: HashMap<u64, u64> = HashMap::new();
            for &(key, c) in &self.terms {
                unpack_into(key, q, &mut coords);
                for s in shifts {
                    if coords.iter().zip(&s.exps).all(|(a, b)| a + b < q) {
                        let slot = acc.entry(key + s.key).or_insert(0);
                        *slot = field.add(*slot, field.mul(c, s.coeff));
                    }
                }
                if acc.len() > max_terms {
                    return Err(term_budget(max_terms));
                }
            }
            terms = acc.into_iter().filter(|&(_, c)| c != 0).collect();
            terms.sort_unstable();
        }
        if terms.len() > max_terms {
            return Err(term_budget(max_terms));
        }
        Ok(BoxPoly {
            q,
            nvars: self.nvars,
            terms,
        })
    }

    /// Re-expresses the polynomial in a larger radix without changing it.
    pub(crate) fn with_radix(&self, q_new: u64) -> Result<Self> {
        if q_new < self.q {
            return Err(Error::invariant("radix can only grow"));
        }
        box_cells(q_new, self.nvars).ok_or_else(|| too_large(q_new, self.nvars))?;
        let mut exps = vec![0u64; self.nvars];
        let mut terms: Vec<(u64, u64)> = self
            .terms
            .iter()
            .map(|&(k, c)| {
                unpack_into(k, self.q, &mut exps);
                (pack(&exps, q_new), c)
            })
            .collect();
        terms.sort_unstable();
        Ok(BoxPoly {
            q: q_new,
            nvars: self.nvars,
            terms,
        })
    }
}

fn too_large(q: u64, nvars: usize) -> Error {
    Error::budget(format!("box of side {q} in {nvars} variables is too large"))
}

fn term_budget(max_terms: usize) -> Error {
    Error::budget(format!("reduced power exceeds {max_terms} terms"))
}
