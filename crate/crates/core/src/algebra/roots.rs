use serde::Serialize;

use crate::algebra::field::{FieldElement, FiniteField};
use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

/// Default cap on the size of a field scanned for roots.
pub const DEFAULT_SCAN_LIMIT: u64 = 1_000_000;

/// A root of a polynomial over `F_p`, expressed in its smallest field of
/// definition `F_{p^degree}` (presented by the canonical modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub value: FieldElement,
    pub degree: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSearch {
    pub roots: Vec<RootSummary>,
    /// Largest extension degree actually scanned.
    pub scanned_degree: usize,
    /// Whether the scan stopped before `max_ext_degree` because of the size cap.
    pub truncated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSummary {
    pub value: String,
    pub coefficients: Vec<u64>,
    pub degree: usize,
    pub multiplicity: usize,
}

/// All roots of `h` (ascending coefficients over `F_p`) in `F_{p^k}` for
/// `k = 1..=max_ext_degree`, each reported once in its minimal field.
///
/// Fields are scanned exhaustively while `p^k <= scan_limit`. Order: by
/// extension degree, then by representative coefficients from the highest
/// power of `z` down.
pub fn find_roots(h: &[u64], p: u64, max_ext_degree: usize, scan_limit: u64) -> Result<(Vec<Root>, RootSearch)> {
    let prime = FiniteField::prime(p)?;
    let h = UPoly::from_coeffs(&prime, h.iter().map(|&c| c % p).collect());
    match h.degree() {
        None | Some(0) => return Err(Error::domain("find_roots needs a nonconstant polynomial")),
        Some(_) => {}
    }
    let h = h.monic(&prime);
    let mut roots = Vec::new();
    let mut scanned = 0;
    let mut truncated = false;
    for k in 1..=max_ext_degree {
        let order = match p.checked_pow(k as u32) {
            Some(o) if o <= scan_limit => o,
            _ => {
                truncated = true;
                break;
            }
        };
        let field = FiniteField::canonical(p, k)?;
        scanned = k;
        for a in 0..order {
            if h.eval(&field, a) != 0 || minimal_degree(&field, a) != k {
                continue;
            }
            let multiplicity = multiplicity(&field, &h, a);
            roots.push(Root {
                value: FieldElement::new(field.clone(), a)?,
                degree: k,
                multiplicity,
            });
        }
    }
    let summary = RootSearch {
        roots: roots
            .iter()
            .map(|r| RootSummary {
                value: r.value.to_string(),
                coefficients: r.value.coefficients(),
                degree: r.degree,
                multiplicity: r.multiplicity,
            })
            .collect(),
        scanned_degree: scanned,
        truncated,
    };
    Ok((roots, summary))
}

/// Smallest `j` with `a^(p^j) = a`.
fn minimal_degree(field: &FiniteField, a: u64) -> usize {
    let mut x = field.frobenius(a);
    let mut j = 1;
    while x != a {
        x = field.frobenius(x);
        j += 1;
    }
    j
}

fn multiplicity(field: &FiniteField, h: &UPoly, a: u64) -> usize {
    let lin = UPoly::linear_root(field, a);
    let mut rest = h.clone();
    let mut m = 0;
    loop {
        let (q, r) = rest.divrem(field, &lin);
        if !r.is_zero() {
            return m;
        }
        rest = q;
        m += 1;
    }
}
