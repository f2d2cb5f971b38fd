//! Greatest common divisors and squarefree parts in two variables.
//!
//! A polynomial in `k[x, y]` is viewed as an element of `k[y][x]` and gcds
//! are computed with a primitive pseudo-remainder sequence.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::field::FiniteField;
use crate::algebra::poly::{Monomial, MvPolynomial};
use crate::algebra::upoly::UPoly;
use crate::error::{Error, Result};

/// Coefficients in `k[y]`, indexed by the power of `x`.
type Bivar = Vec<UPoly>;

fn to_bivar(f: &MvPolynomial) -> Bivar {
    let deg_x = f.terms().map(|(m, _)| m.exponents()[0] as usize).max().unwrap_or(0);
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); deg_x + 1];
    for (m, c) in f.terms() {
        let (i, j) = (m.exponents()[0] as usize, m.exponents()[1] as usize);
        let row = &mut rows[i];
        if row.len() <= j {
            row.resize(j + 1, 0);
        }
        row[j] = c;
    }
    let mut out: Bivar = rows.into_iter().map(UPoly::from_raw).collect();
    trim(&mut out);
    out
}

fn from_bivar(field: &Arc<FiniteField>, b: &Bivar) -> MvPolynomial {
    let terms = b.iter().enumerate().flat_map(|(i, row)| {
        row.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(j, &c)| (Monomial::new(vec![i as u32, j as u32]), c))
    });
    MvPolynomial::from_terms(field.clone(), 2, terms).expect("well-formed terms")
}

fn trim(b: &mut Bivar) {
    while b.last().is_some_and(UPoly::is_zero) {
        b.pop();
    }
}

fn content(k: &FiniteField, b: &Bivar) -> UPoly {
    b.iter().fold(UPoly::zero(), |acc, c| acc.gcd(k, c))
}

fn primitive_part(k: &FiniteField, b: &Bivar) -> Bivar {
    let c = content(k, b);
    if c.is_zero() {
        return Vec::new();
    }
    b.iter().map(|row| row.divrem(k, &c).0).collect()
}

/// Pseudo-remainder of `a` by `b` in `k[y][x]`.
fn prem(k: &FiniteField, a: &Bivar, b: &Bivar) -> Bivar {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for row in r.iter_mut() {
            *row = row.mul(k, lb);
        }
        for (i, bi) in b.iter().enumerate() {
            let t = bi.mul(k, &lr);
            r[i + shift] = r[i + shift].sub(k, &t);
        }
        trim(&mut r);
    }
    r
}

/// Normalised gcd of two bivariate polynomials.
pub fn gcd(f: &MvPolynomial, g: &MvPolynomial) -> Result<MvPolynomial> {
    if f.nvars() != 2 || g.nvars() != 2 {
        return Err(Error::domain("bivariate gcd needs polynomials in exactly two variables"));
    }
    if f.field() != g.field() {
        return Err(Error::mismatch("gcd operands live over different fields"));
    }
    let field = f.field().clone();
    let k = &*field;
    if f.is_zero() {
        return Ok(g.normalized());
    }
    if g.is_zero() {
        return Ok(f.normalized());
    }
    let (fa, fb) = (to_bivar(f), to_bivar(g));
    let c = content(k, &fa).gcd(k, &content(k, &fb));
    let (mut a, mut b) = (primitive_part(k, &fa), primitive_part(k, &fb));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = prem(k, &a, &b);
        a = b;
        b = primitive_part(k, &r);
    }
    let a = primitive_part(k, &a);
    let out: Bivar = a.iter().map(|row| row.mul(k, &c)).collect();
    Ok(from_bivar(&field, &out).normalized())
}

/// Result of [`squarefree_part`].
#[derive(Debug, Clone, Serialize)]
pub struct SquarefreeDecomposition {
    /// The radical of `f`, normalised to a monic leading term.
    pub part: MvPolynomial,
    pub is_reduced: bool,
    /// `Some(m)` when `f` is a unit multiple of `part^m`.
    pub power: Option<u32>,
}

/// Radical of a nonconstant bivariate polynomial, together with whether `f`
/// was already reduced and its pure-power profile.
///
/// Factors of multiplicity prime to `p` are split off with
/// `f / gcd(f, f_x, f_y)`; what remains is a `p`-th power and is handled by
/// extracting its `p`-th root.
pub fn squarefree_part(f: &MvPolynomial) -> Result<SquarefreeDecomposition> {
    if f.nvars() != 2 {
        return Err(Error::domain("squarefree_part needs a polynomial in two variables"));
    }
    if f.is_constant() {
        return Err(Error::domain("squarefree_part needs a nonconstant polynomial"));
    }
    let part = radical(f)?;
    let df = f.total_degree().expect("nonzero");
    let dh = part.total_degree().expect("nonconstant");
    let is_reduced = df == dh;
    let mut power = None;
    if df % dh == 0 {
        let m = df / dh;
        let candidate = part.pow(m)?;
        let (_, lc_f) = f.leading_term().expect("nonzero");
        if candidate.scale(lc_f) == *f {
            power = Some(m as u32);
        }
    }
    Ok(SquarefreeDecomposition {
        part,
        is_reduced,
        power,
    })
}

fn radical(f: &MvPolynomial) -> Result<MvPolynomial> {
    if f.is_constant() {
        return Ok(MvPolynomial::one(f.field().clone(), 2));
    }
    let fx = f.partial_derivative(0);
    let fy = f.partial_derivative(1);
    if fx.is_zero() && fy.is_zero() {
        let root = f
            .pth_root()
            .ok_or_else(|| Error::invariant("vanishing partials without a p-th root"))?;
        return radical(&root);
    }
    let g = gcd(&gcd(f, &fx)?, &fy)?;
    let a = f
        .div_exact(&g)?
        .ok_or_else(|| Error::invariant("gcd does not divide f"))?;
    // Strip every factor of `a` from `g`; the rest has multiplicities
    // divisible by p.
    let mut rest = g;
    loop {
        let c = gcd(&rest, &a)?;
        if c.is_constant() {
            break;
        }
        rest = rest
            .div_exact(&c)?
            .ok_or_else(|| Error::invariant("gcd does not divide"))?;
    }
    let tail = if rest.is_constant() {
        MvPolynomial::one(f.field().clone(), 2)
    } else {
        let root = rest
            .pth_root()
            .ok_or_else(|| Error::invariant("remaining factor is not a p-th power"))?;
        radical(&root)?
    };
    Ok(a.mul(&tail)?.normalized())
}
