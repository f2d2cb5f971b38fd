//! Membership in Frobenius powers of the maximal ideal and the invariant
//! `ν_f(p^e) = max { n : f^n ∉ m^[p^e] }`.
//!
//! `ν` is computed level by level. With `g = f^ν(e)` reduced modulo
//! `m^[p^e]`, the reduction of `g^p` modulo `m^[p^(e+1)]` equals that of
//! `f^(p ν(e))`: in characteristic `p`, `(h + r)^p = h^p + r^p` and
//! `r ∈ m^[q]` implies `r^p ∈ m^[pq]`. At most `p - 1` further
//! multiplications by `f` then find `ν(e+1)`.

pub mod cache;
pub(crate) mod kernel;

use std::sync::Mutex;

use num_bigint::BigUint;
use serde::Serialize;

use crate::algebra::poly::{Monomial, MvPolynomial};
use crate::baseq::{self, ExactRational};
use crate::error::{Error, Result};
use kernel::{box_cells, shift_terms, BoxPoly};

pub use cache::{CacheStat, NuCache, CACHE_ENV_VAR};

/// Default bound on the number of terms of a reduced power.
pub const DEFAULT_MAX_TERMS: usize = 8_000_000;

/// `q = p^e` together with the ideal `m^[q]` it names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusPower {
    p: u64,
    e: u32,
    q: BigUint,
}

impl FrobeniusPower {
    pub fn new(p: u64, e: u32) -> Self {
        FrobeniusPower {
            p,
            e,
            q: BigUint::from(p).pow(e),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn q_u64(&self) -> Option<u64> {
        u64::try_from(&self.q).ok()
    }
}

/// Drops every monomial having some exponent `>= p^e`, leaving the canonical
/// representative of `f` in `A / m^[p^e]`.
pub fn reduce_mod_frobenius(f: &MvPolynomial, e: u32) -> MvPolynomial {
    match FrobeniusPower::new(f.characteristic(), e).q_u64() {
        Some(q) => f.truncate_box(q),
        // Exponents are u32, so nothing reaches a q this large.
        None => f.clone(),
    }
}

/// One row of a [`NuTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NuEntry {
    pub e: u32,
    pub nu: u64,
    /// Graded-lex smallest `λ` with nonzero coefficient in `f^ν`, inside the
    /// box `0 <= λ_i <= p^e - 1`.
    pub witness: Monomial,
}

#[derive(Debug, Clone, Copy)]
pub struct NuConfig {
    pub max_terms: usize,
}

impl Default for NuConfig {
    fn default() -> Self {
        NuConfig {
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

struct NuState {
    /// Computed rows for levels `1..=entries.len()`.
    entries: Vec<NuEntry>,
    /// `f^ν(level)` reduced modulo `m^[p^level]`, or `None` when rows were
    /// seeded from a cache and no reduced power is held.
    power: Option<(u32, BoxPoly)>,
}

/// Append-only table `e ↦ (ν_f(p^e), witness)`, extended on demand.
pub struct NuTable {
    f: MvPolynomial,
    fingerprint: String,
    config: NuConfig,
    state: Mutex<NuState>,
}

impl std::fmt::Debug for NuTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NuTable")
            .field("f", &self.f)
            .field("entries", &self.entries())
            .finish()
    }
}

fn check_principal(f: &MvPolynomial) -> Result<()> {
    if f.is_zero() {
        return Err(Error::domain(
            "zero polynomial: ν is undefined and the threshold is 0 by convention",
        ));
    }
    if f.constant_term() != 0 {
        return Err(Error::domain("polynomial has a nonzero constant term (unit ideal)"));
    }
    Ok(())
}

impl NuTable {
    pub fn new(f: &MvPolynomial) -> Result<Self> {
        Self::with_config(f, NuConfig::default())
    }

    pub fn with_config(f: &MvPolynomial, config: NuConfig) -> Result<Self> {
        check_principal(f)?;
        Ok(NuTable {
            fingerprint: f.fingerprint(),
            f: f.clone(),
            config,
            state: Mutex::new(NuState {
                entries: Vec::new(),
                power: Some((0, BoxPoly::one(f.nvars()))),
            }),
        })
    }

    /// Seeds rows from `cache` when it holds a contiguous run from level 1.
    pub fn with_cache(f: &MvPolynomial, config: NuConfig, cache: &NuCache) -> Result<Self> {
        let table = Self::with_config(f, config)?;
        let seeded = cache.levels(f.characteristic(), &table.fingerprint);
        if !seeded.is_empty() {
            let mut st = table.state.lock().expect("nu table lock");
            st.entries = seeded;
        }
        Ok(table)
    }

    pub fn polynomial(&self) -> &MvPolynomial {
        &self.f
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn characteristic(&self) -> u64 {
        self.f.characteristic()
    }

    pub fn entries(&self) -> Vec<NuEntry> {
        self.state.lock().expect("nu table lock").entries.clone()
    }

    /// Row for level `e >= 1`, computing intermediate levels as needed.
    pub fn entry(&self, e: u32) -> Result<NuEntry> {
        if e == 0 {
            return Err(Error::domain("Frobenius level must be at least 1"));
        }
        self.ensure_level(e)?;
        Ok(self.state.lock().expect("nu table lock").entries[e as usize - 1].clone())
    }

    pub fn nu(&self, e: u32) -> Result<u64> {
        Ok(self.entry(e)?.nu)
    }

    /// `ν_f(p^e) / p^e`, the level-`e` truncation of the threshold.
    pub fn truncation(&self, e: u32) -> Result<ExactRational> {
        let nu = self.nu(e)?;
        Ok(ExactRational::from_integer(nu).scale_pow(self.characteristic(), -(e as i64)))
    }

    pub fn ensure_level(&self, e: u32) -> Result<()> {
        let mut st = self.state.lock().expect("nu table lock");
        if st.entries.len() >= e as usize {
            return Ok(());
        }
        let (mut level, mut power) = match st.power.take() {
            Some(state) => state,
            None => (0, BoxPoly::one(self.f.nvars())),
        };
        let field = self.f.field().clone();
        let p = self.characteristic();
        while level < e {
            let lifted = power.frobenius_lift(&field)?;
            if lifted.is_zero() {
                return Err(Error::invariant("p-th power of a nonzero reduced power vanished"));
            }
            let prev_nu = if level == 0 { 0 } else { st.entries[level as usize - 1].nu };
            let shifts = shift_terms(&self.f, lifted.radix());
            let mut g = lifted;
            let mut nu = p * prev_nu;
            let mut steps = 0;
            loop {
                let next = g.mul_shifts(&shifts, &field, self.config.max_terms)?;
                if next.is_zero() {
                    break;
                }
                steps += 1;
                if steps >= p {
                    return Err(Error::invariant(format!(
                        "ν grew by more than p - 1 between levels {level} and {}",
                        level + 1
                    )));
                }
                g = next;
                nu += 1;
            }
            level += 1;
            let row = NuEntry {
                e: level,
                nu,
                witness: g.smallest_monomial().expect("nonzero reduced power"),
            };
            let idx = level as usize - 1;
            if idx < st.entries.len() {
                // Seeded from a cache: a disagreement means the cache is stale.
                if st.entries[idx] != row {
                    st.entries.truncate(idx);
                    st.entries.push(row);
                }
            } else {
                st.entries.push(row);
            }
            power = g;
        }
        st.power = Some((level, power));
        Ok(())
    }

    /// Stores every computed row in `cache`.
    pub fn record_into(&self, cache: &mut NuCache) {
        for row in self.entries() {
            cache.insert(self.characteristic(), &self.fingerprint, row);
        }
    }
}

/// `ν_f(p^e)` and its witness.
pub fn nu(f: &MvPolynomial, e: u32) -> Result<NuEntry> {
    NuTable::new(f)?.entry(e)
}

/// `ν_f(p^e) / p^e`; the zero polynomial has threshold 0.
pub fn fpt_truncation(f: &MvPolynomial, e: u32) -> Result<ExactRational> {
    if f.is_zero() {
        return Ok(ExactRational::zero());
    }
    NuTable::new(f)?.truncation(e)
}

#[derive(Debug, Clone, Copy)]
pub struct IdealBudget {
    /// Products of non-monomial generators enumerated before giving up.
    pub max_products: usize,
    /// Largest box `p^(e d)` scanned for monomial generators.
    pub max_box_cells: u64,
    pub max_terms: usize,
}

impl Default for IdealBudget {
    fn default() -> Self {
        IdealBudget {
            max_products: 100_000,
            max_box_cells: 1 << 24,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

/// `ν_a(p^e) = max { n : a^n ⊄ m^[p^e] }` for the ideal generated by
/// `generators`.
///
/// A product of generators splits into non-monomial factors `P` and a
/// monomial `x^μ`; `P x^μ ∉ m^[q]` iff some `λ` in the reduced support of `P`
/// has `λ + μ` inside the box. Monomial generators are handled by a dynamic
/// program over the box giving, for each `λ`, the largest number of monomial
/// generators that can still be multiplied in; non-monomial products are
/// enumerated as multisets, within `budget`.
pub fn nu_ideal(generators: &[MvPolynomial], e: u32, budget: IdealBudget) -> Result<u64> {
    let gens: Vec<&MvPolynomial> = generators.iter().filter(|g| !g.is_zero()).collect();
    let first = *gens
        .first()
        .ok_or_else(|| Error::domain("zero ideal: ν is undefined and the threshold is 0"))?;
    for g in &gens {
        if g.field() != first.field() || g.nvars() != first.nvars() {
            return Err(Error::mismatch("generators live in different rings"));
        }
        if g.constant_term() != 0 {
            return Err(Error::domain("a generator has nonzero constant term (unit ideal)"));
        }
    }
    let field = first.field().clone();
    let nvars = first.nvars();
    let q = FrobeniusPower::new(first.characteristic(), e)
        .q_u64()
        .ok_or_else(|| Error::budget("Frobenius power does not fit in 64 bits"))?;
    let cells = box_cells(q, nvars).ok_or_else(|| Error::budget("box too large"))?;

    let mut monomial_keys: Vec<(Vec<u64>, u64)> = Vec::new();
    let mut others: Vec<&MvPolynomial> = Vec::new();
    for g in &gens {
        match g.as_monomial() {
            Some(m) if m.in_box(q) => {
                let exps: Vec<u64> = m.exponents().iter().map(|&x| u64::from(x)).collect();
                let key = exps.iter().rev().fold(0u64, |acc, &x| acc * q + x);
                if !monomial_keys.iter().any(|(_, k)| *k == key) {
                    monomial_keys.push((exps, key));
                }
            }
            // A monomial outside the box kills every product it enters.
            Some(_) => {}
            None => others.push(g),
        }
    }

    let best: Option<Vec<u32>> = if monomial_keys.is_empty() {
        None
    } else {
        if cells > budget.max_box_cells {
            return Err(Error::budget(format!(
                "monomial generators need a box of {cells} cells, budget is {}",
                budget.max_box_cells
            )));
        }
        let mut best = vec![0u32; cells as usize];
        let mut coords = vec![0u64; nvars];
        for key in (0..cells).rev() {
            let mut k = key;
            for c in coords.iter_mut() {
                *c = k % q;
                k /= q;
            }
            let mut b = 0u32;
            for (exps, mkey) in &monomial_keys {
                if coords.iter().zip(exps).all(|(a, m)| a + m < q) {
                    b = b.max(1 + best[(key + mkey) as usize]);
                }
            }
            best[key as usize] = b;
        }
        Some(best)
    };
    let reach = |poly: &BoxPoly| -> u64 {
        match &best {
            None => 0,
            Some(best) => poly.keys().map(|k| u64::from(best[k as usize])).max().unwrap_or(0),
        }
    };

    let shifts: Vec<_> = others.iter().map(|g| shift_terms(g, q)).collect();
    let one = BoxPoly::one(nvars).with_radix(q)?;
    let mut nu = reach(&one);
    let mut level: Vec<(BoxPoly, usize)> = vec![(one, 0)];
    let mut enumerated = 0usize;
    let mut k = 0u64;
    while !level.is_empty() && !others.is_empty() {
        k += 1;
        let mut next = Vec::new();
        for (poly, last) in &level {
            for (j, sh) in shifts.iter().enumerate().skip(*last) {
                let prod = poly.mul_shifts(sh, &field, budget.max_terms)?;
                enumerated += 1;
                if enumerated > budget.max_products {
                    return Err(Error::budget(format!(
                        "more than {} generator products needed",
                        budget.max_products
                    )));
                }
                if !prod.is_zero() {
                    nu = nu.max(k + reach(&prod));
                    next.push((prod, j));
                }
            }
        }
        level = next;
    }
    Ok(nu)
}

/// Outcome of the F-purity test at a rational exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FPurity {
    /// `f^(t(p^e - 1)) ∉ m^[p^e]`, hence `fpt(f) >= t`.
    CertifiedYes { e: u32 },
    /// `ν_f(p^e) < p^e ⟨t⟩_e`, hence `fpt(f) < t`.
    No { e: u32 },
    Inconclusive,
}

/// Multiplicative order of `p` modulo `n` (with `n` coprime to `p`).
pub(crate) fn multiplicative_order(p: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = p % n;
    let mut k = 1;
    while x != 1 {
        x = ((u128::from(x) * u128::from(p)) % u128::from(n)) as u64;
        k += 1;
    }
    k
}

/// Tests whether the pair `(A, f^t)` is sharply F-pure via the membership
/// `f^(t(p^e - 1)) ∉ m^[p^e]` at the first `e` with `t(p^e - 1) ∈ Z`.
///
/// When the denominator of `t` is divisible by `p` no such `e` exists and
/// only the negative answer (from truncations) can be reached.
pub fn is_f_pure_at(f: &MvPolynomial, t: &ExactRational, e_cap: u32) -> Result<FPurity> {
    let table = NuTable::new(f)?;
    is_f_pure_with(&table, t, e_cap)
}

pub(crate) fn is_f_pure_with(table: &NuTable, t: &ExactRational, e_cap: u32) -> Result<FPurity> {
    if !t.is_positive() || *t > ExactRational::one() {
        return Err(Error::domain(format!("F-purity test needs 0 < t <= 1, got {t}")));
    }
    let p = table.characteristic();
    let den = u64::try_from(t.denom()).ok();
    if let Some(den) = den.filter(|d| d % p != 0) {
        let ord = multiplicative_order(p, den);
        if ord <= u64::from(e_cap) {
            let e = ord as u32;
            let target = t.scale_pow(p, e as i64) - t.clone();
            let target = u64::try_from(target.numer())
                .map_err(|_| Error::budget("F-purity exponent does not fit in 64 bits"))?;
            return Ok(if table.nu(e)? >= target {
                FPurity::CertifiedYes { e }
            } else {
                FPurity::No { e }
            });
        }
    }
    for e in 1..=e_cap {
        let bound = baseq::truncation(t, p, e)?;
        if table.truncation(e)? < bound {
            return Ok(FPurity::No { e });
        }
    }
    Ok(FPurity::Inconclusive)
}
