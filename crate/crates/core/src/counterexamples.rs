//! Explicit thresholds `t_p` in two variables that are accumulation points
//! of two-dimensional thresholds but are not of the form `1/m`.
//!
//! For `p >= 5`, put `a = (p - 1)/2`, `G = xy(x + y)(x + zy)` and let `H(z)`
//! be the coefficient of `x^(p-1) y^(p-1)` in `G^a`. A root `u ∉ {0, 1}` of
//! `H` gives `f = xy(x + y)(x + uy)` with `fpt(f) = a/p`, and
//! `t_p = fpt(f^m) = a/(pm)` for `m >= 2` coprime to `a` and not a power of
//! `p`. For `p = 3` and `p = 2` fixed polynomials play the role of `f`.

use num_integer::Integer;
use serde::Serialize;

use crate::accumulation::{accumulation_sequence, default_levels, AccumulationReport, DEFAULT_LEVEL_BUDGET};
use crate::algebra::field::{FieldElement, FiniteField};
use crate::algebra::parse::parse_polynomial;
use crate::algebra::poly::{MvPolynomial, WeightedGrading};
use crate::algebra::roots::{find_roots, RootSearch, DEFAULT_SCAN_LIMIT};
use crate::algebra::upoly::UPoly;
use crate::algebra::PrimeCharacteristic;
use crate::baseq::ExactRational;
use crate::error::{Error, Result};
use crate::fpt::{
    check_accumulation_hypotheses, fpt_exact_graded_2var, fpt_power, in_t1, FptCertificate, HypothesisCheck,
    SolverConfig,
};
use crate::frobenius::kernel::box_cells;
use crate::frobenius::NuTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    #[serde(rename = "p>=5")]
    LargePrime,
    #[serde(rename = "p=3")]
    Three,
    #[serde(rename = "p=2")]
    Two,
}

#[derive(Debug, Clone, Copy)]
pub struct ConstructOptions {
    /// Largest extension degree searched for a root of `H`; `None` means
    /// `deg H`.
    pub max_ext_degree: Option<usize>,
    pub scan_limit: u64,
    pub accumulation_levels: usize,
    pub level_scan: u32,
    pub level_budget: u64,
    pub solver: SolverConfig,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            max_ext_degree: None,
            scan_limit: DEFAULT_SCAN_LIMIT,
            accumulation_levels: 3,
            level_scan: 12,
            level_budget: DEFAULT_LEVEL_BUDGET,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootChoice {
    pub value: String,
    pub coefficients: Vec<u64>,
    pub degree: usize,
    pub field: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct HRootEffect {
    pub p: u64,
    pub u: String,
    pub h_of_u: String,
    pub nu: u64,
    pub a: u64,
    pub nu_below_a: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexamplePackage {
    pub p: u64,
    pub branch: Branch,
    pub a_p: Option<u64>,
    /// Ascending coefficients of `H`.
    pub h: Option<Vec<u64>>,
    pub h_display: Option<String>,
    pub root: Option<RootChoice>,
    pub root_search: Option<RootSearch>,
    pub root_effect: Option<HRootEffect>,
    pub polynomial: String,
    pub weights: Vec<u64>,
    pub fpt: FptCertificate,
    pub multiplier: u64,
    pub t_p: ExactRational,
    pub t_p_fpt: FptCertificate,
    pub in_t1: bool,
    pub hypotheses: HypothesisCheck,
    pub accumulation: AccumulationReport,
}

impl CounterexamplePackage {
    pub fn summary(&self) -> String {
        let mut out = format!("p = {}\nf = {}\n", self.p, self.polynomial);
        if let (Some(a), Some(h)) = (self.a_p, &self.h_display) {
            out.push_str(&format!("a_p = {a}\nH(z) = {h}\n"));
        }
        if let Some(root) = &self.root {
            out.push_str(&format!("u = {} in {}\n", root.value, root.field));
        }
        out.push_str(&format!(
            "fpt(f) = {}\nm = {}\nt_p = fpt(f^m) = {}\nin T_1: {}\n(a) {} < {}: {}\n(b) outside Z[1/p]: {}\n",
            self.fpt.value,
            self.multiplier,
            self.t_p,
            self.in_t1,
            self.hypotheses.t,
            self.hypotheses.bound,
            self.hypotheses.below_bound,
            self.hypotheses.outside_z_inv_p
        ));
        for r in &self.accumulation.rows {
            out.push_str(&format!(
                "e = {}: ν {} -> {}, fpt(g_e) >= {} (gap {})\n",
                r.e, r.nu_before, r.nu_after, r.truncation_at_e, r.gap
            ));
        }
        out
    }
}

/// Ascending coefficients of `H(z)` for `p >= 5`.
pub fn h_polynomial(p: u64) -> Result<Vec<u64>> {
    let p = large_prime(p)?;
    let a = (p - 1) / 2;
    let field = FiniteField::prime(p)?;
    let var = |i| MvPolynomial::variable(field.clone(), 3, i);
    let (x, y, z) = (var(0), var(1), var(2));
    let g = x
        .mul(&y)?
        .mul(&x.add(&y)?)?
        .mul(&x.add(&z.mul(&y)?)?)?;
    let target = (p - 1) as u32;
    let h = g.pow(a)?.coefficient_of(&[0, 1], &[target, target])?;
    let degree = h.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![0u64; degree + 1];
    for (m, c) in h.terms() {
        coeffs[m.exponents()[0] as usize] = c;
    }
    let monic = UPoly::from_coeffs(&field, coeffs).monic(&field);
    Ok(monic.coeffs().to_vec())
}

fn large_prime(p: u64) -> Result<u64> {
    let p = PrimeCharacteristic::new(p)?.get();
    if p < 5 {
        return Err(Error::domain(format!("the H construction needs p >= 5, got {p}")));
    }
    Ok(p)
}

fn eval_h(h: &[u64], u: &FieldElement) -> u64 {
    let k = u.field();
    h.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, u.value()), c))
}

/// `xy(x + y)(x + uy)` over the field of `u`.
pub fn four_lines(u: &FieldElement) -> Result<MvPolynomial> {
    let k = u.field().clone();
    let x = MvPolynomial::variable(k.clone(), 2, 0);
    let y = MvPolynomial::variable(k, 2, 1);
    x.mul(&y)?.mul(&x.add(&y)?)?.mul(&x.add(&y.scale(u.value()))?)
}

/// Computes `ν_f(p)` for `f = xy(x + y)(x + uy)` and compares it with `a`.
pub fn h_root_effect(p: u64, u: &FieldElement) -> Result<HRootEffect> {
    let p = large_prime(p)?;
    if u.field().characteristic() != p {
        return Err(Error::mismatch("u lives in a field of another characteristic"));
    }
    let h = h_polynomial(p)?;
    let a = (p - 1) / 2;
    let nu = NuTable::new(&four_lines(u)?)?.nu(1)?;
    Ok(HRootEffect {
        p,
        u: u.to_string(),
        h_of_u: u.field().format_element(eval_h(&h, u), "u"),
        nu,
        a,
        nu_below_a: nu < a,
    })
}

/// `ν_f(p) < (p - 1)/2` for a root `u` of `H`; errors when `H(u) != 0`.
pub fn verify_h_root_effect(p: u64, u: &FieldElement) -> Result<bool> {
    let effect = h_root_effect(p, u)?;
    if eval_h(&h_polynomial(p)?, u) != 0 {
        return Err(Error::domain(format!("u = {} is not a root of H (H(u) = {})", effect.u, effect.h_of_u)));
    }
    Ok(effect.nu_below_a)
}

/// Smallest `m >= 2` that is coprime to `a` and not a power of `p`.
pub fn choose_multiplier(p: u64, a: u64) -> u64 {
    (2..)
        .find(|&m: &u64| {
            let mut r = m;
            while r % p == 0 {
                r /= p;
            }
            r != 1 && m.gcd(&a) == 1
        })
        .expect("some integer qualifies")
}

/// Builds the full package for the prime `p`.
pub fn construct(p: u64) -> Result<CounterexamplePackage> {
    construct_with(p, ConstructOptions::default())
}

pub fn construct_with(p: u64, options: ConstructOptions) -> Result<CounterexamplePackage> {
    let p = PrimeCharacteristic::new(p)?.get();
    match p {
        2 => fixture(p, Branch::Two, "x*y*(x^4+x^2*y+y^2)", vec![1, 2], options),
        3 => fixture(p, Branch::Three, "x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)", vec![1, 1], options),
        _ => large(p, options),
    }
}

fn fixture(
    p: u64,
    branch: Branch,
    text: &str,
    weights: Vec<u64>,
    options: ConstructOptions,
) -> Result<CounterexamplePackage> {
    let f = parse_polynomial(text, &FiniteField::prime(p)?, Some(2))?;
    let w = WeightedGrading::new(weights)?;
    let cert = fpt_exact_graded_2var(&f, &w, options.solver)?;
    let value = cert
        .exact_value()
        .ok_or_else(|| Error::invariant("fixture threshold was not determined exactly"))?;
    let a = value.numer().clone();
    let a = u64::try_from(&a).map_err(|_| Error::invariant("numerator out of range"))?;
    finish(p, branch, None, None, f, w, cert, choose_multiplier(p, a), options)
}

fn large(p: u64, options: ConstructOptions) -> Result<CounterexamplePackage> {
    let a = (p - 1) / 2;
    let h = h_polynomial(p)?;
    let cap = options.max_ext_degree.unwrap_or(h.len() - 1);
    let (roots, search) = find_roots(&h, p, cap, options.scan_limit)?;
    let root = roots
        .into_iter()
        .find(|r| {
            let v = r.value.coefficients();
            !(v.iter().all(|&c| c == 0) || (v[0] == 1 && v[1..].iter().all(|&c| c == 0)))
        })
        .ok_or_else(|| {
            Error::domain(format!(
                "H has no root outside {{0, 1}} in extensions of degree <= {} (cap {cap}{})",
                search.scanned_degree,
                if search.truncated { ", scan limit reached" } else { "" }
            ))
        })?;
    let f = four_lines(&root.value)?;
    let w = WeightedGrading::standard(2);
    let cert = fpt_exact_graded_2var(&f, &w, options.solver)?;
    let expected = ExactRational::new(a, p)?;
    if cert.exact_value() != Some(&expected) {
        return Err(Error::invariant(format!(
            "fpt of the four-line polynomial is {}, expected {expected}",
            cert.value
        )));
    }
    let effect = h_root_effect(p, &root.value)?;
    if !effect.nu_below_a {
        return Err(Error::invariant("a root of H did not lower ν_f(p) below a"));
    }
    let choice = RootChoice {
        value: root.value.to_string(),
        coefficients: root.value.coefficients(),
        degree: root.degree,
        field: root.value.field().describe(),
    };
    let mut pkg = finish(
        p,
        Branch::LargePrime,
        Some(choice),
        Some(search),
        f,
        w,
        cert,
        choose_multiplier(p, a),
        options,
    )?;
    pkg.a_p = Some(a);
    pkg.h_display = Some(UPoly::from_raw(h.clone()).display("z"));
    pkg.h = Some(h);
    pkg.root_effect = Some(effect);
    Ok(pkg)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    p: u64,
    branch: Branch,
    root: Option<RootChoice>,
    root_search: Option<RootSearch>,
    f: MvPolynomial,
    w: WeightedGrading,
    cert: FptCertificate,
    m: u64,
    options: ConstructOptions,
) -> Result<CounterexamplePackage> {
    let g = f.pow(m)?;
    let power_cert = fpt_power(&cert, m as i64)?;
    let t_p = power_cert.exact_value().cloned().expect("exact by construction");
    let hypotheses = check_accumulation_hypotheses(&g, &w, &power_cert)?;
    if !hypotheses.holds() {
        return Err(Error::invariant(format!("hypotheses fail for f^{m}: {hypotheses:?}")));
    }
    let levels = default_levels(
        &g,
        &w,
        &power_cert,
        options.accumulation_levels,
        options.level_scan,
        options.level_budget,
    )?;
    let last = levels.last().copied().unwrap_or(1);
    let probe = if box_cells(p.pow(last + 1), 2).is_some_and(|c| c <= 4 * options.level_budget) {
        last + 1
    } else {
        last
    };
    let accumulation = accumulation_sequence(&g, &w, &power_cert, &levels, probe)?;
    Ok(CounterexamplePackage {
        p,
        branch,
        a_p: None,
        h: None,
        h_display: None,
        root,
        root_search,
        root_effect: None,
        polynomial: f.to_string(),
        weights: w.weights().to_vec(),
        fpt: cert,
        multiplier: m,
        in_t1: in_t1(&t_p)?,
        t_p,
        t_p_fpt: power_cert,
        hypotheses,
        accumulation,
    })
}
