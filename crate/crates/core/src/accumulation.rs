//! Perturbations `g_e = f + α_e` whose thresholds lie strictly above
//! `t = fpt(f)` and converge to it.
//!
//! For `e` with `t^(e) != p - 1`, let `ν = ν_f(p^e)` and let `x^λ` be a
//! monomial of `f^ν` surviving modulo `m^[p^e]`. With
//! `α_e = ∏ x_i^(p^e - 1 - λ_i)`, the product `f^ν α_e` contains
//! `∏ x_i^(p^e - 1)`; when `deg α_e != D` it cannot cancel inside
//! `g_e^(ν+1)`, and its coefficient `ν + 1` is a unit, so
//! `ν_{g_e}(p^e) >= ν + 1`.

use serde::Serialize;

use crate::algebra::poly::{Monomial, MvPolynomial, WeightedGrading};
use crate::baseq::{self, ExactRational};
use crate::error::{Error, Result};
use crate::fpt::{check_accumulation_hypotheses, FptCertificate};
use crate::frobenius::{kernel::box_cells, NuTable};

/// Default cap on `p^(2e)` when choosing levels automatically.
pub const DEFAULT_LEVEL_BUDGET: u64 = 1 << 20;

/// Levels `e <= e_max` whose base-`p` digit of `t` is not `p - 1`.
pub fn digit_set_e(t: &ExactRational, p: u64, e_max: u32) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for e in 1..=e_max {
        if baseq::digit(t, p, i64::from(e))? != p - 1 {
            out.push(e);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct AccumulationWitness {
    pub e: u32,
    pub digit: u64,
    pub nu: u64,
    pub lambda: Monomial,
    pub alpha: Monomial,
    pub g: MvPolynomial,
    pub deg_alpha: u64,
    /// `deg α_e != D`.
    pub in_e_prime: bool,
    #[serde(skip)]
    degree: u64,
}

impl AccumulationWitness {
    pub fn degree(&self) -> u64 {
        self.degree
    }
}

/// Builds `λ`, `α_e` and `g_e` at level `e`.
pub fn build_witness(
    f: &MvPolynomial,
    w: &WeightedGrading,
    cert: &FptCertificate,
    e: u32,
) -> Result<AccumulationWitness> {
    let table = NuTable::new(f)?;
    build_witness_with(&table, w, cert, e)
}

fn build_witness_with(
    table: &NuTable,
    w: &WeightedGrading,
    cert: &FptCertificate,
    e: u32,
) -> Result<AccumulationWitness> {
    let f = table.polynomial();
    let check = check_accumulation_hypotheses(f, w, cert)?;
    if !check.below_bound {
        return Err(Error::domain(format!(
            "condition (a) fails: fpt = {} is not below Σa/D = {}",
            check.t, check.bound
        )));
    }
    if !check.outside_z_inv_p {
        return Err(Error::domain(format!(
            "condition (b) fails: fpt = {} lies in Z[1/{}]",
            check.t,
            f.characteristic()
        )));
    }
    let p = f.characteristic();
    let digit = baseq::digit(&check.t, p, i64::from(e))?;
    if digit == p - 1 {
        return Err(Error::domain(format!("level {e} is not in E: digit {e} of t is p - 1")));
    }
    let degree = f.weighted_degree(w)?.expect("checked homogeneous");
    let row = table.entry(e)?;
    let q = p.pow(e);
    let alpha_exps: Vec<u32> = row.witness.exponents().iter().map(|&l| (q - 1) as u32 - l).collect();
    let alpha = Monomial::new(alpha_exps);
    let alpha_poly = MvPolynomial::monomial(f.field().clone(), alpha.clone(), 1);
    let deg_alpha = w.degree_of(&alpha);
    let closed = (q * w.weight_sum()).checked_sub(row.nu * degree + w.weight_sum());
    if closed != Some(deg_alpha) {
        return Err(Error::invariant(format!(
            "deg α_{e} = {deg_alpha} disagrees with the closed form {closed:?}"
        )));
    }
    Ok(AccumulationWitness {
        e,
        digit,
        nu: row.nu,
        lambda: row.witness,
        g: f.add(&alpha_poly)?,
        in_e_prime: deg_alpha != degree,
        deg_alpha,
        alpha,
        degree,
    })
}

/// Computes `ν_{g_e}(p^e)` and confirms it is at least `ν + 1`.
pub fn certify_increment(witness: &AccumulationWitness) -> Result<bool> {
    increment(witness).map(|_| true)
}

fn increment(witness: &AccumulationWitness) -> Result<u64> {
    if !witness.in_e_prime {
        return Err(Error::domain(format!(
            "level {} is not in E': deg α equals the degree of f",
            witness.e
        )));
    }
    let p = witness.g.characteristic();
    if witness.nu % p != witness.digit % p {
        return Err(Error::invariant(format!(
            "ν = {} is not congruent to the digit {} mod {p}",
            witness.nu, witness.digit
        )));
    }
    if (witness.nu + 1) % p == 0 {
        return Err(Error::invariant("ν + 1 is divisible by p"));
    }
    let after = NuTable::new(&witness.g)?.nu(witness.e)?;
    if after < witness.nu + 1 {
        return Err(Error::invariant(format!(
            "ν_g(p^{}) = {after} did not exceed ν_f = {}",
            witness.e, witness.nu
        )));
    }
    Ok(after)
}

#[derive(Debug, Clone, Serialize)]
pub struct AccumulationRow {
    pub e: u32,
    pub digit: u64,
    pub nu_before: u64,
    pub nu_after: u64,
    pub lambda: Monomial,
    pub alpha: Monomial,
    pub deg_alpha: u64,
    pub certified: bool,
    /// `ν_{g_e}(p^e) / p^e`, a lower bound for `fpt(g_e)`.
    pub truncation_at_e: ExactRational,
    /// `truncation_at_e - t`.
    pub gap: ExactRational,
    pub probe_truncation: ExactRational,
    pub g: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AccumulationReport {
    pub p: u64,
    pub polynomial: String,
    pub weights: Vec<u64>,
    pub degree: u64,
    pub t: ExactRational,
    pub probe_level: u32,
    pub t_probe_truncation: ExactRational,
    pub rows: Vec<AccumulationRow>,
}

impl AccumulationReport {
    /// Every gap positive and the sequence of gaps nonincreasing.
    pub fn gaps_shrink(&self) -> bool {
        self.rows.iter().all(|r| r.gap.is_positive())
            && self.rows.windows(2).all(|w| w[1].gap <= w[0].gap)
    }

    pub fn to_tsv(&self) -> String {
        let mut out =
            String::from("e\tdigit\tnu_before\tnu_after\tdeg_alpha\tcertified\ttruncation\tgap\tprobe_truncation\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.e,
                r.digit,
                r.nu_before,
                r.nu_after,
                r.deg_alpha,
                r.certified,
                r.truncation_at_e,
                r.gap,
                r.probe_truncation
            ));
        }
        out
    }
}

/// The first `count` levels of `E'` with `p^(2e) <= budget`, scanning
/// `e <= e_max`.
pub fn default_levels(
    f: &MvPolynomial,
    w: &WeightedGrading,
    cert: &FptCertificate,
    count: usize,
    e_max: u32,
    budget: u64,
) -> Result<Vec<u32>> {
    let table = NuTable::new(f)?;
    let t = cert
        .exact_value()
        .ok_or_else(|| Error::domain("level selection needs an exact threshold"))?;
    let p = f.characteristic();
    let mut out = Vec::new();
    for e in digit_set_e(t, p, e_max)? {
        if out.len() == count || box_cells(p.pow(e), 2).is_none_or(|c| c > budget) {
            break;
        }
        if build_witness_with(&table, w, cert, e)?.in_e_prime {
            out.push(e);
        }
    }
    Ok(out)
}

/// Certified witnesses for each level of `levels`, with truncations of
/// `fpt(g_e)` at `probe_level`.
pub fn accumulation_sequence(
    f: &MvPolynomial,
    w: &WeightedGrading,
    cert: &FptCertificate,
    levels: &[u32],
    probe_level: u32,
) -> Result<AccumulationReport> {
    let t = cert
        .exact_value()
        .ok_or_else(|| Error::domain("accumulation needs an exact threshold"))?
        .clone();
    let p = f.characteristic();
    let table = NuTable::new(f)?;
    let mut levels = levels.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let mut rows = Vec::new();
    for &e in &levels {
        let witness = build_witness_with(&table, w, cert, e)?;
        let after = increment(&witness)?;
        let truncation_at_e = ExactRational::from_integer(after).scale_pow(p, -i64::from(e));
        let probe_truncation = NuTable::new(&witness.g)?.truncation(probe_level)?;
        rows.push(AccumulationRow {
            e,
            digit: witness.digit,
            nu_before: witness.nu,
            nu_after: after,
            gap: truncation_at_e.clone() - t.clone(),
            truncation_at_e,
            probe_truncation,
            certified: true,
            g: witness.g.to_string(),
            lambda: witness.lambda,
            alpha: witness.alpha,
            deg_alpha: witness.deg_alpha,
        });
    }
    Ok(AccumulationReport {
        p,
        polynomial: f.to_string(),
        weights: w.weights().to_vec(),
        degree: f.weighted_degree(w)?.unwrap_or(0),
        t_probe_truncation: baseq::truncation(&t, p, probe_level)?,
        t,
        probe_level,
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationRow {
    pub n: u32,
    pub truncation: ExactRational,
    /// `|truncation - fpt truncation of f|` at the probe level.
    pub deviation: ExactRational,
}

/// Level-`level` truncations of `fpt(f + x_var^N)` for each `N` in
/// `exponents`.
pub fn perturbation_profile(
    f: &MvPolynomial,
    var: usize,
    exponents: &[u32],
    level: u32,
) -> Result<Vec<PerturbationRow>> {
    if var >= f.nvars() {
        return Err(Error::domain(format!("variable index {var} out of range")));
    }
    let base = NuTable::new(f)?.truncation(level)?;
    exponents
        .iter()
        .map(|&n| {
            let mut exps = vec![0u32; f.nvars()];
            exps[var] = n;
            let bump = MvPolynomial::monomial(f.field().clone(), Monomial::new(exps), 1);
            let truncation = NuTable::new(&f.add(&bump)?)?.truncation(level)?;
            let diff = truncation.clone() - base.clone();
            let deviation = if diff.is_positive() { diff } else { -diff };
            Ok(PerturbationRow {
                n,
                truncation,
                deviation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FiniteField;
    use crate::algebra::parse::parse_polynomial;
    use crate::fpt::{fpt_exact_graded_2var, fpt_power, SolverConfig};

    fn poly(text: &str, p: u64) -> MvPolynomial {
        parse_polynomial(text, &FiniteField::prime(p).unwrap(), Some(2)).unwrap()
    }

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    fn p3_power() -> (MvPolynomial, WeightedGrading, FptCertificate) {
        let f = poly("x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)", 3);
        let w = WeightedGrading::standard(2);
        let cert = fpt_exact_graded_2var(&f, &w, SolverConfig::default()).unwrap();
        (f.pow(5).unwrap(), w, fpt_power(&cert, 5).unwrap())
    }

    #[test]
    fn digit_sets() {
        assert!(digit_set_e(&ExactRational::one(), 5, 10).unwrap().is_empty());
        assert_eq!(digit_set_e(&r(2, 45), 3, 5).unwrap(), vec![1, 2, 3, 4, 5]);
        assert_eq!(digit_set_e(&r(2, 5), 5, 4).unwrap(), vec![1]);
    }

    #[test]
    fn witness_at_level_three() {
        let (g, w, cert) = p3_power();
        let wit = build_witness(&g, &w, &cert, 3).unwrap();
        // ν_{f^5}(27) = ⌊ν_f(27) / 5⌋ = ⌊5 / 5⌋ = 1.
        assert_eq!(wit.nu, 1);
        assert_eq!(wit.deg_alpha, 27 * 2 - 35 - 2);
        assert!(wit.in_e_prime);
        assert_ne!(g.coeff(&wit.lambda), 0);
        assert!(wit.lambda.in_box(27));
        let product = wit.lambda.checked_mul(&wit.alpha).unwrap();
        assert_eq!(product.exponents(), &[26, 26]);
        assert!(certify_increment(&wit).unwrap());
    }

    #[test]
    fn refusals() {
        let x = poly("x", 3);
        let w = WeightedGrading::standard(2);
        let cert = fpt_exact_graded_2var(&x, &w, SolverConfig::default()).unwrap();
        let err = build_witness(&x, &w, &cert, 1).unwrap_err();
        assert!(err.to_string().contains("(b)"), "{err}");

        // A witness outside E' is refused.
        let (g, w, cert) = p3_power();
        let mut wit = build_witness(&g, &w, &cert, 2).unwrap();
        wit.in_e_prime = false;
        assert!(matches!(certify_increment(&wit), Err(Error::Domain(_))));
    }

    #[test]
    fn sequence_gaps_shrink() {
        let (g, w, cert) = p3_power();
        let report = accumulation_sequence(&g, &w, &cert, &[2, 3, 4], 5).unwrap();
        assert_eq!(report.rows.len(), 3);
        assert!(report.gaps_shrink());
        for row in &report.rows {
            assert!(row.probe_truncation > report.t_probe_truncation);
            assert!(row.probe_truncation > report.t);
        }
        assert!(accumulation_sequence(&g, &w, &cert, &[], 5).unwrap().rows.is_empty());
        let tsv = report.to_tsv();
        assert_eq!(tsv.lines().count(), 4);
    }

    #[test]
    fn default_levels_respect_budget() {
        let (g, w, cert) = p3_power();
        let levels = default_levels(&g, &w, &cert, 3, 10, DEFAULT_LEVEL_BUDGET).unwrap();
        assert_eq!(levels.len(), 3);
        let tight = default_levels(&g, &w, &cert, 3, 10, 100).unwrap();
        assert!(tight.iter().all(|&e| 3u64.pow(2 * e) <= 100));
    }

    #[test]
    fn perturbations_settle() {
        let f = poly("x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)", 3);
        let rows = perturbation_profile(&f, 0, &[1, 2, 4, 8, 16, 32, 64], 3).unwrap();
        // x^N lies in m^[27] for N >= 27, so the last rows cannot move.
        assert!(rows.last().unwrap().deviation.is_zero());
        assert!(rows.windows(2).all(|w| w[1].deviation <= w[0].deviation));
    }
}
