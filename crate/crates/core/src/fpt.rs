//! F-pure thresholds of principal ideals.
//!
//! For a reduced, weighted-homogeneous `f` in two variables with degree `D`
//! prime to `p`, put `s = min(1, (a_1 + a_2) / D)`. Then either
//! `fpt(f) = s`, or `fpt(f) = ⟨s⟩_L` for some level `L >= 1`. The solver
//! compares `ν_f(p^e)` with `T_e = ⌈s p^e - 1⌉` level by level: the first
//! level where they differ is `L`, and `ν_f(p^L) = T_L - 1` there.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::algebra::bivariate::squarefree_part;
use crate::algebra::poly::{MvPolynomial, WeightedGrading};
use crate::baseq::{self, ExactRational};
use crate::error::{Error, Result};
use crate::frobenius::{
    is_f_pure_with, multiplicative_order, nu_ideal, FPurity, IdealBudget, NuConfig, NuEntry, NuTable, DEFAULT_MAX_TERMS,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FptValue {
    Exact { value: ExactRational },
    /// `lower < fpt <= upper`.
    Interval { lower: ExactRational, upper: ExactRational },
}

impl FptValue {
    pub fn exact(&self) -> Option<&ExactRational> {
        match self {
            FptValue::Exact { value } => Some(value),
            FptValue::Interval { .. } => None,
        }
    }
}

impl std::fmt::Display for FptValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FptValue::Exact { value } => write!(f, "{value}"),
            FptValue::Interval { lower, upper } => write!(f, "({lower}, {upper}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum FptMethod {
    GradedDivergence { level: u32 },
    FPureCertificate { e: u32 },
    PowerScaling { multiplier: u64 },
    TruncationOnly { e_max: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct FptCertificate {
    pub p: u64,
    pub polynomial: String,
    pub value: FptValue,
    #[serde(flatten)]
    pub method: FptMethod,
    pub nu_table: Vec<NuEntry>,
    pub s: Option<ExactRational>,
    pub divergence_level: Option<u32>,
    /// For power scaling, the certificate of the reduced base.
    pub base: Option<Box<FptCertificate>>,
}

impl FptCertificate {
    pub fn exact_value(&self) -> Option<&ExactRational> {
        self.value.exact()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub e_max: u32,
    /// Levels past the divergence level checked against the all-`(p-1)` tail.
    pub verify_extra: u32,
    pub max_terms: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            e_max: 12,
            verify_extra: 2,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

fn to_u64(n: BigInt, what: &str) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::budget(format!("{what} does not fit in 64 bits")))
}

/// `⌈x p^e - 1⌉` as an integer.
fn scaled_floor_below(x: &ExactRational, p: u64, e: u32) -> Result<u64> {
    to_u64(x.scale_pow(p, i64::from(e)).ceil() - BigInt::one(), "truncation numerator")
}

fn level_value(nu: u64, p: u64, e: u32) -> ExactRational {
    ExactRational::from_integer(nu).scale_pow(p, -i64::from(e))
}

fn homogeneous_degree(f: &MvPolynomial, w: &WeightedGrading) -> Result<u64> {
    if w.len() != f.nvars() {
        return Err(Error::mismatch(format!(
            "{} weights for {} variables",
            w.len(),
            f.nvars()
        )));
    }
    match f.weighted_degree(w)? {
        Some(0) | None => Err(Error::domain("polynomial is not weighted homogeneous of positive degree")),
        Some(d) => Ok(d),
    }
}

/// Exact threshold of a reduced weighted-homogeneous `f` in two variables.
pub fn fpt_exact_graded_2var(
    f: &MvPolynomial,
    w: &WeightedGrading,
    config: SolverConfig,
) -> Result<FptCertificate> {
    if f.nvars() != 2 {
        return Err(Error::domain("the graded solver needs exactly two variables"));
    }
    let d = homogeneous_degree(f, w)?;
    let p = f.characteristic();
    if d % p == 0 {
        return Err(Error::domain(format!("weighted degree {d} is divisible by p = {p}")));
    }
    let sq = squarefree_part(f)?;
    if !sq.is_reduced {
        return Err(Error::domain(match sq.power {
            Some(m) => format!("polynomial is not reduced: it is a unit times ({})^{m}", sq.part),
            None => "polynomial is not reduced and not a pure power of a reduced polynomial".into(),
        }));
    }
    let s = ExactRational::new(w.weight_sum(), d)?.min(ExactRational::one());
    let table = NuTable::with_config(f, NuConfig { max_terms: config.max_terms })?;
    let certificate = |value, method, table: &NuTable, level| FptCertificate {
        p,
        polynomial: f.to_string(),
        value,
        method,
        nu_table: table.entries(),
        s: Some(s.clone()),
        divergence_level: level,
        base: None,
    };
    // First level with s (p^e - 1) integral; there is none when p divides
    // the denominator of s.
    let pure_level = u64::try_from(s.denom())
        .ok()
        .filter(|den| den % p != 0)
        .and_then(|den| u32::try_from(multiplicative_order(p, den)).ok());

    for e in 1..=config.e_max {
        let nu = table.nu(e)?;
        let target = scaled_floor_below(&s, p, e)?;
        if nu == target {
            if pure_level == Some(e) {
                return match is_f_pure_with(&table, &s, e)? {
                    FPurity::CertifiedYes { e } => Ok(certificate(
                        FptValue::Exact { value: s.clone() },
                        FptMethod::FPureCertificate { e },
                        &table,
                        None,
                    )),
                    other => Err(Error::invariant(format!(
                        "ν matches ⌈s p^{e} - 1⌉ but the F-purity test returned {other:?}"
                    ))),
                };
            }
            continue;
        }
        if nu > target {
            return Err(Error::invariant(format!(
                "ν_f({p}^{e}) = {nu} exceeds the graded bound {target}"
            )));
        }
        if nu + 1 != target {
            return Err(Error::invariant(format!(
                "at the divergence level {e}, ν = {nu} but ⌈s p^e - 1⌉ - 1 = {}",
                target - 1
            )));
        }
        let value = level_value(target, p, e);
        for k in 1..=config.verify_extra {
            let nu_k = table.nu(e + k)?;
            let expected = target * p.pow(k) - 1;
            if nu_k != expected {
                return Err(Error::invariant(format!(
                    "after the divergence level {e}, ν(p^{}) = {nu_k}, expected {expected}",
                    e + k
                )));
            }
        }
        return Ok(certificate(
            FptValue::Exact { value },
            FptMethod::GradedDivergence { level: e },
            &table,
            Some(e),
        ));
    }
    let nu = table.nu(config.e_max)?;
    Ok(certificate(
        interval(nu, p, config.e_max),
        FptMethod::TruncationOnly { e_max: config.e_max },
        &table,
        None,
    ))
}

fn interval(nu: u64, p: u64, e: u32) -> FptValue {
    FptValue::Interval {
        lower: level_value(nu, p, e),
        upper: level_value(nu + 1, p, e),
    }
}

/// Interval certificate from the truncation at level `e_max`.
pub fn fpt_truncation_interval(f: &MvPolynomial, config: SolverConfig) -> Result<FptCertificate> {
    let table = NuTable::with_config(f, NuConfig { max_terms: config.max_terms })?;
    let nu = table.nu(config.e_max)?;
    Ok(FptCertificate {
        p: f.characteristic(),
        polynomial: f.to_string(),
        value: interval(nu, f.characteristic(), config.e_max),
        method: FptMethod::TruncationOnly { e_max: config.e_max },
        nu_table: table.entries(),
        s: None,
        divergence_level: None,
        base: None,
    })
}

/// `fpt(h^m) = fpt(h) / m` from an exact certificate for `h`.
pub fn fpt_power(cert: &FptCertificate, m: i64) -> Result<FptCertificate> {
    if m <= 0 {
        return Err(Error::domain(format!("power must be positive, got {m}")));
    }
    let value = cert
        .exact_value()
        .ok_or_else(|| Error::domain("power scaling needs an exact certificate"))?;
    if m == 1 {
        return Ok(cert.clone());
    }
    Ok(FptCertificate {
        p: cert.p,
        polynomial: format!("({})^{m}", cert.polynomial),
        value: FptValue::Exact {
            value: value.clone() / ExactRational::from_integer(m),
        },
        method: FptMethod::PowerScaling { multiplier: m as u64 },
        nu_table: Vec::new(),
        s: None,
        divergence_level: None,
        base: Some(Box::new(cert.clone())),
    })
}

/// Checks `ν_{h^m}(p^e) = ⌊ν_h(p^e) / m⌋` for `e = 1..=e_max` by computing
/// both sides.
pub fn verify_power_scaling(h: &MvPolynomial, m: u64, e_max: u32) -> Result<bool> {
    if m == 0 {
        return Err(Error::domain("power must be positive"));
    }
    let base = NuTable::new(h)?;
    let power = NuTable::new(&h.pow(m)?)?;
    for e in 1..=e_max {
        if power.nu(e)? != base.nu(e)? / m {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Levels at which a power-scaled answer is checked against its own ν table.
const POWER_CHECK_LEVELS: usize = 3;

/// Threshold of a two-variable weighted-homogeneous polynomial that is a
/// unit multiple of `h^m` with `h` reduced; anything else gets a truncation
/// interval.
pub fn fpt_principal(
    f: &MvPolynomial,
    w: Option<&WeightedGrading>,
    config: SolverConfig,
) -> Result<FptCertificate> {
    if f.is_zero() {
        return Err(Error::domain("zero polynomial: the threshold is 0 by convention"));
    }
    let standard = WeightedGrading::standard(f.nvars());
    let w = w.unwrap_or(&standard);
    let graded = f.nvars() == 2
        && matches!(f.weighted_degree(w), Ok(Some(d)) if d > 0)
        && f.constant_term() == 0;
    if !graded {
        return fpt_truncation_interval(f, config);
    }
    // The divergence argument needs a degree prime to p.
    let solvable = |h: &MvPolynomial| matches!(h.weighted_degree(w), Ok(Some(d)) if d % h.characteristic() != 0);
    let sq = squarefree_part(f)?;
    if sq.is_reduced {
        if !solvable(f) {
            return fpt_truncation_interval(f, config);
        }
        return fpt_exact_graded_2var(f, w, config);
    }
    match sq.power {
        Some(_) if !solvable(&sq.part) => fpt_truncation_interval(f, config),
        Some(m) => {
            let base = fpt_exact_graded_2var(&sq.part, w, config)?;
            if base.exact_value().is_none() {
                return fpt_truncation_interval(f, config);
            }
            let mut cert = fpt_power(&base, i64::from(m))?;
            let table = NuTable::with_config(f, NuConfig { max_terms: config.max_terms })?;
            for row in base.nu_table.iter().take(POWER_CHECK_LEVELS) {
                let nu = table.nu(row.e)?;
                if nu != row.nu / u64::from(m) {
                    return Err(Error::invariant(format!(
                        "ν of the power at p^{} is {nu}, expected ⌊{}/{m}⌋",
                        row.e, row.nu
                    )));
                }
            }
            cert.nu_table = table.entries();
            Ok(cert)
        }
        None => Err(Error::domain(
            "polynomial has mixed multiplicities; only pure powers of reduced polynomials are solved",
        )),
    }
}

/// `t = 0` or `t = 1/m`.
pub fn in_t1(t: &ExactRational) -> Result<bool> {
    if t < &ExactRational::zero() {
        return Err(Error::domain("in_t1 needs t >= 0"));
    }
    Ok(t.is_zero() || t.numer().is_one())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub t: ExactRational,
    pub bound: ExactRational,
    /// `t < (Σ a_i) / D`.
    pub below_bound: bool,
    /// `t ∉ Z[1/p]`.
    pub outside_z_inv_p: bool,
}

impl HypothesisCheck {
    pub fn holds(&self) -> bool {
        self.below_bound && self.outside_z_inv_p
    }
}

/// Evaluates the two hypotheses of the accumulation construction.
pub fn check_accumulation_hypotheses(
    f: &MvPolynomial,
    w: &WeightedGrading,
    cert: &FptCertificate,
) -> Result<HypothesisCheck> {
    let d = homogeneous_degree(f, w)?;
    let t = cert
        .exact_value()
        .ok_or_else(|| Error::domain("hypothesis check needs an exact threshold"))?
        .clone();
    let bound = ExactRational::new(w.weight_sum(), d)?;
    Ok(HypothesisCheck {
        below_bound: t < bound,
        outside_z_inv_p: !baseq::is_in_z_inv_q(&t, f.characteristic())?,
        t,
        bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VerticalRow {
    pub n: u32,
    pub nu: u64,
    pub truncation: ExactRational,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerticalProbe {
    pub e: u32,
    pub polynomial: String,
    pub fpt_truncation: ExactRational,
    pub rows: Vec<VerticalRow>,
    /// Smallest `n` from which every row equals the truncation of `fpt(f)`.
    pub stable_from: Option<u32>,
}

/// Level-`e` truncations of `fpt((f) + m^n)` for `n = 1..=n_max`.
pub fn probe_vertical(
    f: &MvPolynomial,
    n_max: u32,
    e: u32,
    budget: IdealBudget,
) -> Result<VerticalProbe> {
    let table = NuTable::new(f)?;
    let p = f.characteristic();
    let base = table.truncation(e)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let mut gens = vec![f.clone()];
        gens.extend(monomials_of_degree(f, n));
        let nu = nu_ideal(&gens, e, budget)?;
        rows.push(VerticalRow {
            n,
            nu,
            truncation: level_value(nu, p, e),
        });
    }
    let stable_from = rows
        .iter()
        .rposition(|r| r.truncation != base)
        .map_or(Some(1), |i| (i + 1 < rows.len()).then(|| rows[i + 1].n));
    Ok(VerticalProbe {
        e,
        polynomial: f.to_string(),
        fpt_truncation: base,
        rows,
        stable_from,
    })
}

fn monomials_of_degree(f: &MvPolynomial, n: u32) -> Vec<MvPolynomial> {
    use crate::algebra::poly::Monomial;
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for a in (0..=left).rev() {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut vec![0; f.nvars()], &mut out);
    out.into_iter()
        .map(|e| MvPolynomial::monomial(f.field().clone(), Monomial::new(e), 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FiniteField;
    use crate::algebra::parse::parse_polynomial;

    fn poly(text: &str, p: u64) -> MvPolynomial {
        parse_polynomial(text, &FiniteField::prime(p).unwrap(), Some(2)).unwrap()
    }

    fn r(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    const P3: &str = "x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)";
    const P2: &str = "x*y*(x^4+x^2*y+y^2)";

    #[test]
    fn p3_fixture() {
        let cert = fpt_exact_graded_2var(
            &poly(P3, 3),
            &WeightedGrading::standard(2),
            SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(cert.exact_value(), Some(&r(2, 9)));
        assert_eq!(cert.method, FptMethod::GradedDivergence { level: 2 });
        assert_eq!(cert.s, Some(r(2, 7)));
        let nus: Vec<u64> = cert.nu_table.iter().map(|row| row.nu).collect();
        assert_eq!(nus, vec![0, 1, 5, 17]);
    }

    #[test]
    fn p2_fixture() {
        let w = WeightedGrading::new(vec![1, 2]).unwrap();
        let cert = fpt_exact_graded_2var(&poly(P2, 2), &w, SolverConfig::default()).unwrap();
        assert_eq!(cert.exact_value(), Some(&r(3, 8)));
        assert_eq!(cert.divergence_level, Some(3));
        let fifth = fpt_power(&cert, 5).unwrap();
        assert_eq!(fifth.exact_value(), Some(&r(3, 40)));
        assert!(verify_power_scaling(&poly(P2, 2), 5, 5).unwrap());
    }

    #[test]
    fn principal_dispatch_handles_pure_powers() {
        let f5 = poly(P3, 3).pow(5).unwrap();
        let cert = fpt_principal(&f5, None, SolverConfig::default()).unwrap();
        assert_eq!(cert.exact_value(), Some(&r(2, 45)));
        assert_eq!(cert.method, FptMethod::PowerScaling { multiplier: 5 });
        assert!(fpt_exact_graded_2var(&f5, &WeightedGrading::standard(2), SolverConfig::default())
            .is_err());
    }

    #[test]
    fn f_pure_branch() {
        // x*y: s = 1 and the pair is F-pure at 1.
        for p in [3u64, 5, 7] {
            let cert = fpt_exact_graded_2var(
                &poly("x*y", p),
                &WeightedGrading::standard(2),
                SolverConfig::default(),
            )
            .unwrap();
            assert_eq!(cert.exact_value(), Some(&ExactRational::one()));
            assert_eq!(cert.method, FptMethod::FPureCertificate { e: 1 });
        }
        // The cusp over F_7 has threshold 5/6.
        let w = WeightedGrading::new(vec![3, 2]).unwrap();
        let cert = fpt_exact_graded_2var(&poly("x^2 + y^3", 7), &w, SolverConfig::default()).unwrap();
        assert_eq!(cert.exact_value(), Some(&r(5, 6)));
        // Over F_5 the cusp has threshold 4/5 = ⟨5/6⟩_1.
        let cert = fpt_exact_graded_2var(&poly("x^2 + y^3", 5), &w, SolverConfig::default()).unwrap();
        assert_eq!(cert.exact_value(), Some(&r(4, 5)));
        assert_eq!(cert.divergence_level, Some(1));
    }

    #[test]
    fn single_variable_is_capped() {
        // s = 2 is capped at 1.
        let cert = fpt_exact_graded_2var(
            &poly("x", 3),
            &WeightedGrading::standard(2),
            SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(cert.exact_value(), Some(&ExactRational::one()));
    }

    #[test]
    fn hypothesis_errors() {
        let std2 = WeightedGrading::standard(2);
        let c = SolverConfig::default();
        assert!(matches!(fpt_exact_graded_2var(&poly("x^2*y", 5), &std2, c), Err(Error::Domain(_))));
        assert!(matches!(fpt_exact_graded_2var(&poly("x^3 + y^3", 3), &std2, c), Err(Error::Domain(_))));
        assert!(matches!(fpt_exact_graded_2var(&poly("x + y^2", 5), &std2, c), Err(Error::Domain(_))));
        let f3 = parse_polynomial("x*y*z", &FiniteField::prime(5).unwrap(), Some(3)).unwrap();
        assert!(fpt_exact_graded_2var(&f3, &WeightedGrading::standard(3), c).is_err());
        assert!(fpt_power(&fpt_exact_graded_2var(&poly("x*y", 5), &std2, c).unwrap(), 0).is_err());
    }

    #[test]
    fn t1_membership() {
        assert!(in_t1(&r(1, 7)).unwrap());
        assert!(!in_t1(&r(2, 45)).unwrap());
        assert!(in_t1(&ExactRational::zero()).unwrap());
        assert!(in_t1(&r(-1, 2)).is_err());
        for m in 1..6u32 {
            let f = poly(&format!("x^{m}"), 5);
            let cert = fpt_principal(&f, None, SolverConfig::default()).unwrap();
            assert_eq!(cert.exact_value(), Some(&r(1, i64::from(m))));
            assert!(in_t1(cert.exact_value().unwrap()).unwrap());
        }
    }

    #[test]
    fn hypotheses_examples() {
        let std2 = WeightedGrading::standard(2);
        let f = poly(P3, 3);
        let cert = fpt_exact_graded_2var(&f, &std2, SolverConfig::default()).unwrap();
        let check = check_accumulation_hypotheses(&f, &std2, &cert).unwrap();
        assert!(check.below_bound && !check.outside_z_inv_p);
        let f5 = f.pow(5).unwrap();
        let check = check_accumulation_hypotheses(&f5, &std2, &fpt_power(&cert, 5).unwrap()).unwrap();
        assert_eq!(check.bound, r(2, 35));
        assert!(check.holds());
        let x = poly("x", 5);
        let cert = fpt_principal(&x, None, SolverConfig::default()).unwrap();
        assert!(!check_accumulation_hypotheses(&x, &std2, &cert).unwrap().outside_z_inv_p);
        assert!(check_accumulation_hypotheses(&poly("x + y^2", 5), &std2, &cert).is_err());
    }

    #[test]
    fn vertical_probe_on_a_line() {
        // (x) + m^n = (x, y^n): ν at level 1 is (p - 1) + ⌊(p - 1)/n⌋.
        let p = 5;
        let probe = probe_vertical(&poly("x", p), 3, 1, IdealBudget::default()).unwrap();
        for row in &probe.rows {
            let n = u64::from(row.n);
            assert_eq!(row.nu, (p - 1) + (p - 1) / n);
        }
        assert_eq!(probe.stable_from, None);
    }

    #[test]
    fn certificate_serializes() {
        let cert = fpt_exact_graded_2var(
            &poly(P3, 3),
            &WeightedGrading::standard(2),
            SolverConfig::default(),
        )
        .unwrap();
        let json = serde_json::to_value(&cert).unwrap();
        assert_eq!(json["value"]["value"], "2/9");
        assert_eq!(json["method"], "graded-divergence");
        assert_eq!(json["level"], 2);
        assert_eq!(json["s"], "2/7");
        assert_eq!(json["nu_table"][1]["nu"], 1);
    }

    #[test]
    fn degree_divisible_by_p_falls_back_to_interval() {
        let f = poly("x*y", 2);
        let w = WeightedGrading::standard(2);
        assert!(matches!(fpt_exact_graded_2var(&f, &w, SolverConfig::default()), Err(Error::Domain(_))));
        let cert = fpt_principal(&f, None, SolverConfig { e_max: 4, ..SolverConfig::default() }).unwrap();
        assert!(matches!(cert.method, FptMethod::TruncationOnly { e_max: 4 }));
        let FptValue::Interval { lower, upper } = &cert.value else { panic!() };
        assert!(lower <= &ExactRational::one() && &ExactRational::one() <= upper);
    }
}
