use proptest::prelude::*;

use fptlab::accumulation::{build_witness, certify_increment, digit_set_e, perturbation_profile};
use fptlab::algebra::{parse_polynomial, FiniteField, Monomial, MvPolynomial, WeightedGrading};
use fptlab::baseq::{self, ExactRational};
use fptlab::counterexamples::{choose_multiplier, h_polynomial};
use fptlab::fpt::{fpt_exact_graded_2var, fpt_power, fpt_principal, in_t1, SolverConfig};
use fptlab::frobenius::NuTable;

const P3: &str = "x*y*(x+y)*(x-y)*(x^3-x*y^2-y^3)";
const P2: &str = "x*y*(x^4+x^2*y+y^2)";

fn poly(text: &str, p: u64) -> MvPolynomial {
    parse_polynomial(text, &FiniteField::prime(p).unwrap(), Some(2)).unwrap()
}

fn fixtures() -> Vec<(MvPolynomial, WeightedGrading)> {
    vec![
        (poly(P3, 3), WeightedGrading::standard(2)),
        (poly(P2, 2), WeightedGrading::new(vec![1, 2]).unwrap()),
    ]
}

#[test]
fn tail_after_divergence_is_all_maximal_digits() {
    for (f, w) in fixtures() {
        let cert = fpt_exact_graded_2var(&f, &w, SolverConfig::default()).unwrap();
        let level = cert.divergence_level.unwrap();
        let value = cert.exact_value().unwrap();
        let p = f.characteristic();
        let top = value.scale_pow(p, i64::from(level));
        let top = u64::try_from(top.numer()).unwrap();
        let table = NuTable::new(&f).unwrap();
        for e in level..=level + 3 {
            assert_eq!(table.nu(e).unwrap(), top * p.pow(e - level) - 1);
        }
    }
}

#[test]
fn truncations_increase_and_stay_below() {
    for (f, w) in fixtures() {
        let cert = fpt_exact_graded_2var(&f, &w, SolverConfig::default()).unwrap();
        let t = cert.exact_value().unwrap().clone();
        let table = NuTable::new(&f).unwrap();
        let mut prev = ExactRational::zero();
        for e in 1..=6 {
            let tr = table.truncation(e).unwrap();
            assert!(prev <= tr && tr < t);
            assert_eq!(tr, baseq::truncation(&t, f.characteristic(), e).unwrap());
            prev = tr;
        }
    }
}

#[test]
fn witness_invariants_on_both_fixtures() {
    let levels = [vec![1, 2, 3, 4], vec![1, 2, 3, 4, 5]];
    for ((f, w), levels) in fixtures().into_iter().zip(levels) {
        let m = 5u64;
        let cert = fpt_exact_graded_2var(&f, &w, SolverConfig::default()).unwrap();
        let g = f.pow(m).unwrap();
        let gcert = fpt_power(&cert, m as i64).unwrap();
        let t = gcert.exact_value().unwrap().clone();
        let p = g.characteristic();
        let degree = g.weighted_degree(&w).unwrap().unwrap();
        let e_set = digit_set_e(&t, p, 5).unwrap();
        for e in levels.into_iter().filter(|e| e_set.contains(e)) {
            let wit = build_witness(&g, &w, &gcert, e).unwrap();
            let q = p.pow(e);
            assert!(wit.lambda.in_box(q));
            assert_ne!(g.pow(wit.nu).unwrap().truncate_box(q).coeff(&wit.lambda), 0);
            let closed = q * w.weight_sum() - wit.nu * degree - w.weight_sum();
            assert_eq!(wit.deg_alpha, closed);
            assert_eq!(w.degree_of(&wit.alpha), closed);
            if wit.in_e_prime {
                assert!(certify_increment(&wit).unwrap());
                let before = NuTable::new(&g).unwrap().truncation(e).unwrap();
                let after = NuTable::new(&wit.g).unwrap().truncation(e).unwrap();
                assert!(after >= before + ExactRational::one().scale_pow(p, -i64::from(e)));
            }
        }
    }
}

/// Smallest N (over the schedule) from which f + x^N has the same level-3
/// truncation as f, found by expanding powers directly.
fn brute_settling_point(f: &MvPolynomial, schedule: &[u32], e: u32) -> u32 {
    let q = f.characteristic().pow(e);
    let nu = |g: &MvPolynomial| {
        let mut pow = MvPolynomial::one(g.field().clone(), 2);
        let mut n = 0u64;
        loop {
            pow = pow.mul(g).unwrap().truncate_box(q);
            if pow.is_zero() {
                return n;
            }
            n += 1;
        }
    };
    let base = nu(f);
    let mut settle = *schedule.last().unwrap();
    for &n in schedule.iter().rev() {
        let bump = MvPolynomial::monomial(f.field().clone(), Monomial::new(vec![n, 0]), 1);
        if nu(&f.add(&bump).unwrap()) != base {
            break;
        }
        settle = n;
    }
    settle
}

#[test]
fn perturbation_deviation_shrinks_to_zero() {
    let schedule = [1u32, 2, 4, 8, 16, 32, 64];
    for (text, p) in [(P3, 3u64), (P2, 2)] {
        let f = poly(text, p);
        let level = 3;
        let rows = perturbation_profile(&f, 0, &schedule, level).unwrap();
        let settle = brute_settling_point(&f, &schedule, level);
        assert!(rows.windows(2).all(|w| w[1].deviation <= w[0].deviation));
        for row in &rows {
            assert_eq!(row.deviation.is_zero(), row.n >= settle, "N = {}", row.n);
        }
    }
}

#[test]
fn h_shape_for_small_primes() {
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let h = h_polynomial(p).unwrap();
        assert!(h.len() >= 2);
        assert_eq!(*h.last().unwrap(), 1);
        assert_eq!(h[0], 1);
        assert_ne!(h.iter().sum::<u64>() % p, 0, "H(1) = 0 for p = {p}");
        let a = (p - 1) / 2;
        let m = choose_multiplier(p, a);
        let t = ExactRational::new(a as i64, (p * m) as i64).unwrap();
        assert!(t.numer() > &1.into());
        assert!(!in_t1(&t).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_scaling_matches_nu(m in 1u64..7, which in 0usize..2) {
        let (h, _) = fixtures().swap_remove(which);
        let base = NuTable::new(&h).unwrap();
        let power = NuTable::new(&h.pow(m).unwrap()).unwrap();
        for e in 1..=4 {
            prop_assert_eq!(power.nu(e).unwrap(), base.nu(e).unwrap() / m);
        }
    }

    #[test]
    fn monomial_thresholds_lie_in_t1(m in 1u32..12, pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let f = poly(&format!("x^{m}"), p);
        let cert = fpt_principal(&f, None, SolverConfig::default()).unwrap();
        let t = cert.exact_value().unwrap();
        prop_assert_eq!(t, &ExactRational::new(1, i64::from(m)).unwrap());
        prop_assert!(in_t1(t).unwrap());
    }

    #[test]
    fn consecutive_nu_values_obey_digit_bounds(
        terms in prop::collection::vec(((0u32..6, 0u32..6), 1u64..5), 1..5),
        pi in 0usize..3,
    ) {
        let p = [2u64, 3, 5][pi];
        let field = FiniteField::prime(p).unwrap();
        let f = MvPolynomial::from_terms(
            field,
            2,
            terms
                .into_iter()
                .filter(|((a, b), _)| a + b > 0)
                .map(|((a, b), c)| (Monomial::new(vec![a, b]), c % p)),
        )
        .unwrap();
        prop_assume!(!f.is_zero());
        let table = NuTable::new(&f).unwrap();
        table.ensure_level(3).unwrap();
        let rows = table.entries();
        for w in rows.windows(2) {
            prop_assert!(p * w[0].nu <= w[1].nu && w[1].nu < p * (w[0].nu + 1));
        }
    }
}
