use std::cmp::Ordering;

use convex_growth::audit::{Auditor, CsMode, Verdict};
use convex_growth::compare::{compare, PowerExpr};
use convex_growth::energy::{
    energy, energy_third, energy_via_autocorrelation, energy_via_sums, level_set_count, rep_function, rep_function_with,
    RepMode,
};
use convex_growth::family::{generate, FamilyKind, FamilySpec, GapDist};
use convex_growth::incidence::{build_instance, count_incidences_with, st_bound_holds};
use convex_growth::radical::RadicalSum;
use convex_growth::search::simplest_between;
use convex_growth::set::{apply_fn, difference_set, sumset, sumset_size};
use convex_growth::{ConvexFn, Exec, NumberSet, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-60i64..=60, 1i64..=6).prop_map(|(p, q)| Scalar::from_ratio(p, q))
}

fn set(max: usize) -> impl Strategy<Value = NumberSet> {
    prop::collection::vec(scalar(), 1..=max)
        .prop_map(NumberSet::from_vec)
        .prop_filter("nonempty", |s| !s.is_empty())
}

fn positive_set(max: usize) -> impl Strategy<Value = NumberSet> {
    prop::collection::btree_set(1i64..=40, 1..=max).prop_map(NumberSet::from_ints)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn energy_routes_agree(a in set(14), b in set(14)) {
        let e = energy(&a, &b).unwrap();
        prop_assert_eq!(e, energy_via_sums(&a, &b).unwrap());
        prop_assert_eq!(e, energy_via_autocorrelation(&a, &b).unwrap());
        prop_assert_eq!(e, energy(&b, &a).unwrap());
    }

    #[test]
    fn energy_moment_ordering(a in set(20)) {
        let n = a.len() as u128;
        let e = energy(&a, &a).unwrap();
        let e3 = energy_third(&a).unwrap();
        prop_assert!(n * n <= e && e <= n * n * n);
        prop_assert!(e <= e3 && e3 <= n * e);
    }

    #[test]
    fn rep_function_mass(a in set(16), b in set(16)) {
        for mode in [RepMode::Difference, RepMode::Sum] {
            let r = rep_function(&a, &b, mode).unwrap();
            let total: u64 = r.counts().iter().sum();
            prop_assert_eq!(total, (a.len() * b.len()) as u64);
            prop_assert_eq!(r.total_pairs(), total);
            prop_assert!(r.max_multiplicity() as usize <= a.len().min(b.len()));
        }
    }

    #[test]
    fn combined_set_sizes(a in set(16), b in set(16)) {
        let n = a.len();
        let s = sumset(&a, &a).unwrap().len();
        let d = difference_set(&a, &a).unwrap().len();
        prop_assert!(2 * n - 1 <= s && s <= n * (n + 1) / 2);
        prop_assert!(2 * n - 1 <= d && d <= n * n - n + 1);
        prop_assert_eq!(sumset(&a, &b).unwrap(), sumset(&b, &a).unwrap());
        prop_assert_eq!(sumset_size(&a, &b, Exec::Parallel).unwrap(), sumset(&a, &b).unwrap().len());
    }

    #[test]
    fn parallel_matches_sequential(a in set(24), b in set(24)) {
        for mode in [RepMode::Difference, RepMode::Sum] {
            let s = rep_function_with(&a, &b, mode, Exec::Sequential).unwrap();
            let p = rep_function_with(&a, &b, mode, Exec::Parallel).unwrap();
            prop_assert_eq!(s.iter().collect::<Vec<_>>(), p.iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn text_round_trip(a in set(20)) {
        prop_assert_eq!(NumberSet::parse_text(&a.to_text()).unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<NumberSet>(&json).unwrap(), a);
    }

    #[test]
    fn scalar_round_trip(x in scalar()) {
        prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
    }

    #[test]
    fn level_sets_shrink(a in set(12), c in set(12)) {
        let r = rep_function(&a, &c, RepMode::Sum).unwrap();
        prop_assert_eq!(level_set_count(&r, 1).unwrap(), r.support_len());
        let mut prev = usize::MAX;
        for tau in 1..=6 {
            let k = level_set_count(&r, tau).unwrap();
            prop_assert!(k <= prev);
            prev = k;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn constant_free_inequalities_hold(a in set(16), b in set(16)) {
        let auditor = Auditor { digits: 30, exec: Exec::Sequential };
        let mut reports = vec![auditor.lemma_e15(&a, &b).unwrap(), auditor.holder(&a).unwrap()];
        for mode in [CsMode::Sum, CsMode::Difference, CsMode::Cross(b.clone())] {
            reports.extend(auditor.cauchy_schwarz(&a, &mode).unwrap());
        }
        for r in reports {
            prop_assert_eq!(r.verdict, Verdict::Pass, "{}: {} vs {}", r.name, r.lhs_decimal, r.rhs_decimal);
        }
    }

    #[test]
    fn incidence_bound_and_cap(
        f in prop::sample::select(vec![ConvexFn::Square, ConvexFn::Reciprocal, ConvexFn::Power(3)]),
        a in positive_set(8),
        b in prop::collection::btree_set(-12i64..=12, 1..=8),
        c in prop::collection::btree_set(-30i64..=30, 1..=8),
    ) {
        let (b, c) = (NumberSet::from_ints(b), NumberSet::from_ints(c));
        let (p, l) = build_instance(f, &a, &b, &c).unwrap();
        let r = count_incidences_with(&p, &l, &[1, 2, 3, 4], Exec::Sequential, 30).unwrap();
        prop_assert!(r.st_holds);
        prop_assert!(r.max_curves_through_point as usize <= b.len().min(c.len()));
        // every curve passes through its own |A| points
        prop_assert!(r.incidences >= (a.len() * b.len() * c.len()) as u64);
        let counts: Vec<u64> = r.rich_points.values().copied().collect();
        prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(counts[0] <= r.incidences);
        let par = count_incidences_with(&p, &l, &[1, 2, 3, 4], Exec::Parallel, 30).unwrap();
        prop_assert_eq!(par, r);
    }

    #[test]
    fn st_bound_matches_integer_form(i in 0u64..5000, p in 1u64..400, l in 1u64..400) {
        let x = BigInt::from(i) - BigInt::from(4 * p + l);
        let oracle = x <= BigInt::from(0)
            || x.pow(3) <= BigInt::from(64) * BigInt::from(p as u128 * l as u128).pow(2);
        prop_assert_eq!(st_bound_holds(i, p, l).unwrap(), oracle);
    }

    #[test]
    fn radical_comparison_agrees_with_floats(
        xs in prop::collection::vec((1u32..50, 1u32..30), 1..5),
        ys in prop::collection::vec((1u32..50, 1u32..30), 1..5),
    ) {
        let build = |v: &[(u32, u32)]| {
            let mut r = RadicalSum::zero();
            for &(c, d) in v {
                r = r.add(&RadicalSum::term(c, d));
            }
            r
        };
        let (x, y) = (build(&xs), build(&ys));
        let got = x.cmp_exact(&y, 1 << 14).unwrap();
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 * fx.max(fy) {
            prop_assert_eq!(got, fx.partial_cmp(&fy).unwrap());
        }
        let (ex, ey) = (PowerExpr::radical(x.clone()), PowerExpr::radical(y.clone()));
        prop_assert_eq!(compare(&ex, &ey).unwrap(), got);
        prop_assert_eq!(compare(&ex, &ex).unwrap(), Ordering::Equal);
    }

    #[test]
    fn fractional_powers_compare_exactly(p in 1u64..2000, q in 1u64..2000) {
        // p^{2/3} vs q^{1/3}  <=>  p^2 vs q
        let lhs = PowerExpr::int(p).pow(2, 3);
        let rhs = PowerExpr::int(q).pow(1, 3);
        prop_assert_eq!(compare(&lhs, &rhs).unwrap(), (p * p).cmp(&q));
    }

    #[test]
    fn simplest_rational_is_inside(p1 in -200i64..200, q1 in 1i64..40, w in 1i64..200, q2 in 1i64..40) {
        let lo = BigRational::new(p1.into(), q1.into());
        let hi = &lo + BigRational::new(w.into(), q2.into());
        let s = simplest_between(&lo, Some(&hi));
        prop_assert!(lo < s && s < hi);
        prop_assert!(s.denom() <= &BigInt::from(q1.max(q2) * 2));
    }

    #[test]
    fn random_convex_families_are_convex(n in 3usize..60, seed in any::<u64>(), lo in 1u64..4, span in 0u64..6, den in 1u64..5) {
        let kind = FamilyKind::RandomConvex(GapDist { lo, hi: lo + span, den });
        let spec = FamilySpec { kind, n, seed };
        let a = generate(&spec).unwrap();
        prop_assert_eq!(a.len(), n);
        prop_assert!(a.is_convex());
        prop_assert_eq!(generate(&spec).unwrap(), a);
    }

    #[test]
    fn square_is_injective_on_positive_sets(a in positive_set(20)) {
        let fa = apply_fn(ConvexFn::Square, &a).unwrap();
        prop_assert_eq!(fa.len(), a.len());
        if a.is_arithmetic_progression() {
            prop_assert!(fa.is_convex());
        }
    }
}
