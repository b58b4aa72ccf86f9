use proptest::prelude::*;

use unramified_core::identity::{lratio, rhs_value, unramified_period};
use unramified_core::numfield::euler_factor;
use unramified_core::paramcalc::WDParam;
use unramified_core::report::{ReportMeta, SampleOutcome};
use unramified_core::satake::{adjoint_lfactor, std_tensor_lfactor, std_tensor_lfactor_det};
use unramified_core::weylsum::{enumerate_weyl, motive_a_value, weyl_sum_a, WeylCase};
use unramified_core::zetarec::{
    series_truncation_bound, zeta_base_split_closed, zeta_base_split_series, zeta_closed_inert, zeta_closed_split,
    zeta_recursive, SplitZetaText,
};
use unramified_core::{rel_err, CharValue, FieldData, PlaceKind, SatakeDatum, VerificationReport, C64};

fn unit(t: f64) -> C64 {
    C64::from_polar(1.0, t)
}

fn angles(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, k)
}

fn field(kind: PlaceKind, q: u64) -> FieldData {
    FieldData::new(q, kind).unwrap()
}

fn stored(m: usize, kind: PlaceKind) -> usize {
    if kind == PlaceKind::Inert {
        m / 2
    } else {
        m
    }
}

fn pair(n: usize, f: FieldData, a: &[f64]) -> (SatakeDatum, SatakeDatum) {
    let (ls, lb) = (stored(n + 1, f.kind()), stored(n + 2, f.kind()));
    let v: Vec<C64> = a.iter().map(|&t| unit(t)).collect();
    (
        SatakeDatum::from_values(n + 1, f, &v[..ls]).unwrap(),
        SatakeDatum::from_values(n + 2, f, &v[ls..ls + lb]).unwrap(),
    )
}

/// Keep samples away from the measure-zero walls where Weyl denominators vanish.
fn generic(v: &[C64]) -> bool {
    unramified_core::sample::is_generic(v, 1e-3)
}

fn kinds() -> impl Strategy<Value = PlaceKind> {
    prop_oneof![Just(PlaceKind::Inert), Just(PlaceKind::Split)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weyl_action_is_a_group_action(i in 0usize..48, j in 0usize..48, a in angles(3)) {
        let g = enumerate_weyl(3).unwrap();
        let x: Vec<C64> = a.iter().map(|&t| unit(t)).collect();
        let (u, w) = (&g[i], &g[j]);
        let lhs = u.compose(w).unwrap().act(&x).unwrap();
        let rhs = u.act(&w.act(&x).unwrap()).unwrap();
        for (p, q) in lhs.iter().zip(&rhs) {
            prop_assert!((p - q).norm() < 1e-13);
        }
        prop_assert!(u.compose(&u.inverse()).unwrap().is_identity());
        prop_assert_eq!(u.compose(w).unwrap().sign(), u.sign() * w.sign());
    }

    #[test]
    fn euler_factor_conjugation(t in 0.0..6.3f64, re in 0.3..3.0f64, im in -4.0..4.0f64, q in 2u64..9) {
        let s = C64::new(re, im);
        let a = euler_factor(s, q, unit(t)).unwrap();
        let b = euler_factor(s.conj(), q, unit(-t)).unwrap();
        prop_assert!(rel_err(a.conj(), b) < 1e-13);
    }

    #[test]
    fn direct_sum_and_induction_preserve_lfactors(a in angles(3), re in 0.3..3.0f64, im in -4.0..4.0f64, q in 2u64..6) {
        let f = FieldData::inert(q).unwrap();
        let s = C64::new(re, im);
        let x = WDParam::over_e(a.iter().map(|&t| unit(t)).collect()).unwrap();
        let y = WDParam::over_e(vec![unit(a[0] * 0.5 + 1.0)]).unwrap();
        let sum = x.direct_sum(&y).unwrap();
        prop_assert!(rel_err(sum.lfactor(s, &f).unwrap(), x.lfactor(s, &f).unwrap() * y.lfactor(s, &f).unwrap()) < 1e-12);
        prop_assert!(rel_err(x.induce().unwrap().lfactor(s, &f).unwrap(), x.lfactor(s, &f).unwrap()) < 1e-12);
        prop_assert_eq!(x.adjoint_gl().dim(), 9);
    }

    #[test]
    fn std_tensor_matches_determinant(kind in kinds(), n in 1usize..4, a in angles(9), re in 0.3..3.0f64, im in -4.0..4.0f64) {
        let f = field(kind, 3);
        let (small, big) = pair(n, f, &a);
        let s = C64::new(re, im);
        let x = std_tensor_lfactor(s, &small, &big).unwrap();
        let y = std_tensor_lfactor_det(s, &small, &big).unwrap();
        prop_assert!(rel_err(x, y) < 1e-10);
    }

    #[test]
    fn recursion_matches_closed_forms(kind in kinds(), n in 1usize..5, a in angles(11), q in 2u64..4) {
        let f = field(kind, q);
        let (small, big) = pair(n, f, &a);
        let closed = match kind {
            PlaceKind::Inert => zeta_closed_inert(&small, &big).unwrap(),
            PlaceKind::Split => zeta_closed_split(&small, &big, SplitZetaText::Corrected).unwrap(),
        };
        prop_assert!(rel_err(closed, zeta_recursive(&small, &big).unwrap()) < 1e-9);
    }

    #[test]
    fn zeta_commutes_with_conjugation(kind in kinds(), n in 0usize..4, a in angles(9)) {
        let f = field(kind, 2);
        let (small, big) = pair(n, f, &a);
        let z = zeta_recursive(&small, &big).unwrap();
        prop_assert!(rel_err(z.conj(), zeta_recursive(&small.conj(), &big.conj()).unwrap()) < 1e-12);
    }

    #[test]
    fn inert_base_case_is_one(t in 0.0..6.3f64, q in 2u64..9) {
        let f = FieldData::inert(q).unwrap();
        let small = SatakeDatum::from_values(1, f, &[]).unwrap();
        let big = SatakeDatum::from_values(2, f, &[unit(t)]).unwrap();
        prop_assert_eq!(zeta_recursive(&small, &big).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn base_series_within_bound(a in angles(3), q in 2u64..6, terms in 1usize..60) {
        let f = FieldData::split(q).unwrap();
        let [t, p, x] = [a[0], a[1], a[2]].map(CharValue::from_angle);
        let err = (zeta_base_split_series(t, p, x, &f, terms).unwrap() - zeta_base_split_closed(t, p, x, &f).unwrap()).norm();
        prop_assert!(err <= series_truncation_bound(q, terms) * (1.0 + 1e-9) + 1e-13);
    }

    #[test]
    fn weyl_sum_is_constant(n_plus_1 in 2usize..5, a in angles(4), q in 2u64..4) {
        let f = FieldData::inert(q).unwrap();
        let (lb, ls) = WeylCase::ranks(n_plus_1);
        let big: Vec<C64> = a[..lb].iter().map(|&t| unit(t)).collect();
        let small: Vec<C64> = a[lb..lb + ls].iter().map(|&t| unit(t)).collect();
        prop_assume!(generic(&[big.clone(), small.clone()].concat()));
        let v = weyl_sum_a(WeylCase::for_size(n_plus_1), &big, &small, &f).unwrap();
        prop_assert!(rel_err(v, motive_a_value(n_plus_1, &f)) < 1e-6);
    }

    #[test]
    fn identity_is_weyl_invariant(kind in kinds(), n in 1usize..3, a in angles(7), w in 0usize..1000, v in 0usize..1000) {
        let f = field(kind, 2);
        let (small, big) = pair(n, f, &a);
        prop_assume!(generic(&[small.values(), big.values()].concat()));
        let act = |d: &SatakeDatum, k: usize| -> SatakeDatum {
            let x = d.values();
            let y = match kind {
                PlaceKind::Inert => {
                    let g = enumerate_weyl(x.len()).unwrap();
                    g[k % g.len()].act(&x).unwrap()
                }
                PlaceKind::Split => {
                    // a cyclic rotation generates enough of S_m to catch ordering bugs
                    let r = k % x.len();
                    x[r..].iter().chain(&x[..r]).copied().collect()
                }
            };
            SatakeDatum::from_values(d.m(), f, &y).unwrap()
        };
        let (s2, b2) = (act(&small, v), act(&big, w));
        let p = unramified_period(&small, &big).unwrap();
        prop_assert!(rel_err(p, unramified_period(&s2, &b2).unwrap()) < 1e-8);
        prop_assert!(rel_err(rhs_value(&small, &big).unwrap(), rhs_value(&s2, &b2).unwrap()) < 1e-10);
        prop_assert!(rel_err(p, rhs_value(&small, &big).unwrap()) < 1e-8);
    }

    #[test]
    fn lratio_and_adjoint_commute_with_conjugation(kind in kinds(), n in 1usize..4, a in angles(9)) {
        let f = field(kind, 3);
        let (small, big) = pair(n, f, &a);
        let h = C64::new(0.5, 0.0);
        prop_assert!(rel_err(lratio(h, &small, &big).unwrap().conj(), lratio(h, &small.conj(), &big.conj()).unwrap()) < 1e-12);
        let one = C64::new(1.0, 0.0);
        prop_assert!(rel_err(adjoint_lfactor(one, &big).unwrap().conj(), adjoint_lfactor(one, &big.conj()).unwrap()) < 1e-12);
    }

    #[test]
    fn report_pass_and_diffs_agree(errs in prop::collection::vec(0.0..2.0f64, 1..8), tol in 1e-3..1.5f64) {
        let outcomes: Vec<SampleOutcome> = errs
            .iter()
            .enumerate()
            .map(|(i, &e)| SampleOutcome::compare(i, C64::new(1.0, 0.0), C64::new(1.0 + e, 0.0)))
            .collect();
        let max = outcomes.iter().map(|o| o.rel_err).fold(0.0, f64::max);
        let meta = ReportMeta { check: "t".into(), n: 1, kind: PlaceKind::Split, q_f: 2, samples: errs.len(), seed: 0, tol };
        let r = VerificationReport::assemble(meta, outcomes);
        prop_assert_eq!(r.pass, r.max_rel_err <= tol);
        prop_assert_eq!(r.factor_diffs.is_empty(), r.pass);
        prop_assert_eq!(r.max_rel_err, max);
        prop_assert!(r.factor_diffs.windows(2).all(|w| w[0].sample <= w[1].sample));
    }
}

#[test]
fn series_error_decays_like_q_to_minus_half() {
    for q in [2u64, 3, 5] {
        let f = FieldData::split(q).unwrap();
        let one = CharValue::trivial();
        let closed = zeta_base_split_closed(one, one, one, &f).unwrap();
        let err = |k| (zeta_base_split_series(one, one, one, &f, k).unwrap() - closed).norm();
        let ratio = err(21) / err(20);
        let want = (q as f64).powf(-0.5);
        assert!((ratio / want - 1.0).abs() < 0.1, "q={q}: {ratio} vs {want}");
    }
}
