use std::collections::HashSet;

use monothetic::construction::AnchorTable;
use monothetic::verification::{triangle_refuted, verify_extension};
use monothetic::{
    base_norm, brute_force_eval, build_anchor_table, counterexample_certificate, counterexample_scan,
    default_epsilon, elem_combine, enumerate_h, evaluate, evaluate_truncated, extend_family, index_of_h,
    k_sequence, partial_norm_lookup, ratio, verify_norm_axioms, EvalResult, ExtElement, GroupDescriptor,
    HElement, NormSpec, Rational, Sign, Witness,
};
use num_bigint::BigInt;
use proptest::prelude::*;

fn mixed() -> GroupDescriptor {
    GroupDescriptor::new(2, vec![3]).unwrap()
}

fn arb_h(desc: GroupDescriptor, radius: i64) -> impl Strategy<Value = HElement> {
    let r = desc.free_rank;
    let moduli = desc.torsion_moduli.clone();
    (
        prop::collection::vec(-radius..=radius, r),
        moduli.iter().map(|&q| 0..q).collect::<Vec<_>>(),
    )
        .prop_map(|(free, torsion)| HElement { free, torsion })
}

fn arb_ext(desc: GroupDescriptor, radius: i64, k: i64) -> impl Strategy<Value = ExtElement> {
    (arb_h(desc, radius), -k..=k).prop_map(|(h, k)| ExtElement::new(h, k))
}

fn specs_for(desc: &GroupDescriptor) -> Vec<NormSpec> {
    let mut specs = vec![
        NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 4); desc.free_rank] },
        NormSpec::CappedLInf { scale: ratio(3, 1) },
    ];
    if desc.free_rank > 0 {
        specs.push(NormSpec::RationalRotation { alpha: ratio(2, 7) });
    } else {
        specs.push(NormSpec::CyclicScaled);
    }
    specs
}

fn rank_one(w: Rational, depth: usize) -> AnchorTable {
    build_anchor_table(&GroupDescriptor::free(1), &NormSpec::CappedWeightedL1 { weights: vec![w] }, depth).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn combine_is_an_abelian_group_law(
        a in arb_ext(mixed(), 20, 50),
        b in arb_ext(mixed(), 20, 50),
        c in arb_ext(mixed(), 20, 50),
    ) {
        let d = mixed();
        let ab = elem_combine(&d, &a, &b, Sign::Plus).unwrap();
        let ba = elem_combine(&d, &b, &a, Sign::Plus).unwrap();
        prop_assert_eq!(&ab, &ba);
        let left = elem_combine(&d, &ab, &c, Sign::Plus).unwrap();
        let right = elem_combine(&d, &a, &elem_combine(&d, &b, &c, Sign::Plus).unwrap(), Sign::Plus).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(elem_combine(&d, &a, &a, Sign::Minus).unwrap().is_zero());
    }

    #[test]
    fn base_norms_are_bounded_invariant_norms(
        x in arb_h(mixed(), 12),
        y in arb_h(mixed(), 12),
    ) {
        let d = mixed();
        for spec in specs_for(&d) {
            let nx = base_norm(&spec, &d, &x).unwrap();
            let ny = base_norm(&spec, &d, &y).unwrap();
            prop_assert!(!nx.is_negative() && nx <= 1);
            prop_assert_eq!(&nx, &base_norm(&spec, &d, &d.neg_h(&x)).unwrap());
            prop_assert!(base_norm(&spec, &d, &d.add_h(&x, &y)).unwrap() <= &nx + &ny);
            if !spec.is_pseudonorm() && !x.is_zero() {
                prop_assert!(nx.is_positive());
            }
        }
    }

    #[test]
    fn lookup_is_symmetric(x in arb_ext(GroupDescriptor::free(1), 3, 40)) {
        let t = rank_one(ratio(1, 4), 12);
        let d = t.descriptor().clone();
        prop_assert_eq!(partial_norm_lookup(&t, &x), partial_norm_lookup(&t, &d.neg(&x)));
    }

    #[test]
    fn evaluation_is_symmetric_capped_and_subadditive(
        x in arb_ext(GroupDescriptor::free(1), 6, 6),
        y in arb_ext(GroupDescriptor::free(1), 6, 6),
    ) {
        let t = rank_one(ratio(1, 4), 30);
        let d = t.descriptor().clone();
        let eps = default_epsilon();
        let rx = evaluate(&t, &x, &eps).unwrap();
        let ry = evaluate(&t, &y, &eps).unwrap();
        let rxy = evaluate(&t, &elem_combine(&d, &x, &y, Sign::Plus).unwrap(), &eps).unwrap();
        prop_assert!(rx.same_value(&evaluate(&t, &d.neg(&x), &eps).unwrap()));
        prop_assert!(rx.upper() <= 1);
        prop_assert!(!triangle_refuted(&rx, &ry, &rxy));
        if !x.is_zero() {
            prop_assert!(rx.lower().is_positive());
        }
    }

    #[test]
    fn witnesses_recompose_to_their_element(x in arb_ext(GroupDescriptor::free(2), 3, 5)) {
        let t = build_anchor_table(
            &GroupDescriptor::free(2),
            &NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 3), ratio(1, 5)] },
            30,
        ).unwrap();
        if let EvalResult::Exact { value, witness: Witness::Decomposition(w), .. } = evaluate(&t, &x, &default_epsilon()).unwrap() {
            prop_assert_eq!(w.recompose(&t), x);
            let anchor_cost: Rational = w
                .coefficients
                .iter()
                .map(|(&n, &m)| &t.anchor(n).unwrap().value * &Rational::from(m.abs()))
                .sum();
            prop_assert_eq!(&value, &(anchor_cost + t.base_norm(&w.residual).unwrap()));
        }
    }

    #[test]
    fn truncated_values_decrease_to_the_certified_value(x in arb_ext(GroupDescriptor::free(1), 8, 5)) {
        let t = rank_one(ratio(1, 3), 25);
        let r = evaluate(&t, &x, &default_epsilon()).unwrap();
        let values: Vec<Rational> = (0..=25).map(|n| evaluate_truncated(&t, &x, n).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[1] <= w[0]));
        match r {
            EvalResult::Exact { value, truncation_level, .. } => {
                prop_assert!(values.iter().all(|v| *v >= value));
                prop_assert!(values[truncation_level..].iter().all(|v| *v == value));
            }
            EvalResult::Interval { lower } => prop_assert!(values.iter().all(|v| *v > lower)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_are_sound_against_exhaustive_search(x in arb_ext(GroupDescriptor::free(1), 3, 3)) {
        let t = rank_one(ratio(1, 2), 10);
        let brute = brute_force_eval(&t, &x, 3, 3).unwrap();
        match evaluate(&t, &x, &default_epsilon()).unwrap() {
            EvalResult::Exact { value, .. } => prop_assert!(brute >= value),
            EvalResult::Interval { lower } => prop_assert!(brute > lower),
        }
    }
}

#[test]
fn enumeration_is_injective_on_ten_thousand_indices() {
    for d in [GroupDescriptor::free(1), GroupDescriptor::free(2), GroupDescriptor::free(3), mixed()] {
        let seen: HashSet<HElement> = (1..=10_000).map(|n| enumerate_h(&d, n).unwrap()).collect();
        assert_eq!(seen.len(), 10_000, "{d:?}");
    }
}

#[test]
fn radius_three_balls_are_reached_early() {
    // Every l_inf-radius-3 point has zigzag codes <= 6, so it is listed among
    // the tuples of code sum <= 6r: C(7r, r) of them.
    for r in 1..=3usize {
        let d = GroupDescriptor::free(r);
        let mut ball: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..r {
            ball = ball.into_iter().flat_map(|p| (-3..=3).map(move |x| [p.clone(), vec![x]].concat())).collect();
        }
        let bound: u128 = (1..=r as u128).fold(1, |acc, i| acc * (6 * r as u128 + i) / i);
        let constant = bound.div_ceil(ball.len() as u128);
        let max_index = ball
            .iter()
            .map(|p| index_of_h(&d, &HElement { free: p.clone(), torsion: vec![] }).unwrap())
            .max()
            .unwrap();
        assert!(max_index <= ball.len() as u128 * constant, "rank {r}: {max_index}");
        for p in &ball {
            let h = HElement { free: p.clone(), torsion: vec![] };
            let n = index_of_h(&d, &h).unwrap();
            assert_eq!(enumerate_h(&d, n as u64).unwrap(), h);
        }
    }
}

#[test]
fn base_norm_axioms_on_seeded_grids() {
    use monothetic::sampling::LinearGrid;
    for d in [GroupDescriptor::free(1), GroupDescriptor::free(2), mixed(), GroupDescriptor::new(0, vec![4, 6]).unwrap()] {
        let grid = LinearGrid::new(42, vec![500, 500]);
        for spec in specs_for(&d) {
            for i in 0..1000 {
                let p = grid.point(i);
                let a = enumerate_h(&d, p[0] + 1).unwrap();
                let b = enumerate_h(&d, p[1] + 1).unwrap();
                let (na, nb) = (base_norm(&spec, &d, &a).unwrap(), base_norm(&spec, &d, &b).unwrap());
                assert_eq!(na, base_norm(&spec, &d, &d.neg_h(&a)).unwrap());
                assert!(base_norm(&spec, &d, &d.add_h(&a, &b)).unwrap() <= &na + &nb);
                assert!(!na.is_negative() && na <= 1);
            }
            assert!(base_norm(&spec, &d, &d.zero_h()).unwrap().is_zero());
        }
    }
}

#[test]
fn k_sequence_is_stable_under_extension() {
    let long = k_sequence(80).unwrap();
    for n in [1, 2, 10, 79] {
        let short = k_sequence(n).unwrap();
        assert_eq!(short.powers[..], long.powers[..n]);
        assert_eq!(short.deltas[..], long.deltas[..n]);
    }
    assert!(long.deltas.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn changing_the_norm_keeps_the_schedule() {
    let d = GroupDescriptor::free(1);
    let a = build_anchor_table(&d, &NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 1)] }, 40).unwrap();
    let b = a.with_spec(NormSpec::CappedLInf { scale: ratio(5, 2) }).unwrap();
    assert_eq!(a.schedule_bytes(), b.schedule_bytes());
    let targets = |t: &AnchorTable| t.anchors().iter().map(|x| x.target.clone()).collect::<Vec<_>>();
    assert_eq!(targets(&a), targets(&b));
}

#[test]
fn family_of_one_is_a_plain_table() {
    let d = GroupDescriptor::free(1);
    let spec = NormSpec::CappedLInf { scale: ratio(3, 1) };
    let family = extend_family(&d, std::slice::from_ref(&spec), 30).unwrap();
    assert_eq!(family, vec![build_anchor_table(&d, &spec, 30).unwrap()]);
    let mixed_family = extend_family(
        &d,
        &[NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 1)] }, NormSpec::RationalRotation { alpha: ratio(1, 3) }],
        30,
    )
    .unwrap();
    assert!(mixed_family[1].spec().is_pseudonorm());
}

#[test]
fn truncation_levels_are_shared_by_family_members() {
    let d = GroupDescriptor::free(1);
    let family = extend_family(
        &d,
        &[NormSpec::CappedWeightedL1 { weights: vec![ratio(1, 8)] }, NormSpec::CappedLInf { scale: ratio(3, 1) }],
        40,
    )
    .unwrap();
    let t = Rational::one() - default_epsilon();
    for k in -5i64..=5 {
        let levels: Vec<usize> = family
            .iter()
            .map(|tab| monothetic::truncation_index(tab, &BigInt::from(k), &t).unwrap())
            .collect();
        assert!(levels.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn verification_reports_do_not_depend_on_thread_count() {
    let t = rank_one(ratio(1, 4), 30);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let a = verify_norm_axioms(&t, 80, 9, &default_epsilon()).unwrap();
            let e = verify_extension(&t, 80, 9).unwrap();
            (serde_json::to_string(&a).unwrap(), serde_json::to_string(&e).unwrap())
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn corrupted_fixture_violation_mirrors_the_cost_argument() {
    let t = rank_one(ratio(1, 1), 50).with_power_override(8, BigInt::from(11));
    let d = t.descriptor().clone();
    let eps = default_epsilon();
    let x = t.anchor_element(8);
    let y = d.neg(&t.anchor_element(4));
    let sum = elem_combine(&d, &x, &y, Sign::Plus).unwrap();
    assert_eq!(sum, ExtElement::in_h(d.h_element(vec![-1], vec![]).unwrap()));
    let (rx, ry, rs) = (
        evaluate(&t, &x, &eps).unwrap(),
        evaluate(&t, &y, &eps).unwrap(),
        evaluate(&t, &sum, &eps).unwrap(),
    );
    assert_eq!(rx.exact_value(), Some(&ratio(1, 3)));
    assert_eq!(ry.exact_value(), Some(&ratio(1, 3)));
    assert_eq!(rs.exact_value(), Some(&ratio(1, 1)));
    assert!(triangle_refuted(&rx, &ry, &rs));
}

#[test]
fn counterexample_margins_grow_linearly() {
    let v = ratio(2, 5);
    for s in 2..30i64 {
        for n in 1..s {
            let c = counterexample_certificate(n, s - n, &v, &v).unwrap();
            assert_eq!(c.margin, Rational::from(s) * (Rational::one() - v.clone()));
        }
    }
    let scan = counterexample_scan(50).unwrap();
    assert!(scan.certificates.iter().all(|c| c.identity_holds && c.contradiction));
}
