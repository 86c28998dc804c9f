use proptest::prelude::*;

use gleason_lab::ext::{
    aligned_sup_gap, decide_sigma_additive, eval_ext, oplus, DomainLabel, ExtMeasure, OplusOutcome,
    RegularPart, SigmaAdditivity,
};
use gleason_lab::seq::{ExtReal, IndexSet, SeqDescriptor};
use gleason_lab::Tolerances;

fn label() -> impl Strategy<Value = DomainLabel> {
    prop_oneof![
        Just(DomainLabel::full()),
        Just(DomainLabel::atom("a").unwrap()),
        Just(DomainLabel::atom("b").unwrap()),
        Just("a&b".parse::<DomainLabel>().unwrap()),
    ]
}

fn trace_class_diagonal() -> impl Strategy<Value = SeqDescriptor> {
    prop_oneof![
        Just(SeqDescriptor::constant(0.0)),
        (1.5f64..3.0).prop_map(SeqDescriptor::power),
        (0.0f64..0.8).prop_map(SeqDescriptor::geometric),
        proptest::collection::vec(0.0f64..2.0, 1..5).prop_map(|v| SeqDescriptor::explicit(v, None)),
    ]
}

fn diagonal() -> impl Strategy<Value = SeqDescriptor> {
    prop_oneof![
        2 => trace_class_diagonal(),
        1 => (0.1f64..2.0).prop_map(SeqDescriptor::constant),
        1 => (0.3f64..1.0).prop_map(SeqDescriptor::power),
    ]
}

fn measure() -> impl Strategy<Value = ExtMeasure> {
    (diagonal(), proptest::collection::vec(label(), 0..3)).prop_map(|(d, s)| {
        ExtMeasure::from_parts(RegularPart::new(d, None, &Tolerances::default()).unwrap(), s)
    })
}

fn same(a: &ExtMeasure, b: &ExtMeasure) -> bool {
    a.approx_eq(b, 200, 1e-12)
}

fn value(m: &ExtMeasure, j: &IndexSet) -> ExtReal {
    eval_ext(m, j).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partial_sum_is_commutative(a in measure(), b in measure()) {
        match (oplus(&a, &b), oplus(&b, &a)) {
            (OplusOutcome::Defined { measure: x }, OplusOutcome::Defined { measure: y }) => prop_assert!(same(&x, &y)),
            (OplusOutcome::Undefined { .. }, OplusOutcome::Undefined { .. }) => {}
            _ => prop_assert!(false, "definedness is not symmetric"),
        }
    }

    #[test]
    fn partial_sum_is_associative(a in measure(), b in measure(), c in measure()) {
        if let Some(ab) = oplus(&a, &b).defined() {
            if let Some(left) = oplus(&ab, &c).defined() {
                let bc = oplus(&b, &c).defined();
                prop_assert!(bc.is_some(), "(a+b)+c defined but b+c is not");
                let right = oplus(&a, &bc.unwrap()).defined();
                prop_assert!(right.is_some(), "(a+b)+c defined but a+(b+c) is not");
                prop_assert!(same(&left, &right.unwrap()));
            }
        }
    }

    #[test]
    fn partial_sum_cancels(a in measure(), b in measure(), c in measure()) {
        if let (Some(ab), Some(ac)) = (oplus(&a, &b).defined(), oplus(&a, &c).defined()) {
            if same(&ab, &ac) {
                prop_assert!(same(&b, &c));
            }
        }
    }

    #[test]
    fn only_zero_sums_to_zero(a in measure(), b in measure()) {
        if let Some(ab) = oplus(&a, &b).defined() {
            prop_assert_eq!(ab.is_zero(), a.is_zero() && b.is_zero());
        }
        let zero = ExtMeasure::zero();
        prop_assert!(same(&oplus(&a, &zero).defined().unwrap(), &a));
    }

    #[test]
    fn values_add_over_disjoint_finite_sets(
        m in measure(),
        indices in proptest::collection::btree_set(1u64..300, 0..30),
        split in any::<u64>(),
    ) {
        let (x, y): (Vec<u64>, Vec<u64>) = indices.iter().partition(|&&n| (n ^ split) % 2 == 0);
        let finite = |v: ExtReal| match v {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        };
        let whole = finite(value(&m, &IndexSet::finite(indices.iter().copied())));
        let parts = finite(value(&m, &IndexSet::finite(x))) + finite(value(&m, &IndexSet::finite(y)));
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole.abs()));
    }

    #[test]
    fn adding_a_trace_class_diagonal_keeps_the_verdict(m in measure(), d in trace_class_diagonal()) {
        let finite = ExtMeasure::diagonal(d).unwrap();
        let sum = oplus(&m, &finite).defined().expect("a diagonal measure is P1(H)-bounded");
        let before = decide_sigma_additive(&m).unwrap().verdict;
        let after = decide_sigma_additive(&sum).unwrap().verdict;
        prop_assert_eq!(before, after);
        if !m.has_singular_part() {
            prop_assert_eq!(after, SigmaAdditivity::SigmaAdditive);
        }
    }

    #[test]
    fn sup_over_finite_subsets(m in measure(), start in 1u64..10, step in 1u64..4) {
        let infinite = IndexSet::Arithmetic { start, step };
        let finite = IndexSet::finite([start, start + step]);
        prop_assert!(!aligned_sup_gap(&m, &finite).unwrap().gap);
        let gap = aligned_sup_gap(&m, &infinite).unwrap();
        if !m.has_singular_part() {
            prop_assert!(!gap.gap);
        } else {
            prop_assert_eq!(gap.value, ExtReal::Infinite);
            let regular_finite = matches!(gap.finite_sup, ExtReal::Finite(_));
            prop_assert_eq!(gap.gap, regular_finite);
        }
    }
}
