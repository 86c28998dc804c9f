use std::collections::BTreeSet;

use proptest::prelude::*;

use gleason_lab::random::{random_subspace, rng};
use gleason_lab::seq::{
    classify_frame_type, diagonal_measure_eval, pos_neg_parts, rearrange_to_target, ExtReal, FrameTypeClass,
    IndexSet, SeqDescriptor, Target,
};

fn leaf() -> impl Strategy<Value = SeqDescriptor> {
    prop_oneof![
        (0.5f64..3.0).prop_map(SeqDescriptor::power),
        (-0.9f64..0.9).prop_map(SeqDescriptor::geometric),
        (0.0f64..2.0).prop_map(SeqDescriptor::alternating_power),
        (-2.0f64..2.0).prop_map(SeqDescriptor::constant),
        proptest::collection::vec(-3.0f64..3.0, 1..6).prop_map(|v| SeqDescriptor::explicit(v, None)),
    ]
}

fn nonneg_leaf() -> impl Strategy<Value = SeqDescriptor> {
    prop_oneof![
        (0.5f64..3.0).prop_map(SeqDescriptor::power),
        (0.0f64..0.9).prop_map(SeqDescriptor::geometric),
        (0.0f64..2.0).prop_map(SeqDescriptor::constant),
    ]
}

fn descriptor() -> impl Strategy<Value = SeqDescriptor> {
    prop_oneof![
        3 => leaf(),
        1 => (-2.0f64..2.0, leaf()).prop_map(|(a, s)| SeqDescriptor::scaled(a, s)),
        1 => (nonneg_leaf(), nonneg_leaf()).prop_map(|(p, n)| SeqDescriptor::signed_merge(p, n)),
        1 => proptest::collection::vec(leaf(), 2..4).prop_map(SeqDescriptor::sum_of),
    ]
}

/// Absolutely summable sequences with `Σ|aₙ|` known in closed form.
fn abs_summable() -> impl Strategy<Value = (SeqDescriptor, f64)> {
    prop_oneof![
        (-0.9f64..0.9).prop_map(|r| (SeqDescriptor::geometric(r), r.abs() / (1.0 - r.abs()))),
        Just((SeqDescriptor::power(2.0), std::f64::consts::PI.powi(2) / 6.0)),
        Just((SeqDescriptor::alternating_power(2.0), std::f64::consts::PI.powi(2) / 6.0)),
        Just((SeqDescriptor::alternating_power(4.0), std::f64::consts::PI.powi(4) / 90.0)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_injective_and_keeps_sign_order(
        p in 0.3f64..=1.0,
        target in -8.0f64..8.0,
        steps in 1usize..20_000,
    ) {
        let s = SeqDescriptor::alternating_power(p);
        let r = rearrange_to_target(&s, Target::Finite(target), steps).unwrap();
        prop_assert_eq!(r.indices.len(), steps);
        let distinct: BTreeSet<u64> = r.indices.iter().copied().collect();
        prop_assert_eq!(distinct.len(), steps);
        let positive: Vec<u64> = r.indices.iter().copied().filter(|&n| s.term(n) >= 0.0).collect();
        let negative: Vec<u64> = r.indices.iter().copied().filter(|&n| s.term(n) < 0.0).collect();
        prop_assert!(positive.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(negative.windows(2).all(|w| w[0] < w[1]));
        let mut total = 0.0;
        for (n, partial) in r.indices.iter().zip(&r.partial_sums) {
            total += s.term(*n);
            prop_assert!((total - partial).abs() <= 1e-9 * (1.0 + total.abs()));
        }
    }

    #[test]
    fn positive_and_negative_parts_recombine(s in descriptor(), n in 1u64..5_000) {
        let (pos, neg) = pos_neg_parts(&s);
        let (a, b) = (pos.term(n), neg.term(n));
        prop_assert!(a >= 0.0 && b >= 0.0);
        prop_assert!(a == 0.0 || b == 0.0);
        prop_assert!((a - b - s.term(n)).abs() <= 1e-12 * (1.0 + s.term(n).abs()));
    }

    #[test]
    fn bounded_frame_functions_have_bounded_ons_sums(
        (s, abs_sum) in abs_summable(),
        seed in any::<u64>(),
        dim in 2usize..40,
        k in 1usize..40,
    ) {
        prop_assert_eq!(classify_frame_type(&s).unwrap().class, FrameTypeClass::BoundedFrameFunction);
        let mut r = rng(seed);
        let ons = random_subspace(&mut r, dim, k.min(dim)).basis_vectors();
        let f = |x: &gleason_lab::hilbert::ComplexVector| -> f64 {
            x.components().iter().enumerate().map(|(i, c)| s.term(i as u64 + 1) * c.norm_sqr()).sum()
        };
        let total: f64 = ons.iter().map(f).sum();
        prop_assert!(total.abs() <= abs_sum + 1e-6, "{} > {}", total, abs_sum);
    }

    #[test]
    fn infinite_weight_sequences_exceed_every_bound(c in 0.1f64..2.0, p in 1.5f64..3.0, bound in 1.0f64..200.0) {
        let s = SeqDescriptor::signed_merge(SeqDescriptor::constant(c), SeqDescriptor::power(p));
        prop_assert_eq!(classify_frame_type(&s).unwrap().class, FrameTypeClass::FrameTypeInfiniteWeight);
        // After k pairs the partial weight is c·k − Σ_{j≤k} j^(−p) ≥ c·k − ζ(p),
        // and ζ(p) < 3 for p ≥ 1.5. Pair sums c − k^(−p) are positive once
        // k > c^(−1/p), so the even-index partial weights increase from there.
        let pairs = ((bound + 3.0) / c).ceil() as u64 + 1;
        let settled = c.powf(-1.0 / p).floor() as u64 + 1;
        let mut partial = 0.0;
        let mut last_even = f64::NEG_INFINITY;
        for n in 1..=2 * pairs {
            partial += s.term(n);
            if n % 2 == 0 && n / 2 >= settled {
                prop_assert!(partial > last_even);
                last_even = partial;
            }
        }
        prop_assert!(partial > bound);
    }

    #[test]
    fn diagonal_values_add_over_disjoint_sets(
        s in nonneg_leaf(),
        indices in proptest::collection::btree_set(1u64..500, 0..40),
        split in any::<u64>(),
    ) {
        let (a, b): (Vec<u64>, Vec<u64>) = indices.iter().partition(|&&n| (n ^ split) % 3 == 0);
        let value = |j: Vec<u64>| match diagonal_measure_eval(&s, &IndexSet::finite(j)).unwrap().value {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => f64::INFINITY,
        };
        let whole = value(indices.iter().copied().collect());
        let parts = value(a) + value(b);
        prop_assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole.abs()));
    }

    #[test]
    fn each_bounded_sequence_gets_exactly_one_class(s in descriptor()) {
        let v = classify_frame_type(&s).unwrap();
        let expected = matches!(v.class, FrameTypeClass::BoundedFrameFunction | FrameTypeClass::FrameTypeInfiniteWeight);
        prop_assert_eq!(v.class.is_frame_type(), expected);
    }
}
