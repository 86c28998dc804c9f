use nalgebra::DVector;
use proptest::prelude::*;

use gleason_lab::random::{random_hermitian, random_positive, random_subspace, rng};
use gleason_lab::sobolev::{build_forms, nikodym_demo, Grid};
use gleason_lab::Tolerances;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn form_identities(intervals in 2usize..120, n in 1u32..200, u in proptest::collection::vec(-5.0f64..5.0, 121)) {
        let grid = Grid::with_intervals(intervals).unwrap();
        let f = build_forms(n, &grid).unwrap();
        let rebuilt = f.s_hat.matrix() * (1.0 + 1.0 / n as f64) + f.s_0.matrix();
        prop_assert!((f.s_n.matrix() - rebuilt).amax() <= 1e-12 * f.s_n.matrix().amax());
        prop_assert!((f.s.matrix() - (f.s_hat.matrix() + f.s_0.matrix())).amax() == 0.0);

        let u = DVector::from_column_slice(&u[..grid.n_points()]);
        let gap = f.s_n.eval(&u).unwrap() - f.s.eval(&u).unwrap();
        let hat = f.s_hat.eval(&u).unwrap();
        prop_assert!((gap - hat / n as f64).abs() <= 1e-10 * (1.0 + hat));
        prop_assert!(f.s_n.sub(&f.s).min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn nikodym_deviations_shrink(seed in any::<u64>(), dim in 2usize..=6, n_max in 2u32..60) {
        let tol = Tolerances::default();
        let mut r = rng(seed);
        let t = random_positive(&mut r, dim);
        let s = random_hermitian(&mut r, dim);
        let subs: Vec<_> = (1..=dim).map(|k| random_subspace(&mut r, dim, k)).collect();
        let rep = nikodym_demo(&t, &s, n_max, &subs, &tol).unwrap();
        prop_assert!(rep.steps.windows(2).all(|w| w[1].max_deviation <= w[0].max_deviation + 1e-12));
        prop_assert!(rep.steps.iter().all(|st| st.min_slack >= -1e-12));
        prop_assert!(rep.pass);
    }
}

#[test]
fn constant_and_linear_functions() {
    let grid = Grid::with_intervals(16).unwrap();
    let f = build_forms(1, &grid).unwrap();
    let one = DVector::from_element(grid.n_points(), 1.0);
    assert_eq!(f.s_hat.eval(&one).unwrap(), 0.0);
    assert_eq!(f.s_0.eval(&one).unwrap(), 2.0);
    assert_eq!(f.s.eval(&one).unwrap(), 2.0);
    let x = DVector::from_fn(grid.n_points(), |i, _| i as f64 * grid.h());
    assert!((f.s_hat.eval(&x).unwrap() - 1.0).abs() < 1e-12);
    assert!((f.s.eval(&x).unwrap() - 2.0).abs() < 1e-12);
}
