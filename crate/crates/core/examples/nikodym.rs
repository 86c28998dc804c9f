//! A sequence of measures `mₙ(M) = tr((T + S/n)·P_M)` converging setwise to
//! `m(M) = tr(T·P_M)`, with the limit still additive.
//!
//!     cargo run --release --example nikodym

use gleason_lab::random::{random_hermitian, random_positive, random_subspace, rng};
use gleason_lab::sobolev::nikodym_demo;
use gleason_lab::suites::nikodym_pairs;
use gleason_lab::{Result, Tolerances};

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let mut r = rng(5);
    let t = random_positive(&mut r, 5);
    let s = random_hermitian(&mut r, 5);
    let subspaces: Vec<_> = (1..=4).map(|k| random_subspace(&mut r, 5, k)).collect();
    let rep = nikodym_demo(&t, &s, 100, &subspaces, &tol)?;
    for step in rep.steps.iter().filter(|s| [1, 2, 5, 10, 50, 100].contains(&s.n)) {
        println!("n = {:>3}: max |m_n(M) - m(M)| = {:.3e}", step.n, step.max_deviation);
    }
    println!(
        "bound ||S|| dim(M)/n holds: {}, deviations nonincreasing: {}, limit additivity deviation {:.1e}",
        rep.bound_holds, rep.nonincreasing, rep.additivity.deviation
    );

    let suite = nikodym_pairs(0, 50, 100, 20, &tol)?;
    println!("50 random pairs: {} failures, worst bound violation {:.1e}", suite.failures.len(), suite.max_deviation);
    Ok(())
}
