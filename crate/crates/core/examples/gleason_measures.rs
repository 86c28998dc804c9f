//! Evaluate `m(M) = tr(T·P_M)` for a density matrix and watch additivity
//! hold on orthogonal pieces.
//!
//!     cargo run --example gleason_measures

use gleason_lab::hilbert::{join, ortho_complement};
use gleason_lab::measures::{check_additivity, check_regularity, is_state, jordan_measure, GleasonMeasure};
use gleason_lab::random::{random_density, random_hermitian, random_orthogonal_pair, rng};
use gleason_lab::{Result, Tolerances};

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let mut r = rng(7);
    let rho = random_density(&mut r, 4);
    let m = GleasonMeasure::new(rho.clone());
    println!("tr(rho) = {:.12}, state: {}", rho.trace(), is_state(&m, &tol));

    let (a, b) = random_orthogonal_pair(&mut r, 4);
    let rep = check_additivity(&m, &[a.clone(), b.clone()], &tol)?;
    println!(
        "m(A v B) = {:.12}  m(A) + m(B) = {:.12}  deviation {:.1e}",
        rep.lhs, rep.rhs, rep.deviation
    );

    let ab = join(&a, &b)?;
    let rest = ortho_complement(&ab);
    println!("m(A v B) + m((A v B)^perp) = {:.12}", m.eval(&ab)? + m.eval(&rest)?);

    let reg = check_regularity(&m, &ab, &tol)?;
    println!("finite-dimensional chain below A v B: {:?} -> {:.12}", reg.chain, reg.target);

    // A signed measure from the Jordan product (T·A + A·T)/2.
    let a_op = random_hermitian(&mut r, 4);
    let signed = jordan_measure(&rho, &a_op)?;
    let rep = check_additivity(&signed, &[a, b], &tol)?;
    println!("signed measure additivity deviation {:.1e}", rep.deviation);
    Ok(())
}
