//! Frame functions: the weight `Σ f(xᵢ)` does not depend on the basis, and
//! the generator comes back from values on the unit sphere by polarization.
//!
//!     cargo run --example frame_functions

use gleason_lab::forms::{frame_weight, polarize_recover, FrameFunctionView};
use gleason_lab::hilbert::Subspace;
use gleason_lab::random::{random_hermitian, random_onb_of, random_subspace, rng};
use gleason_lab::{Result, Tolerances};

fn main() -> Result<()> {
    let tol = Tolerances::default();
    let mut r = rng(11);
    let t = random_hermitian(&mut r, 5);
    let f = FrameFunctionView::from_generator(t.clone());

    let m = random_subspace(&mut r, 5, 3);
    for k in 0..3 {
        let onb = random_onb_of(&mut r, &m);
        println!("W_M with basis {k}: {:.12}", frame_weight(&f, &m, Some(&onb), &tol)?);
    }
    let w = frame_weight(&f, &Subspace::full(5), None, &tol)?;
    println!("W_H = {:.12}, tr(T) = {:.12}", w, t.trace());

    let rec = polarize_recover(|x| f.value(x).unwrap_or(f64::NAN), 5, &tol)?;
    println!(
        "recovered generator differs by {:.1e} (hermitian defect {:.1e})",
        rec.form.generator().max_abs_diff(&t),
        rec.hermitian_defect
    );

    // Not a quadratic form: polarization notices.
    let bogus = |x: &gleason_lab::hilbert::ComplexVector| x.components()[0].norm();
    match polarize_recover(bogus, 3, &tol) {
        Ok(_) => println!("unexpected: |x_1| accepted"),
        Err(e) => println!("|x_1| rejected: {e}"),
    }
    Ok(())
}
