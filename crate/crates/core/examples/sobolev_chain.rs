//! Discretized forms on `[0, 1]`: `sₙ(u) = (1 + 1/n)·‖u′‖² + |u(0)|² + |u(1)|²`
//! decreases to `s`, while each boundary term has norm `1/h` in the weighted
//! geometry and blows up as the grid refines.
//!
//!     cargo run --release --example sobolev_chain

use gleason_lab::sobolev::{boundary_blowup, build_forms, chain_report, Grid};
use gleason_lab::Result;

fn main() -> Result<()> {
    let grid = Grid::with_intervals(40)?;
    let c = chain_report(&grid, 50)?;
    let worst = c.steps.iter().map(|s| s.next_gap.min(s.limit_gap)).fold(f64::INFINITY, f64::min);
    let defect = c.steps.iter().map(|s| s.identity_defect).fold(0.0, f64::max);
    println!(
        "h = {}: smallest gap {worst:.3e}, identity defect {defect:.1e}, s_hat <= s: {}, s <= s_hat: {}",
        c.h, c.hat_below_s, c.s_below_hat
    );
    println!("s - s_hat has rank {} with spectrum {:?}", c.boundary_rank, c.boundary_spectrum);

    let forms = build_forms(3, &grid)?;
    println!("||s_3 - s|| in the weighted geometry: {:.6}", forms.s_n.sub(&forms.s).weighted_norm());

    let grids: Vec<Grid> = [10, 20, 40, 80, 160, 320]
        .iter()
        .map(|&k| Grid::with_intervals(k))
        .collect::<Result<_>>()?;
    let b = boundary_blowup(&grids)?;
    for r in &b.rows {
        println!("h = {:<9} boundary norm {:>8.3} (expected {})", r.h, r.per_term_norm, r.expected);
    }
    println!("log-log slope {:.6}", b.slope);
    print!("{}", b.to_csv()?);
    Ok(())
}
