//! Reorder the alternating harmonic series so its partial sums head to any
//! target, including ±∞.
//!
//!     cargo run --release --example riemann_rearrangement [target] [steps]

use gleason_lab::seq::{rearrange_to_target, SeqDescriptor, Target};
use gleason_lab::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let targets: Vec<Target> = match args.next() {
        Some(t) => vec![t.parse()?],
        None => ["-5", "0", "pi", "inf", "-inf"].iter().map(|t| t.parse()).collect::<Result<_>>()?,
    };
    let steps = args.next().and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let s = SeqDescriptor::alternating_power(1.0);
    for target in targets {
        let r = rearrange_to_target(&s, target, steps)?;
        let head: Vec<String> = r.indices.iter().take(8).map(|i| i.to_string()).collect();
        println!(
            "{target:?}: order starts {} ..., {} crossings, final {:.6}, closest {:?}",
            head.join(" "),
            r.crossings,
            r.final_sum,
            r.closest_approach
        );
    }

    if let Err(e) = rearrange_to_target(&SeqDescriptor::power(2.0), Target::Finite(1.0), 10) {
        println!("1/n^2: {e}");
    }
    Ok(())
}
