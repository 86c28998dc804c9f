//! Classify diagonal sequences `f(eₙ) = aₙ`: which bounded sequences give a
//! frame function, which only a frame type function, and which neither.
//!
//!     cargo run --release --example frame_type_classes

use gleason_lab::seq::{classify_frame_type, classify_summability, heuristic_evidence, Mode, SeqDescriptor};
use gleason_lab::Result;

fn main() -> Result<()> {
    let cases = [
        ("1/n^2", SeqDescriptor::power(2.0)),
        ("(-1)^n/n", SeqDescriptor::alternating_power(1.0)),
        ("1 merged with -1/n^2", SeqDescriptor::signed_merge(SeqDescriptor::constant(1.0), SeqDescriptor::power(2.0))),
        ("1/n^2 merged with -1", SeqDescriptor::signed_merge(SeqDescriptor::power(2.0), SeqDescriptor::constant(1.0))),
        ("(-1)^n", SeqDescriptor::alternating_power(0.0)),
        ("-1/n", SeqDescriptor::scaled(-1.0, SeqDescriptor::power(1.0))),
    ];
    for (label, s) in &cases {
        let exact = classify_summability(s, Mode::Exact)?;
        let frame = classify_frame_type(s)?;
        let heur = classify_summability(s, Mode::Heuristic)?;
        println!(
            "{label:>22}: {:?} (heuristic {:?}), {:?}, frame type: {}",
            exact.class,
            heur.class,
            frame.class,
            frame.class.is_frame_type()
        );
    }

    let ev = heuristic_evidence(&SeqDescriptor::alternating_power(1.0), 1_000_000);
    println!("partial sums of (-1)^n/n: {:.9} (-ln 2 = {:.9})", ev.final_sum, -(2f64.ln()));

    match classify_frame_type(&SeqDescriptor::power(-1.0)) {
        Ok(v) => println!("n: {:?}", v.class),
        Err(e) => println!("n: {e}"),
    }
    Ok(())
}
