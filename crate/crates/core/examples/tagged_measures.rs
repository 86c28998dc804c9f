//! Tagged σ-finite measures in infinite dimension: partial sums, values on
//! coordinate subspaces, σ-additivity, and the triple of σ-additive measures
//! whose sum is not σ-additive.
//!
//!     cargo run --example tagged_measures

use gleason_lab::ext::{
    aligned_sup_gap, decide_sigma_additive, eval_ext, ftf_oplus, ftf_view, not_sub_gea_demo, oplus,
    sigma_violation_witness, DemoVariant, DomainLabel, ExtMeasure,
};
use gleason_lab::seq::{IndexSet, SeqDescriptor};
use gleason_lab::Result;

fn main() -> Result<()> {
    let dim = ExtMeasure::dimension();
    let t = ExtMeasure::singular(DomainLabel::full());
    let minus = ExtMeasure::diagonal(SeqDescriptor::scaled(-1.0, SeqDescriptor::constant(1.0)));
    println!("a negative diagonal is rejected: {}", minus.is_err());

    for (label, m) in [("dimension", &dim), ("singular", &t)] {
        let d = decide_sigma_additive(m)?;
        let v = eval_ext(m, &IndexSet::finite([1, 4, 9]))?;
        println!("{label}: {:?} by {}, m(span e1,e4,e9) = {}", d.verdict, d.rule, v.value);
    }

    // The coercive dimension measure restores σ-additivity of the singular one.
    let sum = oplus(&dim, &t).defined().expect("dimension is P1(H)-bounded");
    println!("dimension + singular: {:?}", decide_sigma_additive(&sum)?.verdict);

    // So m1 and m1 + m2 are σ-additive while m2 = (m1 + m2) - m1 is not.
    let demo = not_sub_gea_demo(DemoVariant::Default)?;
    for m in &demo.measures {
        println!("  {}: {:?}", m.name, m.sigma_additive);
    }
    println!("violation {:?}, consistent with the finite checker: {}", demo.violation, demo.consistent);

    for m in &demo.measures {
        if let Ok(w) = sigma_violation_witness(&m.measure) {
            println!("  {} splits H into {:?}: {} vs {}", m.name, w.partition, w.lhs, w.rhs);
        }
    }

    let a = ExtMeasure::singular(DomainLabel::atom("a")?);
    let b = ExtMeasure::singular(DomainLabel::atom("b")?);
    println!("different domains: {:?}", oplus(&a, &b));
    println!("frame type sum: {:?}", ftf_oplus(&ftf_view(&a), &ftf_view(&b)).err());

    let gap = aligned_sup_gap(&t, &IndexSet::all())?;
    println!("singular value {} vs finite sup {}: gap {}", gap.value, gap.finite_sup, gap.gap);
    Ok(())
}
