//! Check the generalized effect algebra axioms on finite models, list the
//! derived order and test subsets against the two-of-three rule.
//!
//!     cargo run --example axiom_checker [model.json]

use gleason_lab::gea::{
    check_axioms, derived_order, exhaustive_sweep, horizontal_sum, horizontal_sum_fixture, interval_model, is_sub_gea,
    single_entry_mutations, FiniteGeaModel, ModelFile,
};
use gleason_lab::Result;

fn show(label: &str, m: &FiniteGeaModel) {
    let rep = check_axioms(m);
    println!("{label}: {} elements, all axioms hold: {}", m.len(), rep.all_pass());
    for w in &rep.witnesses {
        println!("  violation {:?}: {:?}", w.axiom, w.elements);
    }
}

fn main() -> Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(&path).map_err(|e| gleason_lab::Error::Input(e.to_string()))?;
        let file: ModelFile = serde_json::from_str(&text).map_err(|e| gleason_lab::Error::Input(e.to_string()))?;
        show(&path, &FiniteGeaModel::from_file(&file)?);
        return Ok(());
    }

    let interval = interval_model(3);
    show("[0,3]", &interval);
    let order = derived_order(&interval)?;
    let pairs: Vec<String> = order
        .pairs()
        .iter()
        .map(|&(x, y)| format!("{}<={}", interval.name(x), interval.name(y)))
        .collect();
    println!("  order: {}", pairs.join(" "));
    for subset in [vec!["0", "2"], vec!["0", "1", "2"]] {
        let v = is_sub_gea(&interval.ids(&subset)?, &interval)?;
        println!("  {subset:?} sub-GEA: {} {:?}", v.holds, v.witness);
    }

    show("two chains glued at 0 and top", &horizontal_sum(&[2, 3]));
    show("{0, a, a', b, b', 1}", &horizontal_sum_fixture());

    let mutants = single_entry_mutations(&interval);
    let caught = mutants.iter().filter(|m| !check_axioms(m).all_pass()).count();
    println!("single-entry mutations of [0,3]: {caught}/{} rejected", mutants.len());

    let sweep = exhaustive_sweep(4);
    println!("exhaustive sweep up to 4 elements: {sweep:?}");

    let broken = FiniteGeaModel::commutative(
        &["0", "a", "b", "c"],
        "0",
        &[("0", "0", "0"), ("0", "a", "a"), ("0", "b", "b"), ("0", "c", "c"), ("a", "b", "c"), ("a", "a", "c")],
    )?;
    show("a+a = a+b = c", &broken);
    Ok(())
}
