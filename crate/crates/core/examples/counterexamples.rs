//! Quantum teams on which additivity and substitution of equivalents fail.

use qtl::data;
use qtl::logic::{component_values, satisfies};

fn show(name: &str, team_text: &str, formula_text: &str) {
    let team = data::team(team_text);
    let formula = data::formula(formula_text);
    println!("{name}: {formula}");
    for (c, v) in component_values(&team, &formula).unwrap() {
        println!("  {c} = {v}");
    }
    println!("  satisfied: {}", satisfies(&team, &formula).unwrap());
}

fn main() {
    show("additivity", data::ADDITIVITY_COUNTEREXAMPLE, data::ADDITIVITY);
    show("equivalents", data::EQUIVALENCE_COUNTEREXAMPLE, data::EQUIVALENCE);
}
