//! Classifies the bundled tables and measures their Bell violation.

use qtl::contextuality::{classify, derive_bell, violation};
use qtl::data;

fn main() {
    let formulas = data::bell_formulas();
    println!("inequality: {}", derive_bell(&formulas).unwrap());
    let tables = [
        ("alice-bob", data::ALICE_BOB_TABLE),
        ("bell", data::BELL_TABLE),
        ("pr-box", data::PR_BOX_TABLE),
    ];
    for (name, text) in tables {
        let t = data::table(text);
        let c = classify(&t).unwrap();
        println!("{name}: {}, violation {}", c.class, violation(&t, &formulas).unwrap());
    }
    let ghz = data::table(data::GHZ_TABLE);
    println!("ghz: {}", classify(&ghz).unwrap().class);
}
