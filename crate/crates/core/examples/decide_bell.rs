//! The Bell inequality is valid for multi-teams but fails for quantum
//! teams. Prints the counter-witness found by the QTL procedure.

use qtl::data;
use qtl::decide::{decide, Limits, Logic};
use qtl::logic::{component_values, satisfies};

fn main() {
    let alpha = data::formula(data::BELL_INEQUALITY);
    println!("alpha: {alpha}");
    for logic in [Logic::Ptl, Logic::Qtl] {
        let d = decide(&alpha, logic, &Limits::default()).unwrap();
        println!("{logic:?}: {} ({} linear systems)", d.verdict, d.stats.assignments_tried);
        if let Some(x) = d.counter_witness {
            assert!(satisfies(&x, &alpha.clone().not()).unwrap());
            println!("team violating it has {} rows", x.len());
            for (c, v) in component_values(&x, &alpha).unwrap() {
                println!("  {c} = {v}");
            }
        }
    }

    let maximal = data::formula(data::BELL_MAXIMAL);
    let x = qtl::decide::qtl_satisfiable(&maximal).unwrap().expect("satisfiable");
    println!("maximal violation realized by:\n{x}");
}
