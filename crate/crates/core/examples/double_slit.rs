//! A particle surely passes exactly one slit, yet the probability of
//! "one slit and the detector fires" differs from that of the detector.

use qtl::data;
use qtl::decide::{qtl_search, GlueKind, Limits};
use qtl::prop::format_set;
use qtl::logic::{component_values, satisfies};

fn main() {
    let alpha = data::formula(data::DOUBLE_SLIT);
    println!("alpha: {alpha}");
    let search = qtl_search(&alpha, &Limits::default()).unwrap();
    let synthesis = search.witness.expect("satisfiable");
    for step in &synthesis.trace {
        let support = format_set(&step.support);
        match &step.kind {
            GlueKind::Base { rows } => println!("{support}: base block of {rows} rows"),
            GlueKind::Append { p } => println!("{support}: appended {p} rows"),
            GlueKind::Glue { k, p, added } => {
                let counts: Vec<String> = added.iter().map(|(s, n)| format!("{}x{n}", s.bit_string())).collect();
                println!("{support}: k = {k}, p = {p}, added {}", counts.join(" "));
            }
        }
    }
    let x = synthesis.team;
    println!("{x}");
    for (c, v) in component_values(&x, &alpha).unwrap() {
        println!("{c} = {v}");
    }
    assert!(satisfies(&x, &alpha).unwrap());
}
