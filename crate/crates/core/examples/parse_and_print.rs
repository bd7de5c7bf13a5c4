//! Parses formulas and prints them with explicit supports.

use qtl::logic::{parse_formula, parse_formula_file};
use qtl::prop::format_set;

fn main() {
    for text in [
        "[p0 & p1] + [p0 & !p1] = [p0]",
        "2*[p0; {p0,p1}] > 1/2 | ![p1] <= 0",
        "[p0 -> p1; {p0,p1,p2}] != 1",
    ] {
        let f = parse_formula(text).unwrap();
        let supports: Vec<String> = f.support().iter().map(format_set).collect();
        println!("{text}\n  => {f}\n  supports: {}\n  normal: {}", supports.join(" "), f.is_normal());
    }
    let file = "let phi = (p0 | p1) & !(p0 & p1)\n[phi] = 1\n";
    println!("{}", parse_formula_file(file).unwrap());
    if let Err(e) = parse_formula("[p0 & ] >= 1") {
        println!("error: {e}");
    }
}
