//! Exact Fourier-Motzkin feasibility with a rational witness.

use qtl::lin::{LinConstraint, LinSystem};
use qtl::rational as q;

fn main() {
    // x + y > 1/2, x - y >= 1/3, y >= 0, 3x <= 2
    let constraints = vec![
        LinConstraint::gt([(0, q(1, 1)), (1, q(1, 1))], q(1, 2)),
        LinConstraint::ge([(0, q(1, 1)), (1, q(-1, 1))], q(1, 3)),
        LinConstraint::ge([(1, q(1, 1))], q(0, 1)),
        LinConstraint::le([(0, q(3, 1))], q(2, 1)),
    ];
    let mut system = LinSystem::from_constraints(constraints.clone());
    for c in &constraints {
        println!("{c}");
    }
    match system.feasible() {
        Some(w) => println!("witness: x0 = {}, x1 = {}", w[0], w[1]),
        None => println!("infeasible"),
    }
    system.push(LinConstraint::gt([(1, q(1, 1))], q(1, 3)));
    let verdict = if system.feasible().is_some() { "feasible" } else { "infeasible" };
    println!("with x1 > 1/3: {verdict}");
}
