//! Associates the Bell table with the bundled 32-row quantum team and
//! reads off the expectations of the four agreement formulas.

use qtl::data;
use qtl::team::Cover;

fn main() {
    let team = data::team(data::BELL_QUANTUM_TEAM);
    let cover: Cover = "{p0,p1};{p0,p3};{p1,p2};{p2,p3}".parse().unwrap();
    let table = team.associated_table(&cover.base(), &cover).unwrap();
    print!("{table}");
    assert_eq!(table, data::table(data::BELL_TABLE));

    println!();
    for phi in data::bell_formulas() {
        let value = team.expectation(None, &phi).unwrap();
        println!("[{phi}] = {value}");
    }
}
