//! Builds a quantum team from a probability table and associates it back.

use qtl::data;
use qtl::team::team_from_table;

fn main() {
    for text in [data::ALICE_BOB_TABLE, data::BELL_TABLE, data::PR_BOX_TABLE] {
        let table = data::table(text);
        let team = team_from_table(&table);
        let cover = table.cover();
        let back = team.associated_table(&cover.base(), &cover).unwrap();
        println!("cover {cover}: {} rows, round trip exact: {}", team.len(), back == table);
    }
}
