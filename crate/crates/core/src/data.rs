//! Reference instances shipped under `data/reference/`.
//!
//! Teams and tables use the formats of [`crate::team`]; `.qtl` files are
//! formula files and `.list` files hold one propositional formula per line.

use crate::logic::{parse_formula_file, parse_prop_list, QtlFormula};
use crate::prop::PropFormula;
use crate::team::{ProbabilityTable, QuantumTeam};

/// Eight-row multi-team over `p0..p3` of the two-party example.
pub const ALICE_BOB_MULTI_TEAM: &str = include_str!("../data/reference/alice_bob_multi_team.team");
/// Thirty-two-row quantum team whose pair contexts give the Bell table.
pub const BELL_QUANTUM_TEAM: &str = include_str!("../data/reference/bell_quantum_team.team");
pub const ALICE_BOB_PAIR_TABLE: &str = include_str!("../data/reference/alice_bob_pair_table.table");
pub const ALICE_BOB_TABLE: &str = include_str!("../data/reference/alice_bob_table.table");
pub const BELL_TABLE: &str = include_str!("../data/reference/bell_table.table");
pub const PR_BOX_TABLE: &str = include_str!("../data/reference/pr_box.table");
pub const GHZ_TABLE: &str = include_str!("../data/reference/ghz.table");
/// Falsifies `[p0 ∧ p1] + [p0 ∧ ¬p1] = [p0]`.
pub const ADDITIVITY_COUNTEREXAMPLE: &str = include_str!("../data/reference/additivity_counterexample.team");
/// Falsifies `[φ] = [ψ]` for classically equivalent `φ`, `ψ`.
pub const EQUIVALENCE_COUNTEREXAMPLE: &str = include_str!("../data/reference/equivalence_counterexample.team");

pub const BELL_FORMULAS: &str = include_str!("../data/reference/bell_formulas.list");
/// `Σ_j φ_j ≤ 3`.
pub const BELL_INEQUALITY: &str = include_str!("../data/reference/bell_inequality.qtl");
/// `Σ_j φ_j ≥ 3 + 1/4`.
pub const BELL_VIOLATED: &str = include_str!("../data/reference/bell_violated.qtl");
/// `Σ_j φ_j = 4`.
pub const BELL_MAXIMAL: &str = include_str!("../data/reference/bell_maximal.qtl");
pub const ADDITIVITY: &str = include_str!("../data/reference/additivity.qtl");
pub const EQUIVALENCE: &str = include_str!("../data/reference/equivalence.qtl");
pub const DOUBLE_SLIT: &str = include_str!("../data/reference/double_slit.qtl");

pub fn team(text: &str) -> QuantumTeam {
    text.parse().expect("bundled team parses")
}

pub fn table(text: &str) -> ProbabilityTable {
    text.parse().expect("bundled table parses")
}

pub fn formula(text: &str) -> QtlFormula {
    parse_formula_file(text).expect("bundled formula parses")
}

/// `φ_0 … φ_3`, jointly contradictory agreement and disagreement formulas.
pub fn bell_formulas() -> Vec<PropFormula> {
    parse_prop_list(BELL_FORMULAS).expect("bundled list parses")
}
