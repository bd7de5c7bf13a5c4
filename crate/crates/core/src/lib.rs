//! Probabilistic and quantum team logic.
//!
//! Formulas of these logics constrain the expected truth values of
//! propositional formulas over *teams*: multisets of truth assignments
//! (multi-teams) or rows with per-row domains (quantum teams). The crate
//! covers the whole pipeline:
//!
//! - [`prop`]: classical formulas and brute-force propositional checks;
//! - [`team`]: teams, exact probabilities, probability tables and the
//!   table-to-team construction;
//! - [`logic`]: the formula language, its parser and team semantics;
//! - [`lin`]: exact rational linear-inequality feasibility with witnesses;
//! - [`decide`]: satisfiability and validity with witness-team synthesis;
//! - [`contextuality`]: logical Bell inequalities and table classification;
//! - [`cli`]: the command layer behind the `qtl` binary;
//! - [`data`]: bundled reference teams, tables and formulas.

pub mod prop;
pub mod team;
pub mod lin;
pub mod logic;
pub mod decide;
pub mod contextuality;
pub mod cli;
pub mod data;

/// Exact arbitrary-precision rational, always in lowest terms.
pub type Rational = num_rational::BigRational;

/// `numer/denom` as a [`Rational`].
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}
