//! Logical Bell inequalities and the contextuality hierarchy of
//! probability tables.
//!
//! For propositional formulas `φ_0 … φ_{k−1}` that cannot all hold at once,
//! every multi-team satisfies `Σ_j [φ_j] ≤ k − 1`. A table violates the
//! inequality by the amount its expectations exceed `k − 1`.
//!
//! Global sections and strong contextuality follow the sheaf-theoretic
//! reading of probability models. A table is non-contextual when one
//! distribution on all assignments of the base restricts to every `d_U`. It
//! is strongly contextual when no single global assignment is possible in
//! every context, i.e. each `s` has some `U` with `d_U(s↾U) = 0`.
//! Otherwise it is contextual.
//!
//! Cover sets may repeat with different distributions (the GHZ table in
//! `data/reference/ghz.table` lists the same context twice); each entry is
//! treated as its own context.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lin::{LinConstraint, LinSystem};
use crate::logic::{Component, LogicError, QtlFormula};
use crate::prop::{self, format_set, Assignment, PropError, PropFormula, SymbolSet};
use crate::team::{Distribution, ProbabilityTable, TeamError};
use crate::Rational;

/// Largest base for which global assignments are enumerated.
pub const DEFAULT_BASE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextualityError {
    #[error("the conjunction of the formulas is satisfiable")]
    NotContradictory,
    #[error("at least one formula is required")]
    NoFormulas,
    #[error("no cover set contains {}", format_set(.0))]
    NotCovered(SymbolSet),
    #[error("cover sets containing {} disagree on its marginal", format_set(.0))]
    Ambiguous(SymbolSet),
    #[error("base of {count} symbols exceeds the cap of {cap}")]
    BaseTooLarge { count: usize, cap: usize },
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

fn check_contradictory(formulas: &[PropFormula]) -> Result<PropFormula, ContextualityError> {
    let all = PropFormula::conjunction(formulas.iter().cloned()).ok_or(ContextualityError::NoFormulas)?;
    if !prop::is_contradictory(&all)? {
        return Err(ContextualityError::NotContradictory);
    }
    Ok(all)
}

/// `Σ_j (φ_j; Var(φ_j)) ≤ k − 1` for jointly contradictory `φ_j`.
pub fn derive_bell(formulas: &[PropFormula]) -> Result<QtlFormula, ContextualityError> {
    check_contradictory(formulas)?;
    let terms = formulas
        .iter()
        .map(|f| (-1, Component::normal(f.clone())))
        .collect();
    let k = formulas.len() as i64;
    Ok(QtlFormula::ge(terms, 1 - k)?)
}

/// `Σ_j φ_j ≤ k − 1 + ⋀_j φ_j`, which needs no contradiction.
pub fn derive_bell_general(formulas: &[PropFormula]) -> Result<QtlFormula, ContextualityError> {
    let all = PropFormula::conjunction(formulas.iter().cloned()).ok_or(ContextualityError::NoFormulas)?;
    let mut terms: Vec<(i64, Component)> = formulas
        .iter()
        .map(|f| (-1, Component::normal(f.clone())))
        .collect();
    terms.push((1, Component::normal(all)));
    let k = formulas.len() as i64;
    Ok(QtlFormula::ge(terms, 1 - k)?)
}

/// Probability of `φ` read off the entries whose set contains `Var(φ)`.
pub fn table_expectation(table: &ProbabilityTable, formula: &PropFormula) -> Result<Rational, ContextualityError> {
    let vars = formula.vars();
    let mut found: Option<Distribution> = None;
    for d in table.entries().iter().filter(|d| vars.is_subset(d.domain())) {
        let m = d.marginal(&vars)?;
        match &found {
            None => found = Some(m),
            Some(prev) if *prev == m => {}
            Some(_) => return Err(ContextualityError::Ambiguous(vars)),
        }
    }
    let m = found.ok_or_else(|| ContextualityError::NotCovered(vars.clone()))?;
    Ok(m.probability_of(formula)?)
}

/// `max(0, Σ_j E_T[φ_j] − (k − 1))`.
pub fn violation(table: &ProbabilityTable, formulas: &[PropFormula]) -> Result<Rational, ContextualityError> {
    check_contradictory(formulas)?;
    let mut total = Rational::zero();
    for f in formulas {
        total += table_expectation(table, f)?;
    }
    let excess = total - Rational::from_integer((formulas.len() as i64 - 1).into());
    Ok(excess.max(Rational::zero()))
}

fn global_assignments(table: &ProbabilityTable, cap: usize) -> Result<(SymbolSet, Vec<Assignment>), ContextualityError> {
    let base = table.base();
    if base.len() > cap {
        return Err(ContextualityError::BaseTooLarge {
            count: base.len(),
            cap,
        });
    }
    let all = prop::assignments(&base);
    Ok((base, all))
}

/// A distribution on `2^B` whose marginals are the table entries, if one
/// exists.
pub fn global_section(table: &ProbabilityTable) -> Result<Option<Distribution>, ContextualityError> {
    global_section_with_cap(table, DEFAULT_BASE_CAP)
}

pub fn global_section_with_cap(
    table: &ProbabilityTable,
    cap: usize,
) -> Result<Option<Distribution>, ContextualityError> {
    let (base, globals) = global_assignments(table, cap)?;
    let mut system = LinSystem::new(globals.len());
    for i in 0..globals.len() {
        system.push(LinConstraint::ge([(i, Rational::one())], Rational::zero()));
    }
    for d in table.entries() {
        for (u, p) in d.iter() {
            let vars = globals
                .iter()
                .enumerate()
                .filter(|(_, s)| s.restrict(d.domain()).as_ref() == Some(&u))
                .map(|(i, _)| (i, Rational::one()));
            for c in LinConstraint::eq(vars, p) {
                system.push(c);
            }
        }
    }
    let Some(g) = system.feasible() else {
        return Ok(None);
    };
    Ok(Some(Distribution::new(base, globals.into_iter().zip(g))?))
}

pub fn has_global_section(table: &ProbabilityTable) -> Result<bool, ContextualityError> {
    Ok(global_section(table)?.is_some())
}

/// No global assignment has positive probability in every context.
pub fn is_strongly_contextual(table: &ProbabilityTable) -> Result<bool, ContextualityError> {
    let (_, globals) = global_assignments(table, DEFAULT_BASE_CAP)?;
    Ok(globals.iter().all(|s| {
        table.entries().iter().any(|d| {
            let local = s.restrict(d.domain()).expect("context inside the base");
            d.get(&local).is_zero()
        })
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    NonContextual,
    Contextual,
    StronglyContextual,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::NonContextual => "non-contextual",
            Class::Contextual => "contextual",
            Class::StronglyContextual => "strongly-contextual",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: Class,
    /// Present exactly when the table is non-contextual.
    pub global_section: Option<Distribution>,
}

pub fn classify(table: &ProbabilityTable) -> Result<Classification, ContextualityError> {
    let section = global_section(table)?;
    let class = if section.is_some() {
        Class::NonContextual
    } else if is_strongly_contextual(table)? {
        Class::StronglyContextual
    } else {
        Class::Contextual
    };
    Ok(Classification {
        class,
        global_section: section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_prop;
    use crate::rational as q;

    fn table(text: &str) -> ProbabilityTable {
        text.parse().unwrap()
    }

    #[test]
    fn two_formula_inequality() {
        let fs = vec![parse_prop("p0").unwrap(), parse_prop("!p0").unwrap()];
        let f = derive_bell(&fs).unwrap();
        assert_eq!(f.to_string(), "-1*[p0; {p0}] - 1*[!p0; {p0}] >= -1");
        let bad = vec![parse_prop("p0").unwrap(), parse_prop("p1").unwrap()];
        assert_eq!(derive_bell(&bad), Err(ContextualityError::NotContradictory));
        assert!(derive_bell_general(&bad).is_ok());
    }

    #[test]
    fn single_context_is_its_own_section() {
        let t = table("U: p0 p1\n11 1/2\n01 0\n10 1/4\n00 1/4\n");
        let c = classify(&t).unwrap();
        assert_eq!(c.class, Class::NonContextual);
        assert_eq!(c.global_section.unwrap(), t.entries()[0]);
    }

    #[test]
    fn disagreeing_duplicates_are_ambiguous() {
        let t = table("U: p0\n1 1\n0 0\n\nU: p0\n1 0\n0 1\n");
        let p0 = parse_prop("p0").unwrap();
        assert!(matches!(table_expectation(&t, &p0), Err(ContextualityError::Ambiguous(_))));
        assert_eq!(classify(&t).unwrap().class, Class::StronglyContextual);
        let agreeing = table("U: p0 p1\n11 1/2\n01 0\n10 0\n00 1/2\n\nU: p0\n1 1/2\n0 1/2\n");
        assert_eq!(table_expectation(&agreeing, &p0).unwrap(), q(1, 2));
    }

    #[test]
    fn uncovered_formula() {
        let t = table("U: p0\n1 1\n0 0\n");
        let f = vec![parse_prop("p1").unwrap(), parse_prop("!p1").unwrap()];
        assert!(matches!(violation(&t, &f), Err(ContextualityError::NotCovered(_))));
    }
}
