//! Multi-teams and quantum teams.
//!
//! A [`QuantumTeam`] is an ordered list of rows, each row a truth assignment
//! on its own nonempty domain `Q_i`. Symbols outside a row's domain are
//! indeterminate in that row (rendered `-`). When all rows share one domain
//! the team is a multi-team. Repeated rows are kept: probabilities are
//! frequencies over the row list.

mod format;
mod table;

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::prop::{self, format_set, Assignment, PropError, PropFormula, SymbolSet};
use crate::Rational;

pub use table::{cover_leq, team_from_table, Cover, Distribution, ProbabilityTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamError {
    #[error("a team needs at least one row")]
    NoRows,
    #[error("row {row} has an empty domain")]
    EmptyRowDomain { row: usize },
    #[error("no row is defined on all of {}", format_set(.0))]
    EmptyRestriction(SymbolSet),
    #[error("assignment is on {}, expected {}", format_set(.found), format_set(.expected))]
    DomainMismatch {
        expected: SymbolSet,
        found: SymbolSet,
    },
    #[error("formula symbols {} are not contained in {}", format_set(.vars), format_set(.set))]
    FormulaOutsideSet { vars: SymbolSet, set: SymbolSet },
    #[error("cover set {} is not contained in any row domain", format_set(.0))]
    CoverNotDominated(SymbolSet),
    #[error("cover sets union to {}, expected {}", format_set(.union), format_set(.base))]
    NotACover { union: SymbolSet, base: SymbolSet },
    #[error("cover sets must be nonempty")]
    EmptyCoverSet,
    #[error("invalid distribution on {}: {reason}", format_set(.set))]
    InvalidDistribution { set: SymbolSet, reason: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Prop(#[from] PropError),
}

/// A finite quantum team `X = (Ω, τ)` with `Ω = {0, .., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumTeam {
    rows: Vec<Assignment>,
}

impl QuantumTeam {
    pub fn new(rows: Vec<Assignment>) -> Result<Self, TeamError> {
        if rows.is_empty() {
            return Err(TeamError::NoRows);
        }
        if let Some(row) = rows.iter().position(Assignment::is_empty) {
            return Err(TeamError::EmptyRowDomain { row });
        }
        Ok(QuantumTeam { rows })
    }

    pub fn rows(&self) -> &[Assignment] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn into_rows(self) -> Vec<Assignment> {
        self.rows
    }

    /// `dom(X)`, the union of all row domains.
    pub fn domain(&self) -> SymbolSet {
        self.rows.iter().flat_map(|r| r.domain()).collect()
    }

    /// `Sp(X)`, the set of distinct row domains.
    pub fn support(&self) -> BTreeSet<SymbolSet> {
        self.rows.iter().map(Assignment::domain).collect()
    }

    pub fn is_multi_team(&self) -> bool {
        let first = self.rows[0].domain();
        self.rows[1..].iter().all(|r| r.domain() == first)
    }

    /// `Ω_U`: indices of rows whose domain contains `set`.
    pub fn omega(&self, set: &SymbolSet) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.covers(set))
            .map(|(i, _)| i)
            .collect()
    }

    /// `X_U`: the multi-team of rows of `Ω_U`, each cut down to `set`.
    pub fn restrict(&self, set: &SymbolSet) -> Result<QuantumTeam, TeamError> {
        let rows: Vec<Assignment> = self.rows.iter().filter_map(|r| r.restrict(set)).collect();
        if rows.is_empty() {
            return Err(TeamError::EmptyRestriction(set.clone()));
        }
        QuantumTeam::new(rows)
    }

    /// `P_{X,U}(v)`.
    pub fn prob(&self, set: &SymbolSet, v: &Assignment) -> Result<Rational, TeamError> {
        let found = v.domain();
        if &found != set {
            return Err(TeamError::DomainMismatch {
                expected: set.clone(),
                found,
            });
        }
        self.frequency(set, |row| Ok(row.restrict(set).as_ref() == Some(v)))
    }

    /// `[φ]_{X,U}`; with `set = None` the support defaults to `Var(φ)`.
    pub fn expectation(
        &self,
        set: Option<&SymbolSet>,
        formula: &PropFormula,
    ) -> Result<Rational, TeamError> {
        let vars = formula.vars();
        let set = set.unwrap_or(&vars);
        if !vars.is_subset(set) {
            return Err(TeamError::FormulaOutsideSet {
                vars: vars.clone(),
                set: set.clone(),
            });
        }
        self.frequency(set, |row| Ok(prop::eval(formula, row)?))
    }

    fn frequency<F>(&self, set: &SymbolSet, mut hit: F) -> Result<Rational, TeamError>
    where
        F: FnMut(&Assignment) -> Result<bool, TeamError>,
    {
        let mut total = 0usize;
        let mut hits = 0usize;
        for row in self.rows.iter().filter(|r| r.covers(set)) {
            total += 1;
            if hit(row)? {
                hits += 1;
            }
        }
        if total == 0 {
            return Err(TeamError::EmptyRestriction(set.clone()));
        }
        Ok(Rational::new(hits.into(), total.into()))
    }

    /// The probability table of `X` for `base` and `cover`.
    pub fn associated_table(
        &self,
        base: &SymbolSet,
        cover: &Cover,
    ) -> Result<ProbabilityTable, TeamError> {
        let union = cover.base();
        if &union != base {
            return Err(TeamError::NotACover {
                union,
                base: base.clone(),
            });
        }
        let mut entries = Vec::with_capacity(cover.sets().len());
        for set in cover.sets() {
            let omega = self.omega(set);
            if omega.is_empty() {
                return Err(TeamError::CoverNotDominated(set.clone()));
            }
            let mut counts = vec![0usize; 1 << set.len()];
            let order = prop::assignments(set);
            for i in &omega {
                let v = self.rows[*i].restrict(set).expect("row covers set");
                let slot = order.iter().position(|s| *s == v).expect("assignment enumerated");
                counts[slot] += 1;
            }
            let n = omega.len();
            let probs = order
                .into_iter()
                .zip(counts)
                .map(|(s, c)| (s, Rational::new(c.into(), n.into())))
                .filter(|(_, p)| !p.is_zero());
            entries.push(Distribution::new(set.clone(), probs)?);
        }
        ProbabilityTable::new(entries)
    }
}
