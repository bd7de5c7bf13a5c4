//! Satisfiability and validity for quantum and probabilistic team logic.
//!
//! For a formula `α` with supports `𝒱 = Sp(α)`, the search works on
//! `δ = α ∧ β_𝒱 ∧ γ`. Here `β_𝒱` propagates certain and impossible minterms
//! from a support to its supersets, and `γ` makes each support's minterms a
//! distribution and ties every other component to them. A sign pattern of
//! the atoms of `δ` that satisfies `δ` and has a feasible linear system
//! yields rational minterm probabilities. [`synth`] turns these into a
//! quantum team. Every team handed out has been re-checked with
//! [`logic::satisfies`](crate::logic::satisfies).
//!
//! Validity of `α` is unsatisfiability of `¬α` over the same supports.
//! Probabilistic team logic is handled by widening every support of a
//! normal formula to the set of all its symbols, so witnesses are
//! multi-teams.

pub mod closure;
mod search;
pub mod synth;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{self, LogicError, QtlFormula};
use crate::prop::{self, Assignment, SymbolSet};
use crate::team::{Distribution, QuantumTeam};

pub use closure::{build_beta, build_gamma, minterm_component};
pub use synth::{order_supports, synthesize, GlueKind, GlueStep, Synthesis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("{resource}: {count} exceeds the cap of {cap}")]
    ResourceCap {
        resource: &'static str,
        count: usize,
        cap: usize,
    },
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Size caps for the exponential parts of the procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Distinct atoms of `δ` that are not top-level literals.
    pub max_atoms: usize,
    /// Distinct components of `δ`, one linear variable each.
    pub max_variables: usize,
    pub max_supports: usize,
    /// Bound on `Σ_V 2^|V|`.
    pub max_conjuncts: usize,
    pub max_fm_rows: usize,
    pub max_team_rows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_atoms: 64,
            max_variables: 64,
            max_supports: 10,
            max_conjuncts: 1 << 16,
            max_fm_rows: 50_000,
            max_team_rows: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Linear systems solved.
    pub assignments_tried: usize,
    pub fm_eliminations: usize,
}

impl std::ops::AddAssign for Stats {
    fn add_assign(&mut self, rhs: Stats) {
        self.assignments_tried += rhs.assignments_tried;
        self.fm_eliminations += rhs.fm_eliminations;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search {
    pub witness: Option<Synthesis>,
    pub stats: Stats,
}

fn trivial_team() -> QuantumTeam {
    QuantumTeam::new(vec![Assignment::from_bits([(0, true)])]).expect("one row")
}

/// Searches for a quantum team satisfying `α`.
pub fn qtl_search(alpha: &QtlFormula, limits: &Limits) -> Result<Search, DecideError> {
    let mut stats = Stats::default();
    let supports = alpha.support();
    if supports.is_empty() {
        // no atoms: the formula is a constant
        let holds = alpha.eval_atoms(&mut |_| unreachable!("no atoms"))?;
        let witness = holds.then(|| Synthesis {
            team: trivial_team(),
            trace: Vec::new(),
        });
        return Ok(Search { witness, stats });
    }
    if supports.len() > limits.max_supports {
        return Err(DecideError::ResourceCap {
            resource: "supports",
            count: supports.len(),
            cap: limits.max_supports,
        });
    }
    let beta = build_beta(&supports, limits)?;
    let with_beta = alpha.clone().and(beta);
    let gamma = build_gamma(&with_beta, limits)?;
    let delta = with_beta.and(gamma);
    let problem = search::Problem::new(&delta, limits)?;
    let Some(point) = problem.solve(limits, &mut stats)? else {
        return Ok(Search {
            witness: None,
            stats,
        });
    };
    let mut blocks = BTreeMap::new();
    for v in &supports {
        let mut probs = Vec::new();
        for s in prop::assignments(v) {
            let c = minterm_component(&s, v);
            let i = problem.index_of(&c).ok_or_else(|| {
                DecideError::InternalInvariant(format!("minterm {c} has no variable"))
            })?;
            probs.push((s, point[i].clone()));
        }
        let d = Distribution::new(v.clone(), probs)
            .map_err(|e| DecideError::InternalInvariant(e.to_string()))?;
        blocks.insert(v.clone(), d);
    }
    let synthesis = synthesize(&blocks, limits)?;
    if !logic::satisfies(&synthesis.team, alpha)? {
        return Err(DecideError::InternalInvariant(
            "synthesized team does not satisfy the formula".into(),
        ));
    }
    Ok(Search {
        witness: Some(synthesis),
        stats,
    })
}

/// Support set used for the multi-team reading of `α`.
fn ptl_base(alpha: &QtlFormula) -> Result<SymbolSet, DecideError> {
    if let Some(c) = alpha.components_in_order().iter().find(|c| !c.is_normal()) {
        return Err(LogicError::NotNormal(c.to_string()).into());
    }
    Ok(alpha.symbols())
}

/// Searches for a multi-team satisfying the normal formula `α`.
pub fn ptl_search(alpha: &QtlFormula, limits: &Limits) -> Result<Search, DecideError> {
    let base = ptl_base(alpha)?;
    if base.is_empty() {
        return qtl_search(alpha, limits);
    }
    let widened = alpha.widen_supports(&base)?;
    let search = qtl_search(&widened, limits)?;
    if let Some(w) = &search.witness {
        if !logic::ptl_satisfies(&w.team, alpha)? {
            return Err(DecideError::InternalInvariant(
                "synthesized multi-team does not satisfy the formula".into(),
            ));
        }
    }
    Ok(search)
}

pub fn qtl_satisfiable(alpha: &QtlFormula) -> Result<Option<QuantumTeam>, DecideError> {
    Ok(qtl_search(alpha, &Limits::default())?.witness.map(|w| w.team))
}

pub fn qtl_valid(alpha: &QtlFormula) -> Result<bool, DecideError> {
    Ok(qtl_satisfiable(&alpha.clone().not())?.is_none())
}

pub fn ptl_satisfiable(alpha: &QtlFormula) -> Result<Option<QuantumTeam>, DecideError> {
    Ok(ptl_search(alpha, &Limits::default())?.witness.map(|w| w.team))
}

pub fn ptl_valid(alpha: &QtlFormula) -> Result<bool, DecideError> {
    ptl_base(alpha)?;
    Ok(ptl_satisfiable(&alpha.clone().not())?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Logic {
    Ptl,
    Qtl,
}

impl std::str::FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ptl" => Ok(Logic::Ptl),
            "qtl" => Ok(Logic::Qtl),
            other => Err(format!("unknown logic `{other}`, expected `ptl` or `qtl`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    /// Satisfiable but not valid.
    Satisfiable,
    Unsatisfiable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Valid => "valid",
            Verdict::Satisfiable => "satisfiable-not-valid",
            Verdict::Unsatisfiable => "unsatisfiable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    /// A team satisfying `α`, unless it is unsatisfiable.
    pub witness: Option<QuantumTeam>,
    /// A team satisfying `¬α`, unless `α` is valid.
    pub counter_witness: Option<QuantumTeam>,
    pub stats: Stats,
}

/// Decides `α` in both directions.
pub fn decide(alpha: &QtlFormula, logic: Logic, limits: &Limits) -> Result<Decision, DecideError> {
    let run = |f: &QtlFormula| match logic {
        Logic::Ptl => ptl_search(f, limits),
        Logic::Qtl => qtl_search(f, limits),
    };
    let positive = run(alpha)?;
    let negative = run(&alpha.clone().not())?;
    let mut stats = positive.stats;
    stats += negative.stats;
    let witness = positive.witness.map(|w| w.team);
    let counter_witness = negative.witness.map(|w| w.team);
    let verdict = match (&witness, &counter_witness) {
        (Some(_), None) => Verdict::Valid,
        (Some(_), Some(_)) => Verdict::Satisfiable,
        (None, Some(_)) => Verdict::Unsatisfiable,
        (None, None) => {
            return Err(DecideError::InternalInvariant(
                "neither the formula nor its negation is satisfiable".into(),
            ))
        }
    };
    Ok(Decision {
        verdict,
        witness,
        counter_witness,
        stats,
    })
}
