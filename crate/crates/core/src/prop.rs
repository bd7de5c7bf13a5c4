//! Classical propositional formulas over indexed symbols `p0, p1, ...`.
//!
//! Everything else in the crate bottoms out here: team semantics evaluates
//! these formulas row by row, and the brute-force checks
//! ([`is_contradictory`], [`prop_equiv`]) serve as the inner oracle for the
//! Bell-inequality derivation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of symbols the exhaustive operations will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// A proposition symbol `p_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl std::str::FromStr for Symbol {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let digits = text
            .strip_prefix('p')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| format!("`{text}` is not a proposition symbol"))?;
        digits
            .parse()
            .map(Symbol)
            .map_err(|_| format!("symbol index in `{text}` is out of range"))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// Finite set of symbols, kept sorted.
pub type SymbolSet = BTreeSet<Symbol>;

/// Builds a symbol set from raw indices.
pub fn symbols<I: IntoIterator<Item = u32>>(indices: I) -> SymbolSet {
    indices.into_iter().map(Symbol).collect()
}

/// Renders a symbol set as `{p0, p1}`.
pub fn format_set(set: &SymbolSet) -> String {
    let inner: Vec<String> = set.iter().map(Symbol::to_string).collect();
    format!("{{{}}}", inner.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("symbol {0} is not in the domain of the assignment")]
    SymbolOutOfDomain(Symbol),
    #[error("assignment domain is empty")]
    EmptyDomain,
    #[error("{count} symbols exceed the enumeration cap of {cap}")]
    TooManySymbols { count: usize, cap: usize },
}

/// Propositional formula. `->`, `<->` and `|` are kept as nodes so that
/// parsed input prints back as written.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropFormula {
    Var(Symbol),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn var(index: u32) -> Self {
        PropFormula::Var(Symbol(index))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PropFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        PropFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        PropFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        PropFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Self) -> Self {
        PropFormula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn conjunction<I: IntoIterator<Item = PropFormula>>(parts: I) -> Option<Self> {
        parts.into_iter().reduce(PropFormula::and)
    }

    /// `Var(φ)`: the symbols occurring in the formula.
    pub fn vars(&self) -> SymbolSet {
        let mut out = SymbolSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut SymbolSet) {
        match self {
            PropFormula::Var(s) => {
                out.insert(*s);
            }
            PropFormula::Not(a) => a.collect_vars(out),
            PropFormula::And(a, b)
            | PropFormula::Or(a, b)
            | PropFormula::Implies(a, b)
            | PropFormula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Evaluates with a lookup that may fail; shared by [`eval`] and the
    /// team-row fast paths.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<bool, PropError>
    where
        F: Fn(Symbol) -> Option<bool>,
    {
        Ok(match self {
            PropFormula::Var(s) => lookup(*s).ok_or(PropError::SymbolOutOfDomain(*s))?,
            PropFormula::Not(a) => !a.eval_with(lookup)?,
            PropFormula::And(a, b) => a.eval_with(lookup)? & b.eval_with(lookup)?,
            PropFormula::Or(a, b) => a.eval_with(lookup)? | b.eval_with(lookup)?,
            PropFormula::Implies(a, b) => !a.eval_with(lookup)? | b.eval_with(lookup)?,
            PropFormula::Iff(a, b) => a.eval_with(lookup)? == b.eval_with(lookup)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            PropFormula::Iff(..) => 1,
            PropFormula::Implies(..) => 2,
            PropFormula::Or(..) => 3,
            PropFormula::And(..) => 4,
            PropFormula::Not(..) => 5,
            PropFormula::Var(..) => 6,
        }
    }
}

fn write_child(
    f: &mut fmt::Formatter<'_>,
    child: &PropFormula,
    needs_parens: bool,
) -> fmt::Result {
    if needs_parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        match self {
            PropFormula::Var(s) => write!(f, "{s}"),
            PropFormula::Not(a) => {
                write!(f, "!")?;
                write_child(f, a, a.precedence() < prec)
            }
            PropFormula::And(a, b) | PropFormula::Or(a, b) | PropFormula::Iff(a, b) => {
                let op = match self {
                    PropFormula::And(..) => "&",
                    PropFormula::Or(..) => "|",
                    _ => "<->",
                };
                // left-associative
                write_child(f, a, a.precedence() < prec)?;
                write!(f, " {op} ")?;
                write_child(f, b, b.precedence() <= prec)
            }
            PropFormula::Implies(a, b) => {
                // right-associative
                write_child(f, a, a.precedence() <= prec)?;
                write!(f, " -> ")?;
                write_child(f, b, b.precedence() < prec)
            }
        }
    }
}

/// A truth assignment on a finite symbol set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assignment {
    values: BTreeMap<Symbol, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Symbol, bool)>>(pairs: I) -> Self {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    /// Convenience constructor from `(index, bit)` pairs.
    pub fn from_bits<I: IntoIterator<Item = (u32, bool)>>(pairs: I) -> Self {
        Self::from_pairs(pairs.into_iter().map(|(i, b)| (Symbol(i), b)))
    }

    pub fn set(&mut self, symbol: Symbol, value: bool) {
        self.values.insert(symbol, value);
    }

    pub fn get(&self, symbol: Symbol) -> Option<bool> {
        self.values.get(&symbol).copied()
    }

    pub fn domain(&self) -> SymbolSet {
        self.values.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, bool)> + '_ {
        self.values.iter().map(|(s, b)| (*s, *b))
    }

    pub fn covers(&self, set: &SymbolSet) -> bool {
        set.iter().all(|s| self.values.contains_key(s))
    }

    /// `s↾U`; `None` when `U` is not contained in the domain.
    pub fn restrict(&self, set: &SymbolSet) -> Option<Assignment> {
        let mut values = BTreeMap::new();
        for s in set {
            values.insert(*s, self.get(*s)?);
        }
        Some(Assignment { values })
    }

    /// Bits in symbol order, e.g. `10` for `{p0:1, p3:0}`.
    pub fn bit_string(&self) -> String {
        self.values.values().map(|b| if *b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(s, b)| format!("{s}:{}", u8::from(*b)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All assignments on `domain`, in the canonical order used by every table
/// and team writer: the first symbol varies fastest and the sequence runs
/// from all-ones down to all-zeros (`11, 01, 10, 00` for two symbols).
pub fn assignments(domain: &SymbolSet) -> Vec<Assignment> {
    let syms: Vec<Symbol> = domain.iter().copied().collect();
    let n = syms.len();
    assert!(n < 32, "assignment enumeration over {n} symbols");
    (0..(1u64 << n))
        .rev()
        .map(|index| {
            Assignment::from_pairs(
                syms.iter()
                    .enumerate()
                    .map(|(bit, s)| (*s, (index >> bit) & 1 == 1)),
            )
        })
        .collect()
}

/// Classical truth value of `formula` under `assignment`.
pub fn eval(formula: &PropFormula, assignment: &Assignment) -> Result<bool, PropError> {
    formula.eval_with(&|s| assignment.get(s))
}

/// `φ_s`: the conjunction of one literal per symbol of the domain, in
/// symbol order.
pub fn minterm(assignment: &Assignment) -> Result<PropFormula, PropError> {
    PropFormula::conjunction(assignment.iter().map(|(s, b)| {
        let lit = PropFormula::Var(s);
        if b {
            lit
        } else {
            lit.not()
        }
    }))
    .ok_or(PropError::EmptyDomain)
}

fn check_cap(domain: &SymbolSet, cap: usize) -> Result<(), PropError> {
    if domain.len() > cap {
        Err(PropError::TooManySymbols {
            count: domain.len(),
            cap,
        })
    } else {
        Ok(())
    }
}

/// True iff no assignment over `Var(φ)` satisfies `φ`.
pub fn is_contradictory(formula: &PropFormula) -> Result<bool, PropError> {
    is_contradictory_with_cap(formula, DEFAULT_ENUMERATION_CAP)
}

pub fn is_contradictory_with_cap(formula: &PropFormula, cap: usize) -> Result<bool, PropError> {
    let domain = formula.vars();
    check_cap(&domain, cap)?;
    for s in assignments(&domain) {
        if eval(formula, &s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical equivalence, decided over `Var(φ) ∪ Var(ψ)`.
pub fn prop_equiv(lhs: &PropFormula, rhs: &PropFormula) -> Result<bool, PropError> {
    prop_equiv_with_cap(lhs, rhs, DEFAULT_ENUMERATION_CAP)
}

pub fn prop_equiv_with_cap(
    lhs: &PropFormula,
    rhs: &PropFormula,
    cap: usize,
) -> Result<bool, PropError> {
    let mut domain = lhs.vars();
    domain.extend(rhs.vars());
    check_cap(&domain, cap)?;
    for s in assignments(&domain) {
        if eval(lhs, &s)? != eval(rhs, &s)? {
            return Ok(false);
        }
    }
    Ok(true)
}
