//! Formulas of probabilistic and quantum team logic.
//!
//! An atom is a linear inequality `Σ a_j·(φ_j; V_j) ≥ c` with integer
//! coefficients over elementary components `(φ; V)`, where `V ⊇ Var(φ)` is
//! the support on which the expectation of `φ` is taken. Atoms combine with
//! negation and conjunction; `|`, `->` and `<->` are kept as nodes for
//! printing and evaluated classically.
//!
//! A formula whose components all have `V = Var(φ)` is *normal*; normal
//! formulas double as probabilistic team logic formulas, see
//! [`ptl_satisfies`].

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::prop::{format_set, PropFormula, SymbolSet};
use crate::team::{cover_leq, QuantumTeam, TeamError};
use crate::Rational;

pub use parse::{parse_formula, parse_formula_file, parse_formula_with, parse_prop, parse_prop_list, Bindings};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("support {} does not contain the symbols {} of `{formula}`", format_set(.support), format_set(.vars))]
    SupportViolation {
        formula: String,
        vars: SymbolSet,
        support: SymbolSet,
    },
    #[error("an atom needs at least one component")]
    EmptyAtom,
    #[error("integer overflow in `{0}`")]
    Overflow(String),
    #[error("support {} is not contained in any row domain of the team", format_set(.0))]
    SupportNotDominated(SymbolSet),
    #[error("the team is not a multi-team")]
    NotMultiTeam,
    #[error("the formula is not normal: component `{0}` has a wider support")]
    NotNormal(String),
    #[error("symbols {} of the formula are outside the team domain", format_set(.0))]
    OutsideDomain(SymbolSet),
    #[error(transparent)]
    Team(#[from] TeamError),
}

/// `(φ; V)` with `Var(φ) ⊆ V`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    formula: PropFormula,
    support: SymbolSet,
}

impl Component {
    pub fn new(formula: PropFormula, support: SymbolSet) -> Result<Self, LogicError> {
        let vars = formula.vars();
        if !vars.is_subset(&support) {
            return Err(LogicError::SupportViolation {
                formula: formula.to_string(),
                vars,
                support,
            });
        }
        Ok(Component { formula, support })
    }

    /// `(φ; Var(φ))`.
    pub fn normal(formula: PropFormula) -> Self {
        let support = formula.vars();
        Component { formula, support }
    }

    pub fn formula(&self) -> &PropFormula {
        &self.formula
    }

    pub fn support(&self) -> &SymbolSet {
        &self.support
    }

    pub fn is_normal(&self) -> bool {
        self.support == self.formula.vars()
    }

    /// Same formula on a wider support.
    pub fn widened(&self, support: &SymbolSet) -> Result<Self, LogicError> {
        Component::new(self.formula.clone(), support.clone())
    }

    /// `[φ]_{X,V}`.
    pub fn value_in(&self, team: &QuantumTeam) -> Result<Rational, LogicError> {
        team.expectation(Some(&self.support), &self.formula)
            .map_err(|e| match e {
                TeamError::EmptyRestriction(set) => LogicError::SupportNotDominated(set),
                other => other.into(),
            })
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.support.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}; {{{}}}]", self.formula, names.join(","))
    }
}

/// `Σ a_j·(φ_j; V_j) ≥ c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinAtom {
    terms: Vec<(i64, Component)>,
    bound: i64,
}

impl LinAtom {
    pub fn new(terms: Vec<(i64, Component)>, bound: i64) -> Result<Self, LogicError> {
        if terms.is_empty() {
            return Err(LogicError::EmptyAtom);
        }
        Ok(LinAtom { terms, bound })
    }

    pub fn terms(&self) -> &[(i64, Component)] {
        &self.terms
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// `Σ −a_j·(φ_j; V_j) ≥ −c`, the form `≤` desugars to.
    pub fn flipped(&self) -> Result<Self, LogicError> {
        let overflow = || LogicError::Overflow(self.to_string());
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| a.checked_neg().map(|a| (a, c.clone())).ok_or_else(overflow))
            .collect::<Result<_, _>>()?;
        let bound = self.bound.checked_neg().ok_or_else(overflow)?;
        Ok(LinAtom { terms, bound })
    }

    /// Whether the inequality holds for the given component values.
    pub fn holds<F>(&self, mut value: F) -> Result<bool, LogicError>
    where
        F: FnMut(&Component) -> Result<Rational, LogicError>,
    {
        let mut lhs = Rational::zero();
        for (a, c) in &self.terms {
            lhs += Rational::from_integer((*a).into()) * value(c)?;
        }
        Ok(lhs >= Rational::from_integer(self.bound.into()))
    }

    fn map_components<F>(&self, f: &mut F) -> Result<Self, LogicError>
    where
        F: FnMut(&Component) -> Result<Component, LogicError>,
    {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| Ok((*a, f(c)?)))
            .collect::<Result<_, LogicError>>()?;
        Ok(LinAtom {
            terms,
            bound: self.bound,
        })
    }
}

impl fmt::Display for LinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, c)) in self.terms.iter().enumerate() {
            match (i, *a < 0) {
                (0, _) => write!(f, "{a}*{c}")?,
                (_, true) => write!(f, " - {}*{c}", a.unsigned_abs())?,
                (_, false) => write!(f, " + {a}*{c}")?,
            }
        }
        write!(f, " >= {}", self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QtlFormula {
    /// The empty conjunction.
    Verum,
    Atom(LinAtom),
    Not(Box<QtlFormula>),
    And(Box<QtlFormula>, Box<QtlFormula>),
    Or(Box<QtlFormula>, Box<QtlFormula>),
    Implies(Box<QtlFormula>, Box<QtlFormula>),
    Iff(Box<QtlFormula>, Box<QtlFormula>),
}

impl From<LinAtom> for QtlFormula {
    fn from(atom: LinAtom) -> Self {
        QtlFormula::Atom(atom)
    }
}

impl QtlFormula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        QtlFormula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        QtlFormula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        QtlFormula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        QtlFormula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn iff(self, rhs: Self) -> Self {
        QtlFormula::Iff(Box::new(self), Box::new(rhs))
    }

    /// Left-nested conjunction; `Verum` when empty.
    pub fn conjunction<I: IntoIterator<Item = QtlFormula>>(parts: I) -> Self {
        parts.into_iter().reduce(QtlFormula::and).unwrap_or(QtlFormula::Verum)
    }

    /// `Σ a_j·c_j ≥ c`.
    pub fn ge(terms: Vec<(i64, Component)>, bound: i64) -> Result<Self, LogicError> {
        Ok(LinAtom::new(terms, bound)?.into())
    }

    /// `Σ a_j·c_j = c` as the conjunction of both inequalities.
    pub fn equals(terms: Vec<(i64, Component)>, bound: i64) -> Result<Self, LogicError> {
        let ge = LinAtom::new(terms, bound)?;
        let le = ge.flipped()?;
        Ok(QtlFormula::Atom(ge).and(QtlFormula::Atom(le)))
    }

    /// Calls `f` on every atom occurrence, left to right.
    pub fn for_each_atom<'a, F: FnMut(&'a LinAtom)>(&'a self, f: &mut F) {
        match self {
            QtlFormula::Verum => {}
            QtlFormula::Atom(a) => f(a),
            QtlFormula::Not(x) => x.for_each_atom(f),
            QtlFormula::And(x, y)
            | QtlFormula::Or(x, y)
            | QtlFormula::Implies(x, y)
            | QtlFormula::Iff(x, y) => {
                x.for_each_atom(f);
                y.for_each_atom(f);
            }
        }
    }

    /// `EC(α)`.
    pub fn elementary_components(&self) -> BTreeSet<Component> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| out.extend(a.terms.iter().map(|(_, c)| c.clone())));
        out
    }

    /// `EC(α)` in order of first occurrence.
    pub fn components_in_order(&self) -> Vec<Component> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.for_each_atom(&mut |a| {
            for (_, c) in &a.terms {
                if seen.insert(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }

    /// `Sp(α)`.
    pub fn support(&self) -> BTreeSet<SymbolSet> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| out.extend(a.terms.iter().map(|(_, c)| c.support.clone())));
        out
    }

    /// Every symbol of every component formula.
    pub fn symbols(&self) -> SymbolSet {
        let mut out = SymbolSet::new();
        self.for_each_atom(&mut |a| {
            for (_, c) in &a.terms {
                out.extend(c.formula.vars());
            }
        });
        out
    }

    pub fn is_normal(&self) -> bool {
        let mut normal = true;
        self.for_each_atom(&mut |a| normal &= a.terms.iter().all(|(_, c)| c.is_normal()));
        normal
    }

    /// All components share one support.
    pub fn is_classical(&self) -> bool {
        self.support().len() <= 1
    }

    /// Rewrites every component; the boolean structure is kept.
    pub fn map_components<F>(&self, f: &mut F) -> Result<Self, LogicError>
    where
        F: FnMut(&Component) -> Result<Component, LogicError>,
    {
        Ok(match self {
            QtlFormula::Verum => QtlFormula::Verum,
            QtlFormula::Atom(a) => QtlFormula::Atom(a.map_components(f)?),
            QtlFormula::Not(x) => x.map_components(f)?.not(),
            QtlFormula::And(x, y) => x.map_components(f)?.and(y.map_components(f)?),
            QtlFormula::Or(x, y) => x.map_components(f)?.or(y.map_components(f)?),
            QtlFormula::Implies(x, y) => x.map_components(f)?.implies(y.map_components(f)?),
            QtlFormula::Iff(x, y) => x.map_components(f)?.iff(y.map_components(f)?),
        })
    }

    /// Every support replaced by `support`.
    pub fn widen_supports(&self, support: &SymbolSet) -> Result<Self, LogicError> {
        self.map_components(&mut |c| c.widened(support))
    }

    /// Classical evaluation with a caller-supplied atom valuation.
    pub fn eval_atoms<F>(&self, atom: &mut F) -> Result<bool, LogicError>
    where
        F: FnMut(&LinAtom) -> Result<bool, LogicError>,
    {
        Ok(match self {
            QtlFormula::Verum => true,
            QtlFormula::Atom(a) => atom(a)?,
            QtlFormula::Not(x) => !x.eval_atoms(atom)?,
            QtlFormula::And(x, y) => x.eval_atoms(atom)? & y.eval_atoms(atom)?,
            QtlFormula::Or(x, y) => x.eval_atoms(atom)? | y.eval_atoms(atom)?,
            QtlFormula::Implies(x, y) => !x.eval_atoms(atom)? | y.eval_atoms(atom)?,
            QtlFormula::Iff(x, y) => x.eval_atoms(atom)? == y.eval_atoms(atom)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            QtlFormula::Iff(..) => 1,
            QtlFormula::Implies(..) => 2,
            QtlFormula::Or(..) => 3,
            QtlFormula::And(..) => 4,
            QtlFormula::Not(..) => 5,
            QtlFormula::Atom(..) | QtlFormula::Verum => 6,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &QtlFormula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints every support and every coefficient, so the output parses back
/// to the same tree.
impl fmt::Display for QtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        match self {
            QtlFormula::Verum => write!(f, "true"),
            QtlFormula::Atom(a) => write!(f, "{a}"),
            QtlFormula::Not(x) => {
                write!(f, "!")?;
                let parens = matches!(**x, QtlFormula::Atom(_)) || x.precedence() < prec;
                write_child(f, x, parens)
            }
            QtlFormula::And(x, y) | QtlFormula::Or(x, y) | QtlFormula::Iff(x, y) => {
                let op = match self {
                    QtlFormula::And(..) => "&",
                    QtlFormula::Or(..) => "|",
                    _ => "<->",
                };
                write_child(f, x, x.precedence() < prec)?;
                write!(f, " {op} ")?;
                write_child(f, y, y.precedence() <= prec)
            }
            QtlFormula::Implies(x, y) => {
                write_child(f, x, x.precedence() <= prec)?;
                write!(f, " -> ")?;
                write_child(f, y, y.precedence() < prec)
            }
        }
    }
}

impl std::str::FromStr for QtlFormula {
    type Err = LogicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// `[φ]_{X,V}` for each component of `α`, in order of first occurrence.
pub fn component_values(
    team: &QuantumTeam,
    formula: &QtlFormula,
) -> Result<Vec<(Component, Rational)>, LogicError> {
    formula
        .components_in_order()
        .into_iter()
        .map(|c| {
            let v = c.value_in(team)?;
            Ok((c, v))
        })
        .collect()
}

/// `X ⊨ α`. Every support of `α` must lie inside some row domain of `X`.
pub fn satisfies(team: &QuantumTeam, formula: &QtlFormula) -> Result<bool, LogicError> {
    let team_support = team.support();
    let formula_support = formula.support();
    if let Some(v) = formula_support
        .iter()
        .find(|v| !cover_leq([*v], &team_support))
    {
        return Err(LogicError::SupportNotDominated(v.clone()));
    }
    let mut cache: BTreeMap<Component, Rational> = BTreeMap::new();
    formula.eval_atoms(&mut |atom| {
        atom.holds(|c| {
            if let Some(v) = cache.get(c) {
                return Ok(v.clone());
            }
            let v = c.value_in(team)?;
            cache.insert(c.clone(), v.clone());
            Ok(v)
        })
    })
}

/// Multi-team semantics: each component is evaluated on the whole team.
/// The formula must be normal.
pub fn ptl_satisfies(team: &QuantumTeam, formula: &QtlFormula) -> Result<bool, LogicError> {
    if !team.is_multi_team() {
        return Err(LogicError::NotMultiTeam);
    }
    if let Some(c) = formula.components_in_order().iter().find(|c| !c.is_normal()) {
        return Err(LogicError::NotNormal(c.to_string()));
    }
    let domain = team.domain();
    let outside: SymbolSet = formula.symbols().difference(&domain).copied().collect();
    if !outside.is_empty() {
        return Err(LogicError::OutsideDomain(outside));
    }
    satisfies(team, &formula.widen_supports(&domain)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::symbols;
    use crate::rational as q;

    fn team(text: &str) -> QuantumTeam {
        text.parse().unwrap()
    }

    const ADDITIVITY_TEAM: &str = "p0 p1 p3\n1 1 -\n1 0 -\n0 - 1\n0 - 0\n";

    #[test]
    fn components_and_supports() {
        let f = parse_formula("[p0 & p1; {p0,p1,p2}] + 2*[p3] >= 1 & ![p0] < 1").unwrap();
        assert_eq!(f.elementary_components().len(), 3);
        assert_eq!(
            f.support(),
            [symbols([0, 1, 2]), symbols([3]), symbols([0])].into_iter().collect()
        );
        assert!(!f.is_normal());
        assert!(!f.is_classical());
        let n = parse_formula("[p0] + [p0 & p1] >= 1").unwrap();
        assert!(n.is_normal());
        let c = n.widen_supports(&symbols([0, 1])).unwrap();
        assert!(c.is_classical());
        assert!(!c.is_normal());
    }

    #[test]
    fn additivity_fails_on_quantum_team() {
        let x = team(ADDITIVITY_TEAM);
        let f = parse_formula("[p0 & p1] + [p0 & !p1] = [p0]").unwrap();
        assert!(!satisfies(&x, &f).unwrap());
        let values = component_values(&x, &f).unwrap();
        let got: Vec<Rational> = values.into_iter().map(|(_, v)| v).collect();
        assert_eq!(got, vec![q(1, 2), q(1, 2), q(1, 2)]);
    }

    #[test]
    fn undominated_support_is_an_error() {
        let x = team(ADDITIVITY_TEAM);
        let f = parse_formula("[p1 & p3] >= 0").unwrap();
        assert_eq!(
            satisfies(&x, &f),
            Err(LogicError::SupportNotDominated(symbols([1, 3])))
        );
    }

    #[test]
    fn negation_and_connectives() {
        let x = team("p0\n1\n0\n");
        let half = parse_formula("[p0] = 1/2").unwrap();
        assert!(satisfies(&x, &half).unwrap());
        assert!(!satisfies(&x, &half.clone().not()).unwrap());
        let imp = parse_formula("[p0] > 1/2 -> [p0] >= 1").unwrap();
        assert!(satisfies(&x, &imp).unwrap());
        let iff = parse_formula("[p0] > 1/2 <-> [p0] >= 1").unwrap();
        assert!(satisfies(&x, &iff).unwrap());
        assert!(satisfies(&x, &QtlFormula::Verum).unwrap());
    }

    #[test]
    fn ptl_widens_to_team_domain() {
        let x = team("p0 p1\n1 1\n0 0\n");
        let f = parse_formula("[p0 <-> p1] = 1").unwrap();
        assert!(ptl_satisfies(&x, &f).unwrap());
        let quantum = team(ADDITIVITY_TEAM);
        assert_eq!(ptl_satisfies(&quantum, &f), Err(LogicError::NotMultiTeam));
        let wide = parse_formula("[p0; {p0,p1}] >= 0").unwrap();
        assert!(matches!(ptl_satisfies(&x, &wide), Err(LogicError::NotNormal(_))));
        let outside = parse_formula("[p2] >= 0").unwrap();
        assert!(matches!(ptl_satisfies(&x, &outside), Err(LogicError::OutsideDomain(_))));
    }

    #[test]
    fn printing_is_explicit() {
        let f = parse_formula("[p0] > 1/2 & !([p1] = 0 | [p0 -> p1] >= 1)").unwrap();
        assert_eq!(
            f.to_string(),
            "!(-2*[p0; {p0}] >= -1) & !(1*[p1; {p1}] >= 0 & -1*[p1; {p1}] >= 0 | 1*[p0 -> p1; {p0,p1}] >= 1)"
        );
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
