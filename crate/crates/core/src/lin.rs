//! Exact linear-inequality feasibility.
//!
//! A [`LinSystem`] is a conjunction of constraints `Σ a_j·x_j ≥ c` or
//! `Σ a_j·x_j > c` over real variables. [`LinSystem::feasible`] decides it by
//! Fourier–Motzkin elimination over arbitrary-precision rationals and, when
//! satisfiable, reads a rational solution back off the elimination trace.
//! Returned witnesses are checked against every constraint before they are
//! handed out.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparator {
    Ge,
    Gt,
}

/// `Σ a_j·x_j (≥|>) c`. Zero coefficients are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinConstraint {
    coeffs: Vec<(usize, Rational)>,
    cmp: Comparator,
    bound: Rational,
}

impl LinConstraint {
    pub fn new<I>(coeffs: I, cmp: Comparator, bound: Rational) -> Self
    where
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut merged: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (var, a) in coeffs {
            *merged.entry(var).or_insert_with(Rational::zero) += a;
        }
        LinConstraint {
            coeffs: merged.into_iter().filter(|(_, a)| !a.is_zero()).collect(),
            cmp,
            bound,
        }
    }

    pub fn ge<I: IntoIterator<Item = (usize, Rational)>>(coeffs: I, bound: Rational) -> Self {
        Self::new(coeffs, Comparator::Ge, bound)
    }

    pub fn gt<I: IntoIterator<Item = (usize, Rational)>>(coeffs: I, bound: Rational) -> Self {
        Self::new(coeffs, Comparator::Gt, bound)
    }

    /// `Σ a·x ≤ c`, stored as `Σ −a·x ≥ −c`.
    pub fn le<I: IntoIterator<Item = (usize, Rational)>>(coeffs: I, bound: Rational) -> Self {
        Self::ge(coeffs.into_iter().map(|(v, a)| (v, -a)), -bound)
    }

    /// `Σ a·x < c`, stored as `Σ −a·x > −c`.
    pub fn lt<I: IntoIterator<Item = (usize, Rational)>>(coeffs: I, bound: Rational) -> Self {
        Self::gt(coeffs.into_iter().map(|(v, a)| (v, -a)), -bound)
    }

    /// `Σ a·x = c` as a `≥` pair.
    pub fn eq<I: IntoIterator<Item = (usize, Rational)>>(coeffs: I, bound: Rational) -> [Self; 2] {
        let ge = Self::ge(coeffs, bound);
        let le = LinConstraint {
            coeffs: ge.coeffs.iter().map(|(v, a)| (*v, -a.clone())).collect(),
            cmp: Comparator::Ge,
            bound: -ge.bound.clone(),
        };
        [ge, le]
    }

    pub fn coeffs(&self) -> &[(usize, Rational)] {
        &self.coeffs
    }

    pub fn comparator(&self) -> Comparator {
        self.cmp
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn is_strict(&self) -> bool {
        self.cmp == Comparator::Gt
    }

    /// `¬(a·x ≥ c)` is `−a·x > −c`; `¬(a·x > c)` is `−a·x ≥ −c`.
    pub fn negate(&self) -> Self {
        LinConstraint {
            coeffs: self.coeffs.iter().map(|(v, a)| (*v, -a.clone())).collect(),
            cmp: match self.cmp {
                Comparator::Ge => Comparator::Gt,
                Comparator::Gt => Comparator::Ge,
            },
            bound: -self.bound.clone(),
        }
    }

    /// Left-hand side at `point`; variables beyond its length read as zero.
    pub fn lhs_at(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .filter_map(|(v, a)| point.get(*v).map(|x| a * x))
            .sum()
    }

    pub fn holds_at(&self, point: &[Rational]) -> bool {
        let lhs = self.lhs_at(point);
        match self.cmp {
            Comparator::Ge => lhs >= self.bound,
            Comparator::Gt => lhs > self.bound,
        }
    }

    fn num_vars(&self) -> usize {
        self.coeffs.last().map_or(0, |(v, _)| v + 1)
    }
}

impl fmt::Display for LinConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (v, a)) in self.coeffs.iter().enumerate() {
            if i == 0 {
                write!(f, "{a}*x{v}")?;
            } else if a.is_negative() {
                write!(f, " - {}*x{v}", -a)?;
            } else {
                write!(f, " + {a}*x{v}")?;
            }
        }
        let op = match self.cmp {
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
        };
        write!(f, " {op} {}", self.bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinError {
    #[error("elimination produced {rows} constraints, above the cap of {cap}")]
    TooManyConstraints { rows: usize, cap: usize },
    #[error("back-substituted point violates `{0}`")]
    WitnessCheckFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FmLimits {
    /// Largest number of live constraints allowed after any elimination.
    pub max_rows: usize,
}

impl Default for FmLimits {
    fn default() -> Self {
        FmLimits { max_rows: 200_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// A point satisfying every constraint, or `None` if there is none.
    pub witness: Option<Vec<Rational>>,
    /// Number of variables eliminated before the verdict.
    pub eliminations: usize,
}

/// A conjunction of linear constraints over variables `x0 .. x(m-1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinSystem {
    num_vars: usize,
    constraints: Vec<LinConstraint>,
}

impl LinSystem {
    pub fn new(num_vars: usize) -> Self {
        LinSystem {
            num_vars,
            constraints: Vec::new(),
        }
    }

    pub fn from_constraints<I: IntoIterator<Item = LinConstraint>>(constraints: I) -> Self {
        let mut s = LinSystem::default();
        for c in constraints {
            s.push(c);
        }
        s
    }

    /// Adds a constraint, widening the variable range if needed.
    pub fn push(&mut self, c: LinConstraint) {
        self.num_vars = self.num_vars.max(c.num_vars());
        self.constraints.push(c);
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        self.constraints.iter().all(|c| c.holds_at(point))
    }

    /// A rational solution, or `None` when the system is infeasible.
    pub fn feasible(&self) -> Option<Vec<Rational>> {
        let limits = FmLimits {
            max_rows: usize::MAX,
        };
        match self.solve(&limits) {
            Ok(sol) => sol.witness,
            Err(e) => panic!("unbounded elimination failed: {e}"),
        }
    }

    pub fn solve(&self, limits: &FmLimits) -> Result<Solution, LinError> {
        let mut elim = Eliminator::new(self.num_vars, limits.max_rows);
        for c in &self.constraints {
            elim.insert(Row::from_constraint(c, self.num_vars));
        }
        let feasible = elim.run()?;
        let eliminations = elim.steps.len();
        if !feasible {
            return Ok(Solution {
                witness: None,
                eliminations,
            });
        }
        let point = elim.back_substitute()?;
        if let Some(bad) = self.constraints.iter().find(|c| !c.holds_at(&point)) {
            return Err(LinError::WitnessCheckFailed(bad.to_string()));
        }
        Ok(Solution {
            witness: Some(point),
            eliminations,
        })
    }
}

impl fmt::Display for LinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Integer-normalized constraint: primitive coefficient vector, rational
/// bound.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    coeffs: Vec<BigInt>,
    bound: Rational,
    strict: bool,
}

impl Row {
    fn from_constraint(c: &LinConstraint, n: usize) -> Row {
        let scale = c
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, (_, a)| acc.lcm(a.denom()));
        let mut coeffs = vec![BigInt::zero(); n];
        for (v, a) in &c.coeffs {
            coeffs[*v] = (a * Rational::from_integer(scale.clone())).to_integer();
        }
        let bound = &c.bound * Rational::from_integer(scale);
        Row::normalized(coeffs, bound, c.is_strict())
    }

    fn normalized(mut coeffs: Vec<BigInt>, mut bound: Rational, strict: bool) -> Row {
        let g = coeffs.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        if !g.is_zero() && !g.is_one() {
            for a in coeffs.iter_mut() {
                *a /= &g;
            }
            bound /= Rational::from_integer(g);
        }
        Row {
            coeffs,
            bound,
            strict,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Whether `0 (≥|>) bound` holds.
    fn constant_holds(&self) -> bool {
        if self.strict {
            self.bound.is_negative()
        } else {
            !self.bound.is_positive()
        }
    }

    /// `x_var` as an affine bound given values of the other variables.
    fn solve_for(&self, var: usize, point: &[Rational]) -> Rational {
        let rest: Rational = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, a)| *k != var && !a.is_zero())
            .map(|(k, a)| Rational::from_integer(a.clone()) * &point[k])
            .sum();
        (&self.bound - rest) / Rational::from_integer(self.coeffs[var].clone())
    }

    /// `p·self + q·other` for positive integers `p`, `q` (or any sign when
    /// `other` is an equation).
    fn combine(&self, p: &BigInt, other: &Row, q: &BigInt, strict: bool) -> Row {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| p * a + q * b)
            .collect();
        let bound = Rational::from_integer(p.clone()) * &self.bound
            + Rational::from_integer(q.clone()) * &other.bound;
        Row::normalized(coeffs, bound, strict)
    }
}

enum Step {
    /// `x_var` is fixed by an equation.
    Substitute { var: usize, equation: Row },
    /// `x_var` lies between the lower and upper rows.
    Bounds {
        var: usize,
        lower: Vec<Row>,
        upper: Vec<Row>,
    },
}

struct Eliminator {
    n: usize,
    max_rows: usize,
    /// Keyed by coefficient vector; keeps the tightest bound.
    rows: HashMap<Vec<BigInt>, (Rational, bool)>,
    infeasible: bool,
    steps: Vec<Step>,
}

impl Eliminator {
    fn new(n: usize, max_rows: usize) -> Self {
        Eliminator {
            n,
            max_rows,
            rows: HashMap::new(),
            infeasible: false,
            steps: Vec::new(),
        }
    }

    fn insert(&mut self, row: Row) {
        if row.is_constant() {
            if !row.constant_holds() {
                self.infeasible = true;
            }
            return;
        }
        match self.rows.get_mut(&row.coeffs) {
            Some((bound, strict)) => {
                if row.bound > *bound || (row.bound == *bound && row.strict) {
                    *bound = row.bound;
                    *strict = row.strict;
                }
            }
            None => {
                self.rows.insert(row.coeffs, (row.bound, row.strict));
            }
        }
    }

    fn take_rows(&mut self) -> Vec<Row> {
        let mut rows: Vec<Row> = self
            .rows
            .drain()
            .map(|(coeffs, (bound, strict))| Row {
                coeffs,
                bound,
                strict,
            })
            .collect();
        // deterministic processing order
        rows.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        rows
    }

    /// Finds a non-strict row whose exact opposite is also present.
    fn find_equation(&self) -> Option<(Row, usize)> {
        let mut best: Option<(Row, usize, usize)> = None;
        for (coeffs, (bound, strict)) in &self.rows {
            if *strict {
                continue;
            }
            let neg: Vec<BigInt> = coeffs.iter().map(|a| -a).collect();
            match self.rows.get(&neg) {
                Some((nb, false)) if *nb == -bound.clone() => {}
                _ => continue,
            }
            for (var, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let fill = self.rows.keys().filter(|k| !k[var].is_zero()).count();
                let better = match &best {
                    None => true,
                    Some((row, v, f)) => {
                        (fill, coeffs, var) < (*f, &row.coeffs, *v)
                    }
                };
                if better {
                    let row = Row {
                        coeffs: coeffs.clone(),
                        bound: bound.clone(),
                        strict: false,
                    };
                    best = Some((row, var, fill));
                }
            }
        }
        best.map(|(row, var, _)| (row, var))
    }

    fn pick_variable(&self) -> Option<usize> {
        let mut best: Option<(i64, usize)> = None;
        for var in 0..self.n {
            let (mut lo, mut hi) = (0i64, 0i64);
            for k in self.rows.keys() {
                if k[var].is_positive() {
                    lo += 1;
                } else if k[var].is_negative() {
                    hi += 1;
                }
            }
            if lo + hi == 0 {
                continue;
            }
            let growth = lo * hi - lo - hi;
            if best.is_none_or(|(g, _)| growth < g) {
                best = Some((growth, var));
            }
        }
        best.map(|(_, v)| v)
    }

    fn run(&mut self) -> Result<bool, LinError> {
        loop {
            if self.infeasible {
                return Ok(false);
            }
            if let Some((equation, var)) = self.find_equation() {
                self.substitute(equation, var);
            } else if let Some(var) = self.pick_variable() {
                self.bound_out(var);
            } else {
                return Ok(true);
            }
            if self.rows.len() > self.max_rows {
                return Err(LinError::TooManyConstraints {
                    rows: self.rows.len(),
                    cap: self.max_rows,
                });
            }
        }
    }

    fn substitute(&mut self, equation: Row, var: usize) {
        let pivot = equation.coeffs[var].clone();
        let opposite: Vec<BigInt> = equation.coeffs.iter().map(|a| -a).collect();
        let rows = self.take_rows();
        for r in rows {
            if r.coeffs == equation.coeffs || r.coeffs == opposite {
                continue;
            }
            let a = &r.coeffs[var];
            if a.is_zero() {
                self.insert(r);
                continue;
            }
            // |pivot|·r − sign(pivot)·a·equation cancels x_var
            let p = pivot.abs();
            let q = if pivot.is_positive() { -a } else { a.clone() };
            let strict = r.strict;
            let combined = r.combine(&p, &equation, &q, strict);
            self.insert(combined);
        }
        self.steps.push(Step::Substitute { var, equation });
    }

    fn bound_out(&mut self, var: usize) {
        let rows = self.take_rows();
        let (mut lower, mut upper) = (Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[var].is_positive() {
                lower.push(r);
            } else if r.coeffs[var].is_negative() {
                upper.push(r);
            } else {
                self.insert(r);
            }
        }
        for l in &lower {
            for u in &upper {
                let p = -u.coeffs[var].clone();
                let q = l.coeffs[var].clone();
                let combined = l.combine(&p, u, &q, l.strict || u.strict);
                self.insert(combined);
            }
        }
        self.steps.push(Step::Bounds { var, lower, upper });
    }

    fn back_substitute(&self) -> Result<Vec<Rational>, LinError> {
        let mut point = vec![Rational::zero(); self.n];
        for step in self.steps.iter().rev() {
            match step {
                Step::Substitute { var, equation } => {
                    point[*var] = equation.solve_for(*var, &point);
                }
                Step::Bounds { var, lower, upper } => {
                    point[*var] = choose_value(*var, lower, upper, &point)?;
                }
            }
        }
        Ok(point)
    }
}

/// Tightest bound from `rows`; `pick_max` selects lower-bound semantics.
fn tightest(var: usize, rows: &[Row], point: &[Rational], pick_max: bool) -> Option<(Rational, bool)> {
    let mut best: Option<(Rational, bool)> = None;
    for r in rows {
        let v = r.solve_for(var, point);
        best = match best {
            None => Some((v, r.strict)),
            Some((b, s)) => {
                let tighter = if pick_max { v > b } else { v < b };
                if tighter {
                    Some((v, r.strict))
                } else if v == b {
                    Some((b, s || r.strict))
                } else {
                    Some((b, s))
                }
            }
        };
    }
    best
}

/// Midpoint of the admissible interval, or one unit past a one-sided bound.
fn choose_value(
    var: usize,
    lower: &[Row],
    upper: &[Row],
    point: &[Rational],
) -> Result<Rational, LinError> {
    let lo = tightest(var, lower, point, true);
    let hi = tightest(var, upper, point, false);
    let value = match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => {
            if l < h {
                (l + h) / Rational::from_integer(2.into())
            } else if l == h && !ls && !hs {
                l
            } else {
                return Err(LinError::WitnessCheckFailed(format!(
                    "empty interval for x{var} during back-substitution"
                )));
            }
        }
        (Some((l, _)), None) => l + Rational::one(),
        (None, Some((h, _))) => h - Rational::one(),
        (None, None) => Rational::zero(),
    };
    Ok(value)
}
