//! Search for a sign assignment of the atoms of `δ` whose linear system is
//! feasible.
//!
//! Top-level atoms and negated atoms of `δ` are fixed from the start. Every
//! node runs the linear system of the fixed literals; a feasible point
//! assigns a sign to every atom, and if those signs satisfy `δ` the point is
//! returned. Otherwise the search branches on an unfixed atom of the first
//! conjunct the point falsifies, trying the point's sign first.

use std::collections::HashMap;

use num_traits::Zero;

use super::{DecideError, Limits, Stats};
use crate::lin::{FmLimits, LinConstraint, LinError, LinSystem};
use crate::logic::{Component, LinAtom, QtlFormula};
use crate::Rational;

enum Skel {
    Atom(usize),
    Not(Box<Skel>),
    And(Box<Skel>, Box<Skel>),
    Or(Box<Skel>, Box<Skel>),
    Implies(Box<Skel>, Box<Skel>),
    Iff(Box<Skel>, Box<Skel>),
    True,
}

impl Skel {
    /// Kleene three-valued evaluation.
    fn eval3(&self, fixed: &[Option<bool>]) -> Option<bool> {
        match self {
            Skel::True => Some(true),
            Skel::Atom(i) => fixed[*i],
            Skel::Not(a) => a.eval3(fixed).map(|b| !b),
            Skel::And(a, b) => match (a.eval3(fixed), b.eval3(fixed)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Skel::Or(a, b) => match (a.eval3(fixed), b.eval3(fixed)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Skel::Implies(a, b) => match (a.eval3(fixed), b.eval3(fixed)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Skel::Iff(a, b) => match (a.eval3(fixed), b.eval3(fixed)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            },
        }
    }

    fn eval(&self, signs: &[bool]) -> bool {
        match self {
            Skel::True => true,
            Skel::Atom(i) => signs[*i],
            Skel::Not(a) => !a.eval(signs),
            Skel::And(a, b) => a.eval(signs) && b.eval(signs),
            Skel::Or(a, b) => a.eval(signs) || b.eval(signs),
            Skel::Implies(a, b) => !a.eval(signs) || b.eval(signs),
            Skel::Iff(a, b) => a.eval(signs) == b.eval(signs),
        }
    }

    fn first_unfixed(&self, fixed: &[Option<bool>]) -> Option<usize> {
        match self {
            Skel::True => None,
            Skel::Atom(i) => fixed[*i].is_none().then_some(*i),
            Skel::Not(a) => a.first_unfixed(fixed),
            Skel::And(a, b) | Skel::Or(a, b) | Skel::Implies(a, b) | Skel::Iff(a, b) => {
                a.first_unfixed(fixed).or_else(|| b.first_unfixed(fixed))
            }
        }
    }
}

/// `δ` with atoms and components numbered.
pub(crate) struct Problem {
    pub(crate) components: Vec<Component>,
    constraints: Vec<LinConstraint>,
    units: Vec<(usize, bool)>,
    conjuncts: Vec<Skel>,
}

#[derive(Default)]
struct Interner {
    atoms: HashMap<LinAtom, usize>,
    atom_list: Vec<LinAtom>,
    components: HashMap<Component, usize>,
    component_list: Vec<Component>,
}

impl Interner {
    fn atom(&mut self, a: &LinAtom) -> usize {
        if let Some(&i) = self.atoms.get(a) {
            return i;
        }
        for (_, c) in a.terms() {
            if !self.components.contains_key(c) {
                self.components.insert(c.clone(), self.component_list.len());
                self.component_list.push(c.clone());
            }
        }
        let i = self.atom_list.len();
        self.atoms.insert(a.clone(), i);
        self.atom_list.push(a.clone());
        i
    }

    fn skel(&mut self, f: &QtlFormula) -> Skel {
        match f {
            QtlFormula::Verum => Skel::True,
            QtlFormula::Atom(a) => Skel::Atom(self.atom(a)),
            QtlFormula::Not(a) => Skel::Not(Box::new(self.skel(a))),
            QtlFormula::And(a, b) => Skel::And(self.boxed(a), self.boxed(b)),
            QtlFormula::Or(a, b) => Skel::Or(self.boxed(a), self.boxed(b)),
            QtlFormula::Implies(a, b) => Skel::Implies(self.boxed(a), self.boxed(b)),
            QtlFormula::Iff(a, b) => Skel::Iff(self.boxed(a), self.boxed(b)),
        }
    }

    fn boxed(&mut self, f: &QtlFormula) -> Box<Skel> {
        Box::new(self.skel(f))
    }
}

fn flatten<'a>(f: &'a QtlFormula, out: &mut Vec<&'a QtlFormula>) {
    match f {
        QtlFormula::And(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        QtlFormula::Verum => {}
        other => out.push(other),
    }
}

impl Problem {
    pub(crate) fn new(delta: &QtlFormula, limits: &Limits) -> Result<Self, DecideError> {
        let mut parts = Vec::new();
        flatten(delta, &mut parts);
        let mut interner = Interner::default();
        let mut units = Vec::new();
        let mut complex = Vec::new();
        for part in parts {
            match part {
                QtlFormula::Atom(a) => units.push((interner.atom(a), true)),
                QtlFormula::Not(inner) => match &**inner {
                    QtlFormula::Atom(a) => units.push((interner.atom(a), false)),
                    _ => complex.push(part),
                },
                _ => complex.push(part),
            }
        }
        let conjuncts: Vec<Skel> = complex.into_iter().map(|f| interner.skel(f)).collect();
        let mut is_unit = vec![false; interner.atom_list.len()];
        for (i, _) in &units {
            is_unit[*i] = true;
        }
        let open = is_unit.iter().filter(|u| !**u).count();
        if open > limits.max_atoms {
            return Err(DecideError::ResourceCap {
                resource: "non-unit atoms",
                count: open,
                cap: limits.max_atoms,
            });
        }
        let n = interner.component_list.len();
        if n > limits.max_variables {
            return Err(DecideError::ResourceCap {
                resource: "linear variables",
                count: n,
                cap: limits.max_variables,
            });
        }
        let constraints = interner
            .atom_list
            .iter()
            .map(|a| {
                LinConstraint::ge(
                    a.terms().iter().map(|(k, c)| {
                        (interner.components[c], Rational::from_integer((*k).into()))
                    }),
                    Rational::from_integer(a.bound().into()),
                )
            })
            .collect();
        Ok(Problem {
            components: interner.component_list,
            constraints,
            units,
            conjuncts,
        })
    }

    pub(crate) fn index_of(&self, c: &Component) -> Option<usize> {
        self.components.iter().position(|d| d == c)
    }

    /// A point satisfying `δ`, with one value per component.
    pub(crate) fn solve(&self, limits: &Limits, stats: &mut Stats) -> Result<Option<Vec<Rational>>, DecideError> {
        let mut fixed: Vec<Option<bool>> = vec![None; self.constraints.len()];
        for &(i, sign) in &self.units {
            match fixed[i] {
                Some(s) if s != sign => return Ok(None),
                _ => fixed[i] = Some(sign),
            }
        }
        let fm = FmLimits {
            max_rows: limits.max_fm_rows,
        };
        self.search(&mut fixed, &fm, stats)
    }

    fn search(
        &self,
        fixed: &mut Vec<Option<bool>>,
        fm: &FmLimits,
        stats: &mut Stats,
    ) -> Result<Option<Vec<Rational>>, DecideError> {
        if self.conjuncts.iter().any(|c| c.eval3(fixed) == Some(false)) {
            return Ok(None);
        }
        let mut system = LinSystem::new(self.components.len());
        for (i, sign) in fixed.iter().enumerate() {
            match sign {
                Some(true) => system.push(self.constraints[i].clone()),
                Some(false) => system.push(self.constraints[i].negate()),
                None => {}
            }
        }
        stats.assignments_tried += 1;
        let solution = system.solve(fm).map_err(|e| match e {
            LinError::TooManyConstraints { rows, cap } => DecideError::ResourceCap {
                resource: "elimination rows",
                count: rows,
                cap,
            },
            other => DecideError::InternalInvariant(other.to_string()),
        })?;
        stats.fm_eliminations += solution.eliminations;
        let Some(mut point) = solution.witness else {
            return Ok(None);
        };
        point.resize(self.components.len(), Rational::zero());
        let signs: Vec<bool> = self.constraints.iter().map(|c| c.holds_at(&point)).collect();
        let Some(failing) = self.conjuncts.iter().find(|c| !c.eval(&signs)) else {
            return Ok(Some(point));
        };
        let atom = failing.first_unfixed(fixed).ok_or_else(|| {
            DecideError::InternalInvariant("falsified conjunct has no open atom".into())
        })?;
        for sign in [signs[atom], !signs[atom]] {
            fixed[atom] = Some(sign);
            if let Some(found) = self.search(fixed, fm, stats)? {
                fixed[atom] = None;
                return Ok(Some(found));
            }
        }
        fixed[atom] = None;
        Ok(None)
    }
}
