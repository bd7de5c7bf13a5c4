//! Brute-force oracles and random generators shared by the integration
//! tests. Nothing here calls the library's semantics or solvers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use qtl::lin::LinConstraint;
use qtl::logic::{Component, LinAtom, QtlFormula};
use qtl::prop::{self, Assignment, PropFormula, SymbolSet};
use qtl::team::{Distribution, ProbabilityTable, QuantumTeam};
use qtl::{rational, Rational};

pub fn eval_prop(f: &PropFormula, s: &Assignment) -> bool {
    match f {
        PropFormula::Var(p) => s.get(*p).expect("symbol assigned"),
        PropFormula::Not(a) => !eval_prop(a, s),
        PropFormula::And(a, b) => eval_prop(a, s) && eval_prop(b, s),
        PropFormula::Or(a, b) => eval_prop(a, s) || eval_prop(b, s),
        PropFormula::Implies(a, b) => !eval_prop(a, s) || eval_prop(b, s),
        PropFormula::Iff(a, b) => eval_prop(a, s) == eval_prop(b, s),
    }
}

/// Share of the rows defined on the support that satisfy the formula.
pub fn count_value(team: &QuantumTeam, c: &Component) -> Option<Rational> {
    let mut total = 0i64;
    let mut hits = 0i64;
    for row in team.rows() {
        if c.support().iter().all(|p| row.get(*p).is_some()) {
            total += 1;
            if eval_prop(c.formula(), row) {
                hits += 1;
            }
        }
    }
    (total > 0).then(|| rational(hits, total))
}

fn eval_qtl<F: FnMut(&LinAtom) -> bool>(f: &QtlFormula, atom: &mut F) -> bool {
    match f {
        QtlFormula::Verum => true,
        QtlFormula::Atom(a) => atom(a),
        QtlFormula::Not(a) => !eval_qtl(a, atom),
        QtlFormula::And(a, b) => eval_qtl(a, atom) & eval_qtl(b, atom),
        QtlFormula::Or(a, b) => eval_qtl(a, atom) | eval_qtl(b, atom),
        QtlFormula::Implies(a, b) => !eval_qtl(a, atom) | eval_qtl(b, atom),
        QtlFormula::Iff(a, b) => eval_qtl(a, atom) == eval_qtl(b, atom),
    }
}

/// Row-counting evaluation; `None` when some support has no rows.
pub fn oracle_satisfies(team: &QuantumTeam, f: &QtlFormula) -> Option<bool> {
    let mut undefined = false;
    let verdict = eval_qtl(f, &mut |a: &LinAtom| {
        let mut sum = Rational::zero();
        for (k, c) in a.terms() {
            match count_value(team, c) {
                Some(v) => sum += Rational::from_integer((*k).into()) * v,
                None => undefined = true,
            }
        }
        sum >= Rational::from_integer(a.bound().into())
    });
    (!undefined).then_some(verdict)
}

fn all_assignments(set: &SymbolSet) -> Vec<Assignment> {
    let syms: Vec<_> = set.iter().copied().collect();
    (0..1u32 << syms.len())
        .map(|m| Assignment::from_pairs(syms.iter().enumerate().map(|(i, p)| (*p, m >> i & 1 == 1))))
        .collect()
}

fn compositions(slots: usize, total: usize, cur: &mut Vec<usize>, out: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if cur.len() + 1 == slots {
        cur.push(total);
        let stop = out(cur);
        cur.pop();
        return stop;
    }
    for n in 0..=total {
        cur.push(n);
        let stop = compositions(slots, total - n, cur, out);
        cur.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Searches every multiset of at most `max_rows` rows whose domains are
/// supports of the formula.
pub fn oracle_satisfiable(f: &QtlFormula, max_rows: usize) -> Option<QuantumTeam> {
    let supports: BTreeSet<SymbolSet> = f.support();
    let types: Vec<Assignment> = supports.iter().flat_map(all_assignments).collect();
    struct Comp {
        covers: Vec<bool>,
        sat: Vec<bool>,
    }
    let mut comps: Vec<(Component, Comp)> = Vec::new();
    f.for_each_atom(&mut |a: &LinAtom| {
        for (_, c) in a.terms() {
            if comps.iter().any(|(d, _)| d == c) {
                continue;
            }
            let covers: Vec<bool> = types
                .iter()
                .map(|t| c.support().iter().all(|p| t.get(*p).is_some()))
                .collect();
            let sat = types
                .iter()
                .zip(&covers)
                .map(|(t, cov)| *cov && eval_prop(c.formula(), t))
                .collect();
            comps.push((c.clone(), Comp { covers, sat }));
        }
    });
    let mut found = None;
    for rows in 1..=max_rows {
        let stop = compositions(types.len(), rows, &mut Vec::new(), &mut |counts| {
            let values: Option<Vec<(i64, i64)>> = comps
                .iter()
                .map(|(_, c)| {
                    let den: usize = counts.iter().zip(&c.covers).filter(|(_, v)| **v).map(|(n, _)| n).sum();
                    let num: usize = counts.iter().zip(&c.sat).filter(|(_, v)| **v).map(|(n, _)| n).sum();
                    (den > 0).then_some((num as i64, den as i64))
                })
                .collect();
            let Some(values) = values else { return false };
            let ok = eval_qtl(f, &mut |a: &LinAtom| {
                // Σ k·num/den ≥ bound, over the common denominator 840
                let mut lhs: i64 = 0;
                for (k, c) in a.terms() {
                    let i = comps.iter().position(|(d, _)| d == c).unwrap();
                    let (num, den) = values[i];
                    lhs += k * num * (840 / den);
                }
                lhs >= a.bound() * 840
            });
            if ok {
                let rows: Vec<Assignment> = counts
                    .iter()
                    .zip(&types)
                    .flat_map(|(n, t)| std::iter::repeat_n(t.clone(), *n))
                    .collect();
                found = Some(QuantumTeam::new(rows).unwrap());
            }
            ok
        });
        if stop {
            break;
        }
    }
    found
}

pub fn random_prop<R: Rng>(rng: &mut R, vars: &[u32], depth: u32) -> PropFormula {
    if depth == 0 || rng.gen_bool(0.35) {
        return PropFormula::var(*vars.choose(rng).unwrap());
    }
    let a = random_prop(rng, vars, depth - 1);
    match rng.gen_range(0..5) {
        0 => a.not(),
        1 => a.and(random_prop(rng, vars, depth - 1)),
        2 => a.or(random_prop(rng, vars, depth - 1)),
        3 => a.implies(random_prop(rng, vars, depth - 1)),
        _ => a.iff(random_prop(rng, vars, depth - 1)),
    }
}

fn random_support<R: Rng>(rng: &mut R) -> SymbolSet {
    let mut pool = vec![0u32, 1, 2];
    pool.shuffle(rng);
    prop::symbols(pool.into_iter().take(rng.gen_range(1..=2)))
}

/// At most two supports of at most two symbols, at most two atoms, bounds
/// in `[−2, 2]`.
pub fn random_qtl<R: Rng>(rng: &mut R) -> QtlFormula {
    let supports: Vec<SymbolSet> = (0..rng.gen_range(1..=2)).map(|_| random_support(rng)).collect();
    let atom = |rng: &mut R| {
        let terms = (0..rng.gen_range(1..=2))
            .map(|_| {
                let v = supports.choose(rng).unwrap().clone();
                let vars: Vec<u32> = v.iter().map(|p| p.index()).collect();
                let phi = random_prop(rng, &vars, 2);
                let k = *[-2i64, -1, 1, 2].choose(rng).unwrap();
                (k, Component::new(phi, v).unwrap())
            })
            .collect();
        let f = QtlFormula::ge(terms, rng.gen_range(-2..=2)).unwrap();
        if rng.gen_bool(0.3) {
            f.not()
        } else {
            f
        }
    };
    let a = atom(rng);
    if rng.gen_bool(0.3) {
        return a;
    }
    let b = atom(rng);
    match rng.gen_range(0..4) {
        0 => a.and(b),
        1 => a.or(b),
        2 => a.implies(b),
        _ => a.iff(b),
    }
}

fn random_distribution<R: Rng>(rng: &mut R, u: SymbolSet) -> Distribution {
    let states = all_assignments(&u);
    let q: i64 = rng.gen_range(1..=12);
    let mut units = vec![0i64; states.len()];
    for _ in 0..q {
        units[rng.gen_range(0..states.len())] += 1;
    }
    Distribution::new(u, states.into_iter().zip(units).map(|(s, n)| (s, rational(n, q)))).unwrap()
}

/// At most three distinct cover sets of at most three symbols from
/// `p0..p3`, denominators at most 12. Entries are independent when no set
/// lies inside another; otherwise they are marginals of one distribution on
/// the union, since other nested tables are realized by no team.
pub fn random_table<R: Rng>(rng: &mut R) -> ProbabilityTable {
    let mut sets: Vec<SymbolSet> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut pool = vec![0u32, 1, 2, 3];
        pool.shuffle(rng);
        let u = prop::symbols(pool.into_iter().take(rng.gen_range(1..=3)));
        if !sets.contains(&u) {
            sets.push(u);
        }
    }
    let nested = sets.iter().any(|u| sets.iter().any(|w| u != w && u.is_subset(w)));
    let entries = if nested {
        let union: SymbolSet = sets.iter().flatten().copied().collect();
        let joint = random_distribution(rng, union);
        sets.iter().map(|u| joint.marginal(u).unwrap()).collect()
    } else {
        sets.into_iter().map(|u| random_distribution(rng, u)).collect()
    };
    ProbabilityTable::new(entries).unwrap()
}

/// `Σ a_i x_i ≥ b` (or `>`) with small integer data.
#[derive(Clone, Debug)]
pub struct IntConstraint {
    pub coeffs: Vec<i64>,
    pub bound: i64,
    pub strict: bool,
}

impl IntConstraint {
    pub fn to_lin(&self) -> LinConstraint {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0)
            .map(|(i, a)| (i, rational(*a, 1)));
        if self.strict {
            LinConstraint::gt(coeffs, rational(self.bound, 1))
        } else {
            LinConstraint::ge(coeffs, rational(self.bound, 1))
        }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, v)| Rational::from_integer((*a).into()) * v)
            .sum();
        let b = Rational::from_integer(self.bound.into());
        if self.strict {
            lhs > b
        } else {
            lhs >= b
        }
    }
}

pub fn random_system<R: Rng>(rng: &mut R) -> (usize, Vec<IntConstraint>) {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=6);
    let cs = (0..m)
        .map(|_| IntConstraint {
            coeffs: (0..n).map(|_| rng.gen_range(-2..=2)).collect(),
            bound: rng.gen_range(-3..=3),
            strict: rng.gen_bool(0.5),
        })
        .collect();
    (n, cs)
}

pub const GRID_DEN: i64 = 24;
pub const GRID_HALF_WIDTH: i64 = 10;

/// A grid point `k/24` in `[−10, 10]^n` satisfying `cs`, in grid units.
/// With `relaxed`, each `a·x ≥ b` (strict or not) becomes
/// `a·x ≥ b − ‖a‖₁/48`, so every point of the box within half a grid step
/// of a solution qualifies. The last coordinate is solved as an integer
/// interval instead of scanned.
pub fn grid_point(n: usize, cs: &[IntConstraint], relaxed: bool) -> Option<Vec<i64>> {
    let r = GRID_DEN * GRID_HALF_WIDTH;
    let scale = if relaxed { 2 } else { 1 };
    let mut prefix = vec![-r; n - 1];
    loop {
        let (mut lo, mut hi) = (-r, r);
        let mut ok = true;
        for c in cs {
            let partial: i64 = prefix.iter().zip(&c.coeffs).map(|(x, a)| a * x).sum();
            let slack: i64 = if relaxed { c.coeffs.iter().map(|a| a.abs()).sum() } else { 0 };
            // a·k ≥ need, or > when strict
            let need = scale * (c.bound * GRID_DEN - partial) - slack;
            let a = scale * c.coeffs[n - 1];
            let strict = c.strict && !relaxed;
            if a == 0 {
                if (strict && need >= 0) || (!strict && need > 0) {
                    ok = false;
                    break;
                }
            } else if a > 0 {
                let k = if strict { need.div_euclid(a) + 1 } else { -(-need).div_euclid(a) };
                lo = lo.max(k);
            } else {
                let k = if strict { (-need - 1).div_euclid(-a) } else { (-need).div_euclid(-a) };
                hi = hi.min(k);
            }
        }
        if ok && lo <= hi {
            let mut point = prefix;
            point.push(lo);
            return Some(point);
        }
        let mut i = 0;
        loop {
            if i == prefix.len() {
                return None;
            }
            if prefix[i] < r {
                prefix[i] += 1;
                break;
            }
            prefix[i] = -r;
            i += 1;
        }
    }
}

pub fn grid_to_rational(point: &[i64]) -> Vec<Rational> {
    point.iter().map(|k| rational(*k, GRID_DEN)).collect()
}

/// Unique solution of `m·y = rhs`, if the columns are independent.
fn solve_unique(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, cols: usize) -> Option<Vec<Rational>> {
    let mut row = 0;
    for col in 0..cols {
        let p = (row..m.len()).find(|r| !m[*r][col].is_zero())?;
        m.swap(row, p);
        rhs.swap(row, p);
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone() / m[row][col].clone();
                let pivot_row = m[row].clone();
                for (cell, p) in m[r].iter_mut().zip(&pivot_row) {
                    *cell -= f.clone() * p;
                }
                let delta = f * rhs[row].clone();
                rhs[r] -= delta;
            }
        }
        row += 1;
    }
    if rhs[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some((0..cols).map(|c| rhs[c].clone() / m[c][c].clone()).collect())
}

/// Searches for a transposition certificate of infeasibility: `y ≥ 0` with
/// `Σ y_i a_i = 0` and either `Σ y_i b_i > 0`, or `Σ y_i b_i = 0` with
/// `y_i > 0` on some strict constraint. Only vertices of the normalized
/// certificate polytope are tried, which suffices.
pub fn infeasibility_certificate(n: usize, cs: &[IntConstraint]) -> Option<Vec<Rational>> {
    let m = cs.len();
    let r = |v: i64| rational(v, 1);
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        if idx.len() > n + 2 {
            continue;
        }
        for tight in [false, true] {
            let mut rows: Vec<Vec<Rational>> = (0..n).map(|j| idx.iter().map(|i| r(cs[*i].coeffs[j])).collect()).collect();
            let mut rhs = vec![r(0); n];
            rows.push(vec![r(1); idx.len()]);
            rhs.push(r(1));
            if tight {
                rows.push(idx.iter().map(|i| r(cs[*i].bound)).collect());
                rhs.push(r(0));
            }
            let Some(y) = solve_unique(rows, rhs, idx.len()) else { continue };
            if y.iter().any(|v| *v < r(0)) {
                continue;
            }
            let yb: Rational = idx.iter().zip(&y).map(|(i, v)| r(cs[*i].bound) * v).sum();
            let strict_used = idx.iter().zip(&y).any(|(i, v)| cs[*i].strict && *v > r(0));
            if yb > r(0) || (yb.is_zero() && strict_used) {
                let mut full = vec![r(0); m];
                for (i, v) in idx.iter().zip(y) {
                    full[*i] = v;
                }
                return Some(full);
            }
        }
    }
    None
}
