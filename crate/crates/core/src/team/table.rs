use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{QuantumTeam, TeamError};
use crate::prop::{self, Assignment, PropFormula, SymbolSet};
use crate::Rational;

/// `𝒰 ≤ 𝒰′`: every member of `lhs` is contained in some member of `rhs`.
pub fn cover_leq<'a, A, B>(lhs: A, rhs: B) -> bool
where
    A: IntoIterator<Item = &'a SymbolSet>,
    B: IntoIterator<Item = &'a SymbolSet>,
{
    let rhs: Vec<&SymbolSet> = rhs.into_iter().collect();
    lhs.into_iter()
        .all(|u| rhs.iter().any(|w| u.is_subset(w)))
}

/// A list of measurement contexts; its base is the union of the members.
/// Members may repeat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    sets: Vec<SymbolSet>,
}

impl Cover {
    pub fn new(sets: Vec<SymbolSet>) -> Result<Self, TeamError> {
        if sets.iter().any(SymbolSet::is_empty) {
            return Err(TeamError::EmptyCoverSet);
        }
        Ok(Cover { sets })
    }

    /// A cover that must union to exactly `base`.
    pub fn of(base: &SymbolSet, sets: Vec<SymbolSet>) -> Result<Self, TeamError> {
        let cover = Cover::new(sets)?;
        let union = cover.base();
        if &union != base {
            return Err(TeamError::NotACover {
                union,
                base: base.clone(),
            });
        }
        Ok(cover)
    }

    pub fn sets(&self) -> &[SymbolSet] {
        &self.sets
    }

    pub fn base(&self) -> SymbolSet {
        self.sets.iter().flatten().copied().collect()
    }
}

/// A probability distribution on the assignments of one cover set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    domain: SymbolSet,
    probs: BTreeMap<Assignment, Rational>,
}

impl Distribution {
    /// Assignments not listed get probability zero. Probabilities must lie in
    /// `[0, 1]` and sum to exactly one.
    pub fn new<I>(domain: SymbolSet, probs: I) -> Result<Self, TeamError>
    where
        I: IntoIterator<Item = (Assignment, Rational)>,
    {
        let invalid = |reason: String| TeamError::InvalidDistribution {
            set: domain.clone(),
            reason,
        };
        let mut map = BTreeMap::new();
        for (s, p) in probs {
            if s.domain() != domain {
                return Err(invalid(format!("assignment {s} has the wrong domain")));
            }
            if p.is_negative() || p > Rational::one() {
                return Err(invalid(format!("probability {p} of {s} is outside [0, 1]")));
            }
            if map.insert(s.clone(), p).is_some() {
                return Err(invalid(format!("assignment {s} listed twice")));
            }
        }
        let total: Rational = map.values().sum();
        if !total.is_one() {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        map.retain(|_, p| !p.is_zero());
        Ok(Distribution { domain, probs: map })
    }

    pub fn domain(&self) -> &SymbolSet {
        &self.domain
    }

    pub fn get(&self, s: &Assignment) -> Rational {
        self.probs.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    /// All assignments with their probability, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Assignment, Rational)> + '_ {
        prop::assignments(&self.domain).into_iter().map(move |s| {
            let p = self.get(&s);
            (s, p)
        })
    }

    /// Assignments of positive probability.
    pub fn positive(&self) -> impl Iterator<Item = (&Assignment, &Rational)> {
        self.probs.iter()
    }

    /// Marginal on `sub ⊆ domain`.
    pub fn marginal(&self, sub: &SymbolSet) -> Result<Distribution, TeamError> {
        if !sub.is_subset(&self.domain) {
            return Err(TeamError::DomainMismatch {
                expected: self.domain.clone(),
                found: sub.clone(),
            });
        }
        let mut acc: BTreeMap<Assignment, Rational> = BTreeMap::new();
        for (s, p) in &self.probs {
            let r = s.restrict(sub).expect("sub is inside the domain");
            *acc.entry(r).or_insert_with(Rational::zero) += p;
        }
        Distribution::new(sub.clone(), acc)
    }

    /// Probability that `formula` holds; `Var(φ)` must lie inside the domain.
    pub fn probability_of(&self, formula: &PropFormula) -> Result<Rational, TeamError> {
        let vars = formula.vars();
        if !vars.is_subset(&self.domain) {
            return Err(TeamError::FormulaOutsideSet {
                vars,
                set: self.domain.clone(),
            });
        }
        let mut total = Rational::zero();
        for (s, p) in &self.probs {
            if prop::eval(formula, s)? {
                total += p;
            }
        }
        Ok(total)
    }

    /// Least common denominator of the probabilities.
    pub fn common_denominator(&self) -> num_bigint::BigInt {
        self.probs
            .values()
            .fold(num_bigint::BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }
}

/// One distribution `d_U` per cover entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilityTable {
    entries: Vec<Distribution>,
}

impl ProbabilityTable {
    pub fn new(entries: Vec<Distribution>) -> Result<Self, TeamError> {
        if entries.is_empty() {
            return Err(TeamError::Parse {
                line: 0,
                message: "a probability table needs at least one cover set".into(),
            });
        }
        Ok(ProbabilityTable { entries })
    }

    pub fn entries(&self) -> &[Distribution] {
        &self.entries
    }

    pub fn cover(&self) -> Cover {
        Cover {
            sets: self.entries.iter().map(|d| d.domain.clone()).collect(),
        }
    }

    pub fn base(&self) -> SymbolSet {
        self.cover().base()
    }

    /// Entries whose cover set is exactly `set`.
    pub fn entries_for<'a>(&'a self, set: &'a SymbolSet) -> impl Iterator<Item = &'a Distribution> {
        self.entries.iter().filter(move |d| &d.domain == set)
    }
}

/// A quantum team whose associated table is `table`.
///
/// Each cover set `U_i` gets a block of `b_i` rows on domain `U_i`, where
/// `b_i` is the least common denominator of `d_{U_i}`; assignment `s` fills
/// `d_{U_i}(s)·b_i` consecutive rows of the block, in canonical order.
///
/// Rows of a block on `U′ ⊋ U` also count towards `Ω_U`. The association is
/// therefore exact when no cover set lies inside another, or more generally
/// when every entry on `U′ ⊇ U` has marginal `d_U` on `U`. A table violating
/// this is the associated table of no quantum team at all.
pub fn team_from_table(table: &ProbabilityTable) -> QuantumTeam {
    let mut rows = Vec::new();
    for d in &table.entries {
        let block = d.common_denominator();
        for (s, p) in d.iter() {
            let count = (p * Rational::from_integer(block.clone())).to_integer();
            let count = count.to_usize().expect("row count fits in memory");
            rows.extend(std::iter::repeat_n(s, count));
        }
    }
    QuantumTeam::new(rows).expect("every distribution contributes a nonempty block")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prop::symbols;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn distribution_validation() {
        let u = symbols([0]);
        let one = Assignment::from_bits([(0, true)]);
        let zero = Assignment::from_bits([(0, false)]);
        assert!(Distribution::new(u.clone(), [(one.clone(), q(1, 2)), (zero.clone(), q(1, 2))]).is_ok());
        assert!(Distribution::new(u.clone(), [(one.clone(), q(1, 2))]).is_err());
        assert!(Distribution::new(u.clone(), [(one.clone(), q(3, 2)), (zero, q(-1, 2))]).is_err());
        let wrong = Assignment::from_bits([(1, true)]);
        assert!(Distribution::new(u, [(wrong, q(1, 1))]).is_err());
    }

    #[test]
    fn single_entry_table_gives_single_row() {
        let u = symbols([0]);
        let one = Assignment::from_bits([(0, true)]);
        let d = Distribution::new(u.clone(), [(one.clone(), q(1, 1))]).unwrap();
        let t = ProbabilityTable::new(vec![d]).unwrap();
        let x = team_from_table(&t);
        assert_eq!(x.rows(), &[one]);
    }

    #[test]
    fn marginals_and_formula_probability() {
        let u = symbols([0, 1]);
        let d = Distribution::new(
            u,
            [
                (Assignment::from_bits([(0, true), (1, true)]), q(3, 8)),
                (Assignment::from_bits([(0, true), (1, false)]), q(1, 8)),
                (Assignment::from_bits([(0, false), (1, true)]), q(1, 8)),
                (Assignment::from_bits([(0, false), (1, false)]), q(3, 8)),
            ],
        )
        .unwrap();
        let m = d.marginal(&symbols([0])).unwrap();
        assert_eq!(m.get(&Assignment::from_bits([(0, true)])), q(1, 2));
        let xnor = PropFormula::var(0).iff(PropFormula::var(1));
        assert_eq!(d.probability_of(&xnor).unwrap(), q(3, 4));
        assert_eq!(d.common_denominator(), 8.into());
    }

    #[test]
    fn nested_inconsistent_table_has_no_team() {
        let p0 = symbols([0]);
        let p01 = symbols([0, 1]);
        let one = Assignment::from_bits([(0, true)]);
        let d0 = Distribution::new(p0, [(one, q(1, 1))]).unwrap();
        let zz = Assignment::from_bits([(0, false), (1, false)]);
        let d01 = Distribution::new(p01, [(zz, q(1, 1))]).unwrap();
        let t = ProbabilityTable::new(vec![d0, d01]).unwrap();
        let x = team_from_table(&t);
        let cover = t.cover();
        let back = x.associated_table(&cover.base(), &cover).unwrap();
        assert_eq!(back.entries()[0].get(&Assignment::from_bits([(0, true)])), q(1, 2));
    }
}