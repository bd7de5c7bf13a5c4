//! Witness-team synthesis.
//!
//! Each support `V` gets a multi-team block `X(V)` realizing its minterm
//! distribution with the least common denominator as row count. Supports
//! are then glued in an order that places every strict superset before its
//! subsets. A support with no strict superset is appended verbatim. Any
//! other support `V` already has `k` rows defined on it. For each `s` it
//! gets `a_s·k − b_s` new rows, where `a_s` counts `s` in the `p`-row block
//! and `b_s` counts `s` among those `k` rows. This leaves the mixture on
//! `V` equal to the block.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use super::{DecideError, Limits};
use crate::prop::{self, Assignment, SymbolSet};
use crate::team::{Distribution, QuantumTeam};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlueKind {
    /// The first block, `t` rows.
    Base { rows: usize },
    /// No strict superset placed: the whole `p`-row block is appended.
    Append { p: usize },
    /// `k` rows already cover the support; `added` lists `a_s·k − b_s`
    /// per assignment, summing to `k(p − 1)`.
    Glue {
        k: usize,
        p: usize,
        added: Vec<(Assignment, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueStep {
    pub support: SymbolSet,
    pub kind: GlueKind,
    pub rows_after: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub team: QuantumTeam,
    pub trace: Vec<GlueStep>,
}

/// Larger supports first, then lexicographic; strict supersets therefore
/// precede their subsets.
pub fn order_supports<'a, I: IntoIterator<Item = &'a SymbolSet>>(supports: I) -> Vec<SymbolSet> {
    let mut out: Vec<SymbolSet> = supports.into_iter().cloned().collect();
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out.dedup();
    out
}

fn invariant(message: String) -> DecideError {
    DecideError::InternalInvariant(message)
}

/// `X(V)`: each `s` repeated `d(s)·t` times in canonical order, `t` the
/// least common denominator.
pub fn block_rows(dist: &Distribution) -> Vec<Assignment> {
    let t = Rational::from_integer(dist.common_denominator());
    let mut rows = Vec::new();
    for (s, p) in dist.iter() {
        let n = (p * &t).to_integer().to_usize().expect("block size fits");
        rows.extend(std::iter::repeat_n(s, n));
    }
    rows
}

fn count_on(rows: &[Assignment], support: &SymbolSet) -> (usize, BTreeMap<Assignment, usize>) {
    let mut k = 0;
    let mut counts = BTreeMap::new();
    for r in rows {
        if let Some(s) = r.restrict(support) {
            k += 1;
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    (k, counts)
}

/// Checks that every placed support is defined somewhere and keeps its
/// block distribution.
fn check_stage(rows: &[Assignment], placed: &[(SymbolSet, Distribution)]) -> Result<(), DecideError> {
    for (v, dist) in placed {
        let (k, counts) = count_on(rows, v);
        if k == 0 {
            return Err(invariant(format!(
                "no row is defined on {} after gluing",
                prop::format_set(v)
            )));
        }
        let total = Rational::from_integer(k.into());
        for (s, p) in dist.iter() {
            let n = counts.get(&s).copied().unwrap_or(0);
            if Rational::from_integer(n.into()) / &total != p {
                return Err(invariant(format!(
                    "probability of {s} on {} drifted during gluing",
                    prop::format_set(v)
                )));
            }
        }
    }
    Ok(())
}

/// Glues the per-support blocks into one quantum team.
pub fn synthesize(
    blocks: &BTreeMap<SymbolSet, Distribution>,
    limits: &Limits,
) -> Result<Synthesis, DecideError> {
    let order = order_supports(blocks.keys());
    let mut rows: Vec<Assignment> = Vec::new();
    let mut trace = Vec::new();
    let mut placed: Vec<(SymbolSet, Distribution)> = Vec::new();
    for (i, v) in order.iter().enumerate() {
        let dist = &blocks[v];
        let block = block_rows(dist);
        let p = block.len();
        let has_superset = order[..i].iter().any(|w| v.is_subset(w) && v != w);
        let kind = if i == 0 {
            rows.extend(block);
            GlueKind::Base { rows: p }
        } else if !has_superset {
            rows.extend(block);
            GlueKind::Append { p }
        } else {
            let (k, b) = count_on(&rows, v);
            if k == 0 {
                return Err(invariant(format!(
                    "support {} has a placed superset but no covering row",
                    prop::format_set(v)
                )));
            }
            let mut a: BTreeMap<Assignment, usize> = BTreeMap::new();
            for s in &block {
                *a.entry(s.clone()).or_insert(0) += 1;
            }
            let overflow = || DecideError::ResourceCap {
                resource: "team rows",
                count: usize::MAX,
                cap: limits.max_team_rows,
            };
            let extra = k.checked_mul(p - 1).ok_or_else(overflow)?;
            if rows.len().saturating_add(extra) > limits.max_team_rows {
                return Err(DecideError::ResourceCap {
                    resource: "team rows",
                    count: rows.len().saturating_add(extra),
                    cap: limits.max_team_rows,
                });
            }
            let mut added = Vec::new();
            let mut sum: i128 = 0;
            for s in prop::assignments(v) {
                let a_s = a.get(&s).copied().unwrap_or(0) as i128;
                let b_s = b.get(&s).copied().unwrap_or(0) as i128;
                let n = a_s * k as i128 - b_s;
                if n < 0 || n > extra as i128 {
                    return Err(invariant(format!(
                        "multiplicity {n} of {s} on {} is outside [0, {extra}]",
                        prop::format_set(v)
                    )));
                }
                sum += n;
                added.push((s, n as usize));
            }
            if sum != extra as i128 {
                return Err(invariant(format!(
                    "added rows on {} sum to {sum}, expected {extra}",
                    prop::format_set(v)
                )));
            }
            for (s, n) in &added {
                rows.extend(std::iter::repeat_n(s.clone(), *n));
            }
            GlueKind::Glue { k, p, added }
        };
        if rows.len() > limits.max_team_rows {
            return Err(DecideError::ResourceCap {
                resource: "team rows",
                count: rows.len(),
                cap: limits.max_team_rows,
            });
        }
        placed.push((v.clone(), dist.clone()));
        check_stage(&rows, &placed)?;
        trace.push(GlueStep {
            support: v.clone(),
            kind,
            rows_after: rows.len(),
        });
    }
    let team = QuantumTeam::new(rows).map_err(|e| invariant(e.to_string()))?;
    Ok(Synthesis { team, trace })
}
