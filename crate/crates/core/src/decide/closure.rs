//! The auxiliary conjuncts `β_𝒱` and `γ_α` added before the search.

use std::collections::BTreeSet;

use log::debug;

use super::{DecideError, Limits};
use crate::logic::{Component, QtlFormula};
use crate::prop::{self, Assignment, PropFormula, SymbolSet};

/// `(φ_s; V)` for an assignment `s` on a subset of `V`.
pub fn minterm_component(s: &Assignment, support: &SymbolSet) -> Component {
    let phi = prop::minterm(s).expect("minterm of a nonempty assignment");
    Component::new(phi, support.clone()).expect("minterm symbols lie in the support")
}

fn pinned(c: Component, value: i64) -> QtlFormula {
    QtlFormula::equals(vec![(1, c)], value).expect("one term")
}

/// Fails when `Σ_V 2^|V|` exceeds the conjunct cap.
pub(crate) fn check_conjunct_cap(
    supports: &BTreeSet<SymbolSet>,
    limits: &Limits,
) -> Result<(), DecideError> {
    let mut total: usize = 0;
    for v in supports {
        let size = 1usize
            .checked_shl(v.len() as u32)
            .filter(|_| v.len() < usize::BITS as usize - 1)
            .unwrap_or(usize::MAX);
        total = total.saturating_add(size);
    }
    if total > limits.max_conjuncts {
        return Err(DecideError::ResourceCap {
            resource: "minterm conjuncts",
            count: total,
            cap: limits.max_conjuncts,
        });
    }
    Ok(())
}

/// `β⁰ ∧ β¹`: for `V ⊊ V′` in `𝒱` and `s ∈ 2^V`,
/// `(φ_s; V) = 0 → (φ_s; V′) = 0` and `(φ_s; V) = 1 → (φ_s; V′) = 1`.
/// Pairs with `V = V′` are tautologies and left out.
pub fn build_beta(supports: &BTreeSet<SymbolSet>, limits: &Limits) -> Result<QtlFormula, DecideError> {
    check_conjunct_cap(supports, limits)?;
    let mut parts = Vec::new();
    let mut pruned = 0;
    for v in supports {
        for w in supports {
            if !v.is_subset(w) {
                continue;
            }
            if v == w {
                pruned += 2 << v.len();
                continue;
            }
            for value in [0, 1] {
                for s in prop::assignments(v) {
                    let lhs = pinned(minterm_component(&s, v), value);
                    let rhs = pinned(minterm_component(&s, w), value);
                    parts.push(lhs.implies(rhs));
                }
            }
        }
    }
    debug!("beta: {} implications, {pruned} reflexive ones pruned", parts.len());
    Ok(QtlFormula::conjunction(parts))
}

/// `γ⁰ ∧ γ¹` for `α`, over `𝒱 = Sp(α)`.
///
/// `γ⁰` makes the `V`-minterm components of each support a probability
/// distribution. `γ¹` ties every other component `(ψ; V)` of `α` to the
/// minterms of its own support: `(ψ; V) = Σ_{t ∈ 2^V, t ⊨ ψ} (φ_t; V)`.
/// Components that already are `V`-minterms need no link.
pub fn build_gamma(alpha: &QtlFormula, limits: &Limits) -> Result<QtlFormula, DecideError> {
    let supports = alpha.support();
    check_conjunct_cap(&supports, limits)?;
    let mut parts = Vec::new();
    for v in &supports {
        let minterms: Vec<Component> = prop::assignments(v)
            .iter()
            .map(|s| minterm_component(s, v))
            .collect();
        let sum = minterms.iter().map(|c| (1, c.clone())).collect();
        parts.push(QtlFormula::equals(sum, 1).expect("nonempty sum"));
        for c in minterms {
            parts.push(QtlFormula::ge(vec![(1, c)], 0).expect("one term"));
        }
    }
    let mut linked = 0;
    let mut skipped = 0;
    for c in alpha.components_in_order() {
        let v = c.support();
        let models: Vec<Assignment> = prop::assignments(v)
            .into_iter()
            .filter(|t| prop::eval(c.formula(), t).expect("Var(φ) ⊆ V"))
            .collect();
        if let [only] = models.as_slice() {
            if prop::minterm(only).ok().as_ref() == Some::<&PropFormula>(c.formula()) {
                skipped += 1;
                continue;
            }
        }
        let mut terms = vec![(1, c.clone())];
        terms.extend(models.iter().map(|t| (-1, minterm_component(t, v))));
        parts.push(QtlFormula::equals(terms, 0).expect("nonempty"));
        linked += 1;
    }
    debug!("gamma: {} supports, {linked} links, {skipped} minterm components unlinked", supports.len());
    Ok(QtlFormula::conjunction(parts))
}
