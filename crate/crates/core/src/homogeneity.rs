//! Whether a set of implications enforces homogeneity ("is nice"): every
//! transaction that violates none of them either witnesses all of them or
//! covers none.

use crate::attrs::AttrSet;
use crate::error::{Error, Result};
use crate::model::{ImplicationSet, PartialImplication};

/// Least superset of `start` closed under firing every implication
/// classically (`X ⊆ C ⇒ Y ⊆ C`).
pub fn horn_closure(start: AttrSet, sigma: &ImplicationSet) -> AttrSet {
    closure_of(start, sigma.implications())
}

pub(crate) fn closure_of(start: AttrSet, implications: &[PartialImplication]) -> AttrSet {
    let mut closed = start;
    let mut fired = vec![false; implications.len()];
    loop {
        let mut changed = false;
        for (imp, done) in implications.iter().zip(fired.iter_mut()) {
            if !*done && imp.antecedent.is_subset_of(closed) {
                *done = true;
                let next = closed.union(imp.consequent);
                changed |= next != closed;
                closed = next;
            }
        }
        if !changed {
            return closed;
        }
    }
}

/// Closure test: the set is nice iff the closure of every antecedent
/// reaches `U = X₁Y₁⋯X_kY_k`.
pub fn enforces_homogeneity(sigma: &ImplicationSet) -> bool {
    implications_nice(sigma.implications())
}

pub(crate) fn implications_nice(implications: &[PartialImplication]) -> bool {
    let occurring = implications
        .iter()
        .fold(AttrSet::EMPTY, |acc, imp| acc.union(imp.both()));
    implications
        .iter()
        .all(|imp| occurring.is_subset_of(closure_of(imp.antecedent, implications)))
}

/// Checks the definition directly on every `Z` over the occurring attributes.
pub fn brute_force_homogeneity(sigma: &ImplicationSet) -> Result<bool> {
    let occurring = sigma.occurring();
    let cap = sigma.universe().enumeration_cap();
    if occurring.len() > cap {
        return Err(Error::ResourceCap {
            needed: occurring.len(),
            cap,
        });
    }
    let homogeneous = occurring.subsets().all(|z| {
        let violates_none = sigma
            .iter()
            .all(|imp| !imp.antecedent.is_subset_of(z) || imp.both().is_subset_of(z));
        if !violates_none {
            return true;
        }
        let covers_none = sigma.iter().all(|imp| !imp.antecedent.is_subset_of(z));
        let witnesses_all = sigma.iter().all(|imp| imp.both().is_subset_of(z));
        covers_none || witnesses_all
    });
    Ok(homogeneous)
}

/// Two implications are nice together iff `X₁ ⊆ X₂Y₂` and `X₂ ⊆ X₁Y₁`.
pub fn two_premise_nicety(first: &PartialImplication, second: &PartialImplication) -> bool {
    first.antecedent.is_subset_of(second.both()) && second.antecedent.is_subset_of(first.both())
}
