//! Transactions grouped by how they relate to a list of implications.
//!
//! Two transactions with the same cover status on every implication yield
//! the same LP row, so enumeration keeps one representative per signature.

use std::collections::HashSet;

use crate::attrs::AttrSet;
use crate::error::{Error, Result};
use crate::model::{cover_status, CoverStatus, PartialImplication};

/// Which implications a transaction witnesses and which it violates.
/// Bit `j` refers to the `j`-th implication of the enumerated list; the
/// entailment module puts the conclusion at position 0 and premise `i` at
/// position `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConstraintSignature {
    pub witnessed: u64,
    pub violated: u64,
}

impl ConstraintSignature {
    pub fn of(z: AttrSet, implications: &[PartialImplication]) -> Self {
        let mut sig = ConstraintSignature {
            witnessed: 0,
            violated: 0,
        };
        for (j, imp) in implications.iter().enumerate() {
            match cover_status(z, imp) {
                CoverStatus::Witnessed => sig.witnessed |= 1 << j,
                CoverStatus::Violated => sig.violated |= 1 << j,
                CoverStatus::NotCovered => {}
            }
        }
        sig
    }

    pub fn status(&self, j: usize) -> CoverStatus {
        if self.witnessed >> j & 1 == 1 {
            CoverStatus::Witnessed
        } else if self.violated >> j & 1 == 1 {
            CoverStatus::Violated
        } else {
            CoverStatus::NotCovered
        }
    }

    pub fn covered(&self) -> u64 {
        self.witnessed | self.violated
    }
}

/// A signature together with the first transaction (in increasing bitmask
/// order) that produces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignatureRow {
    pub signature: ConstraintSignature,
    pub representative: AttrSet,
}

pub const MAX_LISTED_IMPLICATIONS: usize = 64;

/// Distinct signatures over all `Z ⊆ attributes` accepted by `keep`.
///
/// Fails with a resource error when `attributes` has more than `cap`
/// elements.
pub fn enumerate_signatures<F>(
    implications: &[PartialImplication],
    attributes: AttrSet,
    cap: usize,
    keep: F,
) -> Result<Vec<SignatureRow>>
where
    F: Fn(AttrSet) -> bool,
{
    if attributes.len() > cap {
        return Err(Error::ResourceCap {
            needed: attributes.len(),
            cap,
        });
    }
    if implications.len() > MAX_LISTED_IMPLICATIONS {
        return Err(Error::Contract(format!(
            "at most {} implications per signature list, got {}",
            MAX_LISTED_IMPLICATIONS,
            implications.len()
        )));
    }
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for z in attributes.subsets().filter(|&z| keep(z)) {
        let signature = ConstraintSignature::of(z, implications);
        if seen.insert(signature) {
            rows.push(SignatureRow {
                signature,
                representative: z,
            });
        }
    }
    Ok(rows)
}
