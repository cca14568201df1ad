//! Partial implications, datasets and the confidence semantics.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::attrs::{same_universe, AttrSet, SharedUniverse, Universe};
use crate::error::{Error, Result};
use crate::rational::{in_unit_interval, Rational};

/// A pair `X → Y` read as "confidence of Y given X is at least γ".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialImplication {
    pub antecedent: AttrSet,
    pub consequent: AttrSet,
}

impl PartialImplication {
    pub const fn new(antecedent: AttrSet, consequent: AttrSet) -> Self {
        PartialImplication { antecedent, consequent }
    }

    /// `XY`, the attributes a witnessing transaction must contain.
    pub const fn both(&self) -> AttrSet {
        self.antecedent.union(self.consequent)
    }

    /// Classically valid: `Y ⊆ X`.
    pub const fn is_trivial(&self) -> bool {
        self.consequent.is_subset_of(self.antecedent)
    }
}

/// How a transaction relates to an implication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverStatus {
    /// `X ⊄ Z`.
    NotCovered,
    /// `X ⊆ Z` but `Y ⊄ Z`.
    Violated,
    /// `XY ⊆ Z`.
    Witnessed,
}

pub fn cover_status(z: AttrSet, imp: &PartialImplication) -> CoverStatus {
    if !imp.antecedent.is_subset_of(z) {
        CoverStatus::NotCovered
    } else if imp.consequent.is_subset_of(z) {
        CoverStatus::Witnessed
    } else {
        CoverStatus::Violated
    }
}

pub(crate) fn check_gamma(gamma: &Rational) -> Result<()> {
    if in_unit_interval(gamma) {
        Ok(())
    } else {
        Err(Error::Domain(format!("confidence threshold {gamma} outside [0, 1]")))
    }
}

/// Weight of a cover status at threshold γ: `1−γ`, `−γ` or `0`.
pub fn status_weight(status: CoverStatus, gamma: &Rational) -> Rational {
    match status {
        CoverStatus::Witnessed => Rational::one() - gamma,
        CoverStatus::Violated => -gamma.clone(),
        CoverStatus::NotCovered => Rational::zero(),
    }
}

/// `w_Z(X → Y)` at threshold γ.
pub fn weight(z: AttrSet, imp: &PartialImplication, gamma: &Rational) -> Result<Rational> {
    check_gamma(gamma)?;
    Ok(status_weight(cover_status(z, imp), gamma))
}

/// An ordered list of implications over one universe. Premise `i` in the
/// mathematical notation is index `i − 1` here.
#[derive(Debug, Clone)]
pub struct ImplicationSet {
    universe: SharedUniverse,
    implications: Vec<PartialImplication>,
}

impl ImplicationSet {
    pub fn new(universe: SharedUniverse, implications: Vec<PartialImplication>) -> Result<Self> {
        for imp in &implications {
            universe.check(imp.both())?;
        }
        Ok(ImplicationSet { universe, implications })
    }

    pub fn empty(universe: SharedUniverse) -> Self {
        ImplicationSet {
            universe,
            implications: Vec::new(),
        }
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    pub fn implications(&self) -> &[PartialImplication] {
        &self.implications
    }

    pub fn len(&self) -> usize {
        self.implications.len()
    }

    pub fn is_empty(&self) -> bool {
        self.implications.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&PartialImplication> {
        self.implications.get(index)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PartialImplication> {
        self.implications.iter()
    }

    /// `U = X₁Y₁ ⋯ X_kY_k`.
    pub fn occurring(&self) -> AttrSet {
        self.implications
            .iter()
            .fold(AttrSet::EMPTY, |acc, imp| acc.union(imp.both()))
    }

    /// The implications at the given positions, in the given order.
    pub fn select(&self, indices: &[usize]) -> ImplicationSet {
        ImplicationSet {
            universe: Arc::clone(&self.universe),
            implications: indices.iter().map(|&i| self.implications[i]).collect(),
        }
    }

    /// The same implications over a universe that extends the current one.
    pub fn rebase(&self, universe: SharedUniverse) -> Result<ImplicationSet> {
        if !universe.extends(&self.universe) {
            return Err(Error::UniverseMismatch(
                "new universe does not extend the old one".into(),
            ));
        }
        ImplicationSet::new(universe, self.implications.clone())
    }

    pub fn format_implication(&self, imp: &PartialImplication) -> String {
        format_implication(&self.universe, imp)
    }
}

impl<'a> IntoIterator for &'a ImplicationSet {
    type Item = &'a PartialImplication;
    type IntoIter = std::slice::Iter<'a, PartialImplication>;

    fn into_iter(self) -> Self::IntoIter {
        self.implications.iter()
    }
}

impl fmt::Display for ImplicationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for imp in &self.implications {
            writeln!(f, "{}", self.format_implication(imp))?;
        }
        Ok(())
    }
}

/// `X -> Y` with space-separated attribute names; empty sides stay empty.
pub fn format_implication(universe: &Universe, imp: &PartialImplication) -> String {
    let lhs = universe.format(imp.antecedent);
    let rhs = universe.format(imp.consequent);
    match (lhs.is_empty(), rhs.is_empty()) {
        (true, true) => "->".to_string(),
        (true, false) => format!("-> {rhs}"),
        (false, true) => format!("{lhs} ->"),
        (false, false) => format!("{lhs} -> {rhs}"),
    }
}

/// A multiset of transactions. Absent keys have multiplicity zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    universe: SharedUniverse,
    multiplicities: BTreeMap<AttrSet, u64>,
}

impl Dataset {
    pub fn new(universe: SharedUniverse) -> Self {
        Dataset {
            universe,
            multiplicities: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I>(universe: SharedUniverse, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (AttrSet, u64)>,
    {
        let mut d = Dataset::new(universe);
        for (z, count) in pairs {
            d.add(z, count)?;
        }
        Ok(d)
    }

    pub fn add(&mut self, transaction: AttrSet, count: u64) -> Result<()> {
        self.universe.check(transaction)?;
        if count == 0 {
            return Ok(());
        }
        let slot = self.multiplicities.entry(transaction).or_insert(0);
        *slot = slot
            .checked_add(count)
            .ok_or_else(|| Error::Domain("multiplicity overflow".into()))?;
        Ok(())
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    pub fn multiplicity(&self, transaction: AttrSet) -> u64 {
        self.multiplicities.get(&transaction).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (AttrSet, u64)> + '_ {
        self.multiplicities.iter().map(|(&z, &c)| (z, c))
    }

    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    /// Number of distinct transactions.
    pub fn distinct(&self) -> usize {
        self.multiplicities.len()
    }

    /// Total number of transactions, with multiplicity.
    pub fn size(&self) -> u128 {
        self.multiplicities.values().map(|&c| c as u128).sum()
    }

    /// `C_D[X]`: transactions that contain `x`, with multiplicity.
    pub fn support(&self, x: AttrSet) -> Result<u128> {
        self.universe.check(x)?;
        Ok(self
            .iter()
            .filter(|(z, _)| x.is_subset_of(*z))
            .map(|(_, c)| c as u128)
            .sum())
    }

    /// `C_D[XY] / C_D[X]`, or `None` when nothing covers `X`.
    pub fn confidence(&self, imp: &PartialImplication) -> Result<Option<Rational>> {
        let covered = self.support(imp.antecedent)?;
        if covered == 0 {
            return Ok(None);
        }
        let witnessed = self.support(imp.both())?;
        Ok(Some(Rational::new(BigInt::from(witnessed), BigInt::from(covered))))
    }

    /// `Σ_Z w_Z(X → Y) · x_Z`. Non-negative exactly when the dataset
    /// satisfies the implication at γ.
    pub fn weight_balance(&self, imp: &PartialImplication, gamma: &Rational) -> Result<Rational> {
        check_gamma(gamma)?;
        self.universe.check(imp.both())?;
        Ok(self.iter().fold(Rational::zero(), |acc, (z, count)| {
            acc + status_weight(cover_status(z, imp), gamma) * BigInt::from(count)
        }))
    }

    /// `D ⊨_γ X → Y`: either nothing covers X, or the confidence is ≥ γ.
    pub fn satisfies(&self, imp: &PartialImplication, gamma: &Rational) -> Result<bool> {
        check_gamma(gamma)?;
        Ok(match self.confidence(imp)? {
            None => true,
            Some(conf) => conf >= *gamma,
        })
    }

    pub fn same_universe(&self, other: &SharedUniverse) -> bool {
        same_universe(&self.universe, other)
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (z, count) in self.iter() {
            let name = self.universe.format(z);
            let name = if name.is_empty() { "∅".to_string() } else { name };
            writeln!(f, "{count} × {{{name}}}")?;
        }
        Ok(())
    }
}

pub fn support(d: &Dataset, x: AttrSet) -> Result<u128> {
    d.support(x)
}

pub fn satisfies(d: &Dataset, imp: &PartialImplication, gamma: &Rational) -> Result<bool> {
    d.satisfies(imp, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn setup() -> (SharedUniverse, impl Fn(&str) -> AttrSet) {
        let u = Arc::new(Universe::letters(4).unwrap());
        let u2 = Arc::clone(&u);
        (u, move |s: &str| u2.parse_set(s).unwrap())
    }

    #[test]
    fn cover_status_cases() {
        let (_, s) = setup();
        let a_b = PartialImplication::new(s("A"), s("B"));
        assert_eq!(cover_status(s("ABC"), &a_b), CoverStatus::Witnessed);
        assert_eq!(cover_status(s("AC"), &a_b), CoverStatus::Violated);
        assert_eq!(cover_status(s("C"), &a_b), CoverStatus::NotCovered);
    }

    #[test]
    fn weight_table() {
        let (_, s) = setup();
        let a_b = PartialImplication::new(s("A"), s("B"));
        let half = rat(1, 2);
        assert_eq!(weight(s("AB"), &a_b, &half).unwrap(), rat(1, 2));
        assert_eq!(weight(s("A"), &a_b, &half).unwrap(), rat(-1, 2));
        assert_eq!(weight(AttrSet::EMPTY, &a_b, &half).unwrap(), int(0));
        assert!(matches!(weight(s("A"), &a_b, &rat(3, 2)), Err(Error::Domain(_))));
        assert!(weight(s("A"), &a_b, &rat(-1, 2)).is_err());
    }

    #[test]
    fn support_counts_with_multiplicity() {
        let (u, s) = setup();
        let d = Dataset::from_pairs(u, [(s("AB"), 3), (s("A"), 1)]).unwrap();
        assert_eq!(d.support(s("A")).unwrap(), 4);
        assert_eq!(d.support(s("AB")).unwrap(), 3);
        assert_eq!(d.support(AttrSet::EMPTY).unwrap(), 4);
        assert!(d.support(AttrSet::from_bits(1 << 7)).is_err());
    }

    #[test]
    fn satisfies_examples() {
        let (u, s) = setup();
        let d = Dataset::from_pairs(Arc::clone(&u), [(s("AB"), 3), (s("A"), 1)]).unwrap();
        let a_b = PartialImplication::new(s("A"), s("B"));
        assert!(d.satisfies(&a_b, &rat(3, 4)).unwrap());
        assert!(!d.satisfies(&a_b, &rat(4, 5)).unwrap());

        let only_c = Dataset::from_pairs(u, [(s("C"), 7)]).unwrap();
        for g in [int(0), rat(1, 3), int(1)] {
            assert!(only_c.satisfies(&a_b, &g).unwrap());
        }
    }

    #[test]
    fn empty_antecedent_uses_global_frequency() {
        let (u, s) = setup();
        let d = Dataset::from_pairs(Arc::clone(&u), [(s("B"), 1), (s("A"), 1)]).unwrap();
        let to_b = PartialImplication::new(AttrSet::EMPTY, s("B"));
        assert!(d.satisfies(&to_b, &rat(1, 2)).unwrap());
        assert!(!d.satisfies(&to_b, &rat(2, 3)).unwrap());
        assert!(Dataset::new(u).satisfies(&to_b, &int(1)).unwrap());
    }

    #[test]
    fn zero_multiplicity_is_not_stored() {
        let (u, s) = setup();
        let d = Dataset::from_pairs(u, [(s("A"), 0)]).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn implication_set_rejects_foreign_bits() {
        let (u, _) = setup();
        let stray = PartialImplication::new(AttrSet::from_bits(1 << 9), AttrSet::EMPTY);
        assert!(matches!(
            ImplicationSet::new(u, vec![stray]),
            Err(Error::UniverseMismatch(_))
        ));
    }

    #[test]
    fn formatting_keeps_empty_sides_empty() {
        let (u, s) = setup();
        assert_eq!(
            format_implication(&u, &PartialImplication::new(s("A"), AttrSet::EMPTY)),
            "A ->"
        );
        assert_eq!(
            format_implication(&u, &PartialImplication::new(AttrSet::EMPTY, s("B"))),
            "-> B"
        );
        assert_eq!(
            format_implication(&u, &PartialImplication::new(s("BD"), s("AC"))),
            "B D -> A C"
        );
    }
}
