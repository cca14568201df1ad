//! Attribute universes and bitmask attribute sets.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard upper bound on the size of an attribute universe.
pub const MAX_ATTRIBUTES: usize = 24;

/// Default cap on the number of attributes a single query may enumerate
/// subsets of (2^cap transactions).
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// A set of attributes, as a bitmask over positions `0..n`.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttrSet(u32);

impl AttrSet {
    pub const EMPTY: AttrSet = AttrSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        AttrSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        debug_assert!(index < MAX_ATTRIBUTES);
        AttrSet(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(AttrSet::EMPTY, |acc, i| acc.union(AttrSet::singleton(i)))
    }

    pub const fn union(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & other.0)
    }

    pub const fn difference(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, index: usize) -> bool {
        index < 32 && self.0 & (1 << index) != 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits & (1 << i) != 0)
    }

    /// All subsets of `self`, in increasing bitmask order, starting at ∅.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: Some(0),
        }
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AttrSet({:#b})", self.0)
    }
}

/// Iterator over all submasks of a mask.
#[derive(Debug, Clone)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = AttrSet;

    fn next(&mut self) -> Option<AttrSet> {
        let current = self.next?;
        self.next = if current == self.mask {
            None
        } else {
            Some(current.wrapping_sub(self.mask) & self.mask)
        };
        Some(AttrSet(current))
    }
}

/// Named attributes, mapped to bit positions by order of appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
    enumeration_cap: usize,
}

impl Universe {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut universe = Universe::empty();
        for name in names {
            let name = name.into();
            if universe.index_of(&name).is_some() {
                return Err(Error::Contract(format!("duplicate attribute `{name}`")));
            }
            universe.intern(&name)?;
        }
        Ok(universe)
    }

    pub fn empty() -> Self {
        Universe {
            names: Vec::new(),
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    /// Single-letter universe `A, B, C, ...` of size `n`.
    pub fn letters(n: usize) -> Result<Self> {
        Universe::new((0..n).map(|i| {
            char::from_u32('A' as u32 + i as u32)
                .map(String::from)
                .unwrap_or_else(|| format!("a{i}"))
        }))
    }

    /// Raises or lowers the enumeration cap (at most [`MAX_ATTRIBUTES`]).
    pub fn with_enumeration_cap(mut self, cap: usize) -> Result<Self> {
        if cap > MAX_ATTRIBUTES {
            return Err(Error::ResourceCap {
                needed: cap,
                cap: MAX_ATTRIBUTES,
            });
        }
        self.enumeration_cap = cap;
        Ok(self)
    }

    pub fn enumeration_cap(&self) -> usize {
        self.enumeration_cap
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn full(&self) -> AttrSet {
        AttrSet::from_bits(((1u64 << self.names.len()) - 1) as u32)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Returns the position of `name`, appending it if new.
    pub fn intern(&mut self, name: &str) -> Result<usize> {
        if let Some(i) = self.index_of(name) {
            return Ok(i);
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::Contract(format!(
                "attribute names must be non-empty without whitespace, got `{name}`"
            )));
        }
        if self.names.len() == MAX_ATTRIBUTES {
            return Err(Error::ResourceCap {
                needed: MAX_ATTRIBUTES + 1,
                cap: MAX_ATTRIBUTES,
            });
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn set<'a, I: IntoIterator<Item = &'a str>>(&self, names: I) -> Result<AttrSet> {
        names.into_iter().try_fold(AttrSet::EMPTY, |acc, name| {
            self.index_of(name)
                .map(|i| acc.union(AttrSet::singleton(i)))
                .ok_or_else(|| Error::UniverseMismatch(format!("unknown attribute `{name}`")))
        })
    }

    /// Parses a whitespace-separated attribute list, or a run of
    /// single-letter names (`"ACD"`) when every letter is an attribute.
    pub fn parse_set(&self, text: &str) -> Result<AttrSet> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() == 1 && self.index_of(tokens[0]).is_none() {
            let letters: Vec<String> = tokens[0].chars().map(String::from).collect();
            if letters.iter().all(|l| self.index_of(l).is_some()) {
                return self.set(letters.iter().map(String::as_str));
            }
        }
        self.set(tokens)
    }

    pub fn check(&self, set: AttrSet) -> Result<()> {
        if set.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch(format!(
                "attribute set {set:?} has bits outside a universe of {} attributes",
                self.len()
            )))
        }
    }

    /// Space-separated attribute names, in universe order.
    pub fn format(&self, set: AttrSet) -> String {
        set.indices()
            .map(|i| self.names.get(i).map_or("?", String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `true` if `self` starts with every attribute of `other`, in order.
    pub fn extends(&self, other: &Universe) -> bool {
        self.names.len() >= other.names.len() && self.names[..other.names.len()] == other.names[..]
    }
}

pub type SharedUniverse = Arc<Universe>;

pub(crate) fn same_universe(a: &SharedUniverse, b: &SharedUniverse) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}
