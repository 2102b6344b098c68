use std::fmt;

use serde::{Deserialize, Serialize};

/// Maximum number of arrows a [`crate::FiniteGroupoid`] may carry.
pub const MAX_ARROWS: usize = 128;

/// A subset of the arrows of a finite groupoid, stored as a bitmask over
/// arrow indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowSet(u128);

impl ArrowSet {
    pub const EMPTY: ArrowSet = ArrowSet(0);

    #[inline]
    pub const fn from_bits(bits: u128) -> Self {
        ArrowSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn singleton(g: usize) -> Self {
        debug_assert!(g < MAX_ARROWS);
        ArrowSet(1u128 << g)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ARROWS);
        if n == MAX_ARROWS {
            ArrowSet(u128::MAX)
        } else {
            ArrowSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, g: usize) -> bool {
        g < MAX_ARROWS && self.0 >> g & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, g: usize) {
        self.0 |= 1u128 << g;
    }

    #[inline]
    pub fn remove(&mut self, g: usize) {
        self.0 &= !(1u128 << g);
    }

    #[inline]
    pub fn with(self, g: usize) -> Self {
        ArrowSet(self.0 | 1u128 << g)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        ArrowSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        ArrowSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        ArrowSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Number of members strictly below `g`; the position of `g` in
    /// increasing order when `g` is a member.
    #[inline]
    pub fn rank(self, g: usize) -> usize {
        if g == 0 {
            0
        } else {
            (self.0 & ((1u128 << g) - 1)).count_ones() as usize
        }
    }

    /// Smallest member.
    #[inline]
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// All subsets of `self`, starting with the empty set.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }
}

impl FromIterator<usize> for ArrowSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = ArrowSet::EMPTY;
        for g in iter {
            set.insert(g);
        }
        set
    }
}

impl IntoIterator for ArrowSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl fmt::Debug for ArrowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Members in increasing order.
#[derive(Clone)]
pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let g = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

/// Submask enumeration in increasing numeric order.
pub struct Subsets {
    mask: u128,
    next: Option<u128>,
}

impl Iterator for Subsets {
    type Item = ArrowSet;

    fn next(&mut self) -> Option<ArrowSet> {
        let cur = self.next?;
        self.next = if cur == self.mask {
            None
        } else {
            // next submask in increasing order
            Some(((cur | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(ArrowSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_iteration_agree() {
        let s: ArrowSet = [1, 4, 5, 90, 127].into_iter().collect();
        let members: Vec<_> = s.iter().collect();
        assert_eq!(members, vec![1, 4, 5, 90, 127]);
        for (i, g) in members.iter().enumerate() {
            assert_eq!(s.rank(*g), i);
        }
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s: ArrowSet = [0, 3, 7].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|t| t.is_subset(s)));
        let mut dedup = subs.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 8);
        assert_eq!(ArrowSet::EMPTY.subsets().count(), 1);
    }
}
