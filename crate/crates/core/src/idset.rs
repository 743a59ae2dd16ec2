use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A subset of `0..len` with a canonical order: lexicographic on the sorted
/// member list.
#[derive(Clone, PartialEq, Eq)]
pub struct IdSet(FixedBitSet);

impl IdSet {
    pub fn empty(len: usize) -> Self {
        IdSet(FixedBitSet::with_capacity(len))
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        IdSet(bits)
    }

    pub fn from_iter_with_len<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Self {
        let mut bits = FixedBitSet::with_capacity(len);
        for i in items {
            bits.insert(i);
        }
        IdSet(bits)
    }

    pub fn full(len: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(len);
        bits.insert_range(..);
        IdSet(bits)
    }

    pub fn universe_len(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &IdSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &IdSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &IdSet) -> IdSet {
        let mut out = self.0.clone();
        out.union_with(&other.0);
        IdSet(out)
    }

    pub fn intersection(&self, other: &IdSet) -> IdSet {
        let mut out = self.0.clone();
        out.intersect_with(&other.0);
        IdSet(out)
    }

    pub fn difference(&self, other: &IdSet) -> IdSet {
        let mut out = self.0.clone();
        out.difference_with(&other.0);
        IdSet(out)
    }

    pub fn complement(&self) -> IdSet {
        let mut out = self.0.clone();
        out.toggle_range(..);
        IdSet(out)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }
}

impl Ord for IdSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.ones().cmp(other.0.ones()))
    }
}

impl PartialOrd for IdSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for IdSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for IdSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

impl Serialize for IdSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.ones())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_lexicographic() {
        let a = IdSet::from_iter_with_len(8, [0, 5]);
        let b = IdSet::from_iter_with_len(8, [1]);
        let c = IdSet::from_iter_with_len(8, [0]);
        assert!(c < a);
        assert!(a < b);
        assert!(IdSet::empty(8) < c);
    }

    #[test]
    fn set_algebra() {
        let a = IdSet::from_iter_with_len(6, [0, 1, 2]);
        let b = IdSet::from_iter_with_len(6, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 1]);
        assert_eq!(b.complement().to_vec(), vec![0, 1, 4, 5]);
        assert_eq!(IdSet::full(3).len(), 3);
    }
}
