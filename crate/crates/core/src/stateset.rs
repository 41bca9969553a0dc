//! Dense bitset over the states of one host automaton.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD: usize = 64;

/// A subset of the states `0..universe` of some automaton.
///
/// Equality, ordering and hashing are extensional: two sets over the same
/// universe compare equal iff they have the same members.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet {
    universe: usize,
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn singleton(universe: usize, member: usize) -> Self {
        let mut set = Self::empty(universe);
        set.insert(member);
        set
    }

    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut set = Self::empty(universe);
        for m in members {
            set.insert(m);
        }
        set
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the host state space, not the number of members.
    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// # Panics
    /// If `member` lies outside the universe.
    #[inline]
    pub fn insert(&mut self, member: usize) -> bool {
        assert!(
            member < self.universe,
            "state {member} outside universe {}",
            self.universe
        );
        let (w, b) = (member / WORD, member % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, member: usize) -> bool {
        if member >= self.universe {
            return false;
        }
        let (w, b) = (member / WORD, member % WORD);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, member: usize) -> bool {
        member < self.universe && self.words[member / WORD] & (1 << (member % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &StateSet) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> StateSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    /// Members in increasing index order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a StateSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra_across_word_boundary() {
        let a = StateSet::from_members(130, [0, 63, 64, 129]);
        let b = StateSet::from_members(130, [63, 64, 100]);
        assert_eq!(a.len(), 4);
        assert_eq!(a.intersection(&b).to_vec(), vec![63, 64]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 63, 64, 100, 129]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 129]);
        assert!(!a.is_subset(&b));
        assert!(a.intersection(&b).is_subset(&b));
        assert_eq!(StateSet::full(130).len(), 130);
        assert_eq!(a.complement().len(), 126);
    }

    #[test]
    fn empty_universe() {
        let e = StateSet::empty(0);
        assert!(e.is_empty());
        assert_eq!(e.iter().count(), 0);
        assert_eq!(StateSet::full(0), e);
    }

    #[test]
    fn equality_is_extensional() {
        let mut a = StateSet::from_members(10, [3, 1]);
        let b = StateSet::from_members(10, [1, 3, 3]);
        assert_eq!(a, b);
        a.remove(3);
        assert_ne!(a, b);
    }
}
