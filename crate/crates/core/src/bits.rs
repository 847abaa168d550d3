//! Fixed-width bit sets over the feature axis.
//!
//! Column patterns, simplices, and x-group supports are all subsets of the
//! same ordered feature list, so they share one compact representation: a
//! `BitSet` of the relation's row width. Bit `i` corresponds to the `i`-th
//! feature label.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

/// A subset of `{0, .., width-1}`, packed into 64-bit words.
///
/// Bits beyond `width` are kept zero, so equality and hashing of the word
/// vector agree with set equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    width: usize,
    words: Vec<u64>,
}

impl BitSet {
    /// The empty subset of a domain with `width` elements.
    pub fn new(width: usize) -> Self {
        BitSet {
            width,
            words: vec![0; width.div_ceil(WORD_BITS)],
        }
    }

    /// Build a set from member indices. Panics if an index is out of range.
    pub fn from_indices(width: usize, indices: &[usize]) -> Self {
        let mut set = BitSet::new(width);
        for &i in indices {
            set.insert(i);
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.width, "bit index {index} out of range");
        self.words[index / WORD_BITS] |= 1 << (index % WORD_BITS);
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < self.width, "bit index {index} out of range");
        self.words[index / WORD_BITS] &= !(1 << (index % WORD_BITS));
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.width && self.words[index / WORD_BITS] & (1 << (index % WORD_BITS)) != 0
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// True when the two sets share at least one member.
    pub fn intersects(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Indices set in exactly one of the two sets.
    pub fn symmetric_difference(&self, other: &BitSet) -> impl Iterator<Item = usize> + '_ {
        debug_assert_eq!(self.width, other.width);
        WordOnes::new(
            self.words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a ^ b)
                .collect(),
        )
    }

    /// Member indices in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        WordOnes::new(self.words.clone())
    }

    /// Total order on sets of equal width: compare the characteristic
    /// strings `b0 b1 b2 ...` lexicographically. The empty set sorts first.
    pub fn cmp_bitstring(&self, other: &BitSet) -> Ordering {
        debug_assert_eq!(self.width, other.width);
        for (a, b) in self.words.iter().zip(&other.words) {
            let ord = a.reverse_bits().cmp(&b.reverse_bits());
            if ord != Ordering::Equal {
                return ord;
            }
        }
        Ordering::Equal
    }

}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitSet{{")?;
        for (i, idx) in self.ones().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "}}/{}", self.width)
    }
}

/// Iterator over set-bit indices of a word vector.
struct WordOnes {
    words: Vec<u64>,
    word_index: usize,
    current: u64,
}

impl WordOnes {
    fn new(words: Vec<u64>) -> Self {
        let current = words.first().copied().unwrap_or(0);
        WordOnes {
            words,
            word_index: 0,
            current,
        }
    }
}

impl Iterator for WordOnes {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_index += 1;
            if self.word_index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_index];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_index * WORD_BITS + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_remove() {
        let mut s = BitSet::new(130);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.count_ones(), 4);
        assert!(s.contains(129));
        assert!(!s.contains(128));
        s.remove(64);
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0, 63, 129]);
    }

    #[test]
    fn subset_and_intersection() {
        let a = BitSet::from_indices(8, &[1, 3]);
        let b = BitSet::from_indices(8, &[1, 3, 5]);
        let c = BitSet::from_indices(8, &[0, 7]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        assert!(BitSet::new(8).is_subset(&a));
    }

    #[test]
    fn symmetric_difference_indices() {
        let a = BitSet::from_indices(70, &[0, 5, 69]);
        let b = BitSet::from_indices(70, &[5, 6]);
        assert_eq!(
            a.symmetric_difference(&b).collect::<Vec<_>>(),
            vec![0, 6, 69]
        );
    }

    #[test]
    fn bitstring_order() {
        let empty = BitSet::new(4);
        let x0 = BitSet::from_indices(4, &[0]);
        let x1 = BitSet::from_indices(4, &[1]);
        let x3 = BitSet::from_indices(4, &[3]);
        let x01 = BitSet::from_indices(4, &[0, 1]);
        // as strings: 0000 < 0001 < 0100 < 1000 < 1100
        let mut sets = vec![x01.clone(), x3.clone(), empty.clone(), x0.clone(), x1.clone()];
        sets.sort_by(|a, b| a.cmp_bitstring(b));
        assert_eq!(sets, vec![empty, x3, x1, x0, x01]);
    }

    #[test]
    fn order_spans_words() {
        let lo = BitSet::from_indices(130, &[65]);
        let hi = BitSet::from_indices(130, &[2]);
        assert_eq!(lo.cmp_bitstring(&hi), Ordering::Less);
    }
}
