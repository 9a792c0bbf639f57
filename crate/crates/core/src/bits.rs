//! Positional bit sets used for configurations, Boolean states, mode elements
//! and rule sets.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

const WORD: usize = 64;

/// A finite set of non-negative positions.
///
/// The word vector never carries trailing zero words, so structural equality
/// and hashing coincide with set equality.
///
/// The total order is the canonical state order: two sets are compared at
/// the lowest position where they differ, and the set containing that
/// position is the greater one. Read as a digit string with position 0
/// first, this is plain numeric order (`00 < 01 < 10 < 11`).
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: SmallVec<[u64; 2]>,
}

/// A configuration of a P system or a Boolean state read as an indicator set.
pub type StateSet = BitSet;
/// A set of rules, addressed by their position in the owning system.
pub type RuleSet = BitSet;

impl BitSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(pos: usize) -> Self {
        let mut s = Self::new();
        s.insert(pos);
        s
    }

    /// All positions in `0..len`.
    pub fn full(len: usize) -> Self {
        (0..len).collect()
    }

    /// Decodes the low `len` bits of `code` so that enumerating `code` from 0
    /// upwards walks the canonical order: bit `len - 1 - i` of the code is
    /// position `i`.
    pub fn from_code(code: u64, len: usize) -> Self {
        debug_assert!(len <= 64);
        (0..len)
            .filter(|&i| (code >> (len - 1 - i)) & 1 == 1)
            .collect()
    }

    /// Inverse of [`BitSet::from_code`]; positions at or above `len` are ignored.
    pub fn to_code(&self, len: usize) -> u64 {
        debug_assert!(len <= 64);
        self.iter()
            .filter(|&i| i < len)
            .fold(0u64, |acc, i| acc | (1 << (len - 1 - i)))
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.words
            .get(pos / WORD)
            .is_some_and(|w| (w >> (pos % WORD)) & 1 == 1)
    }

    pub fn insert(&mut self, pos: usize) -> bool {
        let (w, b) = (pos / WORD, pos % WORD);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = (self.words[w] >> b) & 1 == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, pos: usize) -> bool {
        let (w, b) = (pos / WORD, pos % WORD);
        let Some(word) = self.words.get_mut(w) else {
            return false;
        };
        let present = (*word >> b) & 1 == 1;
        *word &= !(1 << b);
        self.trim();
        present
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// One past the largest member, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        match self.words.last() {
            None => 0,
            Some(&w) => (self.words.len() - 1) * WORD + (WORD - w.leading_zeros() as usize),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let n = self.words.len().max(other.words.len());
        let words = (0..n)
            .map(|i| self.word(i) | other.word(i))
            .collect::<SmallVec<_>>();
        BitSet { words }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let n = self.words.len().min(other.words.len());
        let mut out = BitSet {
            words: (0..n).map(|i| self.word(i) & other.word(i)).collect(),
        };
        out.trim();
        out
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut out = BitSet {
            words: (0..self.words.len())
                .map(|i| self.word(i) & !other.word(i))
                .collect(),
        };
        out.trim();
        out
    }

    pub fn union_with(&mut self, other: &BitSet) {
        if self.words.len() < other.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    /// Members at or above `start`, moved down by `start`.
    pub fn slice_from(&self, start: usize, len: usize) -> BitSet {
        self.iter()
            .filter(|&i| i >= start && i < start + len)
            .map(|i| i - start)
            .collect()
    }

    /// Members below `len`.
    pub fn truncated(&self, len: usize) -> BitSet {
        self.iter().filter(|&i| i < len).collect()
    }

    /// Every member moved up by `offset`.
    pub fn shifted(&self, offset: usize) -> BitSet {
        self.iter().map(|i| i + offset).collect()
    }

    fn word(&self, i: usize) -> u64 {
        self.words.get(i).copied().unwrap_or(0)
    }

    /// All subsets of `self`, smallest-first in the canonical order of the
    /// positions they keep. Callers are responsible for size caps.
    pub fn subsets(&self) -> impl Iterator<Item = BitSet> + '_ {
        let members: Vec<usize> = self.iter().collect();
        let n = members.len();
        assert!(n < 64, "subset enumeration over {n} elements");
        (0u64..(1u64 << n)).map(move |code| {
            members
                .iter()
                .enumerate()
                .filter(|(i, _)| (code >> i) & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
    }
}

impl FromIterator<usize> for BitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = BitSet::new();
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.words.len().max(other.words.len());
        for i in 0..n {
            let (a, b) = (self.word(i), other.word(i));
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
