//! Sets of node or edge positions.

use std::fmt;

const INLINE: usize = 2;

/// A set of small indices stored as a bitset. Sets whose members are all
/// below 128 never allocate, so cloning a navigation state stays cheap.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    inline: [u64; INLINE],
    /// Words for indices from 128 up; never ends in a zero word.
    spill: Vec<u64>,
}

impl IndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    fn word(&self, w: usize) -> u64 {
        if w < INLINE {
            self.inline[w]
        } else {
            self.spill.get(w - INLINE).copied().unwrap_or(0)
        }
    }

    fn word_mut(&mut self, w: usize) -> &mut u64 {
        if w < INLINE {
            &mut self.inline[w]
        } else {
            let k = w - INLINE;
            if self.spill.len() <= k {
                self.spill.resize(k + 1, 0);
            }
            &mut self.spill[k]
        }
    }

    fn trim(&mut self) {
        while self.spill.last() == Some(&0) {
            self.spill.pop();
        }
    }

    fn words(&self) -> usize {
        INLINE + self.spill.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.word(i / 64) & (1 << (i % 64)) != 0
    }

    /// Returns true if `i` was not yet present.
    pub fn insert(&mut self, i: usize) -> bool {
        let w = self.word_mut(i / 64);
        let bit = 1 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    /// Returns true if `i` was present.
    pub fn remove(&mut self, i: usize) -> bool {
        if i / 64 >= self.words() {
            return false;
        }
        let w = self.word_mut(i / 64);
        let bit = 1 << (i % 64);
        let present = *w & bit != 0;
        *w &= !bit;
        self.trim();
        present
    }

    pub fn clear(&mut self) {
        self.inline = [0; INLINE];
        self.spill.clear();
    }

    pub fn is_empty(&self) -> bool {
        self.inline.iter().all(|&w| w == 0) && self.spill.is_empty()
    }

    pub fn len(&self) -> usize {
        self.inline
            .iter()
            .chain(&self.spill)
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.inline
            .iter()
            .chain(&self.spill)
            .enumerate()
            .flat_map(|(w, &bits)| {
                let mut bits = bits;
                std::iter::from_fn(move || {
                    (bits != 0).then(|| {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        w * 64 + b
                    })
                })
            })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(usize) -> bool) {
        for w in 0..self.words() {
            let word = self.word_mut(w);
            let mut bits = *word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                bits &= bits - 1;
                if !keep(w * 64 + b as usize) {
                    *word &= !(1 << b);
                }
            }
        }
        self.trim();
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        (0..self.words()).all(|w| self.word(w) & !other.word(w) == 0)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = IndexSet::new();
        set.extend(iter);
        set
    }
}

impl Extend<usize> for IndexSet {
    fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
        for i in iter {
            self.insert(i);
        }
    }
}

impl<const N: usize> From<[usize; N]> for IndexSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a IndexSet {
    type Item = usize;
    type IntoIter = Box<dyn Iterator<Item = usize> + 'a>;

    fn into_iter(self) -> Self::IntoIter {
        Box::new(self.iter())
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;

    proptest! {
        #[test]
        fn behaves_like_a_btreeset(ops in prop::collection::vec((any::<bool>(), 0usize..400), 0..200)) {
            let mut ours = IndexSet::new();
            let mut model = BTreeSet::new();
            for (add, i) in ops {
                if add {
                    prop_assert_eq!(ours.insert(i), model.insert(i));
                } else {
                    prop_assert_eq!(ours.remove(i), model.remove(&i));
                }
                prop_assert_eq!(ours.iter().collect::<Vec<_>>(), model.iter().copied().collect::<Vec<_>>());
                prop_assert_eq!(ours.len(), model.len());
                prop_assert_eq!(ours.is_empty(), model.is_empty());
            }
            let rebuilt: IndexSet = model.iter().copied().collect();
            prop_assert_eq!(&rebuilt, &ours);
        }

        #[test]
        fn subset_and_retain(a in prop::collection::btree_set(0usize..300, 0..40), b in prop::collection::btree_set(0usize..300, 0..40)) {
            let (sa, sb): (IndexSet, IndexSet) = (a.iter().copied().collect(), b.iter().copied().collect());
            prop_assert_eq!(sa.is_subset(&sb), a.is_subset(&b));
            let mut even = sa.clone();
            even.retain(|i| i % 2 == 0);
            prop_assert_eq!(even.iter().collect::<Vec<_>>(), a.iter().copied().filter(|i| i % 2 == 0).collect::<Vec<_>>());
        }
    }

    #[test]
    fn small_sets_do_not_spill() {
        let s = IndexSet::from([0, 5, 127]);
        assert!(s.spill.is_empty());
        assert_eq!(format!("{s:?}"), "{0, 5, 127}");
        let mut big = IndexSet::from([300]);
        big.remove(300);
        assert_eq!(big, IndexSet::new());
    }
}
