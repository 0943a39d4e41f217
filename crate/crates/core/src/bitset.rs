use std::cmp::Ordering;
use std::fmt;

/// Fixed-capacity set of element indices, one bit per element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    words: Vec<u64>,
    capacity: usize,
}

impl ElemSet {
    pub fn new(capacity: usize) -> Self {
        ElemSet {
            words: vec![0; capacity.div_ceil(64).max(1)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(capacity: usize, it: I) -> Self {
        let mut s = Self::new(capacity);
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.capacity && (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    /// Returns true if the element was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        debug_assert!(i < self.capacity);
        let w = &mut self.words[i >> 6];
        let bit = 1u64 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1u64 << (i & 63));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &ElemSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Canonical order: by size, then lexicographically by sorted member list.
impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_and_order() {
        let a = ElemSet::from_iter(130, [0, 5, 64, 129]);
        assert_eq!(a.to_vec(), vec![0, 5, 64, 129]);
        assert_eq!(a.len(), 4);
        let b = ElemSet::from_iter(130, [0, 5]);
        assert!(b.is_subset(&a));
        assert!(b < a);
        assert_eq!(a.difference(&b).to_vec(), vec![64, 129]);
        let c = ElemSet::from_iter(130, [0, 6]);
        assert!(b < c);
    }
}
