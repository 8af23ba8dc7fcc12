//! Subsets of a small alphabet stored as bitmasks.

use std::fmt;

/// Hard upper bound on alphabet size; subsets and matrix rows are `u16` masks.
pub const MAX_ALPHABET: usize = 16;

/// A subset of `{0, .., q-1}`. Bit `i` is set iff `i` is a member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u16);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(q: usize) -> Subset {
        debug_assert!(q <= MAX_ALPHABET);
        if q == MAX_ALPHABET {
            Subset(u16::MAX)
        } else {
            Subset((1u16 << q) - 1)
        }
    }

    pub fn singleton(x: usize) -> Subset {
        Subset(1 << x)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Subset {
        elems.into_iter().fold(Subset::EMPTY, |s, x| s.with(x))
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn contains(self, x: usize) -> bool {
        x < MAX_ALPHABET && self.0 & (1 << x) != 0
    }

    #[must_use]
    pub fn with(self, x: usize) -> Subset {
        Subset(self.0 | (1 << x))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Least element, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Subset::from_elements(iter)
    }
}

/// Ascending iterator over the members of a [`Subset`].
#[derive(Clone)]
pub struct SubsetIter(u16);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let x = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(x)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for SubsetIter {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let a = Subset::from_elements([0, 2, 5]);
        assert_eq!(a.len(), 3);
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.to_vec(), vec![0, 2, 5]);
        assert!(a.contains(2) && !a.contains(1));
        assert!(Subset::singleton(2).is_subset_of(a));
        assert_eq!(a.difference(Subset::singleton(0)).first(), Some(2));
        assert_eq!(Subset::full(16).len(), 16);
        assert_eq!(Subset::full(3), Subset(0b111));
        assert_eq!(format!("{a}"), "{0,2,5}");
    }
}
