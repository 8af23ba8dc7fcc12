//! Boolean `q x q` matrices with rows packed into `u16` masks.

use crate::subset::{Subset, MAX_ALPHABET};
use std::fmt;

/// `M[a][b]` means `b` is reachable from `a` under the relation the
/// matrix encodes. Row `a` is the subset of such `b`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolMatrix {
    q: u8,
    rows: [u16; MAX_ALPHABET],
}

/// Reachability matrix of a one-step relation or of a sequence action.
pub type TransferMatrix = BoolMatrix;

impl BoolMatrix {
    pub fn zero(q: usize) -> BoolMatrix {
        assert!(q <= MAX_ALPHABET);
        BoolMatrix {
            q: q as u8,
            rows: [0; MAX_ALPHABET],
        }
    }

    pub fn identity(q: usize) -> BoolMatrix {
        let mut m = BoolMatrix::zero(q);
        for i in 0..q {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(rows: &[Subset]) -> BoolMatrix {
        let mut m = BoolMatrix::zero(rows.len());
        for (i, r) in rows.iter().enumerate() {
            m.rows[i] = r.bits();
        }
        m
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn row(&self, a: usize) -> Subset {
        Subset(self.rows[a])
    }

    pub fn set_row(&mut self, a: usize, r: Subset) {
        self.rows[a] = r.bits();
    }

    pub fn get(&self, a: usize, b: usize) -> bool {
        self.row(a).contains(b)
    }

    pub fn set(&mut self, a: usize, b: usize) {
        self.rows[a] |= 1 << b;
    }

    /// Boolean product: `(self * other)[a] = union of other[b] over b in self[a]`.
    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        debug_assert_eq!(self.q, other.q);
        let mut out = BoolMatrix::zero(self.q());
        for a in 0..self.q() {
            let mut acc = 0u16;
            let mut r = self.rows[a];
            while r != 0 {
                let b = r.trailing_zeros() as usize;
                acc |= other.rows[b];
                r &= r - 1;
            }
            out.rows[a] = acc;
        }
        out
    }

    pub fn pow(&self, mut e: usize) -> BoolMatrix {
        let mut base = *self;
        let mut acc = BoolMatrix::identity(self.q());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Image of a set of starting points.
    pub fn image(&self, a: Subset) -> Subset {
        a.iter().fold(Subset::EMPTY, |s, x| s.union(self.row(x)))
    }

    pub fn is_all_ones(&self) -> bool {
        let full = Subset::full(self.q()).bits();
        self.rows[..self.q()].iter().all(|&r| r == full)
    }

    /// All diagonal entries are set.
    pub fn is_reflexive(&self) -> bool {
        (0..self.q()).all(|a| self.get(a, a))
    }

    /// Every row is a singleton and the rows are pairwise distinct.
    pub fn is_permutation(&self) -> bool {
        let mut seen = 0u16;
        for a in 0..self.q() {
            let r = self.rows[a];
            if r.count_ones() != 1 || seen & r != 0 {
                return false;
            }
            seen |= r;
        }
        true
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zero(self.q());
        for a in 0..self.q() {
            for b in self.row(a).iter() {
                t.set(b, a);
            }
        }
        t
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.q()).map(|a| self.row(a)))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(q: usize) -> impl Strategy<Value = BoolMatrix> {
        prop::collection::vec(0u16..(1 << q), q).prop_map(move |rows| {
            BoolMatrix::from_rows(&rows.into_iter().map(Subset).collect::<Vec<_>>())
        })
    }

    fn naive_mul(a: &BoolMatrix, b: &BoolMatrix) -> BoolMatrix {
        let q = a.q();
        let mut out = BoolMatrix::zero(q);
        for i in 0..q {
            for j in 0..q {
                if (0..q).any(|k| a.get(i, k) && b.get(k, j)) {
                    out.set(i, j);
                }
            }
        }
        out
    }

    #[test]
    fn identity_and_cycle() {
        let mut c = BoolMatrix::zero(3);
        for a in 0..3 {
            c.set(a, (a + 1) % 3);
        }
        assert!(c.is_permutation());
        assert_eq!(c.pow(3), BoolMatrix::identity(3));
        assert_eq!(c.pow(0), BoolMatrix::identity(3));
        assert!(!c.is_reflexive());
        assert_eq!(c.transpose(), c.pow(2));
    }

    proptest! {
        #[test]
        fn product_matches_definition(a in arb_matrix(5), b in arb_matrix(5)) {
            prop_assert_eq!(a.mul(&b), naive_mul(&a, &b));
        }

        #[test]
        fn product_is_associative(a in arb_matrix(4), b in arb_matrix(4), c in arb_matrix(4)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn power_is_repeated_product(a in arb_matrix(4), e in 0usize..7) {
            let mut acc = BoolMatrix::identity(4);
            for _ in 0..e {
                acc = acc.mul(&a);
            }
            prop_assert_eq!(a.pow(e), acc);
        }
    }
}
