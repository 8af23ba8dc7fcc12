//! Finite binary operations given by Cayley tables.
//!
//! `table[a][b]` is `a * b`: the row index is the left operand. Every
//! operation here is a plain magma; uniformity preservation and the
//! quasigroup property are decided, not assumed.

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_ALPHABET};

/// A binary operation on `{0, .., q-1}` stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryOperation {
    q: usize,
    table: Vec<u8>,
}

impl std::fmt::Debug for BinaryOperation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryOperation")
            .field("q", &self.q)
            .field("rows", &self.rows())
            .finish()
    }
}

/// Checks a raw integer grid and turns it into an operation.
pub fn validate_table(raw: &[Vec<i64>]) -> Result<BinaryOperation> {
    let q = raw.len();
    if q == 0 {
        return Err(Error::EmptyAlphabet);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != q {
            return Err(Error::NonSquare {
                row,
                len: r.len(),
                expected: q,
            });
        }
    }
    if q > MAX_ALPHABET {
        return Err(Error::AlphabetTooLarge {
            q,
            max: MAX_ALPHABET,
        });
    }
    let mut table = Vec::with_capacity(q * q);
    for (row, r) in raw.iter().enumerate() {
        for (col, &value) in r.iter().enumerate() {
            if value < 0 || value >= q as i64 {
                return Err(Error::EntryOutOfRange { row, col, value, q });
            }
            table.push(value as u8);
        }
    }
    Ok(BinaryOperation { q, table })
}

impl BinaryOperation {
    /// Builds an operation from a closure `(a, b) -> a * b`.
    ///
    /// Panics if `q` is zero or above [`MAX_ALPHABET`], or if `f` returns an
    /// out-of-range element.
    pub fn from_fn(q: usize, f: impl Fn(usize, usize) -> usize) -> BinaryOperation {
        assert!((1..=MAX_ALPHABET).contains(&q), "alphabet size {q} out of range");
        let mut table = Vec::with_capacity(q * q);
        for a in 0..q {
            for b in 0..q {
                let c = f(a, b);
                assert!(c < q, "{a} * {b} = {c} is outside 0..{q}");
                table.push(c as u8);
            }
        }
        BinaryOperation { q, table }
    }

    /// Builds an operation from literal rows; panics on malformed input.
    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> BinaryOperation {
        let raw: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| x as i64).collect())
            .collect();
        validate_table(&raw).expect("invalid literal table")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.q)
    }

    #[inline]
    pub fn apply(&self, a: usize, b: usize) -> usize {
        self.table[a * self.q + b] as usize
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.q)
            .map(|a| (0..self.q).map(|b| self.apply(a, b)).collect())
            .collect()
    }

    pub fn entries(&self) -> &[u8] {
        &self.table
    }

    /// Right translation `x -> x * b` as an image vector.
    pub fn right_translation(&self, b: usize) -> Vec<usize> {
        (0..self.q).map(|x| self.apply(x, b)).collect()
    }

    fn column_is_permutation(&self, b: usize) -> bool {
        let mut seen = Subset::EMPTY;
        for x in 0..self.q {
            seen = seen.with(self.apply(x, b));
        }
        seen == self.full()
    }

    fn row_is_permutation(&self, a: usize) -> bool {
        let mut seen = Subset::EMPTY;
        for y in 0..self.q {
            seen = seen.with(self.apply(a, y));
        }
        seen == self.full()
    }

    /// Every right translation `x -> x * b` is a bijection.
    pub fn is_uniformity_preserving(&self) -> bool {
        (0..self.q).all(|b| self.column_is_permutation(b))
    }

    /// The table is a Latin square.
    pub fn is_quasigroup(&self) -> bool {
        self.is_uniformity_preserving() && (0..self.q).all(|a| self.row_is_permutation(a))
    }

    /// Right division: `c = a / b` is the unique `c` with `c * b = a`.
    pub fn inverse_op(&self) -> Result<BinaryOperation> {
        if !self.is_uniformity_preserving() {
            return Err(Error::NotUniformityPreserving);
        }
        let q = self.q;
        let mut table = vec![0u8; q * q];
        for b in 0..q {
            for c in 0..q {
                let a = self.apply(c, b);
                table[a * q + b] = c as u8;
            }
        }
        Ok(BinaryOperation { q, table })
    }

    /// Left division: `c = b \ a` is the unique `c` with `b * c = a`.
    /// Returned as a table indexed `[b][a]`.
    pub fn left_division(&self) -> Result<BinaryOperation> {
        if !self.is_quasigroup() {
            return Err(Error::NotQuasigroup);
        }
        let q = self.q;
        let mut table = vec![0u8; q * q];
        for b in 0..q {
            for c in 0..q {
                let a = self.apply(b, c);
                table[b * q + a] = c as u8;
            }
        }
        Ok(BinaryOperation { q, table })
    }

    /// `A * B = {a * b : a in A, b in B}`.
    pub fn set_product(&self, a: Subset, b: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for x in a.iter() {
            for y in b.iter() {
                out = out.with(self.apply(x, y));
            }
        }
        out
    }

    /// `A * b` for a single right operand.
    pub fn translate(&self, a: Subset, b: usize) -> Subset {
        a.iter().fold(Subset::EMPTY, |s, x| s.with(self.apply(x, b)))
    }
}

/// A few standard operations used throughout tests and examples.
pub mod named {
    use super::BinaryOperation;

    /// `a * b = a + b mod q`.
    pub fn cyclic_group(q: usize) -> BinaryOperation {
        BinaryOperation::from_fn(q, |a, b| (a + b) % q)
    }

    /// `a * b = a xor b` on `{0, 1}`.
    pub fn xor() -> BinaryOperation {
        cyclic_group(2)
    }

    /// `a * b = a xor 1` on `{0, 1}`: irreducible with period 2.
    pub fn xor_one() -> BinaryOperation {
        BinaryOperation::from_fn(2, |a, _| a ^ 1)
    }

    /// `(x1, y1) * (x2, y2) = (x1 + y1 + x2 + y2, y1 + y2)` on `Z_n x Z_n`,
    /// with `(x, y)` stored at index `x * n + y`.
    pub fn affine_square(n: usize) -> BinaryOperation {
        BinaryOperation::from_fn(n * n, |a, b| {
            let (x1, y1) = (a / n, a % n);
            let (x2, y2) = (b / n, b % n);
            ((x1 + y1 + x2 + y2) % n) * n + (y1 + y2) % n
        })
    }
}
