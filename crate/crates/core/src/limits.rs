//! Size caps and iteration budgets shared by every analysis.

use crate::error::{Error, Result};
use crate::subset::MAX_ALPHABET;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest alphabet accepted by residue-bearing analyses.
    pub max_q: usize,
    /// Largest alphabet for which all set partitions are enumerated.
    pub enumeration_cap: usize,
    /// Largest alphabet for the brute-force strong ergodicity oracle.
    pub oracle_cap: usize,
    /// Maximum number of matrices kept across all phases of a monoid.
    pub monoid_budget: usize,
    /// Maximum number of family iterates explored by orbit searches.
    pub orbit_budget: usize,
    /// Largest alphabet a tensor product may produce.
    pub product_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_q: 12,
            enumeration_cap: 10,
            oracle_cap: 4,
            monoid_budget: 1 << 20,
            orbit_budget: 4096,
            product_cap: MAX_ALPHABET,
        }
    }
}

impl Limits {
    /// Limits with every alphabet cap raised to the hard maximum.
    pub fn wide() -> Self {
        Limits {
            max_q: MAX_ALPHABET,
            product_cap: MAX_ALPHABET,
            ..Limits::default()
        }
    }

    pub(crate) fn check_q(&self, q: usize) -> Result<()> {
        check_cap(q, self.max_q)
    }

    pub(crate) fn check_enumeration(&self, q: usize) -> Result<()> {
        check_cap(q, self.enumeration_cap)
    }

    pub(crate) fn check_oracle(&self, q: usize) -> Result<()> {
        check_cap(q, self.oracle_cap)
    }
}

fn check_cap(q: usize, max: usize) -> Result<()> {
    if q > max.min(MAX_ALPHABET) {
        Err(Error::AlphabetTooLarge {
            q,
            max: max.min(MAX_ALPHABET),
        })
    } else {
        Ok(())
    }
}
