//! Brute-force strong ergodicity straight from the definition.

use super::{is_strongly_ergodic, partition_cycle};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::op::BinaryOperation;
use crate::partitions::{enumerate_stable_partitions, Partition};
use crate::subset::Subset;
use serde::Serialize;
use std::collections::HashSet;

/// Least length `n` at which `x * X` hits every block of `H^{n*}` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleWitness {
    pub partition: Vec<Vec<usize>>,
    pub x: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Search {
    Found(usize),
    /// The reachable-set dynamics cycled without a hit.
    Never,
    Inconclusive,
}

/// Sets `x * X` over all H-sequences `X` of length `n`.
pub(crate) fn step_reachable(op: &BinaryOperation, sets: &[Subset], blocks: &[Subset]) -> Vec<Subset> {
    let mut next: Vec<Subset> = sets
        .iter()
        .flat_map(|&a| blocks.iter().map(move |&x| op.set_product(a, x)))
        .collect();
    next.sort();
    next.dedup();
    next
}

pub(crate) fn least_length(op: &BinaryOperation, cycle: &[Partition], x: usize, bound: usize) -> Search {
    let p = cycle.len();
    let mut sets = vec![Subset::singleton(x)];
    let mut seen: HashSet<(Vec<Subset>, usize)> = HashSet::new();
    for n in 0..=bound {
        let target = &cycle[n % p];
        if n >= 1 && target.blocks().iter().all(|b| sets.binary_search(b).is_ok()) {
            return Search::Found(n);
        }
        if !seen.insert((sets.clone(), n % p)) {
            return Search::Never;
        }
        if n == bound {
            break;
        }
        sets = step_reachable(op, &sets, target.blocks());
    }
    Search::Inconclusive
}

/// Least lengths for every stable partition and point, or `None` if some
/// pair provably has no length.
pub fn oracle_witnesses(
    op: &BinaryOperation,
    length_bound: usize,
    limits: &Limits,
) -> Result<Option<Vec<OracleWitness>>> {
    limits.check_oracle(op.q())?;
    if !op.is_uniformity_preserving() {
        return Ok(None);
    }
    let mut out = Vec::new();
    let mut inconclusive = false;
    for h in enumerate_stable_partitions(op, limits)? {
        let cycle = partition_cycle(op, &h)?;
        for x in 0..op.q() {
            match least_length(op, &cycle, x, length_bound) {
                Search::Found(n) => out.push(OracleWitness {
                    partition: h.to_vecs(),
                    x,
                    n,
                }),
                Search::Never => return Ok(None),
                Search::Inconclusive => inconclusive = true,
            }
        }
    }
    if inconclusive {
        return Err(Error::InconclusiveWithinBound(length_bound));
    }
    Ok(Some(out))
}

/// Decides strong ergodicity by searching reachable sets directly.
///
/// Lengths are tried up to `length_bound`; a repeated search state is a
/// proof that no length works, so only an exhausted bound is inconclusive.
pub fn definitional_strong_ergodicity(
    op: &BinaryOperation,
    length_bound: usize,
    limits: &Limits,
) -> Result<bool> {
    Ok(oracle_witnesses(op, length_bound, limits)?.is_some())
}

/// `scon(*)`: the largest least length over all stable partitions and points.
pub fn strong_connectability(op: &BinaryOperation, limits: &Limits) -> Result<usize> {
    limits.check_oracle(op.q())?;
    if !is_strongly_ergodic(op, limits)? {
        return Err(Error::NotStronglyErgodic);
    }
    let witnesses = oracle_witnesses(op, usize::MAX, limits)?.ok_or_else(|| {
        Error::VerificationFailed("residue test and definition disagree".into())
    })?;
    Ok(witnesses.iter().map(|w| w.n).max().unwrap_or(1))
}
