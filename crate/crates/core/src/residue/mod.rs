//! H-sequences, their transfer matrices, first residues and strong ergodicity.

mod oracle;

pub use oracle::{definitional_strong_ergodicity, strong_connectability, OracleWitness};

use crate::error::{Error, Result};
use crate::graph::is_ergodic;
use crate::limits::Limits;
use crate::matrix::{BoolMatrix, TransferMatrix};
use crate::op::BinaryOperation;
use crate::partitions::{
    enumerate_stable_partitions, is_finer_partition, is_periodic_partition, step_partition,
    Partition,
};
use crate::subset::Subset;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};

/// `R_X[a][b]` iff `b` is in `a * X`.
pub fn transfer_matrix(op: &BinaryOperation, x: Subset) -> Result<TransferMatrix> {
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut m = TransferMatrix::zero(op.q());
    for a in 0..op.q() {
        m.set_row(a, op.set_product(Subset::singleton(a), x));
    }
    Ok(m)
}

/// `H, H*, .., H^{(p-1)*}` for a periodic partition of period `p`.
pub fn partition_cycle(op: &BinaryOperation, h: &Partition) -> Result<Vec<Partition>> {
    let per = is_periodic_partition(op, h).1.ok_or(Error::NotStable)?;
    let mut cycle = vec![h.clone()];
    for _ in 1..per {
        let next = step_partition(op, cycle.last().unwrap()).ok_or(Error::NotStable)?;
        cycle.push(next);
    }
    Ok(cycle)
}

/// A sequence `X_0, X_1, ..` with `X_i` a block of `H^{i*}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSequence {
    base: Partition,
    period: usize,
    sets: Vec<Subset>,
}

impl HSequence {
    pub fn new(op: &BinaryOperation, h: &Partition, sets: Vec<Subset>) -> Result<HSequence> {
        let cycle = partition_cycle(op, h)?;
        for (i, x) in sets.iter().enumerate() {
            if !cycle[i % cycle.len()].blocks().contains(x) {
                return Err(Error::NotHSequence(format!(
                    "{x} at position {i} is not a block of the iterate {}",
                    cycle[i % cycle.len()]
                )));
            }
        }
        Ok(HSequence {
            base: h.clone(),
            period: cycle.len(),
            sets,
        })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn base(&self) -> &Partition {
        &self.base
    }

    /// `per(H)` divides the length.
    pub fn is_repeatable(&self) -> bool {
        self.sets.len().is_multiple_of(self.period)
    }

    /// `n` concatenated copies; an H-sequence again when repeatable.
    pub fn power(&self, n: usize) -> Vec<Subset> {
        self.sets.repeat(n)
    }

    /// Matrix of `a -> a * X_0 * .. * X_{k-1}`.
    pub fn matrix(&self, op: &BinaryOperation) -> TransferMatrix {
        self.sets.iter().fold(BoolMatrix::identity(op.q()), |m, &x| {
            m.mul(&transfer_matrix(op, x).unwrap())
        })
    }

    /// `A * X_0 * .. * X_{k-1}`.
    pub fn apply(&self, op: &BinaryOperation, a: Subset) -> Subset {
        self.sets.iter().fold(a, |acc, &x| op.set_product(acc, x))
    }
}

/// Repeatable, and `A` is inside `A * X` for every `A`.
pub fn is_augmenting(op: &BinaryOperation, seq: &HSequence) -> bool {
    seq.is_repeatable() && seq.matrix(op).is_reflexive()
}

/// All matrices `M_X` of H-sequences of length at least 1, grouped by
/// length modulo `per(H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasedMatrixMonoid {
    pub period: usize,
    /// `phases[r]`, sorted, holds the matrices of lengths congruent to `r`.
    pub phases: Vec<Vec<TransferMatrix>>,
}

impl PhasedMatrixMonoid {
    pub fn len(&self) -> usize {
        self.phases.iter().map(|p| p.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Phase-0 matrices with a full diagonal: the augmenting sequences.
    pub fn augmenting(&self) -> impl Iterator<Item = &TransferMatrix> {
        self.phases[0].iter().filter(|m| m.is_reflexive())
    }
}

fn check_residue_input(op: &BinaryOperation, h: &Partition, limits: &Limits) -> Result<()> {
    limits.check_q(op.q())?;
    if h.q() != op.q() {
        return Err(Error::DimensionMismatch(format!(
            "partition over {} elements, operation over {}",
            h.q(),
            op.q()
        )));
    }
    if !op.is_uniformity_preserving() {
        return Err(Error::NotUniformityPreserving);
    }
    if !is_ergodic(op) {
        return Err(Error::NotErgodic);
    }
    if !h.is_balanced() {
        return Err(Error::NotStable);
    }
    Ok(())
}

/// Breadth-first closure of the generators `R_X`, `X` a block of `H^{i*}`,
/// applied in phase order.
pub fn build_monoid(op: &BinaryOperation, h: &Partition, limits: &Limits) -> Result<PhasedMatrixMonoid> {
    check_residue_input(op, h, limits)?;
    let cycle = partition_cycle(op, h)?;
    let p = cycle.len();
    let gens: Vec<Vec<TransferMatrix>> = cycle
        .iter()
        .map(|hi| hi.blocks().iter().map(|&x| transfer_matrix(op, x).unwrap()).collect())
        .collect();
    let mut seen: Vec<HashSet<TransferMatrix>> = vec![HashSet::new(); p];
    let mut queue = VecDeque::new();
    let mut total = 0usize;
    for g in &gens[0] {
        if seen[1 % p].insert(*g) {
            queue.push_back((1 % p, *g));
            total += 1;
        }
    }
    while let Some((r, m)) = queue.pop_front() {
        let next = (r + 1) % p;
        for g in &gens[r] {
            let prod = m.mul(g);
            if seen[next].insert(prod) {
                total += 1;
                if total > limits.monoid_budget {
                    return Err(Error::StateBudgetExceeded(limits.monoid_budget));
                }
                queue.push_back((next, prod));
            }
        }
    }
    let phases = seen
        .into_iter()
        .map(|s| {
            let mut v: Vec<TransferMatrix> = s.into_iter().collect();
            v.sort();
            v
        })
        .collect();
    Ok(PhasedMatrixMonoid { period: p, phases })
}

/// The first residue `K_H` of a stable partition of an ergodic operation.
///
/// `x ~ y` iff one augmenting matrix carries both `x -> y` and `y -> x`.
/// The classes are then checked against the three defining properties,
/// which determine `K_H` uniquely.
pub fn first_residue(op: &BinaryOperation, h: &Partition, limits: &Limits) -> Result<Partition> {
    let monoid = build_monoid(op, h, limits)?;
    first_residue_from(op, h, &monoid)
}

fn first_residue_from(op: &BinaryOperation, h: &Partition, monoid: &PhasedMatrixMonoid) -> Result<Partition> {
    let q = op.q();
    let mut labels: Vec<usize> = (0..q).collect();
    for m in monoid.augmenting() {
        for x in 0..q {
            for y in m.row(x).iter() {
                if m.get(y, x) && labels[x] != labels[y] {
                    let (keep, drop) = (labels[x].min(labels[y]), labels[x].max(labels[y]));
                    for l in labels.iter_mut() {
                        if *l == drop {
                            *l = keep;
                        }
                    }
                }
            }
        }
    }
    let k = Partition::from_labels(&labels);
    verify_residue(op, h, &k, monoid)?;
    Ok(k)
}

fn verify_residue(op: &BinaryOperation, h: &Partition, k: &Partition, monoid: &PhasedMatrixMonoid) -> Result<()> {
    let fail = |msg: String| Err(Error::ResidueVerificationFailed(msg));
    let q = op.q();
    let mut rows: Vec<HashSet<Subset>> = vec![HashSet::new(); q];
    for m in monoid.augmenting() {
        for (x, r) in rows.iter_mut().enumerate() {
            let row = m.row(x);
            if !row.is_subset_of(k.block_of(x)) {
                return fail(format!("augmenting image {row} of {x} leaves its class"));
            }
            r.insert(row);
        }
    }
    for &block in k.blocks() {
        for x in block.iter() {
            if !rows[x].contains(&block) {
                return fail(format!("no augmenting sequence maps {x} onto {block}"));
            }
        }
    }
    if !is_finer_partition(k, h) {
        return fail(format!("{k} is not finer than {h}"));
    }
    if !k.is_balanced() {
        return fail(format!("{k} is not balanced"));
    }
    // closure under every H-sequence, one generator at a time
    let cycle = partition_cycle(op, h)?;
    let mut cur = k.clone();
    for hi in &cycle {
        let next = match step_partition(op, &cur) {
            Some(n) => n,
            None => return fail(format!("{cur} does not step to a partition")),
        };
        for &kb in cur.blocks() {
            for &x in hi.blocks() {
                let img = op.set_product(kb, x);
                if !next.blocks().contains(&img) {
                    return fail(format!("{kb} * {x} = {img} is not a block of {next}"));
                }
            }
        }
        cur = next;
    }
    if cur != *k {
        return fail(format!("{k} is not periodic along the orbit of {h}"));
    }
    Ok(())
}

/// `R_0 = H, R_{n+1} = K_{R_n}` up to the first fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueChain {
    pub chain: Vec<Partition>,
    pub degree: usize,
}

impl ResidueChain {
    /// `R(H)`, the fixpoint.
    pub fn residue(&self) -> &Partition {
        &self.chain[self.degree]
    }
}

pub fn residue_chain(op: &BinaryOperation, h: &Partition, limits: &Limits) -> Result<ResidueChain> {
    let mut chain = vec![h.clone()];
    loop {
        let cur = chain.last().unwrap();
        let next = first_residue(op, cur, limits)?;
        if next == *cur {
            let degree = chain.len() - 1;
            return Ok(ResidueChain { chain, degree });
        }
        chain.push(next);
    }
}

/// Serializable summary of a residue computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueReport {
    pub partition: Vec<Vec<usize>>,
    pub first_residue: Vec<Vec<usize>>,
    pub chain: Vec<Vec<Vec<usize>>>,
    pub degree: usize,
}

pub fn residue_report(op: &BinaryOperation, h: &Partition, limits: &Limits) -> Result<ResidueReport> {
    let chain = residue_chain(op, h, limits)?;
    Ok(ResidueReport {
        partition: h.to_vecs(),
        first_residue: chain.chain.get(1).unwrap_or(&chain.chain[0]).to_vecs(),
        chain: chain.chain.iter().map(|p| p.to_vecs()).collect(),
        degree: chain.degree,
    })
}

/// First residue of every stable partition, computed in parallel.
pub fn all_first_residues(op: &BinaryOperation, limits: &Limits) -> Result<Vec<(Partition, Partition)>> {
    let stable = enumerate_stable_partitions(op, limits)?;
    stable
        .into_par_iter()
        .map(|h| first_residue(op, &h, limits).map(|k| (h, k)))
        .collect()
}

/// Ergodic, and every stable partition is its own first residue.
pub fn is_strongly_ergodic(op: &BinaryOperation, limits: &Limits) -> Result<bool> {
    limits.check_q(op.q())?;
    if !op.is_uniformity_preserving() || !is_ergodic(op) {
        return Ok(false);
    }
    let stable = enumerate_stable_partitions(op, limits)?;
    let verdicts: Result<Vec<bool>> = stable
        .par_iter()
        .map(|h| first_residue(op, h, limits).map(|k| k == *h))
        .collect();
    Ok(verdicts?.into_iter().all(|b| b))
}

/// Residue chains of every stable partition, keyed by the partition.
pub fn residue_chains(op: &BinaryOperation, limits: &Limits) -> Result<HashMap<Partition, ResidueChain>> {
    let stable = enumerate_stable_partitions(op, limits)?;
    stable
        .into_par_iter()
        .map(|h| residue_chain(op, &h, limits).map(|c| (h, c)))
        .collect()
}
