//! Partitions, families of subsets and their dynamics under `F -> F * F`.

mod enumerate;
mod generated;

pub use enumerate::{enumerate_stable_partitions, periodic_partitions, set_partitions};
pub use generated::{
    cover_orbit_analysis, cover_orbit_search, generated_partition, generated_partition_closure,
    generated_stable_partition, CoverOrbitReport,
};

use crate::error::{Error, Result};
use crate::op::BinaryOperation;
use crate::subset::{Subset, MAX_ALPHABET};
use std::collections::HashMap;
use std::fmt;

/// A partition of `{0, .., q-1}` with blocks ordered by least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    q: u8,
    blocks: Vec<Subset>,
}

impl Partition {
    /// Validates and canonicalizes a list of blocks.
    pub fn new(q: usize, mut blocks: Vec<Subset>) -> Result<Partition> {
        if q == 0 || q > MAX_ALPHABET {
            return Err(Error::InvalidPartition(format!("alphabet size {q}")));
        }
        let full = Subset::full(q);
        let mut seen = Subset::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if !b.is_subset_of(full) {
                return Err(Error::InvalidPartition(format!("block {b} outside 0..{q}")));
            }
            if b.intersects(seen) {
                return Err(Error::InvalidPartition(format!("block {b} overlaps another")));
            }
            seen = seen.union(*b);
        }
        if seen != full {
            return Err(Error::InvalidPartition(format!(
                "blocks miss {}",
                full.difference(seen)
            )));
        }
        blocks.sort_by_key(|b| b.first());
        Ok(Partition { q: q as u8, blocks })
    }

    pub(crate) fn from_blocks_unchecked(q: usize, mut blocks: Vec<Subset>) -> Partition {
        blocks.sort_by_key(|b| b.first());
        Partition { q: q as u8, blocks }
    }

    /// Partition whose blocks are the level sets of `labels`.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut by_label: HashMap<usize, Subset> = HashMap::new();
        for (x, &l) in labels.iter().enumerate() {
            let e = by_label.entry(l).or_default();
            *e = e.with(x);
        }
        Partition::from_blocks_unchecked(labels.len(), by_label.into_values().collect())
    }

    pub fn from_vecs(q: usize, blocks: &[Vec<usize>]) -> Result<Partition> {
        if let Some(&x) = blocks.iter().flatten().find(|&&x| x >= q.min(MAX_ALPHABET)) {
            return Err(Error::InvalidPartition(format!("element {x} outside 0..{q}")));
        }
        let total: usize = blocks.iter().map(Vec::len).sum();
        if total != q {
            return Err(Error::InvalidPartition(format!(
                "{total} elements listed for an alphabet of {q}"
            )));
        }
        Partition::new(
            q,
            blocks.iter().map(|b| Subset::from_elements(b.iter().copied())).collect(),
        )
    }

    pub fn singletons(q: usize) -> Partition {
        Partition::from_blocks_unchecked(q, (0..q).map(Subset::singleton).collect())
    }

    pub fn trivial(q: usize) -> Partition {
        Partition::from_blocks_unchecked(q, vec![Subset::full(q)])
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    /// Number of blocks, `|H|`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_of(&self, x: usize) -> Subset {
        *self.blocks.iter().find(|b| b.contains(x)).expect("x outside alphabet")
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.q()];
        for (i, b) in self.blocks.iter().enumerate() {
            for x in b.iter() {
                labels[x] = i;
            }
        }
        labels
    }

    pub fn is_balanced(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == self.blocks[0].len())
    }

    /// Common block size `||H||` of a balanced partition.
    pub fn block_size(&self) -> Option<usize> {
        self.is_balanced().then(|| self.blocks[0].len())
    }

    pub fn to_family(&self) -> SubsetFamily {
        SubsetFamily::new(self.q(), self.blocks.clone())
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.to_vec()).collect()
    }

    /// Image of every block under `x -> perm[x]`.
    pub fn map(&self, perm: &[usize]) -> Partition {
        Partition::from_blocks_unchecked(
            self.q(),
            self.blocks
                .iter()
                .map(|b| b.iter().map(|x| perm[x]).collect())
                .collect(),
        )
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// A set of subsets, stored sorted by bitmask and deduplicated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetFamily {
    q: u8,
    members: Vec<Subset>,
}

impl SubsetFamily {
    pub fn new(q: usize, mut members: Vec<Subset>) -> SubsetFamily {
        assert!((1..=MAX_ALPHABET).contains(&q));
        members.sort();
        members.dedup();
        SubsetFamily { q: q as u8, members }
    }

    pub fn from_vecs(q: usize, members: &[Vec<usize>]) -> Result<SubsetFamily> {
        if q == 0 || q > MAX_ALPHABET {
            return Err(Error::InvalidPartition(format!("alphabet size {q}")));
        }
        let mut out = Vec::with_capacity(members.len());
        for m in members {
            if let Some(&x) = m.iter().find(|&&x| x >= q) {
                return Err(Error::InvalidPartition(format!("element {x} outside 0..{q}")));
            }
            out.push(Subset::from_elements(m.iter().copied()));
        }
        Ok(SubsetFamily::new(q, out))
    }

    pub fn q(&self) -> usize {
        self.q as usize
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self) -> Subset {
        self.members.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
    }

    /// No empty member and the members cover the alphabet.
    pub fn is_cover(&self) -> bool {
        !self.members.iter().any(|m| m.is_empty()) && self.union() == Subset::full(self.q())
    }

    /// The family as a partition, if its members are disjoint, nonempty and covering.
    pub fn as_partition(&self) -> Option<Partition> {
        Partition::new(self.q(), self.members.clone()).ok()
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|b| b.to_vec()).collect()
    }
}

impl fmt::Debug for SubsetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

/// `A` is finer than `B`: every member of `A` lies inside some member of `B`.
pub fn is_finer(a: &SubsetFamily, b: &SubsetFamily) -> bool {
    a.members()
        .iter()
        .all(|x| b.members().iter().any(|y| x.is_subset_of(*y)))
}

/// Partition version of [`is_finer`].
pub fn is_finer_partition(a: &Partition, b: &Partition) -> bool {
    a.blocks()
        .iter()
        .all(|x| x.is_subset_of(b.block_of(x.first().unwrap())))
}

/// The common refinement `H1 ^ H2`.
pub fn wedge(h1: &Partition, h2: &Partition) -> Partition {
    assert_eq!(h1.q(), h2.q());
    let mut blocks = Vec::new();
    for a in h1.blocks() {
        for b in h2.blocks() {
            let c = a.intersection(*b);
            if !c.is_empty() {
                blocks.push(c);
            }
        }
    }
    Partition::from_blocks_unchecked(h1.q(), blocks)
}

/// Blocks are the unions of overlap-connected members of a cover.
pub fn cover_components(a: &SubsetFamily) -> Result<Partition> {
    if !a.is_cover() {
        return Err(Error::NotACover);
    }
    let mut blocks: Vec<Subset> = Vec::new();
    for &m in a.members() {
        let mut merged = m;
        blocks.retain(|&b| {
            if b.intersects(merged) {
                merged = merged.union(b);
                false
            } else {
                true
            }
        });
        blocks.push(merged);
    }
    Ok(Partition::from_blocks_unchecked(a.q(), blocks))
}

/// `F* = {A * B : A, B in F}`.
pub fn step(op: &BinaryOperation, f: &SubsetFamily) -> SubsetFamily {
    let mut out = Vec::with_capacity(f.len() * f.len());
    for &a in f.members() {
        for &b in f.members() {
            out.push(op.set_product(a, b));
        }
    }
    SubsetFamily::new(f.q(), out)
}

/// `H*` for a partition, or `None` when the image is not a partition.
pub fn step_partition(op: &BinaryOperation, h: &Partition) -> Option<Partition> {
    step(op, &h.to_family()).as_partition()
}

/// The iterates `F, F*, F**, ..` up to the first repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionOrbit {
    pub base: SubsetFamily,
    /// `iterates[i]` is `F^{i*}`; the base is `iterates[0]`.
    pub iterates: Vec<SubsetFamily>,
    pub preperiod: usize,
    pub cycle_length: usize,
}

impl PartitionOrbit {
    /// `F^{n*}` for any `n`, folding into the cycle.
    pub fn iterate(&self, n: usize) -> &SubsetFamily {
        if n < self.iterates.len() {
            &self.iterates[n]
        } else {
            let k = (n - self.preperiod) % self.cycle_length;
            &self.iterates[self.preperiod + k]
        }
    }
}

/// Iterates `step` until a family repeats; fails after `max_iter` steps.
pub fn orbit(op: &BinaryOperation, f: &SubsetFamily, max_iter: usize) -> Result<PartitionOrbit> {
    let mut index: HashMap<SubsetFamily, usize> = HashMap::new();
    let mut iterates = vec![f.clone()];
    index.insert(f.clone(), 0);
    for i in 1..=max_iter {
        let next = step(op, &iterates[i - 1]);
        if let Some(&j) = index.get(&next) {
            return Ok(PartitionOrbit {
                base: f.clone(),
                iterates,
                preperiod: j,
                cycle_length: i - j,
            });
        }
        index.insert(next.clone(), i);
        iterates.push(next);
    }
    Err(Error::IterationBudgetExceeded(max_iter))
}

/// Whether `H^{n*} = H` for some `n > 0`, with the least such `n`.
///
/// For a uniformity preserving operation every iterate of a periodic
/// partition is a partition with the same number of blocks, so the search
/// stops at the first iterate that is not.
pub fn is_periodic_partition(op: &BinaryOperation, h: &Partition) -> (bool, Option<usize>) {
    let up = op.is_uniformity_preserving();
    let base = h.to_family();
    let mut seen = std::collections::HashSet::new();
    seen.insert(base.clone());
    let mut cur = base.clone();
    for n in 1.. {
        cur = step(op, &cur);
        if cur == base {
            return (true, Some(n));
        }
        if up && (cur.len() != base.len() || cur.as_partition().is_none()) {
            return (false, None);
        }
        if !seen.insert(cur.clone()) {
            return (false, None);
        }
    }
    unreachable!()
}

/// Balanced and periodic.
pub fn is_stable_partition(op: &BinaryOperation, h: &Partition) -> bool {
    h.is_balanced() && is_periodic_partition(op, h).0
}
