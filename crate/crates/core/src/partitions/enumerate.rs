use super::{is_periodic_partition, Partition};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::op::BinaryOperation;
use crate::subset::Subset;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{HashSet, VecDeque};

/// All set partitions of `{0, .., q-1}`, generated as restricted growth strings.
pub fn set_partitions(q: usize) -> SetPartitions {
    SetPartitions {
        labels: vec![0; q],
        done: q == 0,
    }
}

pub struct SetPartitions {
    labels: Vec<usize>,
    done: bool,
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_labels(&self.labels);
        // advance: rightmost position that can still grow
        let q = self.labels.len();
        let mut prefix_max = vec![0; q];
        for i in 1..q {
            prefix_max[i] = prefix_max[i - 1].max(self.labels[i - 1]);
        }
        match (1..q).rev().find(|&i| self.labels[i] <= prefix_max[i]) {
            Some(i) => {
                self.labels[i] += 1;
                for l in &mut self.labels[i + 1..] {
                    *l = 0;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

fn sort_partitions(v: &mut [Partition]) {
    v.sort_by(|a, b| (Reverse(a.len()), a.blocks()).cmp(&(Reverse(b.len()), b.blocks())));
}

/// Every stable partition, most blocks first.
///
/// Up to `limits.enumeration_cap` all set partitions are filtered. Above it,
/// uniformity preserving operations use the periodic-partition lattice.
pub fn enumerate_stable_partitions(op: &BinaryOperation, limits: &Limits) -> Result<Vec<Partition>> {
    let q = op.q();
    let mut out: Vec<Partition> = if limits.check_enumeration(q).is_ok() {
        set_partitions(q)
            .filter(|h| h.is_balanced() && is_periodic_partition(op, h).0)
            .collect()
    } else {
        limits.check_q(q)?;
        if !op.is_uniformity_preserving() {
            limits.check_enumeration(q)?;
        }
        periodic_partitions(op, limits)?
            .into_iter()
            .filter(|h| h.is_balanced())
            .collect()
    };
    sort_partitions(&mut out);
    Ok(out)
}

fn permutation_order(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut order = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        order = num_lcm(order, len);
    }
    order
}

fn num_lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Least periodic partition coarser than a seed family, for a uniformity
/// preserving operation.
///
/// A periodic `H` satisfies `H* = pi_b(H)` for every right translation
/// `pi_b`, so the orbit of `H` repeats after `p` steps where `p` is the order
/// of any `pi_b`. Track one equivalence per phase `i < p` and close under
/// `x ~_i y => x*c ~_{i+1} y*c and c*x ~_{i+1} c*y`. The least fixpoint lies
/// below every periodic partition coarser than the seed, and because each
/// phase is coarser than the translate of the previous one while block
/// counts cannot drop around the cycle, it is itself periodic.
pub(crate) struct Closure<'a> {
    op: &'a BinaryOperation,
    phases: usize,
}

struct UnionFind {
    parent: Vec<u8>,
}

impl UnionFind {
    fn new(q: usize) -> UnionFind {
        UnionFind {
            parent: (0..q as u8).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo as u8;
        true
    }
}

impl<'a> Closure<'a> {
    pub(crate) fn new(op: &'a BinaryOperation) -> Closure<'a> {
        debug_assert!(op.is_uniformity_preserving());
        let phases = (0..op.q())
            .map(|b| permutation_order(&op.right_translation(b)))
            .min()
            .unwrap();
        Closure { op, phases }
    }

    pub(crate) fn close<I: IntoIterator<Item = Subset>>(&self, seeds: I) -> Partition {
        let q = self.op.q();
        let mut uf: Vec<UnionFind> = (0..self.phases).map(|_| UnionFind::new(q)).collect();
        let mut queue = VecDeque::new();
        for s in seeds {
            if let Some(r) = s.first() {
                for x in s.iter() {
                    if uf[0].union(r, x) {
                        queue.push_back((0, r, x));
                    }
                }
            }
        }
        while let Some((i, a, b)) = queue.pop_front() {
            let j = (i + 1) % self.phases;
            for c in 0..q {
                let (x, y) = (self.op.apply(a, c), self.op.apply(b, c));
                if uf[j].union(x, y) {
                    queue.push_back((j, x, y));
                }
                let (x, y) = (self.op.apply(c, a), self.op.apply(c, b));
                if uf[j].union(x, y) {
                    queue.push_back((j, x, y));
                }
            }
        }
        let labels: Vec<usize> = (0..q).map(|x| uf[0].find(x)).collect();
        Partition::from_labels(&labels)
    }
}

/// Every periodic partition of a uniformity preserving operation.
///
/// Each periodic partition is the least periodic partition above the pairs
/// it merges, so a breadth-first walk from the singletons that merges one
/// pair of blocks at a time and closes reaches all of them.
pub fn periodic_partitions(op: &BinaryOperation, limits: &Limits) -> Result<Vec<Partition>> {
    limits.check_q(op.q())?;
    if !op.is_uniformity_preserving() {
        return Err(Error::NotUniformityPreserving);
    }
    let closure = Closure::new(op);
    let bottom = Partition::singletons(op.q());
    let mut seen: HashSet<Partition> = HashSet::from([bottom.clone()]);
    let mut frontier = vec![bottom];
    while !frontier.is_empty() {
        let mut found: Vec<Partition> = frontier
            .par_iter()
            .flat_map_iter(|p| {
                let blocks = p.blocks();
                let closure = &closure;
                (0..blocks.len()).flat_map(move |i| {
                    (i + 1..blocks.len()).map(move |j| {
                        let pair = Subset::from_elements([
                            blocks[i].first().unwrap(),
                            blocks[j].first().unwrap(),
                        ]);
                        closure.close(blocks.iter().copied().chain([pair]))
                    })
                })
            })
            .collect();
        sort_partitions(&mut found);
        found.dedup();
        frontier = found.into_iter().filter(|p| seen.insert(p.clone())).collect();
        if seen.len() > limits.monoid_budget {
            return Err(Error::StateBudgetExceeded(limits.monoid_budget));
        }
    }
    let mut out: Vec<Partition> = seen.into_iter().collect();
    sort_partitions(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::named::*;
    use crate::tables;

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (q, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(set_partitions(q).count(), b, "q={q}");
        }
        let all: HashSet<Partition> = set_partitions(5).collect();
        assert_eq!(all.len(), 52);
    }

    #[test]
    fn permutation_orders() {
        assert_eq!(permutation_order(&[1, 2, 0, 4, 3]), 6);
        assert_eq!(permutation_order(&[0, 1]), 1);
    }

    #[test]
    fn lattice_matches_brute_force_on_golden_tables() {
        let limits = Limits::default();
        let mut ops = tables::all();
        ops.push(cyclic_group(4));
        ops.push(xor_one());
        ops.push(affine_square(2));
        for op in ops {
            let mut brute: Vec<Partition> = set_partitions(op.q())
                .filter(|h| is_periodic_partition(&op, h).0)
                .collect();
            sort_partitions(&mut brute);
            assert_eq!(periodic_partitions(&op, &limits).unwrap(), brute, "{op:?}");
        }
    }

    #[test]
    fn lattice_matches_brute_force_on_all_order_three_tables() {
        let limits = Limits::default();
        for op in crate::census::uniformity_preserving_tables(3) {
            let mut brute: Vec<Partition> = set_partitions(3)
                .filter(|h| is_periodic_partition(&op, h).0)
                .collect();
            sort_partitions(&mut brute);
            assert_eq!(periodic_partitions(&op, &limits).unwrap(), brute);
        }
    }

    #[test]
    fn stable_partition_examples() {
        let limits = Limits::default();
        let sp = enumerate_stable_partitions(&xor(), &limits).unwrap();
        assert_eq!(sp, vec![Partition::singletons(2), Partition::trivial(2)]);

        let sp = enumerate_stable_partitions(&tables::not_strongly_ergodic4(), &limits).unwrap();
        assert!(sp.contains(&Partition::from_vecs(4, &[vec![0, 1], vec![2, 3]]).unwrap()));
        assert!(sp.contains(&Partition::singletons(4)));

        let sp = enumerate_stable_partitions(&tables::residue_remark8(), &limits).unwrap();
        let h = Partition::from_vecs(8, &[vec![0, 2], vec![1, 3], vec![4, 5], vec![6, 7]]).unwrap();
        assert!(sp.contains(&h));
    }

    #[test]
    fn wide_route_agrees_with_enumeration() {
        let narrow = Limits {
            enumeration_cap: 1,
            ..Limits::default()
        };
        for op in tables::all() {
            assert_eq!(
                enumerate_stable_partitions(&op, &narrow).unwrap(),
                enumerate_stable_partitions(&op, &Limits::default()).unwrap()
            );
        }
    }

    #[test]
    fn caps_are_enforced() {
        let limits = Limits {
            enumeration_cap: 3,
            max_q: 3,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_stable_partitions(&cyclic_group(4), &limits),
            Err(Error::AlphabetTooLarge { q: 4, .. })
        ));
    }
}
