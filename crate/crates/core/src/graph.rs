//! Reachability under right multiplication: irreducibility, period,
//! ergodic classes and connectability.

use crate::error::{Error, Result};
use crate::matrix::TransferMatrix;
use crate::op::BinaryOperation;
use crate::subset::Subset;
use std::collections::VecDeque;

/// `M[a][b]` iff `a * x = b` for some `x`.
pub fn one_step_matrix(op: &BinaryOperation) -> TransferMatrix {
    let q = op.q();
    let mut m = TransferMatrix::zero(q);
    for a in 0..q {
        for x in 0..q {
            m.set(a, op.apply(a, x));
        }
    }
    m
}

fn reach(m: &TransferMatrix, start: usize) -> Subset {
    let mut seen = Subset::singleton(start);
    let mut frontier = seen;
    while !frontier.is_empty() {
        let next = m.image(frontier).difference(seen);
        seen = seen.union(next);
        frontier = next;
    }
    seen
}

fn strongly_connected(m: &TransferMatrix) -> bool {
    let full = Subset::full(m.q());
    reach(m, 0) == full && reach(&m.transpose(), 0) == full
}

/// Every element is reachable from every other by repeated right products.
pub fn is_irreducible(op: &BinaryOperation) -> bool {
    strongly_connected(&one_step_matrix(op))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// BFS levels from element 0 in the one-step digraph.
fn levels(m: &TransferMatrix) -> Vec<Option<usize>> {
    let mut level = vec![None; m.q()];
    level[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].unwrap();
        for v in m.row(u).iter() {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

fn period_of(m: &TransferMatrix) -> (usize, Vec<usize>) {
    let level: Vec<usize> = levels(m).into_iter().map(|l| l.unwrap()).collect();
    let mut g = 0;
    for u in 0..m.q() {
        for v in m.row(u).iter() {
            g = gcd(g, (level[u] + 1).abs_diff(level[v]));
        }
    }
    (g, level)
}

/// `per(*)`: the gcd of closed-walk lengths of the one-step digraph.
pub fn period(op: &BinaryOperation) -> Result<usize> {
    let m = one_step_matrix(op);
    if !strongly_connected(&m) {
        return Err(Error::NotIrreducible);
    }
    Ok(period_of(&m).0)
}

pub fn is_ergodic(op: &BinaryOperation) -> bool {
    period(op) == Ok(1)
}

/// The cyclically ordered classes `H_0, .., H_{n-1}` with `H_i * X = H_{i+1}`.
/// `H_0` is the class of element 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicClasses {
    pub blocks: Vec<Subset>,
}

impl ErgodicClasses {
    pub fn period(&self) -> usize {
        self.blocks.len()
    }

    /// Index of the class containing `x`.
    pub fn class_of(&self, x: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(x)).unwrap()
    }
}

pub fn ergodic_classes(op: &BinaryOperation) -> Result<ErgodicClasses> {
    let m = one_step_matrix(op);
    if !strongly_connected(&m) {
        return Err(Error::NotIrreducible);
    }
    let (per, level) = period_of(&m);
    let mut blocks = vec![Subset::EMPTY; per];
    for (x, l) in level.iter().enumerate() {
        blocks[l % per] = blocks[l % per].with(x);
    }
    for i in 0..per {
        if m.image(blocks[i]) != blocks[(i + 1) % per] {
            return Err(Error::VerificationFailed(format!(
                "ergodic class {i} does not map onto class {}",
                (i + 1) % per
            )));
        }
    }
    if op.is_uniformity_preserving() && blocks.iter().any(|b| b.len() != blocks[0].len()) {
        return Err(Error::VerificationFailed(
            "ergodic classes have unequal sizes".into(),
        ));
    }
    Ok(ErgodicClasses { blocks })
}

/// Whether every row of `p` (a power `M^d`) is the whole class `d` steps ahead.
fn full_pattern(p: &TransferMatrix, classes: &ErgodicClasses, class_of: &[usize], d: usize) -> bool {
    let n = classes.period();
    (0..p.q()).all(|a| p.row(a) == classes.blocks[(class_of[a] + d) % n])
}

/// `con(*)`: least `d > 0` such that every element of `H_i` reaches every
/// element of `H_{i+d}` in exactly `d` steps.
pub fn connectability(op: &BinaryOperation) -> Result<usize> {
    let classes = ergodic_classes(op)?;
    let m = one_step_matrix(op);
    let q = op.q();
    let class_of: Vec<usize> = (0..q).map(|x| classes.class_of(x)).collect();
    let cap = q << q;
    let mut p = m;
    for d in 1..=cap {
        if full_pattern(&p, &classes, &class_of, d) {
            let next = p.mul(&m);
            if !full_pattern(&next, &classes, &class_of, d + 1) {
                return Err(Error::VerificationFailed(format!(
                    "connectability pattern at {d} is not preserved at {}",
                    d + 1
                )));
            }
            return Ok(d);
        }
        p = p.mul(&m);
    }
    Err(Error::IterationBudgetExceeded(cap))
}
