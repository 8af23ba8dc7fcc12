//! The Cayley tables printed in the reference literature on ergodic
//! operations, used as golden inputs.

use crate::op::BinaryOperation;

/// Irreducible with period 2; `{{0,1},{2},{3}}` is periodic but not balanced.
pub fn irreducible4() -> BinaryOperation {
    BinaryOperation::from_rows(&[[2, 3, 2, 2], [3, 2, 3, 3], [0, 0, 0, 1], [1, 1, 1, 0]])
}

/// Irreducible, not ergodic; the wedge of two stable partitions is unbalanced.
pub fn wedge_remark8() -> BinaryOperation {
    BinaryOperation::from_rows(&[
        [4, 5, 6, 7, 4, 4, 4, 4],
        [5, 4, 7, 6, 5, 5, 5, 5],
        [6, 7, 4, 5, 6, 6, 6, 6],
        [7, 6, 5, 4, 7, 7, 7, 7],
        [0, 0, 0, 0, 0, 1, 2, 3],
        [1, 1, 1, 1, 1, 0, 3, 2],
        [2, 2, 2, 2, 2, 3, 0, 1],
        [3, 3, 3, 3, 3, 2, 1, 0],
    ])
}

/// Irreducible, not ergodic; a stable partition whose residue is unbalanced.
pub fn residue_remark8() -> BinaryOperation {
    BinaryOperation::from_rows(&[
        [4, 5, 4, 5, 4, 4, 4, 4],
        [5, 4, 5, 4, 5, 5, 5, 5],
        [6, 7, 6, 7, 6, 6, 6, 6],
        [7, 6, 7, 6, 7, 7, 7, 7],
        [2, 2, 2, 2, 2, 3, 2, 3],
        [3, 3, 3, 3, 3, 2, 3, 2],
        [0, 0, 0, 0, 0, 1, 0, 1],
        [1, 1, 1, 1, 1, 0, 1, 0],
    ])
}

/// Ergodic but not strongly ergodic: `{{0,1},{2,3}}` has singleton residue.
pub fn not_strongly_ergodic4() -> BinaryOperation {
    BinaryOperation::from_rows(&[[2, 2, 0, 0], [3, 3, 1, 1], [1, 1, 3, 3], [0, 0, 2, 2]])
}

/// Strongly ergodic without being a quasigroup.
pub fn strongly_ergodic4() -> BinaryOperation {
    BinaryOperation::from_rows(&[[3, 3, 3, 3], [0, 1, 0, 0], [1, 0, 1, 1], [2, 2, 2, 2]])
}

/// Ergodic, not strongly ergodic, with a periodic cover that is not a partition.
pub fn cover_remark6() -> BinaryOperation {
    BinaryOperation::from_rows(&[
        [3, 3, 3, 0, 0, 0],
        [4, 4, 4, 1, 1, 1],
        [5, 5, 5, 2, 2, 2],
        [1, 1, 1, 5, 5, 5],
        [2, 2, 2, 3, 3, 3],
        [0, 0, 0, 4, 4, 4],
    ])
}

/// The printed cover for [`cover_remark6`].
pub fn cover_remark6_family() -> Vec<Vec<usize>> {
    vec![
        vec![0, 1],
        vec![0, 2],
        vec![1, 2],
        vec![3, 4],
        vec![3, 5],
        vec![4, 5],
    ]
}

/// Every printed table with its name.
pub fn named() -> Vec<(&'static str, BinaryOperation)> {
    vec![
        ("irreducible4", irreducible4()),
        ("wedge_remark8", wedge_remark8()),
        ("residue_remark8", residue_remark8()),
        ("not_strongly_ergodic4", not_strongly_ergodic4()),
        ("strongly_ergodic4", strongly_ergodic4()),
        ("cover_remark6", cover_remark6()),
    ]
}

pub fn all() -> Vec<BinaryOperation> {
    named().into_iter().map(|(_, op)| op).collect()
}
