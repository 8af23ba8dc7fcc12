//! Shared proptest strategies.

use crate::op::BinaryOperation;
use crate::partitions::{Partition, SubsetFamily};
use crate::subset::Subset;
use proptest::prelude::*;

/// A uniformity preserving operation: every column is a random permutation.
pub fn arb_up_op(q: usize) -> impl Strategy<Value = BinaryOperation> {
    let column = Just((0..q).collect::<Vec<usize>>()).prop_shuffle();
    prop::collection::vec(column, q).prop_map(move |cols| {
        BinaryOperation::from_fn(q, |a, b| cols[b][a])
    })
}

pub fn arb_partition(q: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..q, q).prop_map(|labels| Partition::from_labels(&labels))
}

/// A family of nonempty subsets; not necessarily a cover.
pub fn arb_family(q: usize, max_len: usize) -> impl Strategy<Value = SubsetFamily> {
    prop::collection::vec(1u16..(1 << q), 1..=max_len)
        .prop_map(move |m| SubsetFamily::new(q, m.into_iter().map(Subset).collect()))
}

/// A cover: random nonempty members plus singletons for anything missed.
pub fn arb_cover(q: usize, max_len: usize) -> impl Strategy<Value = SubsetFamily> {
    arb_family(q, max_len).prop_map(move |f| {
        let missing = Subset::full(q).difference(f.union());
        let mut m = f.members().to_vec();
        if !missing.is_empty() {
            m.push(missing);
        }
        SubsetFamily::new(q, m)
    })
}
