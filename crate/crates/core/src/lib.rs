//! Ergodic theory of finite binary operations.
//!
//! Operations are Cayley tables over `{0, .., q-1}` with `q <= 16`. The
//! crate decides uniformity preservation, the quasigroup property,
//! irreducibility, ergodicity and strong ergodicity, and computes the
//! associated structures: periods, connectabilities, stable partitions,
//! first residues, generated partitions and product decompositions.

pub mod census;
pub mod error;
pub mod graph;
pub mod io;
pub mod limits;
pub mod matrix;
pub mod op;
pub mod partitions;
pub mod product;
pub mod report;
pub mod residue;
pub mod subset;
pub mod tables;

pub use error::{Error, ErrorKind, Result};
pub use limits::Limits;
pub use matrix::{BoolMatrix, TransferMatrix};
pub use op::{validate_table, BinaryOperation};
pub use partitions::{Partition, SubsetFamily};
pub use subset::{Subset, MAX_ALPHABET};

#[cfg(test)]
mod testutil;
