//! Exhaustive enumeration and classification of small operations.

use crate::error::{Error, Result};
use crate::graph::{is_ergodic, is_irreducible};
use crate::limits::Limits;
use crate::op::BinaryOperation;
use crate::report::table_digest;
use crate::residue::{is_strongly_ergodic, residue_chain};
use crate::partitions::enumerate_stable_partitions;
use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Largest `q` for the uniformity-preserving census (`(q!)^q` tables).
pub const MAX_UP_CENSUS_Q: usize = 4;
/// Largest `q` for the census over all `q^(q*q)` tables.
pub const MAX_ALL_CENSUS_Q: usize = 3;

fn permutations(q: usize) -> Vec<Vec<usize>> {
    (0..q).permutations(q).collect()
}

fn from_columns(q: usize, perms: &[Vec<usize>], cols: &[usize]) -> BinaryOperation {
    BinaryOperation::from_fn(q, |a, b| perms[cols[b]][a])
}

/// Every table whose columns are permutations, in lexicographic order of
/// the column permutation indices.
pub fn uniformity_preserving_tables(q: usize) -> Vec<BinaryOperation> {
    uniformity_preserving_shard(q, None)
}

/// Tables whose first column is permutation number `first` (all if `None`).
pub fn uniformity_preserving_shard(q: usize, first: Option<usize>) -> Vec<BinaryOperation> {
    let perms = permutations(q);
    let n = perms.len();
    let firsts: Vec<usize> = match first {
        Some(i) => vec![i],
        None => (0..n).collect(),
    };
    firsts
        .into_iter()
        .flat_map(|f| {
            let perms = &perms;
            std::iter::repeat_n(0..n, q.saturating_sub(1))
                .multi_cartesian_product()
                .map(move |rest| {
                    let cols: Vec<usize> = std::iter::once(f).chain(rest).collect();
                    from_columns(q, perms, &cols)
                })
        })
        .collect()
}

/// Latin squares of order `q`.
pub fn latin_squares(q: usize) -> Vec<BinaryOperation> {
    uniformity_preserving_tables(q)
        .into_iter()
        .filter(BinaryOperation::is_quasigroup)
        .collect()
}

/// Every `q x q` table, uniformity preserving or not.
pub fn all_tables(q: usize) -> Vec<BinaryOperation> {
    std::iter::repeat_n(0..q, q * q)
        .multi_cartesian_product()
        .map(|cells| BinaryOperation::from_fn(q, |a, b| cells[a * q + b]))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CensusScope {
    #[default]
    UniformityPreserving,
    LatinSquares,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub scope: CensusScope,
    /// Keep only tables that are the least of their relabeling class.
    pub canonical_only: bool,
}

/// The table relabeled by `sigma`: `sigma(a) *' sigma(b) = sigma(a * b)`.
pub fn relabel(op: &BinaryOperation, sigma: &[usize]) -> BinaryOperation {
    let q = op.q();
    let mut inv = vec![0; q];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    BinaryOperation::from_fn(q, |a, b| sigma[op.apply(inv[a], inv[b])])
}

/// True when no relabeling gives a lexicographically smaller table.
pub fn is_canonical(op: &BinaryOperation) -> bool {
    (0..op.q())
        .permutations(op.q())
        .all(|sigma| relabel(op, &sigma).entries() >= op.entries())
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CensusRecord {
    pub q: usize,
    pub digest: String,
    pub table: Vec<Vec<usize>>,
    pub uniformity_preserving: bool,
    pub quasigroup: bool,
    pub irreducible: bool,
    pub ergodic: bool,
    pub strongly_ergodic: bool,
    /// Strong ergodicity of the inverse operation, for uniformity-preserving tables.
    pub inverse_strongly_ergodic: Option<bool>,
    /// Largest residual degree over the stable partitions (ergodic tables only).
    pub max_residual_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub checked: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub q: usize,
    pub tables: usize,
    /// Counts keyed by the flags `up,qg,irr,erg,serg` rendered as 0/1.
    pub flag_counts: BTreeMap<String, usize>,
    pub theorems: Vec<TheoremCheck>,
    /// Tables where strong ergodicity differs between the operation and its
    /// inverse; reported, never a failure.
    pub inverse_asymmetry: Vec<String>,
    /// Digests of tables carrying a stable partition of residual degree >= 2.
    pub degree_two_witnesses: Vec<String>,
    pub max_residual_degree: usize,
}

pub fn classify_record(op: &BinaryOperation, limits: &Limits) -> Result<CensusRecord> {
    let up = op.is_uniformity_preserving();
    let ergodic = is_ergodic(op);
    let se = is_strongly_ergodic(op, limits)?;
    let inverse_se = if up {
        Some(is_strongly_ergodic(&op.inverse_op()?, limits)?)
    } else {
        None
    };
    let max_degree = if up && ergodic {
        let mut d = 0;
        for h in enumerate_stable_partitions(op, limits)? {
            d = d.max(residue_chain(op, &h, limits)?.degree);
        }
        Some(d)
    } else {
        None
    };
    Ok(CensusRecord {
        q: op.q(),
        digest: table_digest(op),
        table: op.rows(),
        uniformity_preserving: up,
        quasigroup: op.is_quasigroup(),
        irreducible: is_irreducible(op),
        ergodic,
        strongly_ergodic: se,
        inverse_strongly_ergodic: inverse_se,
        max_residual_degree: max_degree,
    })
}

/// Classifies every table in scope, sharded by first column across the
/// rayon pool. Records come back sorted by digest.
pub fn run_census(q: usize, options: &CensusOptions, limits: &Limits) -> Result<Vec<CensusRecord>> {
    let scope = options.scope;
    let cap = match scope {
        CensusScope::All => MAX_ALL_CENSUS_Q,
        _ => MAX_UP_CENSUS_Q,
    };
    if q == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if q > cap {
        return Err(Error::AlphabetTooLarge { q, max: cap });
    }
    let shards: Vec<Vec<BinaryOperation>> = match scope {
        CensusScope::All => vec![all_tables(q)],
        _ => (0..(1..=q).product::<usize>())
            .map(|f| uniformity_preserving_shard(q, Some(f)))
            .collect(),
    };
    let mut records: Vec<CensusRecord> = shards
        .into_par_iter()
        .flat_map_iter(|shard| shard.into_iter())
        .filter(|op| scope != CensusScope::LatinSquares || op.is_quasigroup())
        .filter(|op| !options.canonical_only || is_canonical(op))
        .map(|op| classify_record(&op, limits))
        .collect::<Result<_>>()?;
    records.sort();
    Ok(records)
}

fn flag_key(r: &CensusRecord) -> String {
    [r.uniformity_preserving, r.quasigroup, r.irreducible, r.ergodic, r.strongly_ergodic]
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect()
}

/// Aggregates records and checks the global theorems on them.
pub fn summarize(q: usize, records: &[CensusRecord]) -> Result<CensusSummary> {
    let mut flag_counts = BTreeMap::new();
    for r in records {
        *flag_counts.entry(flag_key(r)).or_insert(0) += 1;
    }

    let mut quasigroup = TheoremCheck {
        name: "quasigroup implies strongly ergodic".into(),
        checked: 0,
        violations: vec![],
    };
    let mut inverse = TheoremCheck {
        name: "irreducibility and ergodicity agree with the inverse".into(),
        checked: 0,
        violations: vec![],
    };
    let mut inverse_asymmetry = vec![];
    for r in records {
        if r.quasigroup {
            quasigroup.checked += 1;
            if !r.strongly_ergodic {
                quasigroup.violations.push(r.digest.clone());
            }
        }
        if r.uniformity_preserving {
            inverse.checked += 1;
            let op = BinaryOperation::from_rows(&r.table);
            let inv = op.inverse_op()?;
            if is_irreducible(&inv) != r.irreducible || is_ergodic(&inv) != r.ergodic {
                inverse.violations.push(r.digest.clone());
            }
            if r.inverse_strongly_ergodic != Some(r.strongly_ergodic) {
                inverse_asymmetry.push(r.digest.clone());
            }
        }
    }
    let degree_two_witnesses = records
        .iter()
        .filter(|r| r.max_residual_degree.is_some_and(|d| d >= 2))
        .map(|r| r.digest.clone())
        .collect();
    Ok(CensusSummary {
        q,
        tables: records.len(),
        flag_counts,
        theorems: vec![quasigroup, inverse],
        inverse_asymmetry,
        degree_two_witnesses,
        max_residual_degree: records
            .iter()
            .filter_map(|r| r.max_residual_degree)
            .max()
            .unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn scope(scope: CensusScope) -> CensusOptions {
        CensusOptions {
            scope,
            canonical_only: false,
        }
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn counts_match_closed_forms() {
        for q in 1..=3 {
            let tables = uniformity_preserving_tables(q);
            assert_eq!(tables.len(), factorial(q).pow(q as u32));
            let distinct: HashSet<Vec<u8>> =
                tables.iter().map(|t| t.entries().to_vec()).collect();
            assert_eq!(distinct.len(), tables.len());
            assert!(tables.iter().all(|t| t.is_uniformity_preserving()));
        }
        assert_eq!(all_tables(2).len(), 16);
        assert_eq!(all_tables(2).iter().filter(|t| t.is_uniformity_preserving()).count(), 4);
    }

    #[test]
    fn latin_square_counts() {
        // reduced-form counts times q!(q-1)!
        assert_eq!(latin_squares(2).len(), 2);
        assert_eq!(latin_squares(3).len(), 12);
        assert_eq!(latin_squares(4).len(), 576);
    }

    #[test]
    fn shards_partition_the_space() {
        let whole = uniformity_preserving_tables(3);
        let sharded: Vec<_> = (0..6).flat_map(|f| uniformity_preserving_shard(3, Some(f))).collect();
        assert_eq!(whole, sharded);
    }

    #[test]
    fn census_of_order_two() {
        let records = run_census(2, &scope(CensusScope::UniformityPreserving), &Limits::default()).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(records.iter().filter(|r| r.quasigroup).count(), 2);
        let summary = summarize(2, &records).unwrap();
        assert!(summary.theorems.iter().all(|t| t.violations.is_empty()));
    }

    #[test]
    fn census_of_order_three_checks_theorems() {
        let records = run_census(3, &scope(CensusScope::UniformityPreserving), &Limits::default()).unwrap();
        assert_eq!(records.len(), 216);
        let summary = summarize(3, &records).unwrap();
        for t in &summary.theorems {
            assert!(t.violations.is_empty(), "{}: {:?}", t.name, t.violations);
        }
        assert_eq!(summary.theorems[0].checked, 12);
        assert_eq!(summary.theorems[1].checked, 216);
        assert_eq!(summary.flag_counts.values().sum::<usize>(), 216);
    }

    #[test]
    fn census_is_order_independent() {
        let a = run_census(2, &scope(CensusScope::All), &Limits::default()).unwrap();
        let b = run_census(2, &scope(CensusScope::All), &Limits::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(
            run_census(5, &scope(CensusScope::UniformityPreserving), &Limits::default()),
            Err(Error::AlphabetTooLarge { q: 5, max: 4 })
        ));
        assert!(matches!(
            run_census(4, &scope(CensusScope::All), &Limits::default()),
            Err(Error::AlphabetTooLarge { q: 4, max: 3 })
        ));
    }

    #[test]
    fn canonical_filter_picks_one_per_class() {
        let all = uniformity_preserving_tables(3);
        let canon: Vec<_> = all.iter().filter(|t| is_canonical(t)).collect();
        // every table relabels onto exactly one canonical representative
        let reps: HashSet<Vec<u8>> = all
            .iter()
            .map(|t| {
                (0..3)
                    .permutations(3)
                    .map(|s| relabel(t, &s).entries().to_vec())
                    .min()
                    .unwrap()
            })
            .collect();
        assert_eq!(canon.len(), reps.len());
        assert!(canon.len() < all.len());
        let xnor = BinaryOperation::from_fn(2, |a, b| 1 ^ a ^ b);
        assert_eq!(relabel(&crate::op::named::xor(), &[1, 0]), xnor);
    }
}
