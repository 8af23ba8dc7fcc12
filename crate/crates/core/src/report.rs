//! One-shot classification of an operation into a serializable report.

use crate::error::{Error, Result};
use crate::graph::{connectability, ergodic_classes, is_ergodic, is_irreducible, period};
use crate::limits::Limits;
use crate::op::BinaryOperation;
use crate::partitions::{enumerate_stable_partitions, is_periodic_partition};
use crate::residue::{residue_chain, strong_connectability};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::time::Instant;

/// SHA-256 of the canonical `{"q":..,"table":..}` encoding, in hex.
pub fn table_digest(op: &BinaryOperation) -> String {
    let canonical = serde_json::json!({ "q": op.q(), "table": op.rows() });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StablePartitionReport {
    pub partition: Vec<Vec<usize>>,
    pub period: usize,
    pub block_size: usize,
    /// `R_0 = H, R_1 = K_H, ..`; present for ergodic operations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_chain: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_degree: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub graph_ms: f64,
    pub partitions_ms: f64,
    pub residues_ms: f64,
}

/// Every decided property and computed structure of one operation.
///
/// Fields that could not be computed within the configured caps, or that
/// are undefined for the operation, are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub digest: String,
    pub q: usize,
    pub uniformity_preserving: bool,
    pub quasigroup: bool,
    pub irreducible: bool,
    pub ergodic: bool,
    pub strongly_ergodic: Option<bool>,
    pub period: Option<usize>,
    pub connectability: Option<usize>,
    pub strong_connectability: Option<usize>,
    pub ergodic_classes: Option<Vec<Vec<usize>>>,
    pub stable_partitions: Option<Vec<StablePartitionReport>>,
    /// Why optional sections were skipped, if any were.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClassifyOptions {
    pub limits: Limits,
    pub timings: bool,
}

pub fn classify(op: &BinaryOperation, options: &ClassifyOptions) -> Result<ClassificationReport> {
    let limits = &options.limits;
    let t0 = Instant::now();
    let up = op.is_uniformity_preserving();
    let irreducible = is_irreducible(op);
    let ergodic = is_ergodic(op);
    let (per, con, classes) = if irreducible {
        (
            Some(period(op)?),
            Some(connectability(op)?),
            Some(ergodic_classes(op)?.blocks.iter().map(|b| b.to_vec()).collect()),
        )
    } else {
        (None, None, None)
    };
    let graph_ms = t0.elapsed().as_secs_f64() * 1e3;

    let mut notes = Vec::new();
    let t1 = Instant::now();
    let stable = match enumerate_stable_partitions(op, limits) {
        Ok(s) => Some(s),
        Err(e @ Error::AlphabetTooLarge { .. }) => {
            notes.push(format!("stable partitions skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let partitions_ms = t1.elapsed().as_secs_f64() * 1e3;

    let t2 = Instant::now();
    let residues_wanted = up && ergodic && limits.check_q(op.q()).is_ok();
    let stable_reports: Option<Vec<StablePartitionReport>> = match &stable {
        None => None,
        Some(list) => Some(
            list.par_iter()
                .map(|h| {
                    let per = is_periodic_partition(op, h).1.unwrap();
                    let chain = if residues_wanted {
                        Some(residue_chain(op, h, limits)?)
                    } else {
                        None
                    };
                    Ok(StablePartitionReport {
                        partition: h.to_vecs(),
                        period: per,
                        block_size: h.block_size().unwrap(),
                        residue_chain: chain
                            .as_ref()
                            .map(|c| c.chain.iter().map(|p| p.to_vecs()).collect()),
                        residual_degree: chain.as_ref().map(|c| c.degree),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let strongly_ergodic = if !up || !ergodic {
        Some(false)
    } else {
        stable_reports
            .as_ref()
            .filter(|_| residues_wanted)
            .map(|r| r.iter().all(|s| s.residual_degree == Some(0)))
    };
    if up && ergodic && strongly_ergodic.is_none() {
        notes.push("strong ergodicity undecided: alphabet above the residue cap".into());
    }
    let scon = if strongly_ergodic == Some(true) && limits.check_oracle(op.q()).is_ok() {
        Some(strong_connectability(op, limits)?)
    } else {
        None
    };
    let residues_ms = t2.elapsed().as_secs_f64() * 1e3;

    Ok(ClassificationReport {
        digest: table_digest(op),
        q: op.q(),
        uniformity_preserving: up,
        quasigroup: op.is_quasigroup(),
        irreducible,
        ergodic,
        strongly_ergodic,
        period: per,
        connectability: con,
        strong_connectability: scon,
        ergodic_classes: classes,
        stable_partitions: stable_reports,
        notes,
        timings: options.timings.then_some(Timings {
            graph_ms,
            partitions_ms,
            residues_ms,
        }),
    })
}
