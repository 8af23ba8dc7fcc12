//! JSON formats for tables, partitions and families.
//!
//! A table file is `{"q": 4, "table": [[..], ..]}` with optional `labels`
//! (one name per element) and `factors` (alphabet sizes of a product,
//! the first factor most significant). Partitions and families are arrays of
//! arrays of flat element indices.

use crate::error::{Error, Result};
use crate::op::{validate_table, BinaryOperation};
use crate::partitions::{Partition, SubsetFamily};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableFile {
    pub q: usize,
    pub table: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTable {
    pub op: BinaryOperation,
    pub labels: Option<Vec<String>>,
    pub factors: Option<Vec<usize>>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
}

pub fn parse_table(text: &str) -> Result<ParsedTable> {
    let file: TableFile = serde_json::from_str(text).map_err(json_error)?;
    let op = validate_table(&file.table)?;
    if file.q != op.q() {
        return Err(Error::Parse(format!(
            "declared q = {} but the table has {} rows",
            file.q,
            op.q()
        )));
    }
    if let Some(labels) = &file.labels {
        if labels.len() != op.q() {
            return Err(Error::Parse(format!(
                "{} labels for an alphabet of {}",
                labels.len(),
                op.q()
            )));
        }
    }
    if let Some(factors) = &file.factors {
        let size = factors
            .iter()
            .try_fold(1usize, |acc, &f| acc.checked_mul(f))
            .unwrap_or(usize::MAX);
        if factors.contains(&0) || size != op.q() {
            return Err(Error::Parse(format!(
                "factors {factors:?} do not multiply to q = {}",
                op.q()
            )));
        }
    }
    Ok(ParsedTable {
        op,
        labels: file.labels,
        factors: file.factors,
    })
}

pub fn table_to_json(op: &BinaryOperation, factors: Option<&[usize]>) -> String {
    let file = TableFile {
        q: op.q(),
        table: op
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect(),
        labels: None,
        factors: factors.map(<[usize]>::to_vec),
    };
    serde_json::to_string(&file).expect("table serialization cannot fail")
}

fn parse_lists(text: &str) -> Result<Vec<Vec<usize>>> {
    serde_json::from_str(text).map_err(json_error)
}

pub fn parse_partition(text: &str, q: usize) -> Result<Partition> {
    Partition::from_vecs(q, &parse_lists(text)?)
}

/// Parses a family of nonempty subsets; duplicates collapse.
pub fn parse_family(text: &str, q: usize) -> Result<SubsetFamily> {
    let lists = parse_lists(text)?;
    if lists.iter().any(Vec::is_empty) {
        return Err(Error::EmptySet);
    }
    SubsetFamily::from_vecs(q, &lists)
}

pub fn partition_to_json(h: &Partition) -> String {
    serde_json::to_string(&h.to_vecs()).expect("partition serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;

    #[test]
    fn table_round_trip() {
        for (_, op) in tables::named() {
            let parsed = parse_table(&table_to_json(&op, None)).unwrap();
            assert_eq!(parsed.op, op);
        }
        let parsed = parse_table(&table_to_json(&tables::irreducible4(), Some(&[2, 2]))).unwrap();
        assert_eq!(parsed.factors, Some(vec![2, 2]));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_table("{\"q\": 2,\n \"table\": [[0, 1], [1 0]]}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.starts_with("line 2 column"), "{msg}"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            parse_table(r#"{"q":2,"table":[[0,2],[1,0]]}"#).unwrap_err(),
            Error::EntryOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                q: 2
            }
        );
        assert!(matches!(
            parse_table(r#"{"q":2,"table":[[0,1],[1]]}"#),
            Err(Error::NonSquare { row: 1, .. })
        ));
        assert!(matches!(parse_table(r#"{"q":3,"table":[[0,1],[1,0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_table(r#"{"q":2,"table":[[0,1],[1,0]],"factors":[3]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_table(r#"{"q":2,"table":[[0,1],[1,0]],"labels":["a"]}"#),
            Err(Error::Parse(_))
        ));
        assert!(matches!(parse_table(r#"{"q":0,"table":[]}"#), Err(Error::EmptyAlphabet)));
    }

    #[test]
    fn partitions_and_families() {
        let h = parse_partition("[[2,3],[0,1]]", 4).unwrap();
        assert_eq!(partition_to_json(&h), "[[0,1],[2,3]]");
        assert!(parse_partition("[[0,1],[1,2]]", 3).is_err());
        assert!(parse_partition("[[0,1]]", 3).is_err());
        assert!(parse_partition("[[0,40]]", 2).is_err());
        assert!(parse_partition("[[0,0],[1]]", 2).is_err());

        let f = parse_family("[[0,1],[1,2],[0,1]]", 3).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.is_cover());
        assert_eq!(parse_family("[[0],[]]", 2).unwrap_err(), Error::EmptySet);
        assert!(parse_family("[[99]]", 2).is_err());
    }
}
