// SPDX-License-Identifier: Apache-2.0

//! SNAP-style edge-list ingestion.
//!
//! One `<src> <dst>` pair of integer labels per line, whitespace separated.
//! Lines starting with `#` are comments, except that a `# n=<count>` comment
//! declares labels `0..count` as vertices so isolated vertices survive a
//! round trip.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use flate2::read::GzDecoder;

use super::{DirectedGraph, VertexId};
use crate::{Error, Result};

/// Counts gathered while cleaning an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub lines: usize,
    pub arcs_read: usize,
    pub self_loops: usize,
    pub duplicates: usize,
    pub declared_n: Option<usize>,
}

pub fn parse_edge_list(input: impl BufRead) -> Result<DirectedGraph> {
    parse_edge_list_with_report(input).map(|(g, _)| g)
}

pub fn parse_edge_list_with_report(input: impl BufRead) -> Result<(DirectedGraph, ParseReport)> {
    let mut report = ParseReport::default();
    let mut raw: Vec<(u64, u64)> = Vec::new();

    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        report.lines = lineno;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(count) = comment.trim().strip_prefix("n=") {
                let count = count.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("bad vertex-count header {trimmed:?}"),
                })?;
                report.declared_n = Some(count);
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `<src> <dst>`, got {trimmed:?}"),
            });
        };
        let label = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("vertex label {tok:?} is not a non-negative integer"),
            })
        };
        raw.push((label(a)?, label(b)?));
    }
    report.arcs_read = raw.len();

    let mut labels: BTreeSet<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    if let Some(count) = report.declared_n {
        labels.extend(0..count as u64);
    }
    let labels: Vec<u64> = labels.into_iter().collect();
    let id = |l: u64| labels.binary_search(&l).expect("label collected above") as VertexId;

    report.self_loops = raw.iter().filter(|&&(a, b)| a == b).count();
    let mut arcs: Vec<(VertexId, VertexId)> = raw
        .iter()
        .filter(|&&(a, b)| a != b)
        .map(|&(a, b)| (id(a), id(b)))
        .collect();
    arcs.sort_unstable();
    let before = arcs.len();
    arcs.dedup();
    report.duplicates = before - arcs.len();

    Ok((DirectedGraph::with_labels(labels, arcs)?, report))
}

/// Reads an edge list from disk; `.gz` files are decompressed on the fly.
pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<(DirectedGraph, ParseReport)> {
    let path = path.as_ref();
    let file = File::open(path)?;
    if path.extension().is_some_and(|e| e == "gz") {
        parse_edge_list_with_report(BufReader::new(GzDecoder::new(file)))
    } else {
        parse_edge_list_with_report(BufReader::new(file))
    }
}
