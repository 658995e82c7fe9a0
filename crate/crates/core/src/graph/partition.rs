// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use super::{DirectedGraph, VertexId};
use crate::{Error, Result};

/// Assignment of every vertex to one of `n_blocks` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMap {
    n_blocks: u32,
    block_of: Vec<u32>,
}

impl PartitionMap {
    pub fn new(n_blocks: u32, block_of: Vec<u32>) -> Result<Self> {
        if n_blocks == 0 {
            return Err(Error::InvalidArgument("n_blocks must be at least 1".into()));
        }
        if let Some(b) = block_of.iter().find(|&&b| b >= n_blocks) {
            return Err(Error::InvalidArgument(format!(
                "block {b} out of range for {n_blocks} blocks"
            )));
        }
        Ok(PartitionMap { n_blocks, block_of })
    }

    /// Every vertex in block 0.
    pub fn single(n: usize) -> Self {
        PartitionMap {
            n_blocks: 1,
            block_of: vec![0; n],
        }
    }

    pub fn n_blocks(&self) -> u32 {
        self.n_blocks
    }

    #[inline]
    pub fn block_of(&self, v: VertexId) -> u32 {
        self.block_of[v as usize]
    }

    pub fn blocks(&self) -> &[u32] {
        &self.block_of
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }
}

/// `block_of(v) = v mod n_blocks`.
pub fn hash_partition(g: &DirectedGraph, n_blocks: u32) -> Result<PartitionMap> {
    if n_blocks == 0 {
        return Err(Error::InvalidArgument("n_blocks must be at least 1".into()));
    }
    let block_of = g.vertices().map(|v| v % n_blocks).collect();
    PartitionMap::new(n_blocks, block_of)
}

/// Contiguous segments of capacity `C = ceil(n / n_blocks)`:
/// `block_of(v) = floor(v / C)`.
pub fn segment_partition(g: &DirectedGraph, n_blocks: u32) -> Result<PartitionMap> {
    if n_blocks == 0 {
        return Err(Error::InvalidArgument("n_blocks must be at least 1".into()));
    }
    let capacity = g.n().div_ceil(n_blocks as usize).max(1);
    let block_of = g
        .vertices()
        .map(|v| (v as usize / capacity) as u32)
        .collect();
    PartitionMap::new(n_blocks, block_of)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partitioner {
    Hash,
    Segment,
}

impl Partitioner {
    pub fn partition(self, g: &DirectedGraph, n_blocks: u32) -> Result<PartitionMap> {
        match self {
            Partitioner::Hash => hash_partition(g, n_blocks),
            Partitioner::Segment => segment_partition(g, n_blocks),
        }
    }
}

impl FromStr for Partitioner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hash" => Ok(Partitioner::Hash),
            "seg" => Ok(Partitioner::Segment),
            other => Err(Error::InvalidArgument(format!(
                "unknown partitioner {other:?} (expected hash or seg)"
            ))),
        }
    }
}

impl fmt::Display for Partitioner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Partitioner::Hash => "hash",
            Partitioner::Segment => "seg",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blocks(n: usize, p: Partitioner, b: u32) -> Vec<u32> {
        p.partition(&DirectedGraph::empty(n), b)
            .unwrap()
            .blocks()
            .to_vec()
    }

    #[test]
    fn hash_rule() {
        assert_eq!(blocks(5, Partitioner::Hash, 2), [0, 1, 0, 1, 0]);
        assert_eq!(blocks(8, Partitioner::Hash, 3), [0, 1, 2, 0, 1, 2, 0, 1]);
        assert_eq!(blocks(4, Partitioner::Hash, 1), [0; 4]);
    }

    #[test]
    fn segment_rule() {
        assert_eq!(blocks(8, Partitioner::Segment, 2), [0, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(blocks(5, Partitioner::Segment, 2), [0, 0, 0, 1, 1]);
        assert_eq!(blocks(4, Partitioner::Segment, 1), [0; 4]);
        // more blocks than vertices leaves trailing blocks empty
        assert_eq!(blocks(2, Partitioner::Segment, 5), [0, 1]);
        assert!(blocks(0, Partitioner::Segment, 3).is_empty());
    }

    #[test]
    fn zero_blocks_rejected() {
        let g = DirectedGraph::empty(3);
        assert!(hash_partition(&g, 0).is_err());
        assert!(segment_partition(&g, 0).is_err());
        assert!(PartitionMap::new(0, vec![]).is_err());
        assert!(PartitionMap::new(2, vec![0, 2]).is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in [Partitioner::Hash, Partitioner::Segment] {
            assert_eq!(p.to_string().parse::<Partitioner>().unwrap(), p);
        }
        assert!("metis".parse::<Partitioner>().is_err());
    }
}
