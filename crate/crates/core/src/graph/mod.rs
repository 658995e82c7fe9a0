// SPDX-License-Identifier: Apache-2.0

//! Immutable simple directed graphs in dense-ID adjacency form.

mod generate;
mod parse;
mod partition;

use std::sync::OnceLock;

use crate::{Error, Result};

pub use generate::generate_random_digraph;
pub use parse::{parse_edge_list, parse_edge_list_with_report, read_edge_list_file, ParseReport};
pub use partition::{hash_partition, segment_partition, PartitionMap, Partitioner};

pub type VertexId = u32;

/// Compressed adjacency: `targets[offsets[v]..offsets[v + 1]]`, each list
/// sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Csr {
    fn from_sorted_pairs(n: usize, pairs: impl Iterator<Item = (VertexId, VertexId)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::new();
        for (src, dst) in pairs {
            offsets[src as usize + 1] += 1;
            targets.push(dst);
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// A directed, unweighted simple graph.
///
/// Vertices are dense IDs `0..n`; `labels[v]` is the original label of `v`.
/// Labels are strictly increasing in the dense ID, so label lookup is a
/// binary search. In- and out-adjacency lists are sorted ascending.
#[derive(Debug)]
pub struct DirectedGraph {
    labels: Vec<u64>,
    out_adj: Csr,
    in_adj: Csr,
    all_adj: OnceLock<Csr>,
}

impl Clone for DirectedGraph {
    fn clone(&self) -> Self {
        DirectedGraph {
            labels: self.labels.clone(),
            out_adj: self.out_adj.clone(),
            in_adj: self.in_adj.clone(),
            all_adj: OnceLock::new(),
        }
    }
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.out_adj == other.out_adj
    }
}

impl Eq for DirectedGraph {}

impl DirectedGraph {
    /// Builds a graph over vertices `0..n` labelled `0..n`. Self-loops and
    /// duplicate arcs are dropped.
    pub fn from_arcs(n: usize, arcs: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::with_labels((0..n as u64).collect(), arcs.to_vec())
    }

    /// Builds a graph with explicit labels; `labels` must be strictly
    /// increasing. Self-loops and duplicate arcs are dropped.
    pub fn with_labels(labels: Vec<u64>, mut arcs: Vec<(VertexId, VertexId)>) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "vertex labels must be strictly increasing".into(),
            ));
        }
        let n = labels.len();
        if n > VertexId::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "{n} vertices exceed the id space"
            )));
        }
        if let Some(&(u, v)) = arcs
            .iter()
            .find(|&&(u, v)| u as usize >= n || v as usize >= n)
        {
            return Err(Error::InvalidArgument(format!(
                "arc ({u},{v}) out of range for {n} vertices"
            )));
        }
        arcs.retain(|&(u, v)| u != v);
        arcs.sort_unstable();
        arcs.dedup();

        let out_adj = Csr::from_sorted_pairs(n, arcs.iter().copied());
        let mut reversed: Vec<_> = arcs.iter().map(|&(u, v)| (v, u)).collect();
        reversed.sort_unstable();
        let in_adj = Csr::from_sorted_pairs(n, reversed.into_iter());

        Ok(DirectedGraph {
            labels,
            out_adj,
            in_adj,
            all_adj: OnceLock::new(),
        })
    }

    /// Graph with `n` vertices and no arcs.
    pub fn empty(n: usize) -> Self {
        Self::from_arcs(n, &[]).expect("arc-free graph is always valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.out_adj.targets.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        0..self.n() as VertexId
    }

    #[inline]
    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.out_adj.row(v)
    }

    #[inline]
    pub fn in_neighbors(&self, v: VertexId) -> &[VertexId] {
        self.in_adj.row(v)
    }

    /// Union of in- and out-neighbours, sorted and deduplicated. Built
    /// lazily on first use.
    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.all_adj
            .get_or_init(|| {
                let n = self.n();
                let mut pairs = Vec::with_capacity(2 * self.arc_count());
                for v in 0..n as VertexId {
                    let (a, b) = (self.in_neighbors(v), self.out_neighbors(v));
                    let (mut i, mut j) = (0, 0);
                    while i < a.len() || j < b.len() {
                        let next = match (a.get(i), b.get(j)) {
                            (Some(&x), Some(&y)) if x == y => {
                                i += 1;
                                j += 1;
                                x
                            }
                            (Some(&x), Some(&y)) if x < y => {
                                i += 1;
                                x
                            }
                            (Some(_), Some(&y)) => {
                                j += 1;
                                y
                            }
                            (Some(&x), None) => {
                                i += 1;
                                x
                            }
                            (None, Some(&y)) => {
                                j += 1;
                                y
                            }
                            (None, None) => unreachable!(),
                        };
                        pairs.push((v, next));
                    }
                }
                Csr::from_sorted_pairs(n, pairs.into_iter())
            })
            .row(v)
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_neighbors(v).len()
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbors(v).len()
    }

    /// `deg^in + deg^out`.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// Maximum total degree over all vertices, 0 for the empty graph.
    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    #[inline]
    pub fn label(&self, v: VertexId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense ID of an original label.
    pub fn id_of(&self, label: u64) -> Option<VertexId> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|i| i as VertexId)
    }

    /// Walks both adjacency structures and checks the simple-graph and
    /// in/out consistency invariants.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(msg));
        if self.in_adj.targets.len() != self.out_adj.targets.len() {
            return fail("in/out arc totals differ".into());
        }
        for u in self.vertices() {
            let outs = self.out_neighbors(u);
            if outs.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("out-list of {u} not strictly ascending"));
            }
            if self.in_neighbors(u).windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("in-list of {u} not strictly ascending"));
            }
            for &v in outs {
                if v == u {
                    return fail(format!("self-loop at {u}"));
                }
                if self.in_neighbors(v).binary_search(&u).is_err() {
                    return fail(format!("arc ({u},{v}) missing from in-list of {v}"));
                }
            }
        }
        Ok(())
    }

    /// Subgraph induced by `keep` (any order, duplicates ignored). Vertex
    /// `i` of the result corresponds to `parent_ids[i]` of `self`; labels
    /// are carried over.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> Result<InducedSubgraph> {
        let n = self.n();
        if let Some(&bad) = keep.iter().find(|&&v| v as usize >= n) {
            return Err(Error::InvalidArgument(format!(
                "vertex {bad} out of range for {n} vertices"
            )));
        }
        let mut parent_ids = keep.to_vec();
        parent_ids.sort_unstable();
        parent_ids.dedup();

        let mut local = vec![VertexId::MAX; n];
        for (i, &v) in parent_ids.iter().enumerate() {
            local[v as usize] = i as VertexId;
        }
        let arcs = parent_ids
            .iter()
            .flat_map(|&u| {
                let local = &local;
                self.out_neighbors(u).iter().filter_map(move |&v| {
                    let lv = local[v as usize];
                    (lv != VertexId::MAX).then_some((local[u as usize], lv))
                })
            })
            .collect();
        let labels = parent_ids.iter().map(|&v| self.label(v)).collect();
        Ok(InducedSubgraph {
            graph: DirectedGraph::with_labels(labels, arcs)?,
            parent_ids,
        })
    }
}

#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: DirectedGraph,
    /// `parent_ids[i]` is the ID in the parent graph of local vertex `i`.
    pub parent_ids: Vec<VertexId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cycle() -> DirectedGraph {
        DirectedGraph::from_arcs(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn builds_sorted_consistent_adjacency() {
        let g =
            DirectedGraph::from_arcs(4, &[(2, 0), (0, 3), (0, 1), (3, 0), (1, 1), (0, 1)]).unwrap();
        assert_eq!(g.arc_count(), 4);
        assert_eq!(g.out_neighbors(0), &[1, 3]);
        assert_eq!(g.in_neighbors(0), &[2, 3]);
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.degree(0), 4);
        g.validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_arcs_and_unsorted_labels() {
        assert!(DirectedGraph::from_arcs(2, &[(0, 2)]).is_err());
        assert!(DirectedGraph::with_labels(vec![3, 1], vec![]).is_err());
    }

    #[test]
    fn induced_identity_and_empty() {
        let g = two_cycle();
        let all = g.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(all.graph, g);
        let none = g.induced_subgraph(&[]).unwrap();
        assert_eq!(none.graph.n(), 0);
        assert_eq!(none.graph.arc_count(), 0);
    }

    #[test]
    fn induced_single_vertex_of_two_cycle() {
        let sub = two_cycle().induced_subgraph(&[0]).unwrap();
        assert_eq!(sub.graph.n(), 1);
        assert_eq!(sub.graph.arc_count(), 0);
        assert_eq!(sub.parent_ids, vec![0]);
    }

    #[test]
    fn induced_rejects_out_of_range() {
        assert!(matches!(
            two_cycle().induced_subgraph(&[5]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn induced_keeps_labels() {
        let g = DirectedGraph::with_labels(vec![10, 20, 30], vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let sub = g.induced_subgraph(&[2, 1]).unwrap();
        assert_eq!(sub.graph.labels(), &[20, 30]);
        assert_eq!(sub.graph.arc_count(), 1);
        assert!(sub.graph.has_arc(0, 1));
        assert_eq!(g.id_of(30), Some(2));
        assert_eq!(g.id_of(31), None);
    }
}
