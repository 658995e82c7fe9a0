// SPDX-License-Identifier: Apache-2.0

//! Centralized peeling: single `(k,l)`-core extraction and the full
//! decomposition that serves as the oracle for the distributed algorithms.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, VertexId};
use crate::index::{CorenessPair, SkylineSet};
use crate::{Error, Result};

/// Per-vertex anchored corenesses: `lrow(v)[k] = l_max(v, k)` for
/// `k in 0..=kmax(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredTable {
    rows: Vec<Vec<u32>>,
}

impl AnchoredTable {
    /// Every row must be non-empty.
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        if let Some(v) = rows.iter().position(Vec::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "empty anchored row for vertex {v}"
            )));
        }
        Ok(AnchoredTable { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn kmax(&self, v: VertexId) -> u32 {
        (self.rows[v as usize].len() - 1) as u32
    }

    pub fn lrow(&self, v: VertexId) -> &[u32] {
        &self.rows[v as usize]
    }

    pub fn l_max(&self, v: VertexId, k: u32) -> Option<u32> {
        self.rows[v as usize].get(k as usize).copied()
    }

    /// `Φ(v)` in `k`-ascending order.
    pub fn phi(&self, v: VertexId) -> impl Iterator<Item = CorenessPair> + '_ {
        self.rows[v as usize]
            .iter()
            .enumerate()
            .map(|(k, &l)| CorenessPair::new(k as u32, l))
    }

    /// `v ∈ (k,l)-core`.
    pub fn contains(&self, v: VertexId, k: u32, l: u32) -> bool {
        self.l_max(v, k).is_some_and(|lm| lm >= l)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Partial nesting along each row and the degree bounds.
    pub fn validate(&self, g: &DirectedGraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "table has {} rows for {} vertices",
                self.n(),
                g.n()
            )));
        }
        for v in g.vertices() {
            let row = self.lrow(v);
            if row.windows(2).any(|w| w[0] < w[1]) {
                return Err(Error::InvalidArgument(format!("row of {v} increases in k")));
            }
            if self.kmax(v) as usize > g.in_degree(v) || row[0] as usize > g.out_degree(v) {
                return Err(Error::InvalidArgument(format!(
                    "row of {v} exceeds its degrees"
                )));
            }
        }
        Ok(())
    }
}

/// Vertex set of the `(k,l)`-core by repeated deletion of vertices whose
/// in-degree drops below `k` or out-degree below `l`. Sorted ascending.
pub fn dcore(g: &DirectedGraph, k: u32, l: u32) -> Vec<VertexId> {
    let n = g.n();
    let mut in_deg: Vec<u32> = g.vertices().map(|v| g.in_degree(v) as u32).collect();
    let mut out_deg: Vec<u32> = g.vertices().map(|v| g.out_degree(v) as u32).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<VertexId> = g
        .vertices()
        .filter(|&v| in_deg[v as usize] < k || out_deg[v as usize] < l)
        .collect();
    for &v in &queue {
        removed[v as usize] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in g.out_neighbors(x) {
            let y_ = y as usize;
            in_deg[y_] -= 1;
            if !removed[y_] && in_deg[y_] < k {
                removed[y_] = true;
                queue.push_back(y);
            }
        }
        for &z in g.in_neighbors(x) {
            let z_ = z as usize;
            out_deg[z_] -= 1;
            if !removed[z_] && out_deg[z_] < l {
                removed[z_] = true;
                queue.push_back(z);
            }
        }
    }
    g.vertices().filter(|&v| !removed[v as usize]).collect()
}

/// Degrees restricted to the live vertex set, with cascade deletion.
struct Peeler<'g> {
    g: &'g DirectedGraph,
    alive: Vec<bool>,
    in_deg: Vec<u32>,
    out_deg: Vec<u32>,
    queued: Vec<bool>,
    queue: Vec<VertexId>,
}

impl<'g> Peeler<'g> {
    fn new(g: &'g DirectedGraph) -> Self {
        Peeler {
            g,
            alive: vec![true; g.n()],
            in_deg: g.vertices().map(|v| g.in_degree(v) as u32).collect(),
            out_deg: g.vertices().map(|v| g.out_degree(v) as u32).collect(),
            queued: vec![false; g.n()],
            queue: Vec::new(),
        }
    }

    fn push(&mut self, v: VertexId) {
        if !self.queued[v as usize] {
            self.queued[v as usize] = true;
            self.queue.push(v);
        }
    }

    /// Deletes everything queued plus every live vertex whose in-degree
    /// falls below `k` or out-degree to `l_floor` or less. Calls `on_delete`
    /// for each deleted vertex.
    fn cascade(&mut self, k: u32, l_floor: Option<u32>, mut on_delete: impl FnMut(VertexId)) {
        while let Some(x) = self.queue.pop() {
            self.alive[x as usize] = false;
            on_delete(x);
            for &y in self.g.out_neighbors(x) {
                let y_ = y as usize;
                if self.alive[y_] {
                    self.in_deg[y_] -= 1;
                    if self.in_deg[y_] < k {
                        self.push(y);
                    }
                }
            }
            for &z in self.g.in_neighbors(x) {
                let z_ = z as usize;
                if self.alive[z_] {
                    self.out_deg[z_] -= 1;
                    if l_floor.is_some_and(|f| self.out_deg[z_] <= f) {
                        self.push(z);
                    }
                }
            }
        }
    }
}

/// Full anchored decomposition. For each `k` the `(k,0)`-core is peeled by
/// minimum out-degree: every vertex at the current minimum `d` is deleted in
/// one batch (with the cascade it triggers) and records `l_max(v,k) = d`.
pub fn peel_decompose(g: &DirectedGraph) -> AnchoredTable {
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); g.n()];
    // (k,0)-core, shrunk as k grows
    let mut base = Peeler::new(g);
    let mut members: Vec<VertexId> = g.vertices().collect();

    for k in 0u32.. {
        for &v in &members {
            if base.in_deg[v as usize] < k {
                base.push(v);
            }
        }
        base.cascade(k, None, |_| {});
        members.retain(|&v| base.alive[v as usize]);
        if members.is_empty() {
            break;
        }

        let mut work = Peeler {
            g,
            alive: base.alive.clone(),
            in_deg: base.in_deg.clone(),
            out_deg: base.out_deg.clone(),
            queued: base.queued.clone(),
            queue: Vec::new(),
        };
        let mut remaining = members.clone();
        while !remaining.is_empty() {
            let d = remaining
                .iter()
                .map(|&v| work.out_deg[v as usize])
                .min()
                .expect("non-empty");
            for &v in &remaining {
                if work.out_deg[v as usize] <= d {
                    work.push(v);
                }
            }
            work.cascade(k, Some(d), |x| rows[x as usize].push(d));
            remaining.retain(|&v| work.alive[v as usize]);
        }
    }

    // every vertex belongs to the (0,0)-core, so no row is empty
    debug_assert!(rows.iter().all(|r| !r.is_empty()));
    AnchoredTable { rows }
}

/// Per vertex, the skyline of its anchored corenesses.
pub fn anchored_to_skyline(table: &AnchoredTable) -> Vec<SkylineSet> {
    (0..table.n() as VertexId)
        .map(|v| SkylineSet::from_pairs(table.phi(v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::generate_random_digraph;

    // Naive fixpoint: rescan every surviving vertex until nothing changes.
    fn naive_dcore(g: &DirectedGraph, k: u32, l: u32) -> Vec<VertexId> {
        let mut keep: Vec<bool> = vec![true; g.n()];
        loop {
            let mut changed = false;
            for v in g.vertices() {
                if !keep[v as usize] {
                    continue;
                }
                let ins = g
                    .in_neighbors(v)
                    .iter()
                    .filter(|&&u| keep[u as usize])
                    .count();
                let outs = g
                    .out_neighbors(v)
                    .iter()
                    .filter(|&&u| keep[u as usize])
                    .count();
                if (ins as u32) < k || (outs as u32) < l {
                    keep[v as usize] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        g.vertices().filter(|&v| keep[v as usize]).collect()
    }

    #[test]
    fn zero_core_is_everything() {
        let g = generate_random_digraph(20, 0.1, 4).unwrap();
        assert_eq!(dcore(&g, 0, 0), g.vertices().collect::<Vec<_>>());
    }

    #[test]
    fn sample8_two_two_core() {
        let g = fixtures::sample8();
        assert_eq!(fixtures::labels_of(&g, &dcore(&g, 2, 2)), vec![1, 4, 5, 6]);
    }

    #[test]
    fn dcore_matches_naive_fixpoint() {
        let g = generate_random_digraph(30, 0.2, 7).unwrap();
        assert_eq!(dcore(&g, 2, 1), naive_dcore(&g, 2, 1));
        for k in 0..6 {
            for l in 0..6 {
                assert_eq!(dcore(&g, k, l), naive_dcore(&g, k, l), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn clique7_phi_v2() {
        let g = fixtures::clique7();
        let t = peel_decompose(&g);
        let v2 = g.id_of(2).unwrap();
        let phi: Vec<_> = t.phi(v2).map(|p| (p.k, p.l)).collect();
        assert_eq!(phi, vec![(0, 2), (1, 2), (2, 2), (3, 1)]);
    }

    #[test]
    fn sample8_phi_v1() {
        let g = fixtures::sample8();
        let t = peel_decompose(&g);
        assert_eq!(t.lrow(g.id_of(1).unwrap()), &[2, 2, 2]);
    }

    #[test]
    fn arc_free_graph() {
        let t = peel_decompose(&DirectedGraph::empty(3));
        for v in 0..3 {
            assert_eq!(t.kmax(v), 0);
            assert_eq!(t.lrow(v), &[0]);
        }
        assert_eq!(peel_decompose(&DirectedGraph::empty(0)).n(), 0);
    }

    #[test]
    fn anchored_to_skyline_examples() {
        let t = AnchoredTable::from_rows(vec![vec![2, 2, 2, 1], vec![2, 2, 2], vec![0]]).unwrap();
        let sky = anchored_to_skyline(&t);
        assert_eq!(sky[0].to_string(), "(2,2) (3,1)");
        assert_eq!(sky[1].to_string(), "(2,2)");
        assert_eq!(sky[2].to_string(), "(0,0)");
    }

    #[test]
    fn table_agrees_with_dcore_grid() {
        for seed in 0..8 {
            let g = generate_random_digraph(25, 0.15, seed).unwrap();
            let t = peel_decompose(&g);
            t.validate(&g).unwrap();
            let max_in = g.vertices().map(|v| g.in_degree(v)).max().unwrap_or(0) as u32;
            let max_out = g.vertices().map(|v| g.out_degree(v)).max().unwrap_or(0) as u32;
            for k in 0..=max_in + 1 {
                for l in 0..=max_out + 1 {
                    let core = dcore(&g, k, l);
                    let from_table: Vec<_> =
                        g.vertices().filter(|&v| t.contains(v, k, l)).collect();
                    assert_eq!(core, from_table, "seed={seed} k={k} l={l}");
                }
            }
        }
    }

    #[test]
    fn from_rows_rejects_empty_row() {
        assert!(AnchoredTable::from_rows(vec![vec![0], vec![]]).is_err());
    }
}
