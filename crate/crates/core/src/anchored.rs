// SPDX-License-Identifier: Apache-2.0

//! Anchored-coreness decomposition in three engine phases.
//!
//! Phase I iterates the in-H-index to `kmax(v)`. Phase II iterates, for every
//! `k <= kmax(v)` at once, the out-H-index inside `G[k]` (the vertices with
//! `kmax >= k`), giving upper bounds `l_upp(k, v)`. Phase III lowers each
//! bound by one while `v` lacks `k` in-neighbours or `l_upp(k, v)`
//! out-neighbours whose own bound at `k` is at least as large.

use serde::{Deserialize, Serialize};

use crate::engine::{self, Audit, Direction, EngineConfig, EngineMetrics, VertexProgram};
use crate::graph::{DirectedGraph, PartitionMap, VertexId};
use crate::index::h_index_local;
use crate::peel::AnchoredTable;
use crate::Result;

/// Neighbour slot not yet written. Every neighbour broadcasts at
/// initialization, so no computation ever reads it.
const UNSEEN: u32 = u32::MAX;

#[inline]
fn slot(list: &[VertexId], u: VertexId) -> Option<usize> {
    list.binary_search(&u).ok()
}

/// Which degree the H-index iteration follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Values flow along arcs; converges to `kmax(v)`.
    In,
    /// Values flow against arcs; converges to the largest `l` with `v` in
    /// the `(0, l)`-core.
    Out,
}

/// n-order in- or out-H-index iteration on the whole graph.
pub struct HIndexProgram<'a> {
    pub g: &'a DirectedGraph,
    pub side: Side,
    pub audit: Option<&'a Audit>,
}

#[derive(Debug)]
pub struct HIndexState {
    h: u32,
    nb: Vec<u32>,
    flag: bool,
}

impl HIndexProgram<'_> {
    fn sources(&self, v: VertexId) -> &[VertexId] {
        match self.side {
            Side::In => self.g.in_neighbors(v),
            Side::Out => self.g.out_neighbors(v),
        }
    }
}

impl VertexProgram for HIndexProgram<'_> {
    type State = HIndexState;
    type Message = u32;
    type Output = u32;

    fn direction(&self) -> Direction {
        match self.side {
            Side::In => Direction::Out,
            Side::Out => Direction::In,
        }
    }

    fn init(&self, v: VertexId) -> (HIndexState, Option<u32>) {
        let d = self.sources(v).len();
        let h = d as u32;
        let state = HIndexState {
            h,
            nb: vec![UNSEEN; d],
            flag: false,
        };
        (state, Some(h))
    }

    fn on_message(&self, v: VertexId, s: &mut HIndexState, sender: VertexId, msg: &u32) {
        let Some(i) = slot(self.sources(v), sender) else {
            return;
        };
        if let Some(a) = self.audit {
            let old = s.nb[i];
            a.check(old == UNSEEN || *msg <= old, || {
                format!("H-index: neighbour {sender} of {v} rose {old} -> {msg}")
            });
        }
        s.nb[i] = *msg;
        if *msg < s.h {
            s.flag = true;
        }
    }

    fn after_messages(&self, _: VertexId, s: &mut HIndexState) -> Option<u32> {
        if !std::mem::take(&mut s.flag) {
            return None;
        }
        debug_assert!(s.nb.iter().all(|&x| x != UNSEEN));
        let h = h_index_local(s.nb.iter().copied(), s.nb.len());
        if h >= s.h {
            return None;
        }
        s.h = h;
        Some(h)
    }

    fn extract(&self, _: VertexId, s: HIndexState) -> u32 {
        s.h
    }
}

/// A whole per-`k` array with the entries that changed since the last
/// broadcast. Receivers ignore entries whose flag is clear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayMsg {
    pub values: Vec<u32>,
    pub changed: Vec<bool>,
}

impl ArrayMsg {
    fn fresh(values: &[u32]) -> Self {
        ArrayMsg {
            values: values.to_vec(),
            changed: vec![true; values.len()],
        }
    }

    fn merge_newer(&mut self, newer: &ArrayMsg) {
        self.values.clone_from(&newer.values);
        for (c, &n) in self.changed.iter_mut().zip(&newer.changed) {
            *c |= n;
        }
    }
}

/// Batched out-H-index iteration in `G[k]` for every `k <= kmax(v)`.
pub struct LuppProgram<'a> {
    pub g: &'a DirectedGraph,
    pub kmax: &'a [u32],
    pub audit: Option<&'a Audit>,
}

#[derive(Debug)]
pub struct LuppState {
    oh: Vec<u32>,
    /// `nb[k * outdeg + j]`: latest value at `k` from out-neighbour `j`.
    nb: Vec<u32>,
    flag: Vec<bool>,
}

impl VertexProgram for LuppProgram<'_> {
    type State = LuppState;
    type Message = ArrayMsg;
    type Output = Vec<u32>;

    fn direction(&self) -> Direction {
        Direction::In
    }

    fn init(&self, v: VertexId) -> (LuppState, Option<ArrayMsg>) {
        let outs = self.g.out_neighbors(v);
        let km = self.kmax[v as usize];
        let oh: Vec<u32> = (0..=km)
            .map(|k| outs.iter().filter(|&&u| self.kmax[u as usize] >= k).count() as u32)
            .collect();
        let msg = ArrayMsg::fresh(&oh);
        let state = LuppState {
            nb: vec![UNSEEN; oh.len() * outs.len()],
            flag: vec![false; oh.len()],
            oh,
        };
        (state, Some(msg))
    }

    fn on_message(&self, v: VertexId, s: &mut LuppState, sender: VertexId, msg: &ArrayMsg) {
        let outs = self.g.out_neighbors(v);
        let Some(j) = slot(outs, sender) else { return };
        let d = outs.len();
        for k in 0..s.oh.len().min(msg.values.len()) {
            if !msg.changed[k] {
                continue;
            }
            let x = msg.values[k];
            let cell = &mut s.nb[k * d + j];
            if let Some(a) = self.audit {
                let old = *cell;
                a.check(old == UNSEEN || x <= old, || {
                    format!("l_upp: neighbour {sender} of {v} at k={k} rose {old} -> {x}")
                });
            }
            *cell = x;
            if x < s.oh[k] {
                s.flag[k] = true;
            }
        }
    }

    fn after_messages(&self, v: VertexId, s: &mut LuppState) -> Option<ArrayMsg> {
        let outs = self.g.out_neighbors(v);
        let d = outs.len();
        let mut changed: Option<Vec<bool>> = None;
        for k in 0..s.oh.len() {
            if !std::mem::take(&mut s.flag[k]) {
                continue;
            }
            let row = &s.nb[k * d..(k + 1) * d];
            let values = row
                .iter()
                .zip(outs)
                .filter(|(_, &u)| self.kmax[u as usize] >= k as u32)
                .map(|(&x, _)| x);
            let h = h_index_local(values, d);
            if h < s.oh[k] {
                s.oh[k] = h;
                changed.get_or_insert_with(|| vec![false; s.oh.len()])[k] = true;
            }
        }
        changed.map(|changed| ArrayMsg {
            values: s.oh.clone(),
            changed,
        })
    }

    fn merge(&self, pending: &mut ArrayMsg, newer: &ArrayMsg) {
        pending.merge_newer(newer);
    }

    fn extract(&self, _: VertexId, s: LuppState) -> Vec<u32> {
        s.oh
    }
}

/// Decremental refinement of the upper bounds to exact `l_max(v, k)`.
pub struct RefineProgram<'a> {
    pub g: &'a DirectedGraph,
    pub kmax: &'a [u32],
    pub lupp: &'a [Vec<u32>],
    pub audit: Option<&'a Audit>,
}

#[derive(Debug)]
pub struct RefineState {
    l: Vec<u32>,
    /// `in_nb[k * indeg + i]`, latest bound at `k` of in-neighbour `i`.
    in_nb: Vec<u32>,
    /// `out_nb[k * outdeg + j]`, latest bound at `k` of out-neighbour `j`.
    out_nb: Vec<u32>,
    flag: Vec<bool>,
}

impl RefineProgram<'_> {
    /// Neighbours inside `G[k]` whose bound at `k` reaches `l`.
    fn support(&self, list: &[VertexId], row: &[u32], k: u32, l: u32) -> usize {
        row.iter()
            .zip(list)
            .filter(|&(&x, &u)| self.kmax[u as usize] >= k && x >= l)
            .count()
    }
}

impl VertexProgram for RefineProgram<'_> {
    type State = RefineState;
    type Message = ArrayMsg;
    type Output = Vec<u32>;

    fn direction(&self) -> Direction {
        Direction::Both
    }

    fn init(&self, v: VertexId) -> (RefineState, Option<ArrayMsg>) {
        let l = self.lupp[v as usize].clone();
        let len = l.len();
        let msg = ArrayMsg::fresh(&l);
        let state = RefineState {
            in_nb: vec![UNSEEN; len * self.g.in_degree(v)],
            out_nb: vec![UNSEEN; len * self.g.out_degree(v)],
            flag: vec![true; len],
            l,
        };
        (state, Some(msg))
    }

    fn on_message(&self, v: VertexId, s: &mut RefineState, sender: VertexId, msg: &ArrayMsg) {
        let len = s.l.len().min(msg.values.len());
        let audit = |old: u32, x: u32, k: usize| {
            if let Some(a) = self.audit {
                a.check(old == UNSEEN || x <= old, || {
                    format!("refine: neighbour {sender} of {v} at k={k} rose {old} -> {x}")
                });
            }
        };
        let ins = self.g.in_neighbors(v);
        if let Some(i) = slot(ins, sender) {
            let d = ins.len();
            for k in (0..len).filter(|&k| msg.changed[k]) {
                audit(s.in_nb[k * d + i], msg.values[k], k);
                s.in_nb[k * d + i] = msg.values[k];
                s.flag[k] = true;
            }
        }
        let outs = self.g.out_neighbors(v);
        if let Some(j) = slot(outs, sender) {
            let d = outs.len();
            for k in (0..len).filter(|&k| msg.changed[k]) {
                audit(s.out_nb[k * d + j], msg.values[k], k);
                s.out_nb[k * d + j] = msg.values[k];
                s.flag[k] = true;
            }
        }
    }

    fn after_messages(&self, v: VertexId, s: &mut RefineState) -> Option<ArrayMsg> {
        let ins = self.g.in_neighbors(v);
        let outs = self.g.out_neighbors(v);
        let (di, d_o) = (ins.len(), outs.len());
        let mut changed: Option<Vec<bool>> = None;
        for k in 0..s.l.len() {
            if !s.flag[k] {
                continue;
            }
            let ku = k as u32;
            let l = s.l[k];
            let v_in = self.support(ins, &s.in_nb[k * di..(k + 1) * di], ku, l);
            let v_out = self.support(outs, &s.out_nb[k * d_o..(k + 1) * d_o], ku, l);
            if (v_in < k || v_out < l as usize) && l > 0 {
                s.l[k] = l - 1;
                changed.get_or_insert_with(|| vec![false; s.l.len()])[k] = true;
                // stays flagged: the lowered bound is checked again next time
            } else {
                s.flag[k] = false;
            }
        }
        changed.map(|changed| ArrayMsg {
            values: s.l.clone(),
            changed,
        })
    }

    fn merge(&self, pending: &mut ArrayMsg, newer: &ArrayMsg) {
        pending.merge_newer(newer);
    }

    fn extract(&self, _: VertexId, s: RefineState) -> Vec<u32> {
        s.l
    }
}

/// Phase I: `kmax(v)` for every vertex.
pub fn compute_kmax(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    audit: Option<&Audit>,
) -> Result<(Vec<u32>, EngineMetrics)> {
    let p = HIndexProgram {
        g,
        side: Side::In,
        audit,
    };
    engine::run(&p, g, parts, cfg, "Phase I")
}

/// Phase II: `l_upp(k, v)` for `k in 0..=kmax(v)`.
pub fn compute_lupp(
    g: &DirectedGraph,
    kmax: &[u32],
    parts: &PartitionMap,
    cfg: &EngineConfig,
    audit: Option<&Audit>,
) -> Result<(Vec<Vec<u32>>, EngineMetrics)> {
    let p = LuppProgram { g, kmax, audit };
    engine::run(&p, g, parts, cfg, "Phase II")
}

/// Phase III: exact anchored corenesses from the Phase II bounds.
pub fn refine(
    g: &DirectedGraph,
    kmax: &[u32],
    lupp: &[Vec<u32>],
    parts: &PartitionMap,
    cfg: &EngineConfig,
    audit: Option<&Audit>,
) -> Result<(AnchoredTable, EngineMetrics)> {
    let p = RefineProgram {
        g,
        kmax,
        lupp,
        audit,
    };
    let (rows, m) = engine::run(&p, g, parts, cfg, "Phase III")?;
    Ok((AnchoredTable::from_rows(rows)?, m))
}

/// Output of [`anchored_decompose`]: the table, the intermediate phase
/// results and one metrics record per phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredRun {
    pub table: AnchoredTable,
    pub kmax: Vec<u32>,
    pub lupp: Vec<Vec<u32>>,
    pub metrics: Vec<EngineMetrics>,
}

impl AnchoredRun {
    pub fn total_supersteps(&self) -> u64 {
        self.metrics.iter().map(|m| m.supersteps).sum()
    }

    pub fn total_messages(&self) -> u64 {
        self.metrics.iter().map(|m| m.messages_total).sum()
    }
}

pub fn anchored_decompose(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
) -> Result<AnchoredRun> {
    anchored_decompose_audited(g, parts, cfg, None)
}

pub fn anchored_decompose_audited(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    audit: Option<&Audit>,
) -> Result<AnchoredRun> {
    let (kmax, m1) = compute_kmax(g, parts, cfg, audit)?;
    let (lupp, m2) = compute_lupp(g, &kmax, parts, cfg, audit)?;
    let (table, m3) = refine(g, &kmax, &lupp, parts, cfg, audit)?;
    Ok(AnchoredRun {
        table,
        kmax,
        lupp,
        metrics: vec![m1, m2, m3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Mode;
    use crate::fixtures;
    use crate::graph::{generate_random_digraph, hash_partition, segment_partition};
    use crate::peel::{dcore, peel_decompose};

    fn single(g: &DirectedGraph) -> PartitionMap {
        PartitionMap::single(g.n())
    }

    fn by_label<T: Clone>(g: &DirectedGraph, per_vertex: &[T], label: u64) -> T {
        per_vertex[g.id_of(label).unwrap() as usize].clone()
    }

    #[test]
    fn sample8_phases() {
        let g = fixtures::sample8();
        let run = anchored_decompose(&g, &single(&g), &EngineConfig::default()).unwrap();
        assert_eq!(run.kmax, [2, 2, 2, 2, 2, 2, 1, 2]);
        assert_eq!(by_label(&g, &run.lupp, 8), [1, 1, 0]);
        assert_eq!(by_label(&g, &run.lupp, 1), [2, 2, 2]);
        assert_eq!(by_label(&g, &run.lupp, 7), [2, 2]);
        assert_eq!(run.table.lrow(g.id_of(7).unwrap()), &[2, 1]);
        assert_eq!(run.table.lrow(g.id_of(1).unwrap()), &[2, 2, 2]);
        assert_eq!(run.table, peel_decompose(&g));
        assert_eq!(run.metrics.len(), 3);
        assert_eq!(run.metrics[0].phase_label, "Phase I");
    }

    #[test]
    fn sample8_kmax_converges_in_one_step() {
        let g = fixtures::sample8();
        let (k, m) = compute_kmax(&g, &single(&g), &EngineConfig::default(), None).unwrap();
        assert_eq!(k, [2, 2, 2, 2, 2, 2, 1, 2]);
        // init, the one decreasing step, then the silent step
        assert_eq!(m.supersteps, 3);
    }

    #[test]
    fn clique7_phi_v2() {
        let g = fixtures::clique7();
        let run = anchored_decompose(&g, &single(&g), &EngineConfig::default()).unwrap();
        assert_eq!(run.table.lrow(g.id_of(2).unwrap()), &[2, 2, 2, 1]);
    }

    #[test]
    fn arc_free_graph() {
        let g = DirectedGraph::empty(4);
        let run = anchored_decompose(&g, &single(&g), &EngineConfig::default()).unwrap();
        for v in g.vertices() {
            assert_eq!(run.table.lrow(v), &[0]);
        }
    }

    #[test]
    fn kmax_matches_oracle_sweep() {
        let g = generate_random_digraph(60, 0.1, 3).unwrap();
        let (k, _) = compute_kmax(&g, &single(&g), &EngineConfig::default(), None).unwrap();
        let mut oracle = vec![0u32; g.n()];
        for kk in 1.. {
            let core = dcore(&g, kk, 0);
            if core.is_empty() {
                break;
            }
            for v in core {
                oracle[v as usize] = kk;
            }
        }
        assert_eq!(k, oracle);
    }

    #[test]
    fn lupp_sandwiches_lmax() {
        for seed in 0..10 {
            let g = generate_random_digraph(40, 0.12, seed).unwrap();
            let cfg = EngineConfig::default();
            let (kmax, _) = compute_kmax(&g, &single(&g), &cfg, None).unwrap();
            let (lupp, _) = compute_lupp(&g, &kmax, &single(&g), &cfg, None).unwrap();
            let oracle = peel_decompose(&g);
            for v in g.vertices() {
                assert_eq!(lupp[v as usize].len(), oracle.lrow(v).len());
                for (k, (&u, &l)) in lupp[v as usize].iter().zip(oracle.lrow(v)).enumerate() {
                    let deg = g
                        .out_neighbors(v)
                        .iter()
                        .filter(|&&w| kmax[w as usize] >= k as u32)
                        .count() as u32;
                    assert!(l <= u && u <= deg, "seed={seed} v={v} k={k}: {l} {u} {deg}");
                }
            }
        }
    }

    #[test]
    fn every_mode_and_partition_matches_peel() {
        for seed in 0..6 {
            let g = generate_random_digraph(50, 0.08, 100 + seed).unwrap();
            let oracle = peel_decompose(&g);
            let vertex = anchored_decompose(&g, &single(&g), &EngineConfig::default()).unwrap();
            assert_eq!(vertex.table, oracle);
            for b in [1, 2, 4, 8] {
                for parts in [
                    hash_partition(&g, b).unwrap(),
                    segment_partition(&g, b).unwrap(),
                ] {
                    let audit = Audit::new();
                    let cfg = EngineConfig::with_mode(Mode::Block);
                    let run = anchored_decompose_audited(&g, &parts, &cfg, Some(&audit)).unwrap();
                    assert_eq!(run.table, oracle, "seed={seed} blocks={b}");
                    assert!(audit.is_clean(), "{:?}", audit.violations());
                }
            }
        }
    }

    #[test]
    fn array_merge_keeps_latest_values_and_all_flags() {
        let mut a = ArrayMsg {
            values: vec![3, 2, 1],
            changed: vec![true, false, false],
        };
        a.merge_newer(&ArrayMsg {
            values: vec![3, 1, 1],
            changed: vec![false, true, false],
        });
        assert_eq!(a.values, [3, 1, 1]);
        assert_eq!(a.changed, [true, true, false]);
    }
}
