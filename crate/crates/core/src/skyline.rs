// SPDX-License-Identifier: Apache-2.0

//! Skyline-coreness decomposition.
//!
//! Each vertex starts from the tight pair `(kmax(v), l0(v))`, where `l0` is
//! the converged out-H-index on the whole graph, and repeatedly replaces its
//! set by the D-index of its neighbours' sets. A neighbour supports a
//! candidate `(k, l)` when any pair of its set weakly dominates it.

use std::cell::RefCell;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::anchored::{HIndexProgram, Side};
use crate::engine::{self, Audit, Direction, EngineConfig, EngineMetrics, VertexProgram};
use crate::graph::{DirectedGraph, PartitionMap, VertexId};
use crate::index::{
    d_index_of_sets, h_index, h_index_local, CorenessPair, DIndexScratch, SkylineSet,
};
use crate::Result;

thread_local! {
    static SCRATCH: RefCell<DIndexScratch> = RefCell::new(DIndexScratch::default());
}

/// One n-order D-index step from the neighbours' current sets.
pub fn d_index_step<S: AsRef<SkylineSet>>(in_sets: &[S], out_sets: &[S]) -> SkylineSet {
    let k_bound = h_index(
        &in_sets
            .iter()
            .map(|s| s.as_ref().max_k())
            .collect::<Vec<_>>(),
    );
    SCRATCH.with(|s| d_index_of_sets(in_sets, out_sets, k_bound, &mut s.borrow_mut()))
}

pub struct SkylineProgram<'a> {
    pub g: &'a DirectedGraph,
    pub init: &'a [CorenessPair],
    pub audit: Option<&'a Audit>,
}

#[derive(Debug)]
pub struct SkylineState {
    d: Arc<SkylineSet>,
    in_sets: Vec<Arc<SkylineSet>>,
    out_sets: Vec<Arc<SkylineSet>>,
    /// Largest `k` in each in-neighbour's set.
    dk: Vec<u32>,
    /// Largest `l` in each out-neighbour's set.
    dl: Vec<u32>,
    flag: bool,
}

impl SkylineProgram<'_> {
    fn descent(&self, what: &str, v: VertexId, old: &SkylineSet, new: &SkylineSet) {
        if let Some(a) = self.audit {
            a.check(new.is_antichain(), || {
                format!("{what} of {v}: {new} is not an antichain")
            });
            a.check(old.is_empty() || new.is_below(old), || {
                format!("{what} of {v}: {new} not below {old}")
            });
        }
    }
}

impl VertexProgram for SkylineProgram<'_> {
    type State = SkylineState;
    type Message = Arc<SkylineSet>;
    type Output = SkylineSet;

    fn direction(&self) -> Direction {
        Direction::Both
    }

    fn init(&self, v: VertexId) -> (SkylineState, Option<Arc<SkylineSet>>) {
        let d = Arc::new(SkylineSet::singleton(self.init[v as usize]));
        let unseen = Arc::new(SkylineSet::default());
        let (di, d_o) = (self.g.in_degree(v), self.g.out_degree(v));
        let state = SkylineState {
            d: d.clone(),
            in_sets: vec![unseen.clone(); di],
            out_sets: vec![unseen; d_o],
            dk: vec![0; di],
            dl: vec![0; d_o],
            flag: false,
        };
        (state, Some(d))
    }

    fn on_message(
        &self,
        v: VertexId,
        s: &mut SkylineState,
        sender: VertexId,
        msg: &Arc<SkylineSet>,
    ) {
        if let Ok(i) = self.g.in_neighbors(v).binary_search(&sender) {
            self.descent("in-neighbour set", sender, &s.in_sets[i], msg);
            s.in_sets[i] = msg.clone();
            s.dk[i] = msg.max_k();
        }
        if let Ok(j) = self.g.out_neighbors(v).binary_search(&sender) {
            self.descent("out-neighbour set", sender, &s.out_sets[j], msg);
            s.out_sets[j] = msg.clone();
            s.dl[j] = msg.max_l();
        }
        s.flag = true;
    }

    fn after_messages(&self, v: VertexId, s: &mut SkylineState) -> Option<Arc<SkylineSet>> {
        if !std::mem::take(&mut s.flag) {
            return None;
        }
        let k_bound = h_index_local(s.dk.iter().copied(), s.dk.len());
        let next = SCRATCH
            .with(|sc| d_index_of_sets(&s.in_sets, &s.out_sets, k_bound, &mut sc.borrow_mut()));
        if let Some(a) = self.audit {
            let l_bound = h_index_local(s.dl.iter().copied(), s.dl.len());
            a.check(next.iter().all(|p| p.l <= l_bound), || {
                format!("D-index of {v}: {next} exceeds l bound {l_bound}")
            });
        }
        if next == *s.d {
            return None;
        }
        self.descent("D-index", v, &s.d, &next);
        s.d = Arc::new(next);
        Some(s.d.clone())
    }

    fn extract(&self, _: VertexId, s: SkylineState) -> SkylineSet {
        Arc::unwrap_or_clone(s.d)
    }
}

/// Tight initial pairs `(kmax(v), l0(v))` and the two H-index runs that
/// produce them.
pub fn tight_init(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
) -> Result<(Vec<CorenessPair>, [EngineMetrics; 2])> {
    let ks = HIndexProgram {
        g,
        side: Side::In,
        audit: None,
    };
    let (kmax, m1) = engine::run(&ks, g, parts, cfg, "tight-init in-H")?;
    let ls = HIndexProgram {
        g,
        side: Side::Out,
        audit: None,
    };
    let (l0, m2) = engine::run(&ls, g, parts, cfg, "tight-init out-H")?;
    let init = kmax
        .into_iter()
        .zip(l0)
        .map(|(k, l)| CorenessPair::new(k, l))
        .collect();
    Ok((init, [m1, m2]))
}

/// Output of [`skyline_decompose`]. `metrics` holds the two tight-init
/// phases followed by the D-index phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkylineRun {
    pub sets: Vec<SkylineSet>,
    pub init: Vec<CorenessPair>,
    pub metrics: Vec<EngineMetrics>,
}

impl SkylineRun {
    pub fn d_index_metrics(&self) -> &EngineMetrics {
        &self.metrics[2]
    }

    pub fn total_supersteps(&self) -> u64 {
        self.metrics.iter().map(|m| m.supersteps).sum()
    }

    pub fn total_messages(&self) -> u64 {
        self.metrics.iter().map(|m| m.messages_total).sum()
    }
}

pub fn skyline_decompose(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
) -> Result<SkylineRun> {
    skyline_decompose_audited(g, parts, cfg, None)
}

pub fn skyline_decompose_audited(
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    audit: Option<&Audit>,
) -> Result<SkylineRun> {
    let (init, [m1, m2]) = tight_init(g, parts, cfg)?;
    let p = SkylineProgram {
        g,
        init: &init,
        audit,
    };
    let (sets, m3) = engine::run(&p, g, parts, cfg, "D-index")?;
    Ok(SkylineRun {
        sets,
        init,
        metrics: vec![m1, m2, m3],
    })
}
