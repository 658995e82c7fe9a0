// SPDX-License-Identifier: Apache-2.0

//! Deterministic bulk-synchronous superstep simulator.
//!
//! A [`VertexProgram`] is run either vertex-centric (every vertex updates
//! once per superstep) or block-centric (each block of a [`PartitionMap`]
//! iterates to a local fixpoint before exchanging messages with other
//! blocks). Superstep 1 is the initialization broadcast.
//!
//! Message accounting: one delivery from a sender to one recipient counts as
//! one message. In block mode `messages_total` counts the initial broadcasts
//! plus cross-block deliveries; same-block deliveries inside local loops are
//! reported in `messages_intra`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, PartitionMap, VertexId};
use crate::{Error, Result};

/// Which neighbours receive a vertex's broadcast.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Out-neighbours; a vertex hears from its in-neighbours.
    Out,
    /// In-neighbours; a vertex hears from its out-neighbours.
    In,
    /// All neighbours.
    Both,
}

/// Per-vertex behaviour executed by the engine.
///
/// `on_message` must be commutative over one superstep's messages. It is
/// called once per (sender, recipient) delivery. `after_messages` returns a
/// payload only when the vertex's broadcast value changed, and must return
/// `None` when called again on a state it has just returned `None` for.
pub trait VertexProgram: Sync {
    type State: Send;
    type Message: Clone + Send + Sync;
    type Output: Send;

    fn direction(&self) -> Direction;

    fn init(&self, v: VertexId) -> (Self::State, Option<Self::Message>);

    fn on_message(
        &self,
        v: VertexId,
        state: &mut Self::State,
        sender: VertexId,
        msg: &Self::Message,
    );

    fn after_messages(&self, v: VertexId, state: &mut Self::State) -> Option<Self::Message>;

    /// Folds a later broadcast into one still waiting for cross-block
    /// delivery. The default keeps the newer payload.
    fn merge(&self, pending: &mut Self::Message, newer: &Self::Message) {
        *pending = newer.clone();
    }

    fn extract(&self, v: VertexId, state: Self::State) -> Self::Output;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Vertex,
    Block,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Mode::Vertex),
            "block" => Ok(Mode::Block),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?} (expected vertex or block)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Vertex => "vertex",
            Mode::Block => "block",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    pub mode: Mode,
    /// Maximum global supersteps, and maximum local iterations per block
    /// round. `None` means `10 * (max_degree + 1)`.
    pub superstep_cap: Option<u64>,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Replay `after_messages` on every vertex after termination and fail
    /// if anything is emitted.
    pub verify_quiescence: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            mode: Mode::Vertex,
            superstep_cap: None,
            threads: None,
            verify_quiescence: true,
        }
    }
}

impl EngineConfig {
    pub fn with_mode(mode: Mode) -> Self {
        EngineConfig {
            mode,
            ..Default::default()
        }
    }

    pub fn cap_for(&self, g: &DirectedGraph) -> u64 {
        self.superstep_cap
            .unwrap_or(10 * (g.max_degree() as u64 + 1))
    }

    /// Runs `f` on a pool with the configured thread count.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(f()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineMetrics {
    pub phase_label: String,
    pub mode: Mode,
    pub n_blocks: u32,
    pub supersteps: u64,
    pub messages_total: u64,
    pub messages_intra: u64,
    pub messages_per_step: Vec<u64>,
    /// Block mode: local iterations summed over blocks and rounds.
    pub local_iterations: u64,
}

impl EngineMetrics {
    pub fn is_consistent(&self) -> bool {
        self.messages_total == self.messages_per_step.iter().sum::<u64>()
            && self.messages_per_step.len() as u64 == self.supersteps
    }
}

/// Collects invariant checks made by instrumented programs.
#[derive(Debug, Default)]
pub struct Audit {
    checks: AtomicU64,
    violations: Mutex<Vec<String>>,
}

impl Audit {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn check(&self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks.fetch_add(1, Ordering::Relaxed);
        if !ok {
            self.violations.lock().unwrap().push(describe());
        }
    }

    pub fn checks(&self) -> u64 {
        self.checks.load(Ordering::Relaxed)
    }

    pub fn violations(&self) -> Vec<String> {
        self.violations.lock().unwrap().clone()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.lock().unwrap().is_empty()
    }
}

struct Topology<'g> {
    g: &'g DirectedGraph,
    dir: Direction,
}

impl Topology<'_> {
    #[inline]
    fn send(&self, v: VertexId) -> &[VertexId] {
        match self.dir {
            Direction::Out => self.g.out_neighbors(v),
            Direction::In => self.g.in_neighbors(v),
            Direction::Both => self.g.neighbors(v),
        }
    }

    #[inline]
    fn recv(&self, v: VertexId) -> &[VertexId] {
        match self.dir {
            Direction::Out => self.g.in_neighbors(v),
            Direction::In => self.g.out_neighbors(v),
            Direction::Both => self.g.neighbors(v),
        }
    }
}

/// Vertices grouped by worker, with the reverse index.
struct Layout {
    members: Vec<Vec<VertexId>>,
    worker_of: Vec<u32>,
    local_of: Vec<u32>,
}

impl Layout {
    fn from_blocks(n_workers: u32, block_of: impl Iterator<Item = u32>, n: usize) -> Self {
        let mut members = vec![Vec::new(); n_workers as usize];
        let mut worker_of = Vec::with_capacity(n);
        let mut local_of = Vec::with_capacity(n);
        for (v, b) in block_of.enumerate() {
            worker_of.push(b);
            local_of.push(members[b as usize].len() as u32);
            members[b as usize].push(v as VertexId);
        }
        Layout {
            members,
            worker_of,
            local_of,
        }
    }

    fn for_partition(parts: &PartitionMap) -> Self {
        Self::from_blocks(
            parts.n_blocks(),
            parts.blocks().iter().copied(),
            parts.len(),
        )
    }

    /// Contiguous chunks for vertex-centric runs, where block boundaries
    /// carry no meaning.
    fn chunked(n: usize) -> Self {
        let chunks = (rayon::current_num_threads() * 4).clamp(1, n.max(1));
        let size = n.div_ceil(chunks).max(1);
        Self::from_blocks(chunks as u32, (0..n).map(|v| (v / size) as u32), n)
    }

    #[inline]
    fn get<'a, T>(&self, boxes: &'a [Vec<T>], v: VertexId) -> &'a T {
        &boxes[self.worker_of[v as usize] as usize][self.local_of[v as usize] as usize]
    }
}

type Outbox<M> = Vec<Vec<Option<M>>>;

/// Runs `p` in the configured mode.
pub fn run<P: VertexProgram>(
    p: &P,
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    phase_label: &str,
) -> Result<(Vec<P::Output>, EngineMetrics)> {
    if parts.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "partition covers {} vertices, graph has {}",
            parts.len(),
            g.n()
        )));
    }
    cfg.install(|| match cfg.mode {
        Mode::Vertex => vertex_centric(p, g, parts, cfg, phase_label),
        Mode::Block => block_centric(p, g, parts, cfg, phase_label),
    })?
}

pub fn run_vertex_centric<P: VertexProgram>(
    p: &P,
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
) -> Result<(Vec<P::Output>, EngineMetrics)> {
    let cfg = EngineConfig {
        mode: Mode::Vertex,
        ..cfg.clone()
    };
    run(p, g, parts, &cfg, "vertex-centric")
}

pub fn run_block_centric<P: VertexProgram>(
    p: &P,
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
) -> Result<(Vec<P::Output>, EngineMetrics)> {
    let cfg = EngineConfig {
        mode: Mode::Block,
        ..cfg.clone()
    };
    run(p, g, parts, &cfg, "block-centric")
}

fn init_states<P: VertexProgram>(
    p: &P,
    layout: &Layout,
) -> (Vec<Vec<P::State>>, Outbox<P::Message>) {
    layout
        .members
        .par_iter()
        .map(|members| members.iter().map(|&v| p.init(v)).unzip())
        .unzip()
}

fn fanout_sum<M: Sync>(topo: &Topology<'_>, layout: &Layout, outbox: &Outbox<M>) -> u64 {
    layout
        .members
        .par_iter()
        .zip(outbox.par_iter())
        .map(|(members, out)| {
            members
                .iter()
                .zip(out)
                .filter(|(_, m)| m.is_some())
                .map(|(&v, _)| topo.send(v).len() as u64)
                .sum::<u64>()
        })
        .sum()
}

fn finish<P: VertexProgram>(
    p: &P,
    layout: &Layout,
    states: Vec<Vec<P::State>>,
    n: usize,
) -> Vec<P::Output> {
    let mut slots: Vec<Option<P::Output>> = (0..n).map(|_| None).collect();
    for (members, st) in layout.members.iter().zip(states) {
        for (&v, s) in members.iter().zip(st) {
            slots[v as usize] = Some(p.extract(v, s));
        }
    }
    slots
        .into_iter()
        .map(|o| o.expect("every vertex has a worker"))
        .collect()
}

fn check_quiescent<P: VertexProgram>(
    p: &P,
    layout: &Layout,
    states: &mut [Vec<P::State>],
    phase: &str,
) -> Result<()> {
    let payloads: usize = layout
        .members
        .par_iter()
        .zip(states.par_iter_mut())
        .map(|(members, st)| {
            members
                .iter()
                .zip(st.iter_mut())
                .map(|(&v, s)| p.after_messages(v, s).is_some() as usize)
                .sum::<usize>()
        })
        .sum();
    if payloads > 0 {
        return Err(Error::NotQuiescent {
            phase: phase.to_string(),
            payloads,
        });
    }
    Ok(())
}

fn vertex_centric<P: VertexProgram>(
    p: &P,
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    phase: &str,
) -> Result<(Vec<P::Output>, EngineMetrics)> {
    let topo = Topology {
        g,
        dir: p.direction(),
    };
    let layout = Layout::chunked(g.n());
    let cap = cfg.cap_for(g);
    let (mut states, mut outbox) = init_states(p, &layout);

    let mut per_step = vec![fanout_sum(&topo, &layout, &outbox)];
    while *per_step.last().unwrap() > 0 {
        if per_step.len() as u64 >= cap {
            return Err(Error::Runaway {
                phase: phase.to_string(),
                supersteps: per_step.len() as u64,
                cap,
            });
        }
        let prev = &outbox;
        let next: Vec<(Vec<Option<P::Message>>, u64)> = layout
            .members
            .par_iter()
            .zip(states.par_iter_mut())
            .map(|(members, st)| {
                let mut out = Vec::with_capacity(members.len());
                let mut sent = 0u64;
                for (&v, s) in members.iter().zip(st.iter_mut()) {
                    for &u in topo.recv(v) {
                        if let Some(m) = layout.get(prev, u) {
                            p.on_message(v, s, u, m);
                        }
                    }
                    let m = p.after_messages(v, s);
                    if m.is_some() {
                        sent += topo.send(v).len() as u64;
                    }
                    out.push(m);
                }
                (out, sent)
            })
            .collect();
        let mut sent = 0;
        outbox = next
            .into_iter()
            .map(|(out, s)| {
                sent += s;
                out
            })
            .collect();
        per_step.push(sent);
    }

    if cfg.verify_quiescence {
        check_quiescent(p, &layout, &mut states, phase)?;
    }
    let metrics = EngineMetrics {
        phase_label: phase.to_string(),
        mode: Mode::Vertex,
        n_blocks: parts.n_blocks(),
        supersteps: per_step.len() as u64,
        messages_total: per_step.iter().sum(),
        messages_intra: 0,
        messages_per_step: per_step,
        local_iterations: 0,
    };
    Ok((finish(p, &layout, states, g.n()), metrics))
}

struct RoundOutcome<M> {
    cross: Vec<Option<M>>,
    cross_sent: u64,
    intra_sent: u64,
    broadcast: bool,
    local_iterations: u64,
}

/// One global round of one block: deliver buffered messages, then iterate
/// same-block delivery and `after_messages` until no member broadcasts.
#[allow(clippy::too_many_arguments)]
fn block_round<P: VertexProgram>(
    p: &P,
    topo: &Topology<'_>,
    layout: &Layout,
    w: u32,
    states: &mut [P::State],
    prev: &Outbox<P::Message>,
    include_same_block: bool,
    cap: u64,
    phase: &str,
) -> Result<RoundOutcome<P::Message>> {
    let members = &layout.members[w as usize];
    let same = |u: VertexId| layout.worker_of[u as usize] == w;
    let local = |u: VertexId| layout.local_of[u as usize] as usize;

    let mut cross: Vec<Option<P::Message>> = (0..members.len()).map(|_| None).collect();
    let mut intra_sent = 0u64;
    let mut broadcast = false;

    let mut broadcasters: Vec<(usize, P::Message)> = Vec::new();
    for (i, &v) in members.iter().enumerate() {
        let s = &mut states[i];
        for &u in topo.recv(v) {
            if include_same_block || !same(u) {
                if let Some(m) = layout.get(prev, u) {
                    p.on_message(v, s, u, m);
                }
            }
        }
        if let Some(m) = p.after_messages(v, s) {
            broadcasters.push((i, m));
        }
    }

    let mut touched = vec![false; members.len()];
    let mut touched_list: Vec<usize> = Vec::new();
    let mut iterations = 0u64;
    while !broadcasters.is_empty() {
        broadcast = true;
        iterations += 1;
        if iterations > cap {
            return Err(Error::Runaway {
                phase: format!("{phase} (block {w} local loop)"),
                supersteps: iterations,
                cap,
            });
        }
        for (i, m) in &broadcasters {
            let v = members[*i];
            for &x in topo.send(v) {
                if same(x) {
                    intra_sent += 1;
                    let j = local(x);
                    p.on_message(x, &mut states[j], v, m);
                    if !touched[j] {
                        touched[j] = true;
                        touched_list.push(j);
                    }
                }
            }
            if !touched[*i] {
                touched[*i] = true;
                touched_list.push(*i);
            }
            match &mut cross[*i] {
                Some(pending) => p.merge(pending, m),
                slot @ None => *slot = Some(m.clone()),
            }
        }
        broadcasters.clear();
        touched_list.sort_unstable();
        for &j in &touched_list {
            touched[j] = false;
            if let Some(m) = p.after_messages(members[j], &mut states[j]) {
                broadcasters.push((j, m));
            }
        }
        touched_list.clear();
    }

    let cross_sent = members
        .iter()
        .zip(&cross)
        .filter(|(_, m)| m.is_some())
        .map(|(&v, _)| topo.send(v).iter().filter(|&&x| !same(x)).count() as u64)
        .sum();
    Ok(RoundOutcome {
        cross,
        cross_sent,
        intra_sent,
        broadcast,
        local_iterations: iterations,
    })
}

fn block_centric<P: VertexProgram>(
    p: &P,
    g: &DirectedGraph,
    parts: &PartitionMap,
    cfg: &EngineConfig,
    phase: &str,
) -> Result<(Vec<P::Output>, EngineMetrics)> {
    let topo = Topology {
        g,
        dir: p.direction(),
    };
    let layout = Layout::for_partition(parts);
    let cap = cfg.cap_for(g);
    let (mut states, mut outbox) = init_states(p, &layout);

    let init_sent = fanout_sum(&topo, &layout, &outbox);
    let mut per_step = vec![init_sent];
    let mut intra = 0u64;
    let mut local_iterations = 0u64;
    let mut active = init_sent > 0;
    while active {
        if per_step.len() as u64 >= cap {
            return Err(Error::Runaway {
                phase: phase.to_string(),
                supersteps: per_step.len() as u64,
                cap,
            });
        }
        let include_same_block = per_step.len() == 1;
        let prev = &outbox;
        let outcomes: Vec<Result<RoundOutcome<P::Message>>> = states
            .par_iter_mut()
            .enumerate()
            .map(|(w, st)| {
                block_round(
                    p,
                    &topo,
                    &layout,
                    w as u32,
                    st,
                    prev,
                    include_same_block,
                    cap,
                    phase,
                )
            })
            .collect();
        let mut next = Vec::with_capacity(outcomes.len());
        let mut sent = 0u64;
        active = false;
        for o in outcomes {
            let o = o?;
            sent += o.cross_sent;
            intra += o.intra_sent;
            local_iterations += o.local_iterations;
            active |= o.broadcast;
            next.push(o.cross);
        }
        outbox = next;
        per_step.push(sent);
    }

    if cfg.verify_quiescence {
        check_quiescent(p, &layout, &mut states, phase)?;
    }
    let metrics = EngineMetrics {
        phase_label: phase.to_string(),
        mode: Mode::Block,
        n_blocks: parts.n_blocks(),
        supersteps: per_step.len() as u64,
        messages_total: per_step.iter().sum(),
        messages_intra: intra,
        messages_per_step: per_step,
        local_iterations,
    };
    Ok((finish(p, &layout, states, g.n()), metrics))
}
