// SPDX-License-Identifier: Apache-2.0

//! One decomposition run: configuration, result rendering and report.

use std::fmt;
use std::time::Instant;

use dcore::verify::{first_skyline_divergence, first_table_divergence, Divergence};
use dcore::{
    anchored_decompose, anchored_to_skyline, peel_decompose, skyline_decompose, AnchoredTable,
    CorenessPair, DirectedGraph, EngineConfig, EngineMetrics, Mode, Partitioner, SkylineSet,
};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Peel,
    Anchored,
    Skyline,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Peel => "peel",
            Algorithm::Anchored => "anchored",
            Algorithm::Skyline => "skyline",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub mode: Mode,
    pub blocks: u32,
    pub partitioner: Partitioner,
    pub threads: Option<usize>,
}

impl RunSpec {
    pub fn peel() -> Self {
        RunSpec {
            algorithm: Algorithm::Peel,
            mode: Mode::Vertex,
            blocks: 1,
            partitioner: Partitioner::Hash,
            threads: None,
        }
    }

    pub fn describe(&self) -> String {
        match self.algorithm {
            Algorithm::Peel => "centralized".into(),
            _ => format!(
                "{}, {} blocks, {}",
                self.mode, self.blocks, self.partitioner
            ),
        }
    }
}

/// Per-vertex results of a run.
pub enum Outcome {
    /// Anchored corenesses, from peeling or the anchored algorithm.
    Table(AnchoredTable),
    Skyline(Vec<SkylineSet>),
}

impl Outcome {
    /// One `label: (k,l) ...` line per vertex in ascending label order.
    pub fn render(&self, g: &DirectedGraph) -> String {
        let mut out = String::new();
        for v in g.vertices() {
            let pairs: Vec<String> = match self {
                Outcome::Table(t) => t.phi(v).map(|p| p.to_string()).collect(),
                Outcome::Skyline(s) => s[v as usize].iter().map(|p| p.to_string()).collect(),
            };
            out.push_str(&format!("{}: {}\n", g.label(v), pairs.join(" ")));
        }
        out
    }

    pub fn into_skyline(self) -> Self {
        match self {
            Outcome::Table(t) => Outcome::Skyline(anchored_to_skyline(&t)),
            s => s,
        }
    }

    pub fn first_divergence(&self, expected: &Outcome) -> Option<Divergence> {
        match (expected, self) {
            (Outcome::Table(e), Outcome::Table(a)) => first_table_divergence(e, a),
            (Outcome::Skyline(e), Outcome::Skyline(a)) => first_skyline_divergence(e, a),
            _ => unreachable!("outcomes of different kinds are never compared"),
        }
    }

    /// Raises the first vertex's result so it can no longer match.
    pub fn corrupt(&mut self) {
        match self {
            Outcome::Table(t) => {
                let mut rows = t.rows().to_vec();
                if let Some(row) = rows.first_mut() {
                    row[0] += 1;
                    *t = AnchoredTable::from_rows(rows).expect("rows stay non-empty");
                }
            }
            Outcome::Skyline(sets) => {
                if let Some(s) = sets.first_mut() {
                    *s = SkylineSet::singleton(CorenessPair::new(s.max_k() + 1, s.max_l() + 1));
                }
            }
        }
    }
}

/// Sidecar describing a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub mode: Option<Mode>,
    pub blocks: Option<u32>,
    pub partitioner: Option<String>,
    pub vertices: usize,
    pub arcs: usize,
    pub phases: Vec<EngineMetrics>,
    pub total_supersteps: u64,
    pub total_messages: u64,
    pub wall_time_secs: f64,
    pub output: Option<String>,
}

pub fn execute(g: &DirectedGraph, spec: &RunSpec) -> dcore::Result<(Outcome, RunReport)> {
    let cfg = EngineConfig {
        mode: spec.mode,
        threads: spec.threads,
        ..EngineConfig::default()
    };
    let distributed = spec.algorithm != Algorithm::Peel;
    let parts = if distributed {
        spec.partitioner.partition(g, spec.blocks)?
    } else {
        dcore::PartitionMap::single(g.n())
    };
    let start = Instant::now();
    let (outcome, phases) = match spec.algorithm {
        Algorithm::Peel => (Outcome::Table(peel_decompose(g)), Vec::new()),
        Algorithm::Anchored => {
            let run = anchored_decompose(g, &parts, &cfg)?;
            (Outcome::Table(run.table), run.metrics)
        }
        Algorithm::Skyline => {
            let run = skyline_decompose(g, &parts, &cfg)?;
            (Outcome::Skyline(run.sets), run.metrics)
        }
    };
    let wall_time_secs = start.elapsed().as_secs_f64();
    let report = RunReport {
        algorithm: spec.algorithm.to_string(),
        mode: distributed.then_some(spec.mode),
        blocks: distributed.then_some(spec.blocks),
        partitioner: distributed.then(|| spec.partitioner.to_string()),
        vertices: g.n(),
        arcs: g.arc_count(),
        total_supersteps: phases.iter().map(|m| m.supersteps).sum(),
        total_messages: phases.iter().map(|m| m.messages_total).sum(),
        phases,
        wall_time_secs,
        output: None,
    };
    Ok((outcome, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dcore::fixtures;

    #[test]
    fn table_lines_list_phi_in_k_order() {
        let g = fixtures::sample8();
        let text = Outcome::Table(peel_decompose(&g)).render(&g);
        assert_eq!(text.lines().nth(6), Some("7: (0,2) (1,1)"));
        assert_eq!(text.lines().next(), Some("1: (0,2) (1,2) (2,2)"));
    }

    #[test]
    fn corruption_is_detected() {
        let g = fixtures::sample8();
        let (oracle, _) = execute(&g, &RunSpec::peel()).unwrap();
        for mut bad in [
            Outcome::Table(peel_decompose(&g)),
            Outcome::Skyline(anchored_to_skyline(&peel_decompose(&g))),
        ] {
            let expected = match bad {
                Outcome::Skyline(_) => Outcome::Table(peel_decompose(&g)).into_skyline(),
                _ => Outcome::Table(peel_decompose(&g)),
            };
            assert!(bad.first_divergence(&expected).is_none());
            bad.corrupt();
            assert_eq!(bad.first_divergence(&expected).unwrap().vertex, 0);
        }
        assert!(matches!(oracle, Outcome::Table(_)));
    }

    #[test]
    fn peel_report_has_no_engine_fields() {
        let g = fixtures::clique7();
        let (_, r) = execute(&g, &RunSpec::peel()).unwrap();
        assert!(r.phases.is_empty() && r.mode.is_none() && r.blocks.is_none());
        assert_eq!((r.vertices, r.arcs), (7, 22));
    }
}
