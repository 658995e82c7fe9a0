// SPDX-License-Identifier: Apache-2.0

//! Comparisons against the peeling oracle and structural checks on
//! converged outputs.

use std::fmt;

use crate::graph::{DirectedGraph, VertexId};
use crate::index::{CorenessPair, SkylineSet};
use crate::peel::{dcore, AnchoredTable};

/// First vertex whose result differs, with both renderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub vertex: VertexId,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertex {}: expected {}, got {}",
            self.vertex, self.expected, self.actual
        )
    }
}

fn render_row(row: &[u32]) -> String {
    row.iter()
        .enumerate()
        .map(|(k, l)| format!("({k},{l})"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn first_table_divergence(
    expected: &AnchoredTable,
    actual: &AnchoredTable,
) -> Option<Divergence> {
    let n = expected.n().max(actual.n());
    (0..n).find_map(|v| {
        let e = expected.rows().get(v);
        let a = actual.rows().get(v);
        (e != a).then(|| Divergence {
            vertex: v as VertexId,
            expected: e.map_or("<missing>".into(), |r| render_row(r)),
            actual: a.map_or("<missing>".into(), |r| render_row(r)),
        })
    })
}

pub fn first_skyline_divergence(
    expected: &[SkylineSet],
    actual: &[SkylineSet],
) -> Option<Divergence> {
    let n = expected.len().max(actual.len());
    (0..n).find_map(|v| {
        let e = expected.get(v);
        let a = actual.get(v);
        (e != a).then(|| Divergence {
            vertex: v as VertexId,
            expected: e.map_or("<missing>".into(), |s| s.to_string()),
            actual: a.map_or("<missing>".into(), |s| s.to_string()),
        })
    })
}

/// Every `(k1,l1) >= (k2,l2)` pair of cores over the grid up to the largest
/// degrees satisfies `dcore(k1,l1) ⊆ dcore(k2,l2)`. Returns the number of
/// comparisons made, or the first violation.
pub fn check_partial_nesting(g: &DirectedGraph) -> Result<usize, String> {
    let max_in = g.vertices().map(|v| g.in_degree(v)).max().unwrap_or(0) as u32;
    let max_out = g.vertices().map(|v| g.out_degree(v)).max().unwrap_or(0) as u32;
    let mut member = Vec::new();
    for k in 0..=max_in + 1 {
        let mut row = Vec::new();
        for l in 0..=max_out + 1 {
            let mut bits = vec![false; g.n()];
            for v in dcore(g, k, l) {
                bits[v as usize] = true;
            }
            row.push(bits);
        }
        member.push(row);
    }
    let mut checks = 0;
    // adjacent steps suffice: the order is generated by (k+1,l) and (k,l+1)
    for k in 0..member.len() {
        for l in 0..member[k].len() {
            let here = &member[k][l];
            let mut above = Vec::new();
            if k + 1 < member.len() {
                above.push((k + 1, l));
            }
            if l + 1 < member[k].len() {
                above.push((k, l + 1));
            }
            for (k1, l1) in above {
                checks += 1;
                if let Some(v) = (0..g.n()).find(|&v| member[k1][l1][v] && !here[v]) {
                    return Err(format!(
                        "vertex {v} in ({k1},{l1})-core but not ({k},{l})-core"
                    ));
                }
            }
        }
    }
    Ok(checks)
}

/// Maximality of one core: no excluded vertex could be added on its own.
pub fn check_core_maximal(g: &DirectedGraph, k: u32, l: u32) -> Result<(), String> {
    let core = dcore(g, k, l);
    let mut inside = vec![false; g.n()];
    for &v in &core {
        inside[v as usize] = true;
    }
    for &v in &core {
        let ins = g
            .in_neighbors(v)
            .iter()
            .filter(|&&u| inside[u as usize])
            .count();
        let outs = g
            .out_neighbors(v)
            .iter()
            .filter(|&&u| inside[u as usize])
            .count();
        if ins < k as usize || outs < l as usize {
            return Err(format!("vertex {v} violates ({k},{l}) inside its core"));
        }
    }
    for x in g.vertices().filter(|&x| !inside[x as usize]) {
        // adding x only raises the degrees of core members, so x decides
        let ins = g
            .in_neighbors(x)
            .iter()
            .filter(|&&u| inside[u as usize])
            .count();
        let outs = g
            .out_neighbors(x)
            .iter()
            .filter(|&&u| inside[u as usize])
            .count();
        if ins >= k as usize && outs >= l as usize {
            return Err(format!("vertex {x} can be added to the ({k},{l})-core"));
        }
    }
    Ok(())
}

/// Neighbours whose converged set supports `p`.
fn supporters(list: &[VertexId], sets: &[SkylineSet], p: CorenessPair) -> usize {
    list.iter()
        .filter(|&&u| sets[u as usize].supports(p))
        .count()
}

/// Structural properties of converged skyline sets: every pair `(k,l)` of
/// `SC(v)` has `k` in-neighbours and `l` out-neighbours supporting it, and
/// neither `(k+1,l)` nor `(k,l+1)` has both kinds of support at once.
/// Returns the number of pairs checked.
pub fn check_skyline_properties(g: &DirectedGraph, sets: &[SkylineSet]) -> Result<usize, String> {
    let mut checked = 0;
    for v in g.vertices() {
        let sc = &sets[v as usize];
        if sc.is_empty() || !sc.is_antichain() {
            return Err(format!("vertex {v}: {sc} is not a non-empty antichain"));
        }
        let ins = g.in_neighbors(v);
        let outs = g.out_neighbors(v);
        let supported = |p: CorenessPair| {
            supporters(ins, sets, p) >= p.k as usize && supporters(outs, sets, p) >= p.l as usize
        };
        for p in sc.iter() {
            checked += 1;
            if !supported(p) {
                return Err(format!("vertex {v}: {p} lacks neighbour support"));
            }
            for q in [
                CorenessPair::new(p.k + 1, p.l),
                CorenessPair::new(p.k, p.l + 1),
            ] {
                if supported(q) {
                    return Err(format!("vertex {v}: {p} could be strengthened to {q}"));
                }
            }
        }
    }
    Ok(checked)
}
