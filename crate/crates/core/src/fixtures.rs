// SPDX-License-Identifier: Apache-2.0

//! Small hand-checked digraphs used by tests, examples and the CLI.

use crate::graph::{DirectedGraph, VertexId};

fn labelled(arcs: &[(u64, u64)]) -> DirectedGraph {
    let mut labels: Vec<u64> = arcs.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let id = |l: u64| labels.binary_search(&l).unwrap() as VertexId;
    let dense: Vec<_> = arcs.iter().map(|&(a, b)| (id(a), id(b))).collect();
    DirectedGraph::with_labels(labels.clone(), dense).expect("fixture is well formed")
}

/// Seven vertices labelled 1..=7. `{1,3,5,6}` is complete, the whole graph
/// is a `(2,2)`-core, and vertex 2 has skyline `{(2,2), (3,1)}`.
pub fn clique7() -> DirectedGraph {
    let mut arcs = Vec::new();
    let clique = [1u64, 3, 5, 6];
    for &a in &clique {
        for &b in &clique {
            if a != b {
                arcs.push((a, b));
            }
        }
    }
    arcs.extend([
        (3, 2),
        (5, 2),
        (7, 2),
        (4, 2),
        (2, 7),
        (2, 4),
        (7, 4),
        (1, 7),
        (6, 7),
        (4, 1),
    ]);
    labelled(&arcs)
}

/// Eight vertices labelled 1..=8 with 17 arcs. `{1,4,5,6}` is the
/// `(2,2)`-core, vertex 7 has skyline `{(0,2), (1,1)}` and vertex 8 has
/// `{(1,1), (2,0)}`.
pub fn sample8() -> DirectedGraph {
    labelled(&[
        (1, 5),
        (1, 6),
        (4, 1),
        (4, 5),
        (5, 4),
        (5, 6),
        (6, 1),
        (6, 4),
        (4, 2),
        (4, 3),
        (4, 8),
        (1, 3),
        (5, 8),
        (8, 2),
        (8, 7),
        (7, 1),
        (7, 6),
    ])
}

/// Edge-list text for a graph, one `<src> <dst>` line per arc using the
/// graph's labels.
pub fn to_edge_list(g: &DirectedGraph) -> String {
    let mut out = String::new();
    for (u, v) in g.arcs() {
        out.push_str(&format!("{} {}\n", g.label(u), g.label(v)));
    }
    out
}

/// Labels of a vertex list, in the same order.
pub fn labels_of(g: &DirectedGraph, vs: &[VertexId]) -> Vec<u64> {
    vs.iter().map(|&v| g.label(v)).collect()
}
