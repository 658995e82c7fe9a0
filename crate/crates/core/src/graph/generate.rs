// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DirectedGraph, VertexId};
use crate::{Error, Result};

/// G(n, p) digraph: every ordered pair `(u, v)`, `u != v`, is an arc with
/// probability `p`. Pairs are visited in row-major order from a ChaCha8
/// stream seeded with `seed`, so the output is a pure function of
/// `(n, p, seed)`.
pub fn generate_random_digraph(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "arc probability {p} outside [0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n as VertexId {
        for v in 0..n as VertexId {
            if u != v && rng.random_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    DirectedGraph::from_arcs(n, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        assert_eq!(generate_random_digraph(10, 0.0, 5).unwrap().arc_count(), 0);
        assert_eq!(generate_random_digraph(3, 1.0, 5).unwrap().arc_count(), 6);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate_random_digraph(50, 0.1, 1).unwrap();
        let b = generate_random_digraph(50, 0.1, 1).unwrap();
        assert_eq!(a, b);
        let c = generate_random_digraph(50, 0.1, 2).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(generate_random_digraph(3, 1.5, 0).is_err());
        assert!(generate_random_digraph(3, -0.1, 0).is_err());
        assert!(generate_random_digraph(3, f64::NAN, 0).is_err());
    }
}
