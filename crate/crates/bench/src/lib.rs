// SPDX-License-Identifier: Apache-2.0

//! Seeded workloads shared by the benchmark targets.

use dcore::index::CorenessPair;
use dcore::{generate_random_digraph, DirectedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Named random digraphs from sparse to dense.
pub fn graphs() -> Vec<(&'static str, DirectedGraph)> {
    [
        ("n1000_p0.005", 1000, 0.005, 1),
        ("n2000_p0.004", 2000, 0.004, 2),
        ("n400_p0.05", 400, 0.05, 3),
    ]
    .into_iter()
    .map(|(name, n, p, seed)| {
        (
            name,
            generate_random_digraph(n, p, seed).expect("valid parameters"),
        )
    })
    .collect()
}

/// `len` uniform values below `max`.
pub fn values(len: usize, max: u32, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(0..max)).collect()
}

/// `len` random pairs with coordinates below `max`.
pub fn pairs(len: usize, max: u32, seed: u64) -> Vec<CorenessPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| CorenessPair::new(rng.random_range(0..max), rng.random_range(0..max)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_are_seeded() {
        assert_eq!(values(50, 9, 4), values(50, 9, 4));
        assert_eq!(pairs(20, 5, 1), pairs(20, 5, 1));
        let a: Vec<_> = graphs().into_iter().map(|(_, g)| g.arc_count()).collect();
        let b: Vec<_> = graphs().into_iter().map(|(_, g)| g.arc_count()).collect();
        assert_eq!(a, b);
    }
}
