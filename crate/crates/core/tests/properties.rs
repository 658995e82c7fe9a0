// SPDX-License-Identifier: Apache-2.0

//! Property suites over random digraphs: oracle equivalence across engine
//! configurations, core nesting and consistency of the anchored table with
//! direct core extraction.

use dcore::engine::{Audit, EngineConfig, Mode};
use dcore::fixtures::to_edge_list;
use dcore::skyline::skyline_decompose_audited;
use dcore::verify::{check_partial_nesting, check_skyline_properties};
use dcore::{
    anchored::anchored_decompose_audited, anchored_to_skyline, dcore, generate_random_digraph,
    parse_edge_list, peel_decompose, DirectedGraph, PartitionMap, Partitioner,
};
use proptest::prelude::*;

fn digraph(max_n: usize) -> impl Strategy<Value = DirectedGraph> {
    (1..=max_n, 0.0..0.5f64, any::<u64>())
        .prop_map(|(n, p, seed)| generate_random_digraph(n, p, seed).unwrap())
}

fn engine_setup() -> impl Strategy<Value = (Mode, u32, Partitioner)> {
    (
        prop_oneof![Just(Mode::Vertex), Just(Mode::Block)],
        1..=8u32,
        prop_oneof![Just(Partitioner::Hash), Just(Partitioner::Segment)],
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn distributed_runs_match_peeling(g in digraph(50), (mode, blocks, pt) in engine_setup()) {
        let parts = pt.partition(&g, blocks).unwrap();
        let cfg = EngineConfig::with_mode(mode);
        let audit = Audit::new();
        let table = peel_decompose(&g);
        let ac = anchored_decompose_audited(&g, &parts, &cfg, Some(&audit)).unwrap();
        prop_assert_eq!(&ac.table, &table);
        let sc = skyline_decompose_audited(&g, &parts, &cfg, Some(&audit)).unwrap();
        prop_assert_eq!(&sc.sets, &anchored_to_skyline(&table));
        prop_assert!(audit.is_clean(), "{:?}", audit.violations());
        check_skyline_properties(&g, &sc.sets).unwrap();
        for m in ac.metrics.iter().chain(&sc.metrics) {
            prop_assert!(m.is_consistent());
            prop_assert!(m.supersteps <= cfg.cap_for(&g));
        }
    }

    #[test]
    fn cores_nest(g in digraph(30)) {
        prop_assert!(check_partial_nesting(&g).is_ok());
    }

    #[test]
    fn table_agrees_with_core_extraction(g in digraph(40), k in 0..5u32, l in 0..5u32) {
        let table = peel_decompose(&g);
        let core = dcore(&g, k, l);
        let from_table: Vec<_> = g.vertices().filter(|&v| table.contains(v, k, l)).collect();
        prop_assert_eq!(core, from_table);
    }

    #[test]
    fn skyline_pairs_belong_to_their_cores(g in digraph(40)) {
        let sets = anchored_to_skyline(&peel_decompose(&g));
        for v in g.vertices() {
            for p in sets[v as usize].iter() {
                prop_assert!(dcore(&g, p.k, p.l).binary_search(&v).is_ok());
                prop_assert!(dcore(&g, p.k + 1, p.l).binary_search(&v).is_err());
                prop_assert!(dcore(&g, p.k, p.l + 1).binary_search(&v).is_err());
            }
        }
    }

    #[test]
    fn edge_list_round_trip_preserves_decomposition(g in digraph(40)) {
        let back = parse_edge_list(to_edge_list(&g).as_bytes()).unwrap();
        // isolated vertices are not expressible in a bare edge list
        let isolated = g.vertices().filter(|&v| g.degree(v) == 0).count();
        prop_assert_eq!(back.n() + isolated, g.n());
        prop_assert_eq!(back.arc_count(), g.arc_count());
    }

    #[test]
    fn vertex_mode_ignores_partitioning(g in digraph(40), blocks in 1..=8u32) {
        let cfg = EngineConfig::with_mode(Mode::Vertex);
        let run = |parts: &PartitionMap| {
            let ac = dcore::anchored_decompose(&g, parts, &cfg).unwrap();
            let sc = dcore::skyline_decompose(&g, parts, &cfg).unwrap();
            (ac, sc)
        };
        let single = run(&PartitionMap::single(g.n()));
        let split = run(&Partitioner::Hash.partition(&g, blocks).unwrap());
        // metrics carry the block count; everything else must agree
        prop_assert_eq!(&single.0.table, &split.0.table);
        prop_assert_eq!(&single.1.sets, &split.1.sets);
        let steps = |r: &(dcore::AnchoredRun, dcore::SkylineRun)| {
            r.0.metrics.iter().chain(&r.1.metrics)
                .map(|m| (m.supersteps, m.messages_total, m.messages_per_step.clone()))
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(steps(&single), steps(&split));
    }
}
