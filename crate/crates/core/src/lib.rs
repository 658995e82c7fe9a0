// SPDX-License-Identifier: Apache-2.0

//! D-core decomposition of directed graphs.
//!
//! A `(k,l)`-core is the maximal subgraph in which every vertex has at least
//! `k` in-neighbours and `l` out-neighbours. This crate computes the full
//! decomposition three ways:
//!
//! - [`peel`]: centralized peeling, used as the ground-truth oracle;
//! - [`anchored`]: the three-phase anchored-coreness algorithm (in-H-index,
//!   out-H-index upper bounds, refinement);
//! - [`skyline`]: skyline coreness via the iterated two-dimensional D-index.
//!
//! The distributed algorithms run on [`engine`], a deterministic
//! bulk-synchronous simulator with vertex-centric and block-centric modes
//! that reports exact superstep and message counts.

pub mod anchored;
pub mod engine;
mod error;
pub mod fixtures;
pub mod graph;
pub mod index;
pub mod peel;
pub mod skyline;
pub mod verify;

pub use anchored::{anchored_decompose, AnchoredRun};
pub use engine::{EngineConfig, EngineMetrics, Mode};
pub use error::{Error, Result};
pub use graph::{
    generate_random_digraph, hash_partition, parse_edge_list, read_edge_list_file,
    segment_partition, DirectedGraph, ParseReport, PartitionMap, Partitioner, VertexId,
};
pub use index::{CorenessPair, SkylineSet};
pub use peel::{anchored_to_skyline, dcore, peel_decompose, AnchoredTable};
pub use skyline::{skyline_decompose, SkylineRun};
