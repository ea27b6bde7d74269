//! Solvers, oracles and instance generators for the multicolored graph
//! realization problem (MGR).
//!
//! A colored graph `(G, φ)` collapses to a cluster graph by contracting every
//! color class to a node. MGR asks for one vertex per class such that the
//! induced subgraph on the chosen vertices is exactly the cluster graph.
//!
//! The crate provides:
//!
//! * [`graph`]: the data model, quotient construction and certificate checks;
//! * [`oracles`]: exhaustive reference solvers used to cross-check everything else;
//! * [`twosat`]: the polynomial algorithm for cluster size at most two;
//! * [`convex`]: a window dynamic program for convex bipartite cluster graphs;
//! * [`treewidth`]: tree decompositions and the bag-table dynamic program;
//! * [`reductions`]: hardness gadget generators and instance transforms;
//! * [`io`]: the JSON and text file formats.
//!
//! With the `parallel` feature (on by default) the brute-force search and the
//! tree-decomposition DP use rayon; without it every path runs sequentially.

pub mod convex;
pub mod error;
pub mod formula;
pub mod graph;
pub mod io;
pub mod oracles;
pub mod par;
pub mod reductions;
pub mod sample;
pub mod treewidth;
pub mod twosat;

pub use error::{Error, Result};
pub use formula::{Assignment, Formula1in3};
pub use graph::{
    build_cluster_graph, instance_stats, validate_instance, verify_realization, ClusterGraph,
    ColoredGraph, InstanceData, InstanceStats, Realization, Violation,
};
