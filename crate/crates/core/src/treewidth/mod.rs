//! Tree decompositions of the cluster graph and the bag-table DP over them.
//!
//! The table of a nice node `v` has one entry per selection of a vertex for
//! every class in its bag. An entry is true iff the selection extends to a
//! realization of the cluster graph restricted to the classes seen in the
//! subtree below `v`.

mod decomposition;
mod dp;
mod nice;

pub use decomposition::{
    min_fill_decomposition, validate_decomposition, DecompositionReport, TreeDecomposition,
};
pub use dp::{
    solve_treewidth_dp, solve_treewidth_dp_with, BagTable, TreewidthOptions, TreewidthOutcome,
    TreewidthStats, DEFAULT_MAX_TABLE_CELLS,
};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
