//! Belief propagation between a pair of junction trees that share an
//! interface, with tour-optimized scheduling of the linkage absorptions.
//!
//! The crate is organized bottom-up:
//!
//! - [`potential`]: dense table algebra (multiply, divide, marginalize).
//! - [`junction`]: junction trees, message passing, calibration.
//! - [`linkage`]: host trees, linkage trees, and host assignment.
//! - [`tour`]: minimum-weight open tours on weighted trees.
//! - [`propagation`]: the three update-belief procedures over a tree pair.
//! - [`workbench`]: file formats, bundled fixtures, random generators.
//!
//! Start with [`propagation::PairSession`] for end-to-end use, or run the
//! examples for guided walkthroughs of each layer.

mod cli;
pub mod error;
pub mod junction;
pub mod linkage;
pub mod potential;
pub mod propagation;
pub mod tour;
pub mod workbench;

pub use error::{Error, Result};
pub use junction::{CliqueId, CostModel, EdgeKey, JunctionTree, PassTally};
pub use linkage::{build_host_tree, build_linkage_tree, DSepset, HostTree, Linkage, LinkageTree};
pub use potential::{PotentialTable, Scope, Variable};
pub use propagation::{open_session, CostReport, PairSession};
pub use tour::{
    brute_force_min_numbering, brute_force_min_numbering_with_limit, check_numbering_consistent,
    closed_tour, heaviest_terminal_chain, leaf_distances, min_weight_open_tour, natural_cmp,
    reduce_to_host_tree, tour_weight, LeafDistances, OpenTour, TerminalChain, Walk, WeightedTree,
};

/// Entry point used by the `linkprop` binary. Returns the process exit code.
pub fn cli_main() -> i32 {
    cli::main()
}
