//! Fixtures, file formats and generators used by the tools and tests.
//!
//! The submodules are independent: [`files`] reads and writes the JSON
//! documents, [`fixtures`] holds the built-in worked examples, and
//! [`gen`] produces seeded random structures for stress testing.

pub mod files;
pub mod fixtures;
pub mod gen;

pub use files::{
    load_pair, load_tree, save_pair, save_tree, CliqueRecord, PairFile, ReportFile, TreeEdgeRecord,
    TreeFile, TreeNodeRecord, TreeSection, VariableRecord,
};
pub use fixtures::{
    fig4_pair, fig4_pair_with_seed, fig4_tree, fig5_tree, fig6_tree, fig7_tree, pair2l,
    pair2l_with_seed, pair_fixture, tree_fixture, window_pair, window_pair_with_seed,
    PAIR_FIXTURES, TREE_FIXTURES,
};
pub use gen::{gen_pair, gen_tree};
