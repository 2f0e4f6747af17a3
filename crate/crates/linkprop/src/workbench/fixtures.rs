//! Built-in worked examples shared by the tools, the tests and the
//! runnable examples. Trees come with fixed ids and weights; pairs are
//! filled with seeded random potentials so they stay reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::junction::JunctionTree;
use crate::linkage::DSepset;
use crate::potential::{PotentialTable, Scope, Variable};
use crate::tour::WeightedTree;

/// Tree fixture names accepted by [`tree_fixture`].
pub const TREE_FIXTURES: &[&str] = &["fig4-tree", "fig5-tree", "fig6-tree", "fig7-tree"];

/// Pair fixture names accepted by [`pair_fixture`].
pub const PAIR_FIXTURES: &[&str] = &["fig4-pair", "pair2l", "window-pair"];

fn tree(ids: &[&str], edges: &[(&str, &str, f64)]) -> WeightedTree {
    WeightedTree::new(
        ids.iter().map(|id| (id.to_string(), true)).collect(),
        edges
            .iter()
            .map(|(u, v, w)| (u.to_string(), v.to_string(), *w))
            .collect(),
    )
    .expect("fixture trees are valid")
}

/// Five node star: C1 adjacent to C2, C3 and C4, with C5 hanging off
/// C2. Unit weights, every node a host.
pub fn fig4_tree() -> WeightedTree {
    tree(
        &["C1", "C2", "C3", "C4", "C5"],
        &[
            ("C1", "C2", 1.0),
            ("C1", "C3", 1.0),
            ("C1", "C4", 1.0),
            ("C2", "C5", 1.0),
        ],
    )
}

const TEN_NODE_EDGES: [(&str, &str, f64); 9] = [
    ("C5", "C2", 4.0),
    ("C2", "C6", 4.0),
    ("C6", "C7", 2.0),
    ("C7", "C8", 1.0),
    ("C2", "C1", 8.0),
    ("C1", "C9", 2.0),
    ("C9", "C10", 3.0),
    ("C1", "C3", 4.0),
    ("C1", "C4", 6.0),
];

const TEN_NODE_IDS: [&str; 10] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"];

/// Ten node tree with unit weights, so its closed tour has length 18.
pub fn fig5_tree() -> WeightedTree {
    let edges: Vec<(&str, &str, f64)> = TEN_NODE_EDGES.iter().map(|(u, v, _)| (*u, *v, 1.0)).collect();
    tree(&TEN_NODE_IDS, &edges)
}

/// The same ten node tree with weighted edges totalling 34.
pub fn fig6_tree() -> WeightedTree {
    tree(&TEN_NODE_IDS, &TEN_NODE_EDGES)
}

/// [`fig6_tree`] with nodes renamed v1 through v10, the form used in
/// the open tour walkthrough.
pub fn fig7_tree() -> WeightedTree {
    let rename = |id: &str| -> &'static str {
        match id {
            "C1" => "v9",
            "C2" => "v6",
            "C3" => "v5",
            "C4" => "v4",
            "C5" => "v1",
            "C6" => "v7",
            "C7" => "v8",
            "C8" => "v2",
            "C9" => "v10",
            "C10" => "v3",
            other => panic!("no renaming for {other}"),
        }
    };
    let ids: Vec<&str> = TEN_NODE_IDS.iter().map(|id| rename(id)).collect();
    let edges: Vec<(&str, &str, f64)> = TEN_NODE_EDGES
        .iter()
        .map(|(u, v, w)| (rename(u), rename(v), *w))
        .collect();
    tree(&ids, &edges)
}

fn seeded_clique(rng: &mut ChaCha8Rng, vars: &[&str]) -> PotentialTable {
    let layout: Vec<Variable> = vars.iter().map(|v| Variable::binary(*v)).collect();
    let cells = 1usize << layout.len();
    let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.1..1.0)).collect();
    PotentialTable::new(layout, values).expect("seeded values fit the scope")
}

fn seeded_tree(
    rng: &mut ChaCha8Rng,
    cliques: &[(&str, &[&str])],
    edges: &[(&str, &str)],
) -> JunctionTree {
    JunctionTree::new(
        cliques
            .iter()
            .map(|(id, vars)| (id.to_string(), seeded_clique(rng, vars)))
            .collect(),
        edges
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
    )
    .expect("fixture junction trees are valid")
}

fn interface(ids: &[&str], a: &JunctionTree, b: &JunctionTree) -> DSepset {
    let scope = Scope::new(ids.iter().map(|id| Variable::binary(*id))).expect("distinct ids");
    DSepset::between(scope, a, b).expect("shared variables occur in both trees")
}

/// Smallest interesting pair: two cliques per side over binary
/// variables A through G, sharing B, C and D. Its linkage tree has the
/// two linkages {B,C} and {C,D}.
pub fn pair2l() -> (JunctionTree, JunctionTree, DSepset) {
    pair2l_with_seed(11)
}

/// [`pair2l`] with caller-chosen potentials.
pub fn pair2l_with_seed(seed: u64) -> (JunctionTree, JunctionTree, DSepset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = seeded_tree(
        &mut rng,
        &[("A1", &["A", "B", "C"]), ("A2", &["C", "D", "E"])],
        &[("A1", "A2")],
    );
    let b = seeded_tree(
        &mut rng,
        &[("B1", &["B", "C", "F"]), ("B2", &["C", "D", "G"])],
        &[("B1", "B2")],
    );
    let shared = interface(&["B", "C", "D"], &a, &b);
    (a, b, shared)
}

/// Junction tree pair whose host tree is [`fig4_tree`]: five cliques on
/// each side, one linkage per clique, nine shared variables.
pub fn fig4_pair() -> (JunctionTree, JunctionTree, DSepset) {
    fig4_pair_with_seed(7)
}

/// [`fig4_pair`] with caller-chosen potentials.
pub fn fig4_pair_with_seed(seed: u64) -> (JunctionTree, JunctionTree, DSepset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = seeded_tree(
        &mut rng,
        &[
            ("C1", &["s1", "t2", "t3", "t4"]),
            ("C2", &["s2", "t2", "t5"]),
            ("C3", &["s3", "t3"]),
            ("C4", &["s4", "t4"]),
            ("C5", &["s5", "t5"]),
        ],
        &[("C1", "C2"), ("C1", "C3"), ("C1", "C4"), ("C2", "C5")],
    );
    let b = seeded_tree(
        &mut rng,
        &[
            ("D1", &["s1", "t2", "t3", "t4", "u"]),
            ("D2", &["s2", "t2", "t5"]),
            ("D3", &["s3", "t3"]),
            ("D4", &["s4", "t4"]),
            ("D5", &["s5", "t5", "w"]),
        ],
        &[("D1", "D2"), ("D1", "D3"), ("D1", "D4"), ("D2", "D5")],
    );
    let shared = interface(
        &["s1", "s2", "s3", "s4", "s5", "t2", "t3", "t4", "t5"],
        &a,
        &b,
    );
    (a, b, shared)
}

/// Pair built to contrast linkage payloads with a direct exchange: ten
/// shared binary variables named a through j, and the same three
/// overlapping window cliques of five variables on both sides. The
/// three linkages carry 3 * 32 = 96 entries where a direct exchange of
/// the full interface would carry 1024.
pub fn window_pair() -> (JunctionTree, JunctionTree, DSepset) {
    window_pair_with_seed(10)
}

/// [`window_pair`] with caller-chosen potentials.
pub fn window_pair_with_seed(seed: u64) -> (JunctionTree, JunctionTree, DSepset) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let windows: [(&str, &[&str]); 3] = [
        ("W1", &["a", "b", "c", "d", "e"]),
        ("W2", &["d", "e", "f", "g", "h"]),
        ("W3", &["f", "g", "h", "i", "j"]),
    ];
    let a = seeded_tree(&mut rng, &windows, &[("W1", "W2"), ("W2", "W3")]);
    let mirrored: Vec<(&str, &[&str])> = windows
        .iter()
        .zip(["V1", "V2", "V3"])
        .map(|((_, vars), id)| (id, *vars))
        .collect();
    let b = seeded_tree(&mut rng, &mirrored, &[("V1", "V2"), ("V2", "V3")]);
    let shared = interface(&["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"], &a, &b);
    (a, b, shared)
}

/// Looks up a tree fixture by its exported name.
pub fn tree_fixture(name: &str) -> Option<WeightedTree> {
    match name {
        "fig4-tree" => Some(fig4_tree()),
        "fig5-tree" => Some(fig5_tree()),
        "fig6-tree" => Some(fig6_tree()),
        "fig7-tree" => Some(fig7_tree()),
        _ => None,
    }
}

/// Looks up a pair fixture by its exported name.
pub fn pair_fixture(name: &str) -> Option<(JunctionTree, JunctionTree, DSepset)> {
    match name {
        "fig4-pair" => Some(fig4_pair()),
        "pair2l" => Some(pair2l()),
        "window-pair" => Some(window_pair()),
        _ => None,
    }
}
