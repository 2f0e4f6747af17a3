//! Plan a minimum weight open tour over a weighted tree: walk every
//! edge, pay twice for every edge except those on one leaf-to-leaf
//! chain, and choose that chain to be the heaviest one available.
//!
//! Run with `cargo run --example open_tour`.

use linkprop::workbench::fixtures;
use linkprop::{
    brute_force_min_numbering_with_limit, closed_tour, heaviest_terminal_chain, leaf_distances,
    min_weight_open_tour, tour_weight,
};

fn main() -> linkprop::Result<()> {
    let tree = fixtures::fig7_tree();
    println!(
        "tree: {} nodes, total weight {}",
        tree.len(),
        tree.total_weight()
    );

    // A closed tour returns to its start and pays every edge twice.
    let closed = closed_tour(&tree);
    println!("closed tour weight: {} (twice the edge weight)", closed.weight);

    // An open tour may end elsewhere, saving the weight of the chain
    // between its first and last nodes. The best chain to skip is the
    // heaviest path between two leaves.
    let distances = leaf_distances(&tree);
    for leaf in distances.leaves() {
        println!(
            "  heaviest path from leaf {leaf}: {}",
            distances.max_distance(leaf)?
        );
    }
    let chain = heaviest_terminal_chain(&tree)?;
    println!(
        "heaviest terminal chain: {} (weight {})",
        chain.path.join(" "),
        chain.weight
    );

    let tour = min_weight_open_tour(&tree)?;
    println!("open tour: {}", tour.walk.join(" "));
    println!("first-visit numbering: {}", tour.numbering.join(" "));
    println!(
        "open tour weight: {} = {} - {}",
        tour.weight, closed.weight, chain.weight
    );
    assert_eq!(tour_weight(&tree, &tour.walk)?, tour.weight);

    // An exhaustive check over all visiting orders agrees.
    let (_, best) = brute_force_min_numbering_with_limit(&tree, tree.len())?;
    println!("exhaustive minimum over all orders: {best}");
    Ok(())
}
