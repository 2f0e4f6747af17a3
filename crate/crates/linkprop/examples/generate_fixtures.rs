//! Generate random structures, write them as JSON documents, and read
//! them back.
//!
//! Run with `cargo run --example generate_fixtures`.

use linkprop::workbench::{files, fixtures, gen};

fn main() -> linkprop::Result<()> {
    let dir = std::env::temp_dir().join("linkprop-example-fixtures");
    std::fs::create_dir_all(&dir).expect("temp dir is writable");

    // A seeded random tree: same seed, same tree, every time.
    let tree = gen::gen_tree(8, 42, 1..=9)?;
    let tree_path = dir.join("random-tree.json");
    files::save_tree(&tree_path, &tree)?;
    let loaded = files::load_tree(&tree_path)?;
    println!(
        "wrote {} ({} nodes, weight {})",
        tree_path.display(),
        loaded.len(),
        loaded.total_weight()
    );

    // A seeded random pair, ready for a propagation session.
    let (a, b, interface) = gen::gen_pair(4, 2, 2, 7)?;
    let pair_path = dir.join("random-pair.json");
    files::save_pair(&pair_path, &a, &b, &interface)?;
    let (a2, _, _) = files::load_pair(&pair_path)?;
    println!(
        "wrote {} ({} cliques on side a)",
        pair_path.display(),
        a2.clique_ids().count()
    );

    // The built-in fixtures export the same way.
    for name in fixtures::TREE_FIXTURES {
        let path = dir.join(format!("{name}.json"));
        files::save_tree(&path, &fixtures::tree_fixture(name).expect("listed name"))?;
        println!("wrote {}", path.display());
    }
    for name in fixtures::PAIR_FIXTURES {
        let (a, b, interface) = fixtures::pair_fixture(name).expect("listed name");
        let path = dir.join(format!("{name}.json"));
        files::save_pair(&path, &a, &b, &interface)?;
        println!("wrote {}", path.display());
    }

    // Documents are canonical: saving what was loaded is byte stable.
    let first = std::fs::read_to_string(&tree_path).expect("file just written");
    files::save_tree(&tree_path, &loaded)?;
    let second = std::fs::read_to_string(&tree_path).expect("file just written");
    println!("round trip byte identical: {}", first == second);
    Ok(())
}
