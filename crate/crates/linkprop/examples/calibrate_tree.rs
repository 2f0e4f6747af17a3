//! Build a junction tree, calibrate it with two sweeps of message
//! passing, and read consistent marginals off any clique.
//!
//! Run with `cargo run --example calibrate_tree`.

use linkprop::{JunctionTree, PotentialTable, Scope, Variable};

fn main() -> linkprop::Result<()> {
    let a = Variable::binary("a");
    let b = Variable::binary("b");
    let c = Variable::binary("c");
    let d = Variable::binary("d");

    // A chain over {a,b} - {b,c} - {c,d}. Potentials are arbitrary
    // positive weights, not yet a consistent distribution.
    let mut tree = JunctionTree::new(
        vec![
            (
                "AB".into(),
                PotentialTable::new(vec![a.clone(), b.clone()], vec![4.0, 1.0, 2.0, 3.0])?,
            ),
            (
                "BC".into(),
                PotentialTable::new(vec![b.clone(), c.clone()], vec![1.0, 5.0, 2.0, 2.0])?,
            ),
            (
                "CD".into(),
                PotentialTable::new(vec![c.clone(), d.clone()], vec![3.0, 1.0, 1.0, 3.0])?,
            ),
        ],
        vec![("AB".into(), "BC".into()), ("BC".into(), "CD".into())],
    )?;

    let before = tree.consistency_check(1e-9)?;
    println!("consistent before calibration: {}", before.consistent);

    tree.calibrate()?;
    let after = tree.consistency_check(1e-9)?;
    println!(
        "consistent after calibration: {} (max discrepancy {:.2e})",
        after.consistent, after.max_discrepancy
    );
    println!(
        "passes spent: {} (each edge swept once inward, once outward)",
        tree.tally().passes
    );

    // Once calibrated, every clique containing a variable yields the
    // same marginal for it.
    let b_scope = Scope::new([b])?;
    let from_ab = tree.belief("AB")?.marginalize(&b_scope)?.normalize()?;
    let from_bc = tree.belief("BC")?.marginalize(&b_scope)?.normalize()?;
    println!("P(b) read from AB: {:?}", from_ab.values());
    println!("P(b) read from BC: {:?}", from_bc.values());

    // The joint table is the product of clique beliefs over separator
    // beliefs; on a tree this small it is cheap to enumerate.
    let joint = tree.joint_table()?.normalize()?;
    println!("joint over 4 variables has {} cells", joint.values().len());
    let b_direct = joint.marginalize(&Scope::new([Variable::binary("b")])?)?;
    println!("P(b) from the joint: {:?}", b_direct.values());
    Ok(())
}
