//! Observe a variable in one subnet and pull the consequences into the
//! other through the linkages.
//!
//! Run with `cargo run --example evidence_flow`.

use linkprop::workbench::fixtures;
use linkprop::{open_session, JunctionTree, PotentialTable, Scope, Variable};

fn marginal(tree: &JunctionTree, clique: &str, var: &str) -> linkprop::Result<Vec<f64>> {
    let single = Scope::new([Variable::binary(var)])?;
    let table = tree.belief(clique)?.marginalize(&single)?.normalize()?;
    Ok(table.values().to_vec())
}

fn main() -> linkprop::Result<()> {
    // Baseline: both sides calibrated, nothing observed.
    let (a, b, interface) = fixtures::pair2l();
    let base = open_session(a, b, interface)?;
    println!(
        "P(D) on side a before any exchange: {:?}",
        marginal(base.tree_a(), "A2", "D")?
    );

    // The same pair, except side b has seen F = 1. The observation is
    // multiplied into a clique as an indicator before the session
    // opens; opening calibrates both sides.
    let (a, mut b, interface) = fixtures::pair2l();
    let observed_f = PotentialTable::new(vec![Variable::binary("F")], vec![0.0, 1.0])?;
    b.multiply_into_clique("B1", &observed_f)?;
    let mut session = open_session(a, b, interface)?;
    println!(
        "P(D) on side b after observing F=1: {:?}",
        marginal(session.tree_b(), "B2", "D")?
    );
    println!(
        "P(D) on side a before the exchange: {:?}",
        marginal(session.tree_a(), "A2", "D")?
    );

    // One update call moves the evidence across. Side a now agrees
    // with side b about every shared variable.
    let order = session.default_order();
    let report = session.update_belief3(&order)?;
    println!(
        "P(D) on side a after the exchange:  {:?}",
        marginal(session.tree_a(), "A2", "D")?
    );
    println!(
        "cost: {} coordination + {} finalization passes, {} payload entries",
        report.coordination_passes, report.finalization_passes, report.payload_entries
    );

    // Running the same update again changes nothing: the session is
    // already synchronized on the interface.
    let order = session.default_order();
    session.update_belief3(&order)?;
    println!(
        "P(D) on side a after a second run:  {:?}",
        marginal(session.tree_a(), "A2", "D")?
    );
    Ok(())
}
