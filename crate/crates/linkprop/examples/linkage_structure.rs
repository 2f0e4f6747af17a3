//! Derive the host tree and linkage tree a pair of junction trees uses
//! to exchange beliefs over their shared variables, and compare the
//! linkage payload against shipping the whole interface at once.
//!
//! Run with `cargo run --example linkage_structure`.

use linkprop::workbench::fixtures;
use linkprop::{build_host_tree, build_linkage_tree, open_session};

fn main() -> linkprop::Result<()> {
    // Two cliques per side, three shared variables.
    let (a, b, interface) = fixtures::pair2l();
    println!(
        "interface: {{{}}}",
        interface.vars().ids().collect::<Vec<_>>().join(",")
    );

    let host = build_host_tree(&a, &interface, "a")?;
    println!("host tree cliques: {:?}", host.clique_ids().collect::<Vec<_>>());

    let links = build_linkage_tree(&host, &interface);
    for (i, link) in links.linkages().iter().enumerate() {
        println!(
            "linkage {}: scope {{{}}} hosted at {}",
            i + 1,
            link.scope().ids().collect::<Vec<_>>().join(","),
            link.host_a(),
        );
    }

    // A session assigns peer hosts too and checks the cover is exact.
    let session = open_session(a, b, interface)?;
    for link in session.linkage_tree().linkages() {
        println!(
            "peer host for {{{}}}: {}",
            link.scope().ids().collect::<Vec<_>>().join(","),
            link.host_b().unwrap_or("none"),
        );
    }

    // Ten shared variables, but the linkages stay at five variables
    // each, so coordinating through them is far cheaper than moving
    // one table over the whole interface.
    let (a, b, interface) = fixtures::window_pair();
    let direct = interface.direct_payload_entries();
    let session = open_session(a, b, interface)?;
    let through_links = session.linkage_tree().payload_entries();
    println!(
        "window pair: {} entries through {} linkages vs {} direct",
        through_links,
        session.linkage_count(),
        direct,
    );
    Ok(())
}
