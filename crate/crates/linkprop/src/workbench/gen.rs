//! Seeded random generators for stress testing. The same arguments and
//! seed always produce the same structure, so failures found by the
//! property tests can be replayed from their seed alone.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::junction::JunctionTree;
use crate::linkage::DSepset;
use crate::potential::{PotentialTable, Scope, Variable};
use crate::tour::WeightedTree;

/// Largest number of binary variables either generated junction tree
/// may carry, keeping its joint table within the oracle limit.
pub const MAX_TREE_VARIABLES: usize = 20;

/// Uniformly random labeled tree on `n` nodes, decoded from a random
/// sequence of node labels, with integer edge weights drawn from
/// `weights`. Every node is marked as a host.
pub fn gen_tree(n: usize, seed: u64, weights: RangeInclusive<u32>) -> Result<WeightedTree> {
    if n < 2 {
        return Err(Error::Generator {
            reason: format!("need at least 2 nodes, got {n}"),
        });
    }
    if weights.is_empty() {
        return Err(Error::Generator {
            reason: "empty edge weight range".into(),
        });
    }
    if *weights.start() == 0 {
        return Err(Error::Generator {
            reason: "edge weights must be positive".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sequence: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.gen_range(0..n))
        .collect();
    let mut degree = vec![1usize; n];
    for &s in &sequence {
        degree[s] += 1;
    }
    let mut ends: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    for &s in &sequence {
        let leaf = (0..n).find(|&j| degree[j] == 1).expect("a leaf remains");
        ends.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let last: Vec<usize> = (0..n).filter(|&j| degree[j] == 1).collect();
    ends.push((last[0], last[1]));

    let name = |i: usize| format!("n{}", i + 1);
    let nodes: Vec<(String, bool)> = (0..n).map(|i| (name(i), true)).collect();
    let edges: Vec<(String, String, f64)> = ends
        .into_iter()
        .map(|(u, v)| {
            let weight = rng.gen_range(weights.clone()) as f64;
            (name(u), name(v), weight)
        })
        .collect();
    WeightedTree::new(nodes, edges)
}

fn seeded_clique(rng: &mut ChaCha8Rng, ids: &[String]) -> PotentialTable {
    let layout: Vec<Variable> = ids.iter().map(Variable::binary).collect();
    let cells = 1usize << layout.len();
    let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.1..1.0)).collect();
    PotentialTable::new(layout, values).expect("seeded values fit the scope")
}

/// Random junction tree pair over `shared` interface variables plus
/// `private_a` and `private_b` side-local ones, all binary, with
/// seeded positive potentials.
///
/// Both trees share one chain of overlapping windows over a shuffled
/// order of the shared variables: window starts and ends both increase
/// strictly, which gives the running intersection property by
/// construction and keeps every separator nonempty. Private variables
/// hang off the chain (side A as independent leaf cliques, side B as a
/// chain rooted at one anchor), so no window overlap ever carries a
/// private variable and every linkage stays inside the interface.
/// Mirroring the windows on both sides matters: it makes each side's
/// belief over the interface factorize over the shared linkage tree,
/// which is what the update variants rely on to reproduce the exact
/// posterior. The result always opens a session without error, and
/// every linkage of tree A finds a peer host in the mirrored window.
pub fn gen_pair(
    shared: usize,
    private_a: usize,
    private_b: usize,
    seed: u64,
) -> Result<(JunctionTree, JunctionTree, DSepset)> {
    if shared == 0 {
        return Err(Error::Generator {
            reason: "need at least one shared variable".into(),
        });
    }
    for (label, count) in [("A", shared + private_a), ("B", shared + private_b)] {
        if count > MAX_TREE_VARIABLES {
            return Err(Error::Generator {
                reason: format!(
                    "tree {label} would carry {count} binary variables, over the oracle limit of {MAX_TREE_VARIABLES}"
                ),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let shared_ids: Vec<String> = (1..=shared).map(|i| format!("x{i}")).collect();
    let mut order: Vec<String> = shared_ids.clone();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }

    let total = order.len();
    let mut windows: Vec<(usize, usize)> = Vec::new();
    let mut start = 0usize;
    let mut end = usize::min(total, 1 + rng.gen_range(1..=2));
    windows.push((start, end));
    while end < total {
        let next_start = rng.gen_range(start + 1..=end - 1);
        let width = rng.gen_range(2..=3);
        let next_end = usize::min(total, usize::max(end + 1, next_start + width));
        start = next_start;
        end = next_end;
        windows.push((start, end));
    }

    let mut a_cliques: Vec<(String, PotentialTable)> = Vec::new();
    let mut a_edges: Vec<(String, String)> = Vec::new();
    for (k, (s, e)) in windows.iter().enumerate() {
        let ids: Vec<String> = order[*s..*e].to_vec();
        a_cliques.push((format!("A{}", k + 1), seeded_clique(&mut rng, &ids)));
        if k > 0 {
            a_edges.push((format!("A{k}"), format!("A{}", k + 1)));
        }
    }
    for i in 1..=private_a {
        let anchor = rng.gen_range(0..total);
        let window = windows
            .iter()
            .position(|(s, e)| (*s..*e).contains(&anchor))
            .expect("windows cover the order");
        let ids = vec![order[anchor].clone(), format!("p{i}")];
        a_cliques.push((format!("P{i}"), seeded_clique(&mut rng, &ids)));
        a_edges.push((format!("A{}", window + 1), format!("P{i}")));
    }
    let a = JunctionTree::new(a_cliques, a_edges)?;

    let mut b_cliques: Vec<(String, PotentialTable)> = Vec::new();
    let mut b_edges: Vec<(String, String)> = Vec::new();
    for (k, (s, e)) in windows.iter().enumerate() {
        let ids: Vec<String> = order[*s..*e].to_vec();
        b_cliques.push((format!("B{}", k + 1), seeded_clique(&mut rng, &ids)));
        if k > 0 {
            b_edges.push((format!("B{k}"), format!("B{}", k + 1)));
        }
    }
    for i in 1..=private_b {
        let (prev, prev_clique) = if i == 1 {
            let anchor = rng.gen_range(0..total);
            let window = windows
                .iter()
                .position(|(s, e)| (*s..*e).contains(&anchor))
                .expect("windows cover the order");
            (order[anchor].clone(), format!("B{}", window + 1))
        } else {
            (format!("q{}", i - 1), format!("Q{}", i - 1))
        };
        let ids = vec![prev, format!("q{i}")];
        b_cliques.push((format!("Q{i}"), seeded_clique(&mut rng, &ids)));
        b_edges.push((prev_clique, format!("Q{i}")));
    }
    let b = JunctionTree::new(b_cliques, b_edges)?;

    let scope = Scope::new(shared_ids.iter().map(Variable::binary))?;
    let interface = DSepset::between(scope, &a, &b)?;
    Ok((a, b, interface))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::open_session;
    use crate::workbench::files::{PairFile, TreeFile};

    #[test]
    fn same_seed_same_tree() {
        let one = gen_tree(7, 42, 1..=9).unwrap();
        let two = gen_tree(7, 42, 1..=9).unwrap();
        assert_eq!(TreeFile::from_tree(&one), TreeFile::from_tree(&two));
        let three = gen_tree(7, 43, 1..=9).unwrap();
        assert_eq!(three.len(), 7);
    }

    #[test]
    fn two_nodes_make_a_single_edge() {
        let tree = gen_tree(2, 0, 1..=1).unwrap();
        assert_eq!(tree.len(), 2);
        assert_eq!(tree.edges().len(), 1);
        assert_eq!(tree.total_weight(), 1.0);
    }

    #[test]
    fn rejects_degenerate_arguments() {
        assert!(matches!(
            gen_tree(1, 0, 1..=9),
            Err(Error::Generator { .. })
        ));
        assert!(matches!(
            gen_tree(5, 0, 0..=4),
            Err(Error::Generator { .. })
        ));
        assert!(matches!(
            gen_tree(5, 0, 9..=1),
            Err(Error::Generator { .. })
        ));
        assert!(matches!(
            gen_pair(0, 1, 1, 0),
            Err(Error::Generator { .. })
        ));
        assert!(matches!(
            gen_pair(21, 0, 0, 0),
            Err(Error::Generator { .. })
        ));
        assert!(matches!(
            gen_pair(10, 11, 0, 0),
            Err(Error::Generator { .. })
        ));
    }

    #[test]
    fn same_seed_same_pair() {
        let (a1, b1, i1) = gen_pair(4, 3, 2, 99).unwrap();
        let (a2, b2, i2) = gen_pair(4, 3, 2, 99).unwrap();
        assert_eq!(
            PairFile::from_parts(&a1, &b1, &i1),
            PairFile::from_parts(&a2, &b2, &i2)
        );
    }

    #[test]
    fn single_shared_variable_gives_one_linkage() {
        let (a, b, interface) = gen_pair(1, 3, 2, 5).unwrap();
        let session = open_session(a, b, interface).unwrap();
        assert_eq!(session.linkage_count(), 1);
    }

    #[test]
    fn generated_structures_stay_valid_over_many_seeds() {
        for seed in 0..600u64 {
            let n = 2 + (seed as usize % 9);
            let tree = gen_tree(n, seed, 1..=9).unwrap();
            assert_eq!(tree.len(), n);
            assert_eq!(tree.edges().len(), n - 1);
        }
        for seed in 0..450u64 {
            let shared = 1 + (seed as usize % 4);
            let private_a = (seed as usize / 4) % 4;
            let private_b = (seed as usize / 16) % 3;
            let (a, b, interface) = gen_pair(shared, private_a, private_b, seed).unwrap();
            let session = open_session(a, b, interface).unwrap();
            assert!(session.linkage_count() >= 1);
        }
    }
}
