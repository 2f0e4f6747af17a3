//! Weighted trees and tour planning.
//!
//! A tour walks along tree edges and pays the edge weight on every
//! crossing. Visiting all nodes and returning to the start costs twice
//! the total weight no matter the route, so the interesting question is
//! the open tour: start and end anywhere, visit everything, pay as
//! little as possible. The optimum runs between the two ends of the
//! heaviest leaf-to-leaf chain, crossing chain edges once and everything
//! else twice. [`min_weight_open_tour`] constructs such a walk together
//! with the node numbering its first visits induce, and
//! [`brute_force_min_numbering`] serves as an exhaustive oracle on small
//! trees.
//!
//! [`reduce_to_host_tree`] turns a host tree into the weighted tree the
//! tour runs on: cliques that host no linkage are dropped or folded into
//! longer edges, except junction points of degree three or more.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::junction::{CliqueId, CostModel};
use crate::linkage::HostTree;

/// Orders identifiers with numeric suffixes by their numeric value, so
/// `v2` sorts before `v10`. Ids that do not share a stem fall back to
/// plain string order.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let stem = s.len() - s.bytes().rev().take_while(u8::is_ascii_digit).count();
        match s[stem..].parse() {
            Ok(n) => (&s[..stem], Some(n)),
            Err(_) => (s, None),
        }
    }
    let (sa, na) = split(a);
    let (sb, nb) = split(b);
    sa.cmp(sb).then(na.cmp(&nb)).then_with(|| a.cmp(b))
}

/// An undirected tree with positive edge weights. Each node carries a
/// flag saying whether it hosts a linkage; tours must visit every node
/// either way. Nodes are kept in natural id order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree {
    ids: Vec<String>,
    host: Vec<bool>,
    adj: Vec<Vec<(usize, f64)>>,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedTree {
    /// Builds a tree from `(id, is_host)` nodes and weighted edges. The
    /// edges must connect exactly the given nodes into a single tree and
    /// every weight must be positive and finite.
    pub fn new(nodes: Vec<(String, bool)>, edges: Vec<(String, String, f64)>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidTree {
                reason: "tree has no nodes".into(),
            });
        }
        let mut nodes = nodes;
        nodes.sort_by(|x, y| natural_cmp(&x.0, &y.0));
        for pair in nodes.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidTree {
                    reason: format!("duplicate node id {}", pair[0].0),
                });
            }
        }
        let ids: Vec<String> = nodes.iter().map(|(id, _)| id.clone()).collect();
        let host: Vec<bool> = nodes.iter().map(|(_, h)| *h).collect();
        let n = ids.len();

        let lookup = |id: &str| ids.binary_search_by(|probe| natural_cmp(probe, id)).ok();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut index_edges = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (a, b, w) in &edges {
            let i = lookup(a).ok_or_else(|| Error::InvalidTree {
                reason: format!("edge endpoint {a} is not a node"),
            })?;
            let j = lookup(b).ok_or_else(|| Error::InvalidTree {
                reason: format!("edge endpoint {b} is not a node"),
            })?;
            if i == j {
                return Err(Error::InvalidTree {
                    reason: format!("self loop at {a}"),
                });
            }
            if !(w.is_finite() && *w > 0.0) {
                return Err(Error::InvalidTree {
                    reason: format!("edge {a}-{b} has non-positive weight {w}"),
                });
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::InvalidTree {
                    reason: format!("duplicate edge {a}-{b}"),
                });
            }
            adj[i].push((j, *w));
            adj[j].push((i, *w));
            index_edges.push((key.0, key.1, *w));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree {
                reason: format!("{} nodes need {} edges, found {}", n, n - 1, edges.len()),
            });
        }
        let mut reached = vec![false; n];
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            if reached[u] {
                continue;
            }
            reached[u] = true;
            stack.extend(adj[u].iter().map(|&(v, _)| v));
        }
        if reached.iter().any(|r| !*r) {
            return Err(Error::InvalidTree {
                reason: "tree is disconnected".into(),
            });
        }
        for list in &mut adj {
            list.sort_by_key(|&(v, _)| v);
        }
        index_edges.sort_unstable_by_key(|&(i, j, _)| (i, j));
        Ok(WeightedTree {
            ids,
            host,
            adj,
            edges: index_edges,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Node ids in natural order.
    pub fn node_ids(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index_of(id).is_ok()
    }

    fn index_of(&self, id: &str) -> Result<usize> {
        self.ids
            .binary_search_by(|probe| natural_cmp(probe, id))
            .map_err(|_| Error::UnknownNode { id: id.into() })
    }

    pub fn is_host(&self, id: &str) -> Result<bool> {
        Ok(self.host[self.index_of(id)?])
    }

    /// Ids of the host nodes, in natural order.
    pub fn hosts(&self) -> Vec<&str> {
        (0..self.len())
            .filter(|&u| self.host[u])
            .map(|u| self.ids[u].as_str())
            .collect()
    }

    pub fn degree(&self, id: &str) -> Result<usize> {
        Ok(self.adj[self.index_of(id)?].len())
    }

    /// Neighbors of a node in natural order.
    pub fn neighbors_of(&self, id: &str) -> Result<Vec<&str>> {
        Ok(self.adj[self.index_of(id)?]
            .iter()
            .map(|&(v, _)| self.ids[v].as_str())
            .collect())
    }

    /// Nodes of degree at most one, in natural order.
    pub fn leaves(&self) -> Vec<&str> {
        (0..self.len())
            .filter(|&u| self.adj[u].len() <= 1)
            .map(|u| self.ids[u].as_str())
            .collect()
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> Result<f64> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        self.adj[i]
            .iter()
            .find(|&&(v, _)| v == j)
            .map(|&(_, w)| w)
            .ok_or_else(|| Error::NotAdjacent {
                from: a.into(),
                to: b.into(),
            })
    }

    /// All edges as `(a, b, weight)` with `a` before `b` in natural order.
    pub fn edges(&self) -> Vec<(&str, &str, f64)> {
        self.edges
            .iter()
            .map(|&(i, j, w)| (self.ids[i].as_str(), self.ids[j].as_str(), w))
            .collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|&(_, _, w)| w).sum()
    }
}

/// A walk over the tree and its total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    pub nodes: Vec<String>,
    pub weight: f64,
}

/// The path between two leaves and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalChain {
    pub path: Vec<String>,
    pub weight: f64,
}

/// A minimum-weight open tour: the walk itself, the node numbering given
/// by first visits, and the total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenTour {
    pub walk: Vec<String>,
    pub numbering: Vec<String>,
    pub weight: f64,
}

fn euler(tree: &WeightedTree, u: usize, parent: usize, out: &mut Vec<usize>) {
    out.push(u);
    for &(v, _) in &tree.adj[u] {
        if v != parent {
            euler(tree, v, u, out);
            out.push(u);
        }
    }
}

fn step_weight(tree: &WeightedTree, i: usize, j: usize) -> f64 {
    tree.adj[i]
        .iter()
        .find(|&&(v, _)| v == j)
        .map(|&(_, w)| w)
        .expect("walk steps along edges")
}

fn indexed_weight(tree: &WeightedTree, order: &[usize]) -> f64 {
    order.windows(2).map(|s| step_weight(tree, s[0], s[1])).sum()
}

fn to_ids(tree: &WeightedTree, order: Vec<usize>) -> Vec<String> {
    order.into_iter().map(|u| tree.ids[u].clone()).collect()
}

fn dist_from(tree: &WeightedTree, src: usize) -> Vec<f64> {
    let mut out = vec![0.0; tree.len()];
    let mut stack = vec![(src, usize::MAX, 0.0)];
    while let Some((u, parent, acc)) = stack.pop() {
        out[u] = acc;
        for &(v, w) in &tree.adj[u] {
            if v != parent {
                stack.push((v, u, acc + w));
            }
        }
    }
    out
}

fn path_between(tree: &WeightedTree, from: usize, to: usize) -> Vec<usize> {
    let mut parent = vec![usize::MAX; tree.len()];
    let mut stack = vec![from];
    let mut seen = vec![false; tree.len()];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in &tree.adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut path = vec![to];
    let mut u = to;
    while u != from {
        u = parent[u];
        path.push(u);
    }
    path.reverse();
    path
}

/// Walks the whole tree and returns to the start, crossing every edge
/// exactly twice. Starts at the first node in natural order; a single
/// node gives the trivial walk of weight zero.
pub fn closed_tour(tree: &WeightedTree) -> Walk {
    let mut order = Vec::new();
    euler(tree, 0, usize::MAX, &mut order);
    let weight = indexed_weight(tree, &order);
    Walk {
        nodes: to_ids(tree, order),
        weight,
    }
}

/// Distance from every node to every leaf.
#[derive(Debug, Clone)]
pub struct LeafDistances {
    ids: Vec<String>,
    leaves: Vec<usize>,
    dist: Vec<Vec<f64>>,
}

impl LeafDistances {
    /// Leaf ids in natural order.
    pub fn leaves(&self) -> Vec<&str> {
        self.leaves.iter().map(|&u| self.ids[u].as_str()).collect()
    }

    fn node_index(&self, id: &str) -> Result<usize> {
        self.ids
            .binary_search_by(|probe| natural_cmp(probe, id))
            .map_err(|_| Error::UnknownNode { id: id.into() })
    }

    /// Distance from `node` to `leaf`.
    pub fn distance(&self, node: &str, leaf: &str) -> Result<f64> {
        let u = self.node_index(node)?;
        let v = self.node_index(leaf)?;
        let pos = self
            .leaves
            .iter()
            .position(|&l| l == v)
            .ok_or_else(|| Error::NotALeaf { id: leaf.into() })?;
        Ok(self.dist[u][pos])
    }

    /// Largest distance from `node` to any leaf.
    pub fn max_distance(&self, node: &str) -> Result<f64> {
        let u = self.node_index(node)?;
        Ok(self.dist[u].iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Computes the distance from every node to every leaf by one traversal
/// per leaf.
pub fn leaf_distances(tree: &WeightedTree) -> LeafDistances {
    let leaves: Vec<usize> = (0..tree.len()).filter(|&u| tree.adj[u].len() <= 1).collect();
    let mut dist = vec![vec![0.0; leaves.len()]; tree.len()];
    for (pos, &leaf) in leaves.iter().enumerate() {
        for (node, d) in dist_from(tree, leaf).into_iter().enumerate() {
            dist[node][pos] = d;
        }
    }
    LeafDistances {
        ids: tree.ids.clone(),
        leaves,
        dist,
    }
}

/// Finds a heaviest path between two leaves. Ties go to the earliest
/// leaves in natural order: the start is the first leaf attaining the
/// largest leaf-to-leaf distance and the end is the first leaf that far
/// away from it.
pub fn heaviest_terminal_chain(tree: &WeightedTree) -> Result<TerminalChain> {
    let table = leaf_distances(tree);
    if table.leaves.len() < 2 {
        return Err(Error::InvalidTree {
            reason: "terminal chain needs at least two leaves".into(),
        });
    }
    let mut start = table.leaves[0];
    let mut best = f64::NEG_INFINITY;
    for &leaf in &table.leaves {
        let reach = table.dist[leaf].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if reach > best {
            best = reach;
            start = leaf;
        }
    }
    let end = table
        .dist[start]
        .iter()
        .position(|&d| d == best)
        .map(|pos| table.leaves[pos])
        .expect("largest distance is attained at a leaf");
    let path = path_between(tree, start, end);
    Ok(TerminalChain {
        path: to_ids(tree, path),
        weight: best,
    })
}

/// Builds a minimum-weight walk visiting every node. The walk runs along
/// the heaviest terminal chain and covers each subtree hanging off it by
/// a detour when first passing its root, taking detours in natural id
/// order. Chain edges are crossed once and all other edges twice, which
/// is the proven optimum. Requires at least two nodes.
pub fn min_weight_open_tour(tree: &WeightedTree) -> Result<OpenTour> {
    if tree.len() < 2 {
        return Err(Error::InvalidTree {
            reason: "open tour needs at least two nodes".into(),
        });
    }
    let order = if tree.len() == 2 {
        vec![0, 1]
    } else {
        let chain = heaviest_terminal_chain(tree)?;
        let chain_idx: Vec<usize> = chain
            .path
            .iter()
            .map(|id| tree.index_of(id).expect("chain nodes are tree nodes"))
            .collect();
        let mut walk = Vec::new();
        for (k, &z) in chain_idx.iter().enumerate() {
            walk.push(z);
            if k == 0 || k + 1 == chain_idx.len() {
                continue;
            }
            let (prev, next) = (chain_idx[k - 1], chain_idx[k + 1]);
            for &(u, _) in &tree.adj[z] {
                if u != prev && u != next {
                    euler(tree, u, z, &mut walk);
                    walk.push(z);
                }
            }
        }
        walk
    };
    let weight = indexed_weight(tree, &order);
    let mut seen = vec![false; tree.len()];
    let mut numbering = Vec::with_capacity(tree.len());
    for &u in &order {
        if !seen[u] {
            seen[u] = true;
            numbering.push(tree.ids[u].clone());
        }
    }
    Ok(OpenTour {
        walk: to_ids(tree, order),
        numbering,
        weight,
    })
}

/// Total weight of an arbitrary walk given as node ids. Every step must
/// cross an edge of the tree.
pub fn tour_weight(tree: &WeightedTree, walk: &[String]) -> Result<f64> {
    if walk.is_empty() {
        return Err(Error::InvalidPath {
            reason: "walk has no nodes".into(),
        });
    }
    let mut total = 0.0;
    let mut prev: Option<usize> = None;
    for id in walk {
        let u = tree.index_of(id)?;
        if let Some(p) = prev {
            total += tree.adj[p]
                .iter()
                .find(|&&(v, _)| v == u)
                .map(|&(_, w)| w)
                .ok_or_else(|| Error::NotAdjacent {
                    from: tree.ids[p].clone(),
                    to: id.clone(),
                })?;
        }
        prev = Some(u);
    }
    Ok(total)
}

/// Exhaustive minimum over all visit orders, costing each consecutive
/// pair by its path weight in the tree. Returns a cheapest order and its
/// cost, which equals the minimum open tour weight. Refuses trees larger
/// than `limit` because the search is factorial.
pub fn brute_force_min_numbering_with_limit(
    tree: &WeightedTree,
    limit: usize,
) -> Result<(Vec<String>, f64)> {
    let n = tree.len();
    if n > limit {
        return Err(Error::BruteForceTooLarge { nodes: n, limit });
    }
    if n == 1 {
        return Ok((vec![tree.ids[0].clone()], 0.0));
    }
    let dist: Vec<Vec<f64>> = (0..n).map(|u| dist_from(tree, u)).collect();
    let cost_of = |p: &[usize]| -> f64 { p.windows(2).map(|s| dist[s[0]][s[1]]).sum() };

    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = cost_of(&perm);
    let mut best_perm = perm.clone();
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let cost = cost_of(&perm);
            if cost < best {
                best = cost;
                best_perm.copy_from_slice(&perm);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok((to_ids(tree, best_perm), best))
}

/// [`brute_force_min_numbering_with_limit`] with a nine node cap.
pub fn brute_force_min_numbering(tree: &WeightedTree) -> Result<(Vec<String>, f64)> {
    brute_force_min_numbering_with_limit(tree, 9)
}

/// Checks that every node after the first is adjacent to some earlier
/// node, so the order can drive a sweep along the tree. The order must
/// name every node exactly once.
pub fn check_numbering_consistent(tree: &WeightedTree, numbering: &[String]) -> Result<bool> {
    let n = tree.len();
    if numbering.len() != n {
        return Err(Error::NotAPermutation);
    }
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for id in numbering {
        let u = tree.index_of(id).map_err(|_| Error::NotAPermutation)?;
        if used[u] {
            return Err(Error::NotAPermutation);
        }
        used[u] = true;
        order.push(u);
    }
    let mut placed = vec![false; n];
    placed[order[0]] = true;
    for &u in &order[1..] {
        if !tree.adj[u].iter().any(|&(v, _)| placed[v]) {
            return Ok(false);
        }
        placed[u] = true;
    }
    Ok(true)
}

/// Shrinks a host tree to the weighted tree a tour should run on. The
/// cliques in `hosts` become tour nodes. Other cliques are dropped when
/// they hang off the side, or folded into a single edge carrying the
/// summed weight when they sit between two neighbors. A non-host clique
/// joining three or more branches has to stay, flagged as a non-host.
///
/// Edge weights follow the cost model: one per edge, or the separator
/// cell count plus the mean of the two endpoint cell counts.
pub fn reduce_to_host_tree(
    host_tree: &HostTree,
    hosts: &BTreeSet<CliqueId>,
    model: CostModel,
) -> Result<WeightedTree> {
    if hosts.is_empty() {
        return Err(Error::InvalidTree {
            reason: "no host cliques to tour".into(),
        });
    }
    for id in hosts {
        if !host_tree.contains(id) {
            return Err(Error::UnknownClique { id: id.clone() });
        }
    }

    let mut adj: BTreeMap<String, BTreeMap<String, f64>> = host_tree
        .clique_ids()
        .map(|id| (id.to_string(), BTreeMap::new()))
        .collect();
    for key in host_tree.edges() {
        let (a, b) = key.ends();
        let w = match model {
            CostModel::Unit => 1.0,
            CostModel::StateSpace => {
                let sa = host_tree.scope_of(a)?;
                let sb = host_tree.scope_of(b)?;
                let sep = sa.intersection(sb);
                sep.cells() as f64 + (sa.cells() as f64 + sb.cells() as f64) / 2.0
            }
        };
        adj.get_mut(a).unwrap().insert(b.to_string(), w);
        adj.get_mut(b).unwrap().insert(a.to_string(), w);
    }

    loop {
        let target = adj
            .iter()
            .find(|(id, nbrs)| !hosts.contains(id.as_str()) && nbrs.len() <= 2)
            .map(|(id, _)| id.clone());
        let Some(id) = target else { break };
        let nbrs: Vec<(String, f64)> = adj[&id].iter().map(|(k, v)| (k.clone(), *v)).collect();
        adj.remove(&id);
        for (nb, _) in &nbrs {
            adj.get_mut(nb).unwrap().remove(&id);
        }
        if let [(p, wp), (q, wq)] = &nbrs[..] {
            let w = wp + wq;
            adj.get_mut(p).unwrap().insert(q.clone(), w);
            adj.get_mut(q).unwrap().insert(p.clone(), w);
        }
    }

    let nodes: Vec<(String, bool)> = adj
        .keys()
        .map(|id| (id.clone(), hosts.contains(id.as_str())))
        .collect();
    let mut edges = Vec::new();
    for (a, nbrs) in &adj {
        for (b, w) in nbrs {
            if a < b {
                edges.push((a.clone(), b.clone(), *w));
            }
        }
    }
    WeightedTree::new(nodes, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::junction::JunctionTree;
    use crate::linkage::{build_host_tree, DSepset};
    use crate::potential::{PotentialTable, Scope, Variable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tree(nodes: &[&str], edges: &[(&str, &str, f64)]) -> WeightedTree {
        WeightedTree::new(
            nodes.iter().map(|id| (id.to_string(), true)).collect(),
            edges
                .iter()
                .map(|&(a, b, w)| (a.to_string(), b.to_string(), w))
                .collect(),
        )
        .unwrap()
    }

    fn ids(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn unit_star() -> WeightedTree {
        tree(
            &["s", "l1", "l2", "l3"],
            &[("s", "l1", 1.0), ("s", "l2", 1.0), ("s", "l3", 1.0)],
        )
    }

    fn fig5() -> WeightedTree {
        tree(
            &["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"],
            &[
                ("C1", "C2", 1.0),
                ("C2", "C5", 1.0),
                ("C2", "C6", 1.0),
                ("C6", "C7", 1.0),
                ("C7", "C8", 1.0),
                ("C1", "C3", 1.0),
                ("C1", "C4", 1.0),
                ("C1", "C9", 1.0),
                ("C9", "C10", 1.0),
            ],
        )
    }

    fn fig6() -> WeightedTree {
        tree(
            &["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"],
            &[
                ("C1", "C2", 8.0),
                ("C1", "C3", 4.0),
                ("C1", "C4", 6.0),
                ("C1", "C9", 2.0),
                ("C2", "C5", 4.0),
                ("C2", "C6", 4.0),
                ("C6", "C7", 2.0),
                ("C7", "C8", 1.0),
                ("C9", "C10", 3.0),
            ],
        )
    }

    fn fig7() -> WeightedTree {
        tree(
            &["v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8", "v9", "v10"],
            &[
                ("v2", "v8", 1.0),
                ("v8", "v7", 2.0),
                ("v7", "v6", 4.0),
                ("v6", "v9", 8.0),
                ("v9", "v4", 6.0),
                ("v6", "v1", 4.0),
                ("v9", "v5", 4.0),
                ("v9", "v10", 2.0),
                ("v10", "v3", 3.0),
            ],
        )
    }

    fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> WeightedTree {
        let names: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        let mut edges = Vec::new();
        if n == 2 {
            edges.push((names[0].clone(), names[1].clone(), rng.gen_range(1..=9u32) as f64));
        } else if n > 2 {
            let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
            let mut deg = vec![1usize; n];
            for &s in &seq {
                deg[s] += 1;
            }
            let mut leaves: BTreeSet<usize> = (0..n).filter(|&u| deg[u] == 1).collect();
            for &s in &seq {
                let leaf = *leaves.iter().next().unwrap();
                leaves.remove(&leaf);
                edges.push((names[leaf].clone(), names[s].clone(), rng.gen_range(1..=9u32) as f64));
                deg[s] -= 1;
                if deg[s] == 1 {
                    leaves.insert(s);
                }
            }
            let rest: Vec<usize> = leaves.into_iter().collect();
            edges.push((names[rest[0]].clone(), names[rest[1]].clone(), rng.gen_range(1..=9u32) as f64));
        }
        WeightedTree::new(names.into_iter().map(|id| (id, true)).collect(), edges).unwrap()
    }

    #[test]
    fn natural_order_reads_numeric_suffixes() {
        assert_eq!(natural_cmp("v2", "v10"), Ordering::Less);
        assert_eq!(natural_cmp("C9", "C10"), Ordering::Less);
        assert_eq!(natural_cmp("x10", "x2"), Ordering::Greater);
        assert_eq!(natural_cmp("alpha", "beta"), Ordering::Less);
        assert_eq!(natural_cmp("a7", "a7"), Ordering::Equal);
        assert_eq!(natural_cmp("a", "a1"), Ordering::Less);
    }

    #[test]
    fn construction_rejects_malformed_trees() {
        let reject = |nodes: &[&str], edges: &[(&str, &str, f64)]| {
            let got = WeightedTree::new(
                nodes.iter().map(|id| (id.to_string(), true)).collect(),
                edges
                    .iter()
                    .map(|&(a, b, w)| (a.to_string(), b.to_string(), w))
                    .collect(),
            );
            assert!(matches!(got, Err(Error::InvalidTree { .. })), "{nodes:?} {edges:?}");
        };
        reject(&[], &[]);
        reject(&["a", "a"], &[("a", "a", 1.0)]);
        reject(&["a", "b"], &[("a", "z", 1.0)]);
        reject(&["a", "b"], &[("a", "a", 1.0)]);
        reject(&["a", "b"], &[("a", "b", 1.0), ("b", "a", 2.0)]);
        reject(&["a", "b"], &[("a", "b", 0.0)]);
        reject(&["a", "b"], &[("a", "b", -3.0)]);
        reject(&["a", "b"], &[("a", "b", f64::NAN)]);
        reject(&["a", "b", "c"], &[("a", "b", 1.0)]);
        reject(&["a", "b", "c", "d"], &[("a", "b", 1.0), ("b", "c", 1.0), ("c", "a", 1.0)]);
    }

    #[test]
    fn accessors_report_structure() {
        let t = fig7();
        assert_eq!(t.len(), 10);
        assert_eq!(t.degree("v9").unwrap(), 4);
        assert_eq!(t.leaves(), vec!["v1", "v2", "v3", "v4", "v5"]);
        assert_eq!(t.neighbors_of("v6").unwrap(), vec!["v1", "v7", "v9"]);
        assert_eq!(t.edge_weight("v6", "v9").unwrap(), 8.0);
        assert_eq!(t.edge_weight("v9", "v6").unwrap(), 8.0);
        assert_eq!(t.total_weight(), 34.0);
        assert!(t.contains("v10"));
        assert!(!t.contains("v11"));
        assert!(matches!(t.degree("w"), Err(Error::UnknownNode { .. })));
        assert!(matches!(
            t.edge_weight("v1", "v2"),
            Err(Error::NotAdjacent { .. })
        ));
        let first: Vec<&str> = t.node_ids().take(3).collect();
        assert_eq!(first, vec!["v1", "v2", "v3"]);
    }

    #[test]
    fn closed_tour_doubles_every_edge() {
        let walk = closed_tour(&fig5());
        assert_eq!(walk.weight, 18.0);
        assert_eq!(walk.nodes.len(), 19);
        assert_eq!(walk.nodes.first().unwrap(), "C1");
        assert_eq!(walk.nodes.last().unwrap(), "C1");
        assert_eq!(tour_weight(&fig5(), &walk.nodes).unwrap(), 18.0);

        assert_eq!(closed_tour(&fig6()).weight, 68.0);
    }

    #[test]
    fn closed_tour_of_single_node_is_trivial() {
        let t = tree(&["only"], &[]);
        let walk = closed_tour(&t);
        assert_eq!(walk.nodes, ids(&["only"]));
        assert_eq!(walk.weight, 0.0);
    }

    #[test]
    fn leaf_distance_table_matches_hand_computation() {
        let t = fig7();
        let table = leaf_distances(&t);
        assert_eq!(table.leaves(), vec!["v1", "v2", "v3", "v4", "v5"]);
        assert_eq!(table.distance("v2", "v4").unwrap(), 21.0);
        assert_eq!(table.distance("v4", "v2").unwrap(), 21.0);
        assert_eq!(table.distance("v4", "v4").unwrap(), 0.0);
        assert_eq!(table.distance("v9", "v5").unwrap(), 4.0);
        let reach: Vec<f64> = ["v1", "v2", "v3", "v4", "v5"]
            .iter()
            .map(|leaf| table.max_distance(leaf).unwrap())
            .collect();
        assert_eq!(reach, vec![18.0, 21.0, 20.0, 21.0, 19.0]);
        assert_eq!(table.max_distance("v9").unwrap(), 15.0);
        assert!(matches!(
            table.distance("v2", "v9"),
            Err(Error::NotALeaf { .. })
        ));
        assert!(matches!(
            table.distance("v2", "zz"),
            Err(Error::UnknownNode { .. })
        ));
    }

    #[test]
    fn heaviest_chain_picks_earliest_leaves_on_ties() {
        let chain = heaviest_terminal_chain(&fig7()).unwrap();
        assert_eq!(chain.path, ids(&["v2", "v8", "v7", "v6", "v9", "v4"]));
        assert_eq!(chain.weight, 21.0);

        let chain = heaviest_terminal_chain(&fig6()).unwrap();
        assert_eq!(chain.path, ids(&["C4", "C1", "C2", "C6", "C7", "C8"]));
        assert_eq!(chain.weight, 21.0);

        let single = tree(&["x"], &[]);
        assert!(matches!(
            heaviest_terminal_chain(&single),
            Err(Error::InvalidTree { .. })
        ));
    }

    #[test]
    fn open_tour_reproduces_expected_walk() {
        let t = fig7();
        let tour = min_weight_open_tour(&t).unwrap();
        assert_eq!(
            tour.walk,
            ids(&["v2", "v8", "v7", "v6", "v1", "v6", "v9", "v5", "v9", "v10", "v3", "v10", "v9", "v4"])
        );
        assert_eq!(
            tour.numbering,
            ids(&["v2", "v8", "v7", "v6", "v1", "v9", "v5", "v10", "v3", "v4"])
        );
        assert_eq!(tour.weight, 47.0);
        assert_eq!(tour.weight, closed_tour(&t).weight - 21.0);
        assert!(check_numbering_consistent(&t, &tour.numbering).unwrap());
        assert_eq!(tour_weight(&t, &tour.walk).unwrap(), 47.0);
    }

    #[test]
    fn open_tour_on_renamed_tree_keeps_weight() {
        let t = fig6();
        let tour = min_weight_open_tour(&t).unwrap();
        assert_eq!(tour.weight, 47.0);
        assert_eq!(tour.walk.first().unwrap(), "C4");
        assert_eq!(tour.walk.last().unwrap(), "C8");
        assert!(check_numbering_consistent(&t, &tour.numbering).unwrap());
    }

    #[test]
    fn tiny_tours_are_trivial() {
        let two = tree(&["a", "b"], &[("a", "b", 7.0)]);
        let tour = min_weight_open_tour(&two).unwrap();
        assert_eq!(tour.walk, ids(&["a", "b"]));
        assert_eq!(tour.numbering, ids(&["a", "b"]));
        assert_eq!(tour.weight, 7.0);

        let path = tree(&["a", "b", "c"], &[("a", "b", 5.0), ("b", "c", 7.0)]);
        let tour = min_weight_open_tour(&path).unwrap();
        assert_eq!(tour.walk, ids(&["a", "b", "c"]));
        assert_eq!(tour.weight, 12.0);

        let single = tree(&["a"], &[]);
        assert!(matches!(
            min_weight_open_tour(&single),
            Err(Error::InvalidTree { .. })
        ));
    }

    #[test]
    fn star_tour_matches_brute_force() {
        let star = unit_star();
        let tour = min_weight_open_tour(&star).unwrap();
        let (_, brute) = brute_force_min_numbering(&star).unwrap();
        assert_eq!(tour.weight, 4.0);
        assert_eq!(brute, 4.0);
        assert!(check_numbering_consistent(&star, &tour.numbering).unwrap());
    }

    #[test]
    fn tour_weight_validates_each_step() {
        let t = fig7();
        let mut walk = min_weight_open_tour(&t).unwrap().walk;
        walk.reverse();
        assert_eq!(tour_weight(&t, &walk).unwrap(), 47.0);

        assert_eq!(tour_weight(&t, &ids(&["v1"])).unwrap(), 0.0);
        assert!(matches!(
            tour_weight(&t, &ids(&["v1", "v2"])),
            Err(Error::NotAdjacent { .. })
        ));
        assert!(matches!(
            tour_weight(&t, &ids(&["v1", "zz"])),
            Err(Error::UnknownNode { .. })
        ));
        assert!(matches!(tour_weight(&t, &[]), Err(Error::InvalidPath { .. })));
    }

    #[test]
    fn brute_force_respects_its_limit() {
        let t = fig7();
        assert!(matches!(
            brute_force_min_numbering(&t),
            Err(Error::BruteForceTooLarge { nodes: 10, limit: 9 })
        ));
        let (order, weight) = brute_force_min_numbering_with_limit(&t, 10).unwrap();
        assert_eq!(weight, 47.0);
        assert_eq!(order.len(), 10);

        let two = tree(&["a", "b"], &[("a", "b", 7.0)]);
        let (order, weight) = brute_force_min_numbering(&two).unwrap();
        assert_eq!(weight, 7.0);
        assert_eq!(order.len(), 2);
    }

    #[test]
    fn numbering_consistency_requires_earlier_neighbors() {
        let t = tree(
            &["C1", "C2", "C3", "C4", "C5"],
            &[
                ("C1", "C2", 1.0),
                ("C1", "C3", 1.0),
                ("C1", "C4", 1.0),
                ("C2", "C5", 1.0),
            ],
        );
        assert!(check_numbering_consistent(&t, &ids(&["C5", "C2", "C1", "C3", "C4"])).unwrap());
        assert!(!check_numbering_consistent(&t, &ids(&["C5", "C3", "C1", "C2", "C4"])).unwrap());
        assert!(matches!(
            check_numbering_consistent(&t, &ids(&["C5", "C5", "C1", "C3", "C4"])),
            Err(Error::NotAPermutation)
        ));
        assert!(matches!(
            check_numbering_consistent(&t, &ids(&["C5", "C2", "C1", "C3", "C9"])),
            Err(Error::NotAPermutation)
        ));
        assert!(matches!(
            check_numbering_consistent(&t, &ids(&["C5", "C2"])),
            Err(Error::NotAPermutation)
        ));
    }

    fn uniform_clique(vars: &[&str]) -> PotentialTable {
        let scope = Scope::new(vars.iter().map(|id| Variable::binary(*id))).unwrap();
        PotentialTable::ones(scope)
    }

    fn host_tree_over(
        cliques: &[(&str, &[&str])],
        edges: &[(&str, &str)],
        interface: &[&str],
    ) -> crate::linkage::HostTree {
        let jt = JunctionTree::new(
            cliques
                .iter()
                .map(|(id, vars)| (id.to_string(), uniform_clique(vars)))
                .collect(),
            edges
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .unwrap();
        let scope = Scope::new(interface.iter().map(|id| Variable::binary(*id))).unwrap();
        let interface = DSepset::between(scope, &jt, &jt).unwrap();
        build_host_tree(&jt, &interface, "a").unwrap()
    }

    fn host_set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reduction_keeps_full_host_tree_under_unit_costs() {
        let host = host_tree_over(
            &[("A", &["a", "b"]), ("B", &["b", "c"]), ("C", &["c", "d"])],
            &[("A", "B"), ("B", "C")],
            &["a", "b", "c", "d"],
        );
        let t = reduce_to_host_tree(&host, &host_set(&["A", "B", "C"]), CostModel::Unit).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.edge_weight("A", "B").unwrap(), 1.0);
        assert_eq!(t.edge_weight("B", "C").unwrap(), 1.0);
        assert_eq!(t.hosts(), vec!["A", "B", "C"]);
    }

    #[test]
    fn reduction_folds_silent_middle_clique() {
        let host = host_tree_over(
            &[("A", &["a", "b"]), ("B", &["b", "c"]), ("C", &["c", "d"])],
            &[("A", "B"), ("B", "C")],
            &["a", "b", "c", "d"],
        );
        let t = reduce_to_host_tree(&host, &host_set(&["A", "C"]), CostModel::Unit).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.edge_weight("A", "C").unwrap(), 2.0);
    }

    #[test]
    fn reduction_charges_state_space_costs() {
        let host = host_tree_over(
            &[("A", &["x", "y"]), ("B", &["y", "z"])],
            &[("A", "B")],
            &["x", "y", "z"],
        );
        let t = reduce_to_host_tree(&host, &host_set(&["A", "B"]), CostModel::StateSpace).unwrap();
        assert_eq!(t.edge_weight("A", "B").unwrap(), 6.0);
    }

    #[test]
    fn reduction_keeps_junction_cliques_without_linkages() {
        let host = host_tree_over(
            &[
                ("L1", &["s", "a"]),
                ("L2", &["s", "b"]),
                ("L3", &["s", "c"]),
                ("S", &["s"]),
            ],
            &[("S", "L1"), ("S", "L2"), ("S", "L3")],
            &["s", "a", "b", "c"],
        );
        let t = reduce_to_host_tree(&host, &host_set(&["L1", "L2", "L3"]), CostModel::Unit).unwrap();
        assert_eq!(t.len(), 4);
        assert!(!t.is_host("S").unwrap());
        assert_eq!(t.degree("S").unwrap(), 3);
        assert_eq!(t.hosts(), vec!["L1", "L2", "L3"]);
    }

    #[test]
    fn reduction_drops_hanging_non_hosts() {
        let host = host_tree_over(
            &[
                ("L1", &["s", "a"]),
                ("L2", &["s", "b"]),
                ("E", &["s", "e"]),
                ("S", &["s"]),
            ],
            &[("S", "L1"), ("S", "L2"), ("S", "E")],
            &["s", "a", "b", "e"],
        );
        let t = reduce_to_host_tree(&host, &host_set(&["L1", "L2"]), CostModel::Unit).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.edge_weight("L1", "L2").unwrap(), 2.0);
    }

    #[test]
    fn reduction_rejects_bad_host_sets() {
        let host = host_tree_over(
            &[("A", &["a", "b"]), ("B", &["b", "c"])],
            &[("A", "B")],
            &["a", "b", "c"],
        );
        assert!(matches!(
            reduce_to_host_tree(&host, &BTreeSet::new(), CostModel::Unit),
            Err(Error::InvalidTree { .. })
        ));
        assert!(matches!(
            reduce_to_host_tree(&host, &host_set(&["A", "Z"]), CostModel::Unit),
            Err(Error::UnknownClique { .. })
        ));
    }

    #[test]
    fn random_closed_tours_cost_twice_the_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(701);
        for _ in 0..60 {
            let n = rng.gen_range(1..=64);
            let t = random_tree(&mut rng, n);
            let walk = closed_tour(&t);
            assert_eq!(walk.weight, 2.0 * t.total_weight());
            assert_eq!(walk.nodes.len(), 2 * n - 1);
            if n > 1 {
                assert_eq!(walk.nodes.first(), walk.nodes.last());
            }
            assert_eq!(tour_weight(&t, &walk.nodes).unwrap(), walk.weight);
        }
    }

    #[test]
    fn random_open_tours_satisfy_the_chain_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(702);
        for _ in 0..60 {
            let n = rng.gen_range(2..=32);
            let t = random_tree(&mut rng, n);
            let tour = min_weight_open_tour(&t).unwrap();
            let chain = heaviest_terminal_chain(&t).unwrap();
            assert_eq!(tour.weight, closed_tour(&t).weight - chain.weight);
            assert_eq!(tour.walk.first(), chain.path.first());
            assert_eq!(tour.walk.last(), chain.path.last());
            assert_eq!(tour.numbering.len(), n);
            assert!(check_numbering_consistent(&t, &tour.numbering).unwrap());

            let mut crossings: BTreeMap<(String, String), usize> = BTreeMap::new();
            for pair in tour.walk.windows(2) {
                let key = if pair[0] < pair[1] {
                    (pair[0].clone(), pair[1].clone())
                } else {
                    (pair[1].clone(), pair[0].clone())
                };
                *crossings.entry(key).or_default() += 1;
            }
            let mut chain_edges = BTreeSet::new();
            for pair in chain.path.windows(2) {
                let key = if pair[0] < pair[1] {
                    (pair[0].clone(), pair[1].clone())
                } else {
                    (pair[1].clone(), pair[0].clone())
                };
                chain_edges.insert(key);
            }
            for (a, b, _) in t.edges() {
                let key = (a.to_string().min(b.to_string()), a.to_string().max(b.to_string()));
                let expected = if chain_edges.contains(&key) { 1 } else { 2 };
                assert_eq!(crossings.get(&key), Some(&expected), "edge {a}-{b}");
            }
        }
    }

    #[test]
    fn random_small_tours_match_the_brute_force_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(703);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let t = random_tree(&mut rng, n);
            let tour = min_weight_open_tour(&t).unwrap();
            let (_, brute) = brute_force_min_numbering(&t).unwrap();
            assert_eq!(tour.weight, brute);
        }
    }
}
