//! Host trees, linkage trees, and linkage host assignment.
//!
//! Two junction trees that share a set of interface variables exchange
//! belief through that set. The host tree is the smallest subtree of one
//! junction tree that covers the interface. The linkage tree reduces the
//! host tree further to cliques over interface variables only; its cliques
//! are the linkages, the units of belief actually shipped between trees.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::junction::{CliqueId, EdgeKey, JunctionTree};
use crate::potential::Scope;

/// The interface shared by a pair of junction trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSepset {
    vars: Scope,
}

impl DSepset {
    /// Wraps an explicit variable set, checking it is non-empty and that
    /// every variable occurs in both trees with a consistent cardinality.
    pub fn between(vars: Scope, a: &JunctionTree, b: &JunctionTree) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::EmptyInterface);
        }
        for (tree, name) in [(a, "a"), (b, "b")] {
            let universe = tree.universe();
            for v in vars.vars() {
                match universe.var(v.id()) {
                    None => {
                        return Err(Error::MissingInterfaceVariable {
                            id: v.id().to_string(),
                            tree: name.to_string(),
                        })
                    }
                    Some(u) if u.cardinality() != v.cardinality() => {
                        return Err(Error::CardinalityConflict {
                            id: v.id().to_string(),
                            left: v.cardinality(),
                            right: u.cardinality(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(DSepset { vars })
    }

    /// Derives the interface as the full set of variables the two trees
    /// share.
    pub fn shared(a: &JunctionTree, b: &JunctionTree) -> Result<Self> {
        let (ua, ub) = (a.universe(), b.universe());
        for v in ua.vars() {
            if let Some(w) = ub.var(v.id()) {
                if w.cardinality() != v.cardinality() {
                    return Err(Error::CardinalityConflict {
                        id: v.id().to_string(),
                        left: v.cardinality(),
                        right: w.cardinality(),
                    });
                }
            }
        }
        let vars = ua.intersection(&ub);
        DSepset::between(vars, a, b)
    }

    pub fn vars(&self) -> &Scope {
        &self.vars
    }

    /// Cells needed to ship the whole interface belief in one table.
    pub fn direct_payload_entries(&self) -> usize {
        self.vars.cells()
    }
}

/// The minimal subtree of a junction tree that covers the interface.
/// Cliques keep their full original scopes.
#[derive(Debug, Clone)]
pub struct HostTree {
    cliques: BTreeMap<CliqueId, Scope>,
    edges: Vec<EdgeKey>,
    neighbors: BTreeMap<CliqueId, Vec<CliqueId>>,
}

impl HostTree {
    pub fn clique_ids(&self) -> impl Iterator<Item = &str> {
        self.cliques.keys().map(|s| s.as_str())
    }

    pub fn clique_set(&self) -> BTreeSet<CliqueId> {
        self.cliques.keys().cloned().collect()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.cliques.contains_key(id)
    }

    pub fn scope_of(&self, id: &str) -> Result<&Scope> {
        self.cliques
            .get(id)
            .ok_or_else(|| Error::UnknownClique { id: id.into() })
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn neighbors_of(&self, id: &str) -> Result<&[CliqueId]> {
        self.neighbors
            .get(id)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownClique { id: id.into() })
    }
}

/// Reduces a junction tree to its host tree by recursively removing every
/// leaf clique whose interface part is empty or already present in another
/// remaining clique. Leaves are scanned in ascending id order and the scan
/// restarts after each removal, so the result is deterministic. `label`
/// names the tree in error messages.
pub fn build_host_tree(
    jt: &JunctionTree,
    interface: &DSepset,
    label: &str,
) -> Result<HostTree> {
    let universe = jt.universe();
    for v in interface.vars().vars() {
        if !universe.contains(v.id()) {
            return Err(Error::MissingInterfaceVariable {
                id: v.id().to_string(),
                tree: label.to_string(),
            });
        }
    }

    let mut alive: BTreeSet<CliqueId> = jt.clique_ids().map(String::from).collect();
    let mut adjacency: BTreeMap<CliqueId, BTreeSet<CliqueId>> = alive
        .iter()
        .map(|id| {
            let n = jt.neighbors_of(id).unwrap().iter().cloned().collect();
            (id.clone(), n)
        })
        .collect();

    'scan: loop {
        for c in alive.iter().cloned().collect::<Vec<_>>() {
            if adjacency[&c].len() > 1 {
                continue;
            }
            let part = jt.scope_of(&c)?.intersection(interface.vars());
            let removable = part.is_empty()
                || alive.iter().any(|d| {
                    *d != c && part.is_subset_of(jt.scope_of(d).unwrap())
                });
            if removable && alive.len() > 1 {
                alive.remove(&c);
                let neighbors = adjacency.remove(&c).unwrap();
                for n in neighbors {
                    adjacency.get_mut(&n).unwrap().remove(&c);
                }
                continue 'scan;
            }
        }
        break;
    }

    let cliques: BTreeMap<CliqueId, Scope> = alive
        .iter()
        .map(|id| (id.clone(), jt.scope_of(id).unwrap().clone()))
        .collect();
    let edges: Vec<EdgeKey> = jt
        .edges()
        .filter(|k| {
            let (a, b) = k.ends();
            alive.contains(a) && alive.contains(b)
        })
        .cloned()
        .collect();
    let neighbors = adjacency
        .into_iter()
        .map(|(id, set)| (id, set.into_iter().collect()))
        .collect();
    Ok(HostTree {
        cliques,
        edges,
        neighbors,
    })
}

/// One propagation channel: a set of interface variables, the clique that
/// serves it in the home tree, and (once assigned) in the peer tree.
#[derive(Debug, Clone)]
pub struct Linkage {
    scope: Scope,
    host_a: CliqueId,
    host_b: Option<CliqueId>,
}

impl Linkage {
    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn host_a(&self) -> &str {
        &self.host_a
    }

    pub fn host_b(&self) -> Option<&str> {
        self.host_b.as_deref()
    }

    pub fn cells(&self) -> usize {
        self.scope.cells()
    }
}

/// The linkage tree: linkages stored in the default consistent order, with
/// tree edges over their positions.
#[derive(Debug, Clone)]
pub struct LinkageTree {
    linkages: Vec<Linkage>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl LinkageTree {
    pub fn count(&self) -> usize {
        self.linkages.len()
    }

    pub fn linkages(&self) -> &[Linkage] {
        &self.linkages
    }

    pub fn linkage(&self, index: usize) -> Result<&Linkage> {
        self.linkages.get(index).ok_or(Error::BadLinkageIndex {
            index,
            count: self.linkages.len(),
        })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors_of(&self, index: usize) -> Result<&[usize]> {
        self.neighbors
            .get(index)
            .map(|v| v.as_slice())
            .ok_or(Error::BadLinkageIndex {
                index,
                count: self.linkages.len(),
            })
    }

    /// True iff the union of linkage scopes equals the interface exactly.
    /// False means belief cannot be transferred correctly through these
    /// channels.
    pub fn covers_exactly(&self, interface: &DSepset) -> bool {
        let mut covered = Scope::empty();
        for linkage in &self.linkages {
            match covered.union(&linkage.scope) {
                Ok(u) => covered = u,
                Err(_) => return false,
            }
        }
        covered == *interface.vars()
    }

    /// Describes the union of linkage scopes, for error reporting.
    pub fn covered_description(&self) -> String {
        let mut ids: BTreeSet<&str> = BTreeSet::new();
        for linkage in &self.linkages {
            ids.extend(linkage.scope.ids());
        }
        let list: Vec<&str> = ids.into_iter().collect();
        format!("{{{}}}", list.join(","))
    }

    /// Total cells shipped when sending every linkage belief once.
    pub fn payload_entries(&self) -> usize {
        self.linkages.iter().map(|l| l.cells()).sum()
    }

    /// Returns a copy with `host_b` filled in for every linkage: the peer
    /// clique containing the linkage scope, smallest state space first,
    /// then smallest id.
    pub fn assign_hosts(&self, peer: &JunctionTree) -> Result<LinkageTree> {
        let mut assigned = self.clone();
        for linkage in &mut assigned.linkages {
            let mut best: Option<(usize, String)> = None;
            for id in peer.clique_ids() {
                let scope = peer.scope_of(id)?;
                if !linkage.scope.is_subset_of(scope) {
                    continue;
                }
                let key = (scope.cells(), id.to_string());
                if best.as_ref().is_none_or(|b| key < *b) {
                    best = Some(key);
                }
            }
            match best {
                Some((_, id)) => linkage.host_b = Some(id),
                None => {
                    let ids: Vec<&str> = linkage.scope.ids().collect();
                    return Err(Error::PeerCannotHost {
                        scope: format!("{{{}}}", ids.join(",")),
                    });
                }
            }
        }
        Ok(assigned)
    }

    /// Validates an absorption order (0-based linkage positions): it must be
    /// a permutation in which every linkage after the first is adjacent to
    /// an earlier one.
    pub fn check_order(&self, order: &[usize]) -> Result<()> {
        let m = self.linkages.len();
        for &i in order {
            if i >= m {
                return Err(Error::BadLinkageIndex { index: i, count: m });
            }
        }
        let distinct: BTreeSet<usize> = order.iter().copied().collect();
        if order.len() != m || distinct.len() != m {
            return Err(Error::NotAPermutation);
        }
        let mut placed = vec![false; m];
        for (pos, &i) in order.iter().enumerate() {
            if pos > 0 && !self.neighbors[i].iter().any(|&n| placed[n]) {
                return Err(Error::InconsistentOrder {
                    order: order.to_vec(),
                });
            }
            placed[i] = true;
        }
        Ok(())
    }
}

/// Reduces a host tree to its linkage tree. Rule one: drop any variable
/// outside the interface that occurs in a single clique. Rule two: a clique
/// that became a subset of an adjacent clique is unioned into it, its other
/// neighbors reconnecting. Both rules repeat until neither applies. The
/// smallest qualifying clique id merges first, into its smallest qualifying
/// neighbor. Each linkage records a host: the original clique, among those
/// merged into it, that still covers the final scope, preferring the
/// smallest state space and then the smallest id.
pub fn build_linkage_tree(host: &HostTree, interface: &DSepset) -> LinkageTree {
    let mut scopes: BTreeMap<CliqueId, Scope> = host
        .clique_ids()
        .map(|id| (id.to_string(), host.scope_of(id).unwrap().clone()))
        .collect();
    let mut groups: BTreeMap<CliqueId, BTreeSet<CliqueId>> = scopes
        .keys()
        .map(|id| (id.clone(), BTreeSet::from([id.clone()])))
        .collect();
    let mut adjacency: BTreeMap<CliqueId, BTreeSet<CliqueId>> = scopes
        .keys()
        .map(|id| {
            let n = host.neighbors_of(id).unwrap().iter().cloned().collect();
            (id.clone(), n)
        })
        .collect();

    loop {
        let mut changed = false;

        // Rule one. Occurrence counts are stable under these removals since
        // each removed variable occurs exactly once.
        let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
        for scope in scopes.values() {
            for v in scope.vars() {
                *occurrences.entry(v.id()).or_insert(0) += 1;
            }
        }
        let mut trimmed: BTreeMap<CliqueId, Scope> = BTreeMap::new();
        for (id, scope) in &scopes {
            let keep: Vec<_> = scope
                .vars()
                .iter()
                .filter(|v| interface.vars().contains(v.id()) || occurrences[v.id()] >= 2)
                .cloned()
                .collect();
            if keep.len() != scope.len() {
                changed = true;
            }
            trimmed.insert(id.clone(), Scope::new(keep).expect("subset of a valid scope"));
        }
        scopes = trimmed;

        // Rule two: first qualifying clique in id order, merged into its
        // smallest qualifying neighbor.
        let mut merge = None;
        'search: for (c, scope) in &scopes {
            for d in &adjacency[c] {
                if scope.is_subset_of(&scopes[d]) {
                    merge = Some((c.clone(), d.clone()));
                    break 'search;
                }
            }
        }
        if let Some((c, d)) = merge {
            let group = groups.remove(&c).unwrap();
            groups.get_mut(&d).unwrap().extend(group);
            let neighbors = adjacency.remove(&c).unwrap();
            for n in &neighbors {
                adjacency.get_mut(n).unwrap().remove(&c);
                if *n != d {
                    adjacency.get_mut(n).unwrap().insert(d.clone());
                    adjacency.get_mut(&d).unwrap().insert(n.clone());
                }
            }
            scopes.remove(&c);
            changed = true;
        }

        if !changed {
            break;
        }
    }

    // Pick each linkage's host from its merge group.
    let mut hosts: BTreeMap<CliqueId, CliqueId> = BTreeMap::new();
    for (rep, scope) in &scopes {
        let host_id = groups[rep]
            .iter()
            .filter(|g| scope.is_subset_of(host.scope_of(g).unwrap()))
            .min_by_key(|g| (host.scope_of(g).unwrap().cells(), (*g).clone()))
            .expect("the surviving clique always covers its own final scope")
            .clone();
        hosts.insert(rep.clone(), host_id);
    }

    // Default indexing: breadth-first from the smallest host id, visiting
    // neighbors in ascending host id order. Any breadth-first order is
    // consistent with the tree.
    let mut reps: Vec<&CliqueId> = scopes.keys().collect();
    reps.sort_by_key(|r| &hosts[*r]);
    let mut index_of: BTreeMap<CliqueId, usize> = BTreeMap::new();
    let mut ordered: Vec<CliqueId> = Vec::new();
    let mut queue = VecDeque::from([reps[0].clone()]);
    let mut seen = BTreeSet::from([reps[0].clone()]);
    while let Some(rep) = queue.pop_front() {
        index_of.insert(rep.clone(), ordered.len());
        ordered.push(rep.clone());
        let mut next: Vec<&CliqueId> = adjacency[&rep]
            .iter()
            .filter(|n| !seen.contains(*n))
            .collect();
        next.sort_by_key(|n| &hosts[*n]);
        for n in next {
            seen.insert(n.clone());
            queue.push_back(n.clone());
        }
    }

    let linkages: Vec<Linkage> = ordered
        .iter()
        .map(|rep| Linkage {
            scope: scopes[rep].clone(),
            host_a: hosts[rep].clone(),
            host_b: None,
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut neighbors = vec![Vec::new(); linkages.len()];
    for (rep, adj) in &adjacency {
        let i = index_of[rep];
        for n in adj {
            let j = index_of[n];
            if i < j {
                edges.push((i, j));
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    edges.sort();
    for list in &mut neighbors {
        list.sort();
    }
    LinkageTree {
        linkages,
        edges,
        neighbors,
    }
}
