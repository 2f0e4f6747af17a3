//! Junction trees and division-based message passing.
//!
//! A [`JunctionTree`] keeps a belief table per clique and one per separator.
//! A message pass replaces the separator belief with the sender's marginal
//! and scales the receiver by the ratio of new to old separator, so the
//! implicit joint (product of clique beliefs over product of separator
//! beliefs) never changes. Collect and distribute sweeps bring every pair of
//! adjacent cliques into agreement on their separator.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::potential::{PotentialTable, Scope};

pub type CliqueId = String;

/// Undirected edge between two cliques, stored with endpoints sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeKey(CliqueId, CliqueId);

impl EdgeKey {
    pub fn new(a: impl Into<CliqueId>, b: impl Into<CliqueId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    pub fn ends(&self) -> (&str, &str) {
        (&self.0, &self.1)
    }
}

/// How a message pass is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostModel {
    /// Every pass costs one unit.
    #[default]
    Unit,
    /// A pass costs the separator's cell count plus the receiving clique's.
    StateSpace,
}

/// Running count of message passes and their weighted cost. The weighted
/// figure charges each pass the separator cell count plus the receiving
/// clique's cell count.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PassTally {
    pub passes: u64,
    pub weighted: f64,
}

impl PassTally {
    fn record(&mut self, weight: f64) {
        self.passes += 1;
        self.weighted += weight;
    }

    /// The tally under a given cost model.
    pub fn cost(&self, model: CostModel) -> f64 {
        match model {
            CostModel::Unit => self.passes as f64,
            CostModel::StateSpace => self.weighted,
        }
    }
}

/// Default cell cap for the joint-table oracle.
pub const ORACLE_CELL_LIMIT: usize = 1 << 20;

/// Outcome of a structural validation pass. An empty violation list means
/// the cliques and edges form a well-formed junction tree.
#[derive(Debug, Clone, Default)]
pub struct StructureReport {
    violations: Vec<String>,
}

impl StructureReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[String] {
        &self.violations
    }
}

/// Checks tree-ness, scope sanity, and the running intersection property,
/// collecting every violation instead of stopping at the first.
pub fn validate_structure(
    cliques: &[(CliqueId, Scope)],
    edges: &[(CliqueId, CliqueId)],
) -> StructureReport {
    let mut violations = Vec::new();
    if cliques.is_empty() {
        violations.push("no cliques".to_string());
        return StructureReport { violations };
    }

    let mut scopes: BTreeMap<&str, &Scope> = BTreeMap::new();
    for (id, scope) in cliques {
        if scopes.insert(id, scope).is_some() {
            violations.push(format!("duplicate clique id {id}"));
        }
        if scope.is_empty() {
            violations.push(format!("clique {id} has an empty scope"));
        }
    }
    let mut cards: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (id, scope) in cliques {
        for v in scope.vars() {
            match cards.get(v.id()) {
                Some(&(c, first)) if c != v.cardinality() => violations.push(format!(
                    "variable {} has cardinality {} in clique {} but {} in clique {}",
                    v.id(),
                    c,
                    first,
                    v.cardinality(),
                    id
                )),
                Some(_) => {}
                None => {
                    cards.insert(v.id(), (v.cardinality(), id));
                }
            }
        }
    }

    let mut adjacency: BTreeMap<&str, Vec<&str>> =
        scopes.keys().map(|id| (*id, Vec::new())).collect();
    let mut seen_edges = BTreeSet::new();
    let mut usable: Vec<(&str, &str)> = Vec::new();
    for (a, b) in edges {
        let mut ok = true;
        for end in [a, b] {
            if !scopes.contains_key(end.as_str()) {
                violations.push(format!("edge endpoint {end} is not a clique"));
                ok = false;
            }
        }
        if a == b {
            violations.push(format!("self-loop on clique {a}"));
            ok = false;
        }
        if ok && !seen_edges.insert(EdgeKey::new(a.clone(), b.clone())) {
            violations.push(format!("duplicate edge between {a} and {b}"));
            ok = false;
        }
        if ok {
            adjacency.get_mut(a.as_str()).unwrap().push(b);
            adjacency.get_mut(b.as_str()).unwrap().push(a);
            usable.push((a, b));
        }
    }

    let n = scopes.len();
    let tree_shaped = usable.len() == n - 1;
    if !tree_shaped {
        violations.push(format!(
            "{n} cliques need {} edges to form a tree, found {}",
            n - 1,
            usable.len()
        ));
    }
    let start = *scopes.keys().next().unwrap();
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(id) = queue.pop_front() {
        for next in &adjacency[id] {
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    if seen.len() != n {
        violations.push("cliques are not connected".to_string());
    }

    if tree_shaped && seen.len() == n {
        // On a tree, a variable's cliques induce a connected subgraph exactly
        // when the edges joining them number one less than the cliques.
        let mut holders: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, scope) in cliques {
            for v in scope.vars() {
                *holders.entry(v.id()).or_insert(0) += 1;
            }
        }
        let mut linking: BTreeMap<String, usize> = BTreeMap::new();
        for (a, b) in &usable {
            let sep = scopes[a].intersection(scopes[b]);
            for v in sep.vars() {
                *linking.entry(v.id().to_string()).or_insert(0) += 1;
            }
        }
        for (id, &count) in &holders {
            let links = linking.get(*id).copied().unwrap_or(0);
            if links != count - 1 {
                violations.push(format!(
                    "running intersection violated: variable {id} occurs in {count} cliques joined by {links} separators"
                ));
            }
        }
    }
    StructureReport { violations }
}

/// Result of comparing endpoint marginals across every separator.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub worst_edge: Option<EdgeKey>,
    pub max_discrepancy: f64,
}

/// A tree of cliques with belief tables on cliques and separators.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionTree {
    cliques: BTreeMap<CliqueId, PotentialTable>,
    separators: BTreeMap<EdgeKey, PotentialTable>,
    neighbors: BTreeMap<CliqueId, Vec<CliqueId>>,
    tally: PassTally,
}

impl JunctionTree {
    /// Builds and validates a junction tree. The cliques must form a single
    /// tree, variable cardinalities must agree everywhere, and each variable's
    /// cliques must induce a connected subtree (the running intersection
    /// property). Separator beliefs start as all-ones over the intersection
    /// of the endpoint scopes.
    pub fn new(
        cliques: Vec<(CliqueId, PotentialTable)>,
        edges: Vec<(CliqueId, CliqueId)>,
    ) -> Result<Self> {
        let shapes: Vec<(CliqueId, Scope)> = cliques
            .iter()
            .map(|(id, t)| (id.clone(), t.scope().clone()))
            .collect();
        let report = validate_structure(&shapes, &edges);
        if !report.is_valid() {
            return Err(Error::InvalidStructure {
                reason: report.violations().join("; "),
            });
        }

        let clique_map: BTreeMap<CliqueId, PotentialTable> = cliques.into_iter().collect();
        let mut neighbors: BTreeMap<CliqueId, Vec<CliqueId>> = clique_map
            .keys()
            .map(|id| (id.clone(), Vec::new()))
            .collect();
        let mut separators = BTreeMap::new();
        for (a, b) in &edges {
            let key = EdgeKey::new(a.clone(), b.clone());
            let sep_scope = clique_map[a].scope().intersection(clique_map[b].scope());
            separators.insert(key, PotentialTable::ones(sep_scope));
            neighbors.get_mut(a).unwrap().push(b.clone());
            neighbors.get_mut(b).unwrap().push(a.clone());
        }
        for list in neighbors.values_mut() {
            list.sort();
        }

        Ok(JunctionTree {
            cliques: clique_map,
            separators,
            neighbors,
            tally: PassTally::default(),
        })
    }

    /// Re-runs structural validation on the current state.
    pub fn validate(&self) -> StructureReport {
        let shapes: Vec<(CliqueId, Scope)> = self
            .cliques
            .iter()
            .map(|(id, t)| (id.clone(), t.scope().clone()))
            .collect();
        let edges: Vec<(CliqueId, CliqueId)> = self
            .separators
            .keys()
            .map(|k| {
                let (a, b) = k.ends();
                (a.to_string(), b.to_string())
            })
            .collect();
        validate_structure(&shapes, &edges)
    }

    pub fn clique_ids(&self) -> impl Iterator<Item = &str> {
        self.cliques.keys().map(|s| s.as_str())
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    pub fn contains_clique(&self, id: &str) -> bool {
        self.cliques.contains_key(id)
    }

    pub fn belief(&self, id: &str) -> Result<&PotentialTable> {
        self.cliques
            .get(id)
            .ok_or_else(|| Error::UnknownClique { id: id.into() })
    }

    pub fn scope_of(&self, id: &str) -> Result<&Scope> {
        self.belief(id).map(|t| t.scope())
    }

    pub fn separator_belief(&self, a: &str, b: &str) -> Result<&PotentialTable> {
        let key = EdgeKey::new(a, b);
        self.separators
            .get(&key)
            .ok_or_else(|| Error::NotAdjacent {
                from: a.into(),
                to: b.into(),
            })
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeKey> {
        self.separators.keys()
    }

    pub fn neighbors_of(&self, id: &str) -> Result<&[CliqueId]> {
        self.neighbors
            .get(id)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::UnknownClique { id: id.into() })
    }

    /// Union of all clique scopes.
    pub fn universe(&self) -> Scope {
        let mut vars = BTreeMap::new();
        for table in self.cliques.values() {
            for v in table.scope().vars() {
                vars.entry(v.id().to_string()).or_insert_with(|| v.clone());
            }
        }
        Scope::new(vars.into_values()).expect("clique scopes already validated")
    }

    pub fn tally(&self) -> PassTally {
        self.tally
    }

    pub fn reset_tally(&mut self) {
        self.tally = PassTally::default();
    }

    /// Multiplies a clique's belief by a factor whose scope the clique covers.
    /// This is how evidence and external ratios enter the tree; it does not
    /// count as a message pass.
    pub fn multiply_into_clique(&mut self, id: &str, factor: &PotentialTable) -> Result<()> {
        let belief = self
            .cliques
            .get(id)
            .ok_or_else(|| Error::UnknownClique { id: id.into() })?;
        if !factor.scope().is_subset_of(belief.scope()) {
            return Err(Error::NotSubset {
                sub: format!("factor over {:?}", factor.scope().ids().collect::<Vec<_>>()),
                sup: format!("clique {id}"),
            });
        }
        let updated = belief.multiply(factor)?;
        self.cliques.insert(id.to_string(), updated);
        Ok(())
    }

    /// One division-based pass from `from` to its neighbor `to`.
    pub fn pass_message(&mut self, from: &str, to: &str) -> Result<()> {
        let key = EdgeKey::new(from, to);
        if !self.separators.contains_key(&key) {
            for end in [from, to] {
                if !self.cliques.contains_key(end) {
                    return Err(Error::UnknownClique { id: end.into() });
                }
            }
            return Err(Error::NotAdjacent {
                from: from.into(),
                to: to.into(),
            });
        }
        let old_sep = &self.separators[&key];
        let new_sep = self.cliques[from].marginalize(old_sep.scope())?;
        let ratio = new_sep.divide(old_sep)?;
        let updated = self.cliques[to].multiply(&ratio)?;
        let weight = (new_sep.scope().cells() + updated.scope().cells()) as f64;
        self.cliques.insert(to.to_string(), updated);
        self.separators.insert(key, new_sep);
        self.tally.record(weight);
        Ok(())
    }

    /// Child-to-parent pairs in post-order from `root`, visiting sorted
    /// neighbor lists. Every pair is (sender, receiver).
    fn inward_order(&self, root: &str) -> Vec<(CliqueId, CliqueId)> {
        let mut order = Vec::new();
        self.walk_inward(root, None, &mut order);
        order
    }

    fn walk_inward(&self, node: &str, parent: Option<&str>, out: &mut Vec<(CliqueId, CliqueId)>) {
        for next in &self.neighbors[node] {
            if Some(next.as_str()) != parent {
                self.walk_inward(next, Some(node), out);
            }
        }
        if let Some(p) = parent {
            out.push((node.to_string(), p.to_string()));
        }
    }

    /// Parent-to-child pairs in pre-order from `root`, restricted to cliques
    /// for which `included` returns true.
    fn outward_order(
        &self,
        root: &str,
        included: &dyn Fn(&str) -> bool,
    ) -> Vec<(CliqueId, CliqueId)> {
        let mut order = Vec::new();
        self.walk_outward(root, None, included, &mut order);
        order
    }

    fn walk_outward(
        &self,
        node: &str,
        parent: Option<&str>,
        included: &dyn Fn(&str) -> bool,
        out: &mut Vec<(CliqueId, CliqueId)>,
    ) {
        for next in &self.neighbors[node] {
            if Some(next.as_str()) != parent && included(next) {
                out.push((node.to_string(), next.clone()));
                self.walk_outward(next, Some(node), included, out);
            }
        }
    }

    /// Inward sweep: every clique sends toward `root`. Returns passes made.
    pub fn collect_evidence(&mut self, root: &str) -> Result<u64> {
        if !self.cliques.contains_key(root) {
            return Err(Error::UnknownClique { id: root.into() });
        }
        let order = self.inward_order(root);
        for (from, to) in &order {
            self.pass_message(from, to)?;
        }
        Ok(order.len() as u64)
    }

    /// Outward sweep: `root` sends away from itself through the whole tree.
    pub fn distribute_evidence(&mut self, root: &str) -> Result<u64> {
        if !self.cliques.contains_key(root) {
            return Err(Error::UnknownClique { id: root.into() });
        }
        let order = self.outward_order(root, &|_| true);
        for (from, to) in &order {
            self.pass_message(from, to)?;
        }
        Ok(order.len() as u64)
    }

    /// Outward sweep confined to `allowed`, which must contain `root` and
    /// induce a connected subtree.
    pub fn distribute_on_subtree(
        &mut self,
        root: &str,
        allowed: &BTreeSet<CliqueId>,
    ) -> Result<u64> {
        for id in allowed {
            if !self.cliques.contains_key(id) {
                return Err(Error::UnknownClique { id: id.clone() });
            }
        }
        if !allowed.contains(root) {
            return Err(Error::SubtreeNotConnected);
        }
        let mut seen = BTreeSet::from([root.to_string()]);
        let mut queue = VecDeque::from([root.to_string()]);
        while let Some(id) = queue.pop_front() {
            for next in &self.neighbors[&id] {
                if allowed.contains(next) && seen.insert(next.clone()) {
                    queue.push_back(next.clone());
                }
            }
        }
        if seen.len() != allowed.len() {
            return Err(Error::SubtreeNotConnected);
        }
        let order = self.outward_order(root, &|id| allowed.contains(id));
        for (from, to) in &order {
            self.pass_message(from, to)?;
        }
        Ok(order.len() as u64)
    }

    /// Passes along an explicit simple clique path, first to last.
    pub fn distribute_on_chain(&mut self, path: &[CliqueId]) -> Result<u64> {
        let mut seen = BTreeSet::new();
        for id in path {
            if !self.cliques.contains_key(id) {
                return Err(Error::UnknownClique { id: id.clone() });
            }
            if !seen.insert(id) {
                return Err(Error::InvalidPath {
                    reason: format!("path revisits clique {id}"),
                });
            }
        }
        for pair in path.windows(2) {
            self.pass_message(&pair[0], &pair[1])?;
        }
        Ok(path.len().saturating_sub(1) as u64)
    }

    /// Full calibration: collect into the smallest clique id, then distribute
    /// back out. Afterwards every separator agrees with both endpoints.
    pub fn calibrate(&mut self) -> Result<u64> {
        let root = self.cliques.keys().next().unwrap().clone();
        let inward = self.collect_evidence(&root)?;
        let outward = self.distribute_evidence(&root)?;
        Ok(inward + outward)
    }

    /// Unique path between two cliques, inclusive of both ends.
    pub fn path_between(&self, a: &str, b: &str) -> Result<Vec<CliqueId>> {
        for end in [a, b] {
            if !self.cliques.contains_key(end) {
                return Err(Error::UnknownClique { id: end.into() });
            }
        }
        let mut parent: BTreeMap<CliqueId, CliqueId> = BTreeMap::new();
        let mut queue = VecDeque::from([a.to_string()]);
        let mut seen = BTreeSet::from([a.to_string()]);
        while let Some(id) = queue.pop_front() {
            if id == b {
                break;
            }
            for next in &self.neighbors[&id] {
                if seen.insert(next.clone()) {
                    parent.insert(next.clone(), id.clone());
                    queue.push_back(next.clone());
                }
            }
        }
        let mut path = vec![b.to_string()];
        while path.last().unwrap() != a {
            let prev = parent
                .get(path.last().unwrap())
                .expect("validated tree is connected");
            path.push(prev.clone());
        }
        path.reverse();
        Ok(path)
    }

    /// The joint the tree represents: product of clique beliefs divided by
    /// separator beliefs. Refuses to build tables over `limit` cells.
    pub fn joint_table_with_limit(&self, limit: usize) -> Result<PotentialTable> {
        let universe = self.universe();
        if universe.cells() > limit {
            return Err(Error::OracleLimit {
                cells: universe.cells(),
                limit,
            });
        }
        let mut joint = PotentialTable::ones(universe);
        for table in self.cliques.values() {
            joint = joint.multiply(table)?;
        }
        for sep in self.separators.values() {
            joint = joint.divide(sep)?;
        }
        Ok(joint)
    }

    pub fn joint_table(&self) -> Result<PotentialTable> {
        self.joint_table_with_limit(ORACLE_CELL_LIMIT)
    }

    /// Compares the normalized separator marginals of every adjacent pair.
    /// A separator where exactly one side carries mass scores infinity.
    pub fn consistency_check(&self, tol: f64) -> Result<ConsistencyReport> {
        let mut worst = 0.0f64;
        let mut worst_edge = None;
        for (key, sep) in &self.separators {
            let (a, b) = key.ends();
            let ma = self.cliques[a].marginalize(sep.scope())?;
            let mb = self.cliques[b].marginalize(sep.scope())?;
            let (mass_a, mass_b) = (ma.total_mass(), mb.total_mass());
            let gap = match (mass_a > 0.0, mass_b > 0.0) {
                (true, true) => ma.normalize()?.max_abs_diff(&mb.normalize()?)?,
                (false, false) => 0.0,
                _ => f64::INFINITY,
            };
            if gap > worst || worst_edge.is_none() {
                worst = gap;
                worst_edge = Some(key.clone());
            }
        }
        Ok(ConsistencyReport {
            consistent: worst <= tol,
            worst_edge,
            max_discrepancy: worst,
        })
    }

    /// Largest separator disagreement; zero on a consistent tree.
    pub fn consistency_gap(&self) -> Result<f64> {
        Ok(self.consistency_check(0.0)?.max_discrepancy)
    }

    /// Normalized marginal for one variable, read from the first clique that
    /// contains it. Meaningful on a consistent tree.
    pub fn variable_marginal(&self, id: &str) -> Result<PotentialTable> {
        for table in self.cliques.values() {
            if table.scope().contains(id) {
                let var = table.scope().var(id).unwrap().clone();
                let target = Scope::new(vec![var])?;
                return table.marginalize(&target)?.normalize();
            }
        }
        Err(Error::UnknownVariable { id: id.into() })
    }
}
