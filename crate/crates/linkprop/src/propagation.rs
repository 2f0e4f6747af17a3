//! Coordinated belief updates between a pair of junction trees.
//!
//! A [`PairSession`] fixes the direction of flow: tree A absorbs the
//! interface belief of tree B through the linkages. The three update
//! variants produce the same posterior but spend different numbers of
//! messages keeping A's host cliques in step between absorptions. Costs
//! split into coordination (passes between absorbs) and finalization
//! (the one full distribution at the end); the interface payload is
//! tracked separately because it crosses between the trees rather than
//! inside one.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::junction::{CostModel, JunctionTree};
use crate::linkage::{build_host_tree, build_linkage_tree, DSepset, HostTree, LinkageTree};
use crate::potential::PotentialTable;
use crate::tour::{min_weight_open_tour, reduce_to_host_tree};

/// Message counts for one update run.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    /// Which variant ran: `ub1`, `ub2` or `ub3`.
    pub variant: String,
    /// Absorption order over linkage indices, as executed.
    pub order: Vec<usize>,
    /// Intra-tree passes strictly before the last absorption.
    pub coordination_passes: u64,
    /// Passes of the closing full distribution.
    pub finalization_passes: u64,
    /// Cells shipped across the interface, one linkage table per absorb.
    pub payload_entries: u64,
    /// Coordination passes weighted by separator plus receiver cells.
    pub weighted_cost: f64,
}

/// A one-directional update session: tree A absorbs from tree B.
///
/// Opening a session calibrates both trees, derives A's host tree and
/// the linkage tree of the shared interface, and finds the peer host of
/// every linkage in B. Updates mutate tree A only.
#[derive(Debug, Clone)]
pub struct PairSession {
    jt_a: JunctionTree,
    jt_b: JunctionTree,
    interface: DSepset,
    host_a: HostTree,
    linkages: LinkageTree,
    coordination_passes: u64,
    finalization_passes: u64,
    payload_entries: u64,
    weighted_cost: f64,
    last_report: Option<CostReport>,
}

/// Opens a session in which `jt_a` will absorb from `jt_b` through the
/// given interface. Both trees are calibrated here so the update
/// variants start from internally consistent states.
pub fn open_session(
    jt_a: JunctionTree,
    jt_b: JunctionTree,
    interface: DSepset,
) -> Result<PairSession> {
    let mut jt_a = jt_a;
    let mut jt_b = jt_b;
    jt_a.calibrate()?;
    jt_b.calibrate()?;
    jt_a.reset_tally();
    jt_b.reset_tally();

    let host_a = build_host_tree(&jt_a, &interface, "a")?;
    let linkages = build_linkage_tree(&host_a, &interface).assign_hosts(&jt_b)?;
    if !linkages.covers_exactly(&interface) {
        let ids: Vec<&str> = interface.vars().ids().collect();
        return Err(Error::InvalidLinkageCover {
            covered: linkages.covered_description(),
            interface: format!("{{{}}}", ids.join(",")),
        });
    }

    Ok(PairSession {
        jt_a,
        jt_b,
        interface,
        host_a,
        linkages,
        coordination_passes: 0,
        finalization_passes: 0,
        payload_entries: 0,
        weighted_cost: 0.0,
        last_report: None,
    })
}

impl PairSession {
    pub fn tree_a(&self) -> &JunctionTree {
        &self.jt_a
    }

    pub fn tree_b(&self) -> &JunctionTree {
        &self.jt_b
    }

    pub fn interface(&self) -> &DSepset {
        &self.interface
    }

    pub fn host_tree(&self) -> &HostTree {
        &self.host_a
    }

    pub fn linkage_tree(&self) -> &LinkageTree {
        &self.linkages
    }

    pub fn linkage_count(&self) -> usize {
        self.linkages.count()
    }

    /// The linkage tree's construction order `0, 1, …, m-1`, which is
    /// always consistent.
    pub fn default_order(&self) -> Vec<usize> {
        (0..self.linkages.count()).collect()
    }

    pub fn coordination_passes(&self) -> u64 {
        self.coordination_passes
    }

    pub fn finalization_passes(&self) -> u64 {
        self.finalization_passes
    }

    pub fn payload_entries(&self) -> u64 {
        self.payload_entries
    }

    /// Multiplies the peer-to-local ratio of linkage marginals into the
    /// hosting clique of tree A. Ships one linkage table across, which
    /// the payload counter records; no intra-tree passes happen here.
    pub fn absorb_through_linkage(&mut self, index: usize) -> Result<()> {
        let link = self.linkages.linkage(index)?;
        let scope = link.scope().clone();
        let host_a = link.host_a().to_string();
        let host_b = link
            .host_b()
            .expect("session linkages carry peer hosts")
            .to_string();
        let peer = self.jt_b.belief(&host_b)?.marginalize(&scope)?;
        let local = self.jt_a.belief(&host_a)?.marginalize(&scope)?;
        let ratio = peer.divide(&local)?;
        self.jt_a.multiply_into_clique(&host_a, &ratio)?;
        self.payload_entries += scope.cells() as u64;
        Ok(())
    }

    fn begin_run(&mut self) {
        self.coordination_passes = 0;
        self.finalization_passes = 0;
        self.payload_entries = 0;
        self.weighted_cost = 0.0;
    }

    fn record(&mut self, passes: u64, weighted_before: f64, finalize: bool) {
        if finalize {
            self.finalization_passes += passes;
        } else {
            self.coordination_passes += passes;
            self.weighted_cost += self.jt_a.tally().weighted - weighted_before;
        }
    }

    fn finish_run(&mut self, variant: &str, order: &[usize]) -> CostReport {
        let report = CostReport {
            variant: variant.to_string(),
            order: order.to_vec(),
            coordination_passes: self.coordination_passes,
            finalization_passes: self.finalization_passes,
            payload_entries: self.payload_entries,
            weighted_cost: self.weighted_cost,
        };
        self.last_report = Some(report.clone());
        report
    }

    /// First variant: absorb through each linkage in the given order and
    /// run a full distribution from the host after every absorb.
    pub fn update_belief(&mut self, order: &[usize]) -> Result<CostReport> {
        self.linkages.check_order(order)?;
        self.begin_run();
        let m = order.len();
        for (round, &i) in order.iter().enumerate() {
            self.absorb_through_linkage(i)?;
            let root = self.linkages.linkage(i)?.host_a().to_string();
            let before = self.jt_a.tally().weighted;
            let passes = self.jt_a.distribute_evidence(&root)?;
            self.record(passes, before, round + 1 == m);
        }
        Ok(self.finish_run("ub1", order))
    }

    /// Second variant: distributions between absorbs stay on the host
    /// tree; only the last absorb is followed by a full distribution.
    pub fn update_belief2(&mut self, order: &[usize]) -> Result<CostReport> {
        self.linkages.check_order(order)?;
        self.begin_run();
        let allowed = self.host_a.clique_set();
        let m = order.len();
        for (round, &i) in order.iter().enumerate() {
            self.absorb_through_linkage(i)?;
            let root = self.linkages.linkage(i)?.host_a().to_string();
            let before = self.jt_a.tally().weighted;
            if round + 1 == m {
                let passes = self.jt_a.distribute_evidence(&root)?;
                self.record(passes, before, true);
            } else {
                let passes = self.jt_a.distribute_on_subtree(&root, &allowed)?;
                self.record(passes, before, false);
            }
        }
        Ok(self.finish_run("ub2", order))
    }

    /// Third variant: after each absorb but the last, pass only along
    /// the clique path from the current host to the next one; the last
    /// absorb is followed by a full distribution from its host.
    pub fn update_belief3(&mut self, order: &[usize]) -> Result<CostReport> {
        self.linkages.check_order(order)?;
        self.begin_run();
        let m = order.len();
        for (round, &i) in order.iter().enumerate() {
            self.absorb_through_linkage(i)?;
            let root = self.linkages.linkage(i)?.host_a().to_string();
            let before = self.jt_a.tally().weighted;
            if round + 1 == m {
                let passes = self.jt_a.distribute_evidence(&root)?;
                self.record(passes, before, true);
            } else {
                let next = self.linkages.linkage(order[round + 1])?.host_a().to_string();
                let path = self.jt_a.path_between(&root, &next)?;
                let passes = self.jt_a.distribute_on_chain(&path)?;
                self.record(passes, before, false);
            }
        }
        Ok(self.finish_run("ub3", order))
    }

    /// Chooses the absorption order that minimizes the chain-walking
    /// cost of [`update_belief3`]: reduce the host tree to a weighted
    /// tree, take the minimum open tour, and read off the linkage hosts
    /// in first-visit order. When a non-host junction clique separates
    /// some host from the rest, the raw visit order can list it before
    /// any linkage-tree neighbor; in that case the earliest linkage with
    /// an already placed neighbor is hoisted forward, keeping the order
    /// consistent at the closest achievable cost.
    pub fn optimal_linkage_order(&self, model: CostModel) -> Result<Vec<usize>> {
        let m = self.linkages.count();
        if m == 1 {
            return Ok(vec![0]);
        }
        let host_of: BTreeMap<&str, usize> = self
            .linkages
            .linkages()
            .iter()
            .enumerate()
            .map(|(index, link)| (link.host_a(), index))
            .collect();
        let hosts: BTreeSet<String> = host_of.keys().map(|id| id.to_string()).collect();
        let weighted = reduce_to_host_tree(&self.host_a, &hosts, model)?;
        let tour = min_weight_open_tour(&weighted)?;
        let priority: Vec<usize> = tour
            .numbering
            .iter()
            .filter_map(|id| host_of.get(id.as_str()).copied())
            .collect();

        let mut order = Vec::with_capacity(m);
        let mut placed = vec![false; m];
        while order.len() < m {
            let next = priority
                .iter()
                .copied()
                .find(|&i| {
                    !placed[i]
                        && (order.is_empty()
                            || self
                                .linkages
                                .neighbors_of(i)
                                .expect("index from enumeration")
                                .iter()
                                .any(|&j| placed[j]))
                })
                .expect("linkage tree is connected");
            placed[next] = true;
            order.push(next);
        }
        Ok(order)
    }

    /// Ground truth for every variant: the normalized joint of tree A
    /// times the ratio of the two interface marginals. Computed from
    /// full joint tables, so it is limited to small systems.
    pub fn expected_posterior(&self) -> Result<PotentialTable> {
        let joint_a = self.jt_a.joint_table()?;
        let joint_b = self.jt_b.joint_table()?;
        let on_a = joint_a.marginalize(self.interface.vars())?;
        let on_b = joint_b.marginalize(self.interface.vars())?;
        joint_a.multiply(&on_b.divide(&on_a)?)?.normalize()
    }

    /// The report of the most recent update run.
    pub fn cost_report(&self) -> Result<CostReport> {
        self.last_report.clone().ok_or(Error::NoReportYet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{Scope, Variable};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seeded_clique(rng: &mut ChaCha8Rng, vars: &[&str]) -> PotentialTable {
        let layout: Vec<Variable> = vars.iter().map(|v| Variable::binary(*v)).collect();
        let cells = 1usize << layout.len();
        let values: Vec<f64> = (0..cells).map(|_| rng.gen_range(0.1..1.0)).collect();
        PotentialTable::new(layout, values).unwrap()
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
        .unwrap()
    }

    fn scope(ids: &[&str]) -> Scope {
        Scope::new(ids.iter().map(|id| Variable::binary(*id))).unwrap()
    }

    fn pair2l(seed: u64) -> PairSession {
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
        let interface = DSepset::between(scope(&["B", "C", "D"]), &a, &b).unwrap();
        open_session(a, b, interface).unwrap()
    }

    fn fig4(seed: u64) -> PairSession {
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
        let interface = DSepset::between(
            scope(&["s1", "s2", "s3", "s4", "s5", "t2", "t3", "t4", "t5"]),
            &a,
            &b,
        )
        .unwrap();
        open_session(a, b, interface).unwrap()
    }

    fn posterior_of(session: &PairSession) -> PotentialTable {
        session.tree_a().joint_table().unwrap().normalize().unwrap()
    }

    #[test]
    fn open_session_builds_linkages_and_calibrates() {
        let session = pair2l(11);
        assert_eq!(session.linkage_count(), 2);
        let links = session.linkage_tree().linkages();
        let scopes: Vec<Vec<&str>> = links.iter().map(|l| l.scope().ids().collect()).collect();
        assert_eq!(scopes, vec![vec!["B", "C"], vec!["C", "D"]]);
        assert_eq!(links[0].host_a(), "A1");
        assert_eq!(links[0].host_b(), Some("B1"));
        assert_eq!(links[1].host_a(), "A2");
        assert_eq!(links[1].host_b(), Some("B2"));
        assert!(session.tree_a().consistency_check(1e-9).unwrap().consistent);
        assert!(session.tree_b().consistency_check(1e-9).unwrap().consistent);
        assert!(matches!(session.cost_report(), Err(Error::NoReportYet)));
    }

    #[test]
    fn open_session_rejects_peer_without_covering_clique() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = seeded_tree(
            &mut rng,
            &[("A1", &["A", "B", "C"]), ("A2", &["C", "D", "E"])],
            &[("A1", "A2")],
        );
        let b = seeded_tree(
            &mut rng,
            &[("B1", &["B", "F"]), ("B2", &["C", "D", "G"])],
            &[("B1", "B2")],
        );
        let interface = DSepset::between(scope(&["B", "C", "D"]), &a, &b).unwrap();
        assert!(matches!(
            open_session(a, b, interface),
            Err(Error::PeerCannotHost { .. })
        ));
    }

    #[test]
    fn single_clique_pair_needs_one_linkage_and_no_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = seeded_tree(&mut rng, &[("A1", &["X", "Y"])], &[]);
        let b = seeded_tree(&mut rng, &[("B1", &["W", "X", "Y"])], &[]);
        let interface = DSepset::between(scope(&["X", "Y"]), &a, &b).unwrap();
        let base = open_session(a, b, interface).unwrap();
        assert_eq!(base.linkage_count(), 1);
        assert_eq!(base.optimal_linkage_order(CostModel::Unit).unwrap(), vec![0]);

        let expected = base.expected_posterior().unwrap();
        for run in [
            PairSession::update_belief,
            PairSession::update_belief2,
            PairSession::update_belief3,
        ] {
            let mut session = base.clone();
            let report = run(&mut session, &[0]).unwrap();
            assert_eq!(report.coordination_passes, 0);
            assert_eq!(report.finalization_passes, 0);
            assert_eq!(report.payload_entries, 4);
            assert!(posterior_of(&session).max_abs_diff(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn absorb_with_matching_marginals_changes_nothing() {
        let uniform_tree = |ids: [(&str, &[&str]); 2], edges: [(&str, &str); 1]| {
            JunctionTree::new(
                ids.iter()
                    .map(|(id, vars)| {
                        let scope = Scope::new(vars.iter().map(|v| Variable::binary(*v))).unwrap();
                        (id.to_string(), PotentialTable::ones(scope))
                    })
                    .collect(),
                edges
                    .iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
            )
            .unwrap()
        };
        let a = uniform_tree(
            [("A1", &["A", "B", "C"]), ("A2", &["C", "D", "E"])],
            [("A1", "A2")],
        );
        let b = uniform_tree(
            [("B1", &["B", "C", "F"]), ("B2", &["C", "D", "G"])],
            [("B1", "B2")],
        );
        let interface = DSepset::between(scope(&["B", "C", "D"]), &a, &b).unwrap();
        let mut session = open_session(a, b, interface).unwrap();

        let before = posterior_of(&session);
        session.absorb_through_linkage(0).unwrap();
        assert_eq!(session.payload_entries(), 4);
        session.absorb_through_linkage(1).unwrap();
        assert_eq!(session.payload_entries(), 8);
        assert!(posterior_of(&session).max_abs_diff(&before).unwrap() < 1e-12);

        let expected = session.expected_posterior().unwrap();
        assert!(expected.max_abs_diff(&before).unwrap() < 1e-12);
    }

    #[test]
    fn single_linkage_absorb_plus_distribution_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let a = seeded_tree(
            &mut rng,
            &[("A1", &["a", "b"]), ("A2", &["b", "c"])],
            &[("A1", "A2")],
        );
        let b = seeded_tree(&mut rng, &[("B1", &["c", "d"])], &[]);
        let interface = DSepset::between(scope(&["c"]), &a, &b).unwrap();
        let mut session = open_session(a, b, interface).unwrap();
        assert_eq!(session.linkage_count(), 1);
        assert_eq!(session.host_tree().len(), 1);

        let expected = session.expected_posterior().unwrap();
        session.update_belief(&[0]).unwrap();
        assert!(posterior_of(&session).max_abs_diff(&expected).unwrap() < 1e-9);
        assert!(session.tree_a().consistency_check(1e-9).unwrap().consistent);
    }

    #[test]
    fn variants_agree_with_the_oracle_on_seeded_pairs() {
        for seed in [0, 1, 2] {
            let base = pair2l(seed);
            let expected = base.expected_posterior().unwrap();
            let b_before = base.tree_b().clone();

            let runs: Vec<(&str, Box<dyn Fn(&mut PairSession) -> CostReport>)> = vec![
                ("ub1", Box::new(|s: &mut PairSession| s.update_belief(&[0, 1]).unwrap())),
                ("ub2", Box::new(|s: &mut PairSession| s.update_belief2(&[0, 1]).unwrap())),
                ("ub3", Box::new(|s: &mut PairSession| s.update_belief3(&[0, 1]).unwrap())),
                ("ub3r", Box::new(|s: &mut PairSession| s.update_belief3(&[1, 0]).unwrap())),
            ];
            for (name, run) in runs {
                let mut session = base.clone();
                run(&mut session);
                let got = posterior_of(&session);
                assert!(
                    got.max_abs_diff(&expected).unwrap() < 1e-9,
                    "seed {seed} variant {name}"
                );
                assert!(session.tree_a().consistency_check(1e-9).unwrap().consistent);
                assert_eq!(session.tree_b(), &b_before, "tree B must stay untouched");
            }
        }
    }

    #[test]
    fn fig4_costs_match_the_known_counts() {
        let base = fig4(7);
        assert_eq!(base.linkage_count(), 5);
        let hosts: Vec<&str> = base
            .linkage_tree()
            .linkages()
            .iter()
            .map(|l| l.host_a())
            .collect();
        assert_eq!(hosts, vec!["C1", "C2", "C3", "C4", "C5"]);

        let mut s = base.clone();
        let r = s.update_belief(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((r.coordination_passes, r.finalization_passes), (16, 4));

        let mut s = base.clone();
        let r = s.update_belief2(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((r.coordination_passes, r.finalization_passes), (16, 4));

        let mut s = base.clone();
        let r = s.update_belief2(&[4, 1, 0, 2, 3]).unwrap();
        assert_eq!(r.coordination_passes, 16);

        let mut s = base.clone();
        let r = s.update_belief3(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!((r.coordination_passes, r.finalization_passes), (8, 4));

        let mut s = base.clone();
        let r = s.update_belief3(&[4, 1, 0, 2, 3]).unwrap();
        assert_eq!((r.coordination_passes, r.finalization_passes), (5, 4));

        let payload: u64 = 16 + 8 + 4 + 4 + 4;
        assert_eq!(r.payload_entries, payload);

        let expected = base.expected_posterior().unwrap();
        let mut s = base.clone();
        s.update_belief3(&[4, 1, 0, 2, 3]).unwrap();
        assert!(posterior_of(&s).max_abs_diff(&expected).unwrap() < 1e-9);
    }

    #[test]
    fn optimal_order_reaches_the_minimum_coordination() {
        let base = fig4(9);
        let order = base.optimal_linkage_order(CostModel::Unit).unwrap();
        assert_eq!(order, vec![2, 0, 3, 1, 4]);
        base.linkage_tree().check_order(&order).unwrap();

        let mut s = base.clone();
        let r = s.update_belief3(&order).unwrap();
        assert_eq!(r.coordination_passes, 5);
    }

    #[test]
    fn weighted_cost_charges_separator_and_receiver() {
        let mut s = fig4(13);
        let r = s.update_belief3(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(r.coordination_passes, 8);
        assert_eq!(r.weighted_cost, 92.0);
    }

    #[test]
    fn bad_orders_are_rejected_up_front() {
        let base = fig4(3);
        let mut s = base.clone();
        assert!(matches!(
            s.update_belief3(&[2, 3, 0, 1, 4]),
            Err(Error::InconsistentOrder { .. })
        ));
        let mut s = base.clone();
        assert!(matches!(
            s.update_belief(&[0, 1]),
            Err(Error::NotAPermutation)
        ));
        let mut s = base.clone();
        assert!(matches!(
            s.update_belief2(&[0, 1, 2, 3, 7]),
            Err(Error::BadLinkageIndex { index: 7, count: 5 })
        ));
        assert!(matches!(
            base.clone().absorb_through_linkage(9),
            Err(Error::BadLinkageIndex { .. })
        ));
    }

    #[test]
    fn updates_are_idempotent() {
        for make in [pair2l as fn(u64) -> PairSession, fig4] {
            let base = make(17);
            let mut session = base.clone();
            session.update_belief3(&session.default_order()).unwrap();
            let after_first = posterior_of(&session);
            session.update_belief3(&session.default_order()).unwrap();
            let after_second = posterior_of(&session);
            assert!(after_second.max_abs_diff(&after_first).unwrap() < 1e-12);
        }
    }

    #[test]
    fn hard_evidence_in_b_zeroes_the_posterior() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let a = seeded_tree(
            &mut rng,
            &[("A1", &["A", "B", "C"]), ("A2", &["C", "D", "E"])],
            &[("A1", "A2")],
        );
        let b1 = {
            let layout = vec![
                Variable::binary("B"),
                Variable::binary("C"),
                Variable::binary("F"),
            ];
            let mut values: Vec<f64> = (0..8).map(|_| rng.gen_range(0.1..1.0)).collect();
            for cell in values.iter_mut().take(4) {
                *cell = 0.0;
            }
            PotentialTable::new(layout, values).unwrap()
        };
        let b = JunctionTree::new(
            vec![
                ("B1".to_string(), b1),
                ("B2".to_string(), seeded_clique(&mut rng, &["C", "D", "G"])),
            ],
            vec![("B1".to_string(), "B2".to_string())],
        )
        .unwrap();
        let interface = DSepset::between(scope(&["B", "C", "D"]), &a, &b).unwrap();
        let mut session = open_session(a, b, interface).unwrap();

        let expected = session.expected_posterior().unwrap();
        let b_marginal = expected.marginalize(&scope(&["B"])).unwrap();
        assert_eq!(b_marginal.values()[0], 0.0);

        session.update_belief2(&[0, 1]).unwrap();
        let got = posterior_of(&session).marginalize(&scope(&["B"])).unwrap();
        assert!(got.values()[0].abs() < 1e-12);
        assert!((got.values()[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn matching_interface_marginals_leave_the_prior() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let shared = seeded_clique(&mut rng, &["B", "C", "D"]);
        let ones_f = PotentialTable::ones(scope(&["B", "F"]));
        let ones_g = PotentialTable::ones(scope(&["D", "G"]));
        let af = PotentialTable::ones(scope(&["A", "B"]));
        let a = JunctionTree::new(
            vec![
                ("A1".to_string(), shared.clone()),
                ("A2".to_string(), af),
            ],
            vec![("A1".to_string(), "A2".to_string())],
        )
        .unwrap();
        let b = JunctionTree::new(
            vec![
                ("B1".to_string(), shared),
                ("B2".to_string(), ones_f),
                ("B3".to_string(), ones_g),
            ],
            vec![
                ("B1".to_string(), "B2".to_string()),
                ("B1".to_string(), "B3".to_string()),
            ],
        )
        .unwrap();
        let interface = DSepset::between(scope(&["B", "C", "D"]), &a, &b).unwrap();
        let session = open_session(a, b, interface).unwrap();
        let expected = session.expected_posterior().unwrap();
        let prior = posterior_of(&session);
        assert!(expected.max_abs_diff(&prior).unwrap() < 1e-12);
    }
}
