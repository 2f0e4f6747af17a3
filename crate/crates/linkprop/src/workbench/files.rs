//! JSON documents for weighted trees and junction tree pairs.
//!
//! Both formats are canonical: fields keep a fixed order, lists are
//! written in the order the in-memory structures report them (which is
//! already sorted), and numbers use the shortest decimal form that
//! round-trips. Saving what was just loaded reproduces the input byte
//! for byte.
//!
//! A tree document holds `nodes` (an id plus a `host` flag that
//! defaults to true when omitted) and weighted `edges`. A pair
//! document holds the variable catalog, the two junction trees
//! (cliques with sorted variable lists and their belief values, edges
//! as id pairs) and the shared variable list. Belief values are laid
//! out with the last variable of the clique changing fastest.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::junction::JunctionTree;
use crate::linkage::DSepset;
use crate::potential::{PotentialTable, Scope, Variable};
use crate::propagation::CostReport;
use crate::tour::WeightedTree;

fn default_host() -> bool {
    true
}

/// One node of a tree document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNodeRecord {
    pub id: String,
    #[serde(default = "default_host")]
    pub host: bool,
}

/// One weighted edge of a tree document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEdgeRecord {
    pub u: String,
    pub v: String,
    pub weight: f64,
}

/// Serialized form of a [`WeightedTree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeFile {
    pub nodes: Vec<TreeNodeRecord>,
    pub edges: Vec<TreeEdgeRecord>,
}

impl TreeFile {
    pub fn from_tree(tree: &WeightedTree) -> TreeFile {
        TreeFile {
            nodes: tree
                .node_ids()
                .map(|id| TreeNodeRecord {
                    id: id.to_string(),
                    host: tree.is_host(id).expect("listed node id"),
                })
                .collect(),
            edges: tree
                .edges()
                .into_iter()
                .map(|(u, v, weight)| TreeEdgeRecord {
                    u: u.to_string(),
                    v: v.to_string(),
                    weight,
                })
                .collect(),
        }
    }

    pub fn into_tree(&self) -> Result<WeightedTree> {
        WeightedTree::new(
            self.nodes.iter().map(|n| (n.id.clone(), n.host)).collect(),
            self.edges
                .iter()
                .map(|e| (e.u.clone(), e.v.clone(), e.weight))
                .collect(),
        )
    }
}

/// One row of the variable catalog in a pair document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableRecord {
    pub id: String,
    pub cardinality: usize,
}

/// One clique of a pair document. `values` lists the belief table with
/// the last variable in `vars` changing fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueRecord {
    pub id: String,
    pub vars: Vec<String>,
    pub values: Vec<f64>,
}

/// One junction tree inside a pair document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeSection {
    pub cliques: Vec<CliqueRecord>,
    pub edges: Vec<(String, String)>,
}

/// Serialized form of a junction tree pair and its shared variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFile {
    pub variables: Vec<VariableRecord>,
    pub jt_a: TreeSection,
    pub jt_b: TreeSection,
    pub dsepset: Vec<String>,
}

impl PairFile {
    pub fn from_parts(a: &JunctionTree, b: &JunctionTree, interface: &DSepset) -> PairFile {
        let mut catalog: BTreeMap<String, usize> = BTreeMap::new();
        for tree in [a, b] {
            for var in tree.universe().vars() {
                catalog.insert(var.id().to_string(), var.cardinality());
            }
        }
        PairFile {
            variables: catalog
                .into_iter()
                .map(|(id, cardinality)| VariableRecord { id, cardinality })
                .collect(),
            jt_a: section_of(a),
            jt_b: section_of(b),
            dsepset: interface.vars().ids().map(str::to_string).collect(),
        }
    }

    pub fn into_parts(&self) -> Result<(JunctionTree, JunctionTree, DSepset)> {
        let mut catalog: BTreeMap<&str, Variable> = BTreeMap::new();
        for record in &self.variables {
            if catalog.contains_key(record.id.as_str()) {
                return Err(Error::DuplicateVariable {
                    id: record.id.clone(),
                });
            }
            let var = Variable::new(&record.id, record.cardinality)?;
            catalog.insert(record.id.as_str(), var);
        }
        let a = build_tree(&self.jt_a, &catalog)?;
        let b = build_tree(&self.jt_b, &catalog)?;
        let mut shared = Vec::new();
        for id in &self.dsepset {
            let var = catalog
                .get(id.as_str())
                .cloned()
                .ok_or_else(|| Error::UnknownVariable { id: id.clone() })?;
            shared.push(var);
        }
        let interface = DSepset::between(Scope::new(shared)?, &a, &b)?;
        Ok((a, b, interface))
    }
}

fn section_of(tree: &JunctionTree) -> TreeSection {
    TreeSection {
        cliques: tree
            .clique_ids()
            .map(|id| {
                let table = tree.belief(id).expect("listed clique id");
                CliqueRecord {
                    id: id.to_string(),
                    vars: table.scope().ids().map(str::to_string).collect(),
                    values: table.values().to_vec(),
                }
            })
            .collect(),
        edges: tree
            .edges()
            .map(|key| {
                let (x, y) = key.ends();
                (x.to_string(), y.to_string())
            })
            .collect(),
    }
}

fn build_tree(section: &TreeSection, catalog: &BTreeMap<&str, Variable>) -> Result<JunctionTree> {
    let mut cliques = Vec::new();
    for record in &section.cliques {
        let mut layout = Vec::new();
        for id in &record.vars {
            let var = catalog
                .get(id.as_str())
                .cloned()
                .ok_or_else(|| Error::UnknownVariable { id: id.clone() })?;
            layout.push(var);
        }
        let table = PotentialTable::new(layout, record.values.clone())?;
        cliques.push((record.id.clone(), table));
    }
    let edges = section
        .edges
        .iter()
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    JunctionTree::new(cliques, edges)
}

/// Cost report row in the shape the tools print as JSON. The order is
/// one-based here, matching the command line convention.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub variant: String,
    pub order: Vec<usize>,
    pub coordination_passes: u64,
    pub finalization_passes: u64,
    pub payload_entries: u64,
    pub weighted_cost: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
}

impl ReportFile {
    pub fn new(report: &CostReport, max_deviation: Option<f64>) -> ReportFile {
        ReportFile {
            variant: report.variant.clone(),
            order: report.order.iter().map(|i| i + 1).collect(),
            coordination_passes: report.coordination_passes,
            finalization_passes: report.finalization_passes,
            payload_entries: report.payload_entries,
            weighted_cost: report.weighted_cost,
            max_deviation,
        }
    }

    pub fn render_json(&self) -> String {
        render(self)
    }
}

fn render<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("document types serialize");
    text.push('\n');
    text
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_error(path: &Path, err: &serde_json::Error) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

fn validation_error(path: &Path, err: Error) -> Error {
    Error::FileValidation {
        path: path.display().to_string(),
        reason: err.to_string(),
    }
}

/// Reads a weighted tree document.
pub fn load_tree(path: impl AsRef<Path>) -> Result<WeightedTree> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: TreeFile = serde_json::from_str(&text).map_err(|e| parse_error(path, &e))?;
    file.into_tree().map_err(|e| validation_error(path, e))
}

/// Writes a weighted tree document.
pub fn save_tree(path: impl AsRef<Path>, tree: &WeightedTree) -> Result<()> {
    let path = path.as_ref();
    write(path, &render(&TreeFile::from_tree(tree)))
}

/// Reads a junction tree pair document.
pub fn load_pair(path: impl AsRef<Path>) -> Result<(JunctionTree, JunctionTree, DSepset)> {
    let path = path.as_ref();
    let text = read(path)?;
    let file: PairFile = serde_json::from_str(&text).map_err(|e| parse_error(path, &e))?;
    file.into_parts().map_err(|e| validation_error(path, e))
}

/// Writes a junction tree pair document.
pub fn save_pair(
    path: impl AsRef<Path>,
    a: &JunctionTree,
    b: &JunctionTree,
    interface: &DSepset,
) -> Result<()> {
    let path = path.as_ref();
    write(path, &render(&PairFile::from_parts(a, b, interface)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::open_session;
    use crate::workbench::fixtures;

    fn temp_path(name: &str) -> std::path::PathBuf {
        let mut dir = std::env::temp_dir();
        dir.push(format!("linkprop-files-{}-{name}", std::process::id()));
        dir
    }

    #[test]
    fn tree_round_trip_is_byte_identical() {
        let tree = fixtures::fig7_tree();
        let path = temp_path("tree.json");
        save_tree(&path, &tree).unwrap();
        let first = fs::read_to_string(&path).unwrap();
        let loaded = load_tree(&path).unwrap();
        save_tree(&path, &loaded).unwrap();
        let second = fs::read_to_string(&path).unwrap();
        fs::remove_file(&path).unwrap();
        assert_eq!(first, second);
        assert!(first.ends_with('\n'));
        assert_eq!(loaded.total_weight(), tree.total_weight());
    }

    #[test]
    fn pair_round_trip_is_byte_identical() {
        let (a, b, interface) = fixtures::pair2l();
        let path = temp_path("pair.json");
        save_pair(&path, &a, &b, &interface).unwrap();
        let first = fs::read_to_string(&path).unwrap();
        let (la, lb, li) = load_pair(&path).unwrap();
        save_pair(&path, &la, &lb, &li).unwrap();
        let second = fs::read_to_string(&path).unwrap();
        fs::remove_file(&path).unwrap();
        assert_eq!(first, second);
        open_session(la, lb, li).unwrap();
    }

    #[test]
    fn host_flag_defaults_to_true() {
        let text = r#"{
            "nodes": [{"id": "a"}, {"id": "b", "host": false}],
            "edges": [{"u": "a", "v": "b", "weight": 3.0}]
        }"#;
        let file: TreeFile = serde_json::from_str(text).unwrap();
        let tree = file.into_tree().unwrap();
        assert!(tree.is_host("a").unwrap());
        assert!(!tree.is_host("b").unwrap());
    }

    #[test]
    fn malformed_json_reports_position() {
        let path = temp_path("broken.json");
        fs::write(&path, "{\n  \"nodes\": [\n").unwrap();
        let err = load_tree(&path).unwrap_err();
        fs::remove_file(&path).unwrap();
        match err {
            Error::Parse { line, .. } => assert!(line >= 2),
            other => panic!("expected a parse error, got {other}"),
        }
    }

    #[test]
    fn missing_file_is_an_io_error() {
        let err = load_tree(temp_path("does-not-exist.json")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn undefined_clique_variable_fails_validation() {
        let (a, b, interface) = fixtures::pair2l();
        let mut file = PairFile::from_parts(&a, &b, &interface);
        file.jt_a.cliques[0].vars[0] = "ghost".into();
        let path = temp_path("badvar.json");
        fs::write(&path, render(&file)).unwrap();
        let err = load_pair(&path).unwrap_err();
        fs::remove_file(&path).unwrap();
        match err {
            Error::FileValidation { reason, .. } => assert!(reason.contains("ghost")),
            other => panic!("expected a validation error, got {other}"),
        }
    }

    #[test]
    fn wrong_value_count_fails_validation() {
        let (a, b, interface) = fixtures::pair2l();
        let mut file = PairFile::from_parts(&a, &b, &interface);
        file.jt_b.cliques[0].values.pop();
        let path = temp_path("badlen.json");
        fs::write(&path, render(&file)).unwrap();
        let err = load_pair(&path).unwrap_err();
        fs::remove_file(&path).unwrap();
        assert!(matches!(err, Error::FileValidation { .. }));
    }

    #[test]
    fn report_orders_are_one_based() {
        let (a, b, interface) = fixtures::pair2l();
        let mut session = open_session(a, b, interface).unwrap();
        let order = session.default_order();
        let report = session.update_belief3(&order).unwrap();
        let row = ReportFile::new(&report, Some(0.0));
        assert_eq!(row.order, vec![1, 2]);
        let text = row.render_json();
        assert!(text.contains("\"max_deviation\": 0.0"));
        let none = ReportFile::new(&report, None).render_json();
        assert!(!none.contains("max_deviation"));
    }
}
