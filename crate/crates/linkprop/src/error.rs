use thiserror::Error;

/// Errors raised by table algebra, tree operations, and file handling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: scope has {expected} cells but {actual} values were given")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid entry at cell {index}: {value} (entries must be finite and >= 0)")]
    InvalidEntry { index: usize, value: f64 },

    #[error("variable {id} has cardinality {cardinality}, need at least 2")]
    BadCardinality { id: String, cardinality: usize },

    #[error("duplicate variable {id} in scope")]
    DuplicateVariable { id: String },

    #[error("variable {id} appears with cardinalities {left} and {right}")]
    CardinalityConflict {
        id: String,
        left: usize,
        right: usize,
    },

    #[error("scope mismatch: {left} vs {right}")]
    ScopeMismatch { left: String, right: String },

    #[error("{sub} is not a subset of {sup}")]
    NotSubset { sub: String, sup: String },

    #[error("inconsistent support: numerator {numerator} over zero denominator at {assignment}")]
    InconsistentSupport {
        numerator: f64,
        assignment: String,
    },

    #[error("cannot normalize a table with zero total mass")]
    ZeroMass,

    #[error("unknown clique {id}")]
    UnknownClique { id: String },

    #[error("no clique contains variable {id}")]
    UnknownVariable { id: String },

    #[error("unknown node {id}")]
    UnknownNode { id: String },

    #[error("{from} and {to} are not adjacent")]
    NotAdjacent { from: String, to: String },

    #[error("invalid junction tree: {reason}")]
    InvalidStructure { reason: String },

    #[error("subtree restriction is not connected or excludes the root")]
    SubtreeNotConnected,

    #[error("invalid propagation path: {reason}")]
    InvalidPath { reason: String },

    #[error("joint table would need {cells} cells, over the oracle limit {limit}")]
    OracleLimit { cells: usize, limit: usize },

    #[error("the d-sepset is empty")]
    EmptyInterface,

    #[error("d-sepset variable {id} does not occur in junction tree {tree}")]
    MissingInterfaceVariable { id: String, tree: String },

    #[error("peer cannot host linkage {scope}")]
    PeerCannotHost { scope: String },

    #[error("linkage tree covers {covered} but the d-sepset is {interface}")]
    InvalidLinkageCover { covered: String, interface: String },

    #[error("invalid weighted tree: {reason}")]
    InvalidTree { reason: String },

    #[error("node {id} is not a leaf")]
    NotALeaf { id: String },

    #[error("numbering is not a permutation of the tree nodes")]
    NotAPermutation,

    #[error("brute-force oracle limited to {limit} nodes, tree has {nodes}")]
    BruteForceTooLarge { nodes: usize, limit: usize },

    #[error("linkage order {order:?} is not consistent with the linkage tree")]
    InconsistentOrder { order: Vec<usize> },

    #[error("linkage index {index} out of range ({count} linkages)")]
    BadLinkageIndex { index: usize, count: usize },

    #[error("no update variant has run on this session")]
    NoReportYet,

    #[error("generator: {reason}")]
    Generator { reason: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {reason}")]
    FileValidation { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
