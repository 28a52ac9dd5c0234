use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("graph must have at least one node")]
    EmptyGraph,
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("k exceeds n (k = {k}, n = {n})")]
    KExceedsN { k: usize, n: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error("label vector has length {got}, expected {expected}")]
    LabelLength { expected: usize, got: usize },
    #[error("label {label} on node {node} exceeds cap {cap}")]
    LabelExceedsCap { node: usize, label: u32, cap: u32 },
    #[error("invalid radius {0}: must lie in (0, 1)")]
    InvalidRadius(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed edge list at line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}
