use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("hyperedge {hyperedge}: vertex {vertex} is both an input and an output")]
    Overlap { hyperedge: usize, vertex: usize },
    #[error("hyperedge {hyperedge} has neither inputs nor outputs")]
    EmptyHyperedge { hyperedge: usize },
    #[error("vertex {vertex} has degree zero")]
    IsolatedVertex { vertex: usize },
    #[error("{what} index {index} out of range (size {size})")]
    Index {
        what: &'static str,
        index: usize,
        size: usize,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("function is identically zero")]
    ZeroFunction,
    #[error("{what}: size {size} exceeds the exhaustive limit {limit} (request heuristic mode)")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid (k,l)-family: {0}")]
    InvalidFamily(String),
    #[error("degenerate (k,l)-family: k = l = {0}")]
    Degenerate(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("empty hyperedge subset")]
    EmptySubset,
    #[error("hypergraph has output vertices (hyperedge {0}); an inputs-only hypergraph is required")]
    NotInputsOnly(usize),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
