use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: vertex {vertex} out of range for {order} vertices")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        order: usize,
    },

    #[error("line {line}: loop declared on vertex {vertex}")]
    Loop { line: usize, vertex: usize },

    #[error("line {line}: arc {from} -> {to} declared twice")]
    DuplicateArc { line: usize, from: usize, to: usize },

    #[error("product of order {requested} exceeds the vertex budget of {budget}")]
    CapacityExceeded { requested: usize, budget: usize },

    #[error("invalid path word: {0}")]
    InvalidWord(String),

    #[error("not a bounded path: {0}")]
    NotAPath(String),

    #[error("height mismatch: {left} vs {right}")]
    HeightMismatch { left: usize, right: usize },

    #[error("invalid mountain sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("min-order of the empty sum is undefined")]
    EmptySum,

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
