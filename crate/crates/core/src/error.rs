use thiserror::Error;

use crate::decomposition::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on `{0}`")]
    SelfLoop(String),

    #[error("invalid name `{0}`: names are non-empty tokens without whitespace or `#`")]
    BadName(String),

    #[error("duplicate copy-id `{0}` with conflicting originals")]
    DuplicateCopy(String),

    #[error("digraph has no vertices")]
    EmptyGraph,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown copy-id `{0}`")]
    UnknownCopy(String),

    #[error("{what} limit exceeded: {vertices} vertices, limit is {limit}")]
    LimitExceeded {
        what: &'static str,
        vertices: usize,
        limit: usize,
    },

    #[error("graph contains a directed cycle")]
    NotADag,

    #[error("digraph must consist of a single reachable fragment with more than one vertex")]
    NotSingleFragment,

    #[error("org is not surjective: vertex `{0}` has no copy")]
    OrgNotSurjective(String),

    #[error("copy `{copy}` maps to `{org}`, which is not a vertex of the digraph")]
    OrgOutsideGraph { copy: String, org: String },

    #[error("cannot merge `{a}` and `{b}`: they are copies of different vertices")]
    OrgMismatch { a: String, b: String },

    #[error("cannot merge a copy with itself (`{0}`)")]
    SelfMerge(String),

    #[error("merging `{a}` and `{b}` closes a directed cycle")]
    MergeCreatesCycle { a: String, b: String },

    #[error("decomposition is not valid for the digraph: {0}")]
    InvalidDecomposition(Box<Violation>),

    #[error("vertex sets differ")]
    VertexSetMismatch,

    #[error("turn {turn}: {reason}")]
    IllegalMove { turn: usize, reason: String },

    #[error("malformed trace at event {index}: {reason}")]
    BadTrace { index: usize, reason: String },

    #[error("bad parameters: {0}")]
    BadParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
