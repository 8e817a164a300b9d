use thiserror::Error;

use crate::vector::SparseVec;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus not prime: {0}")]
    NotPrime(u64),

    #[error("unknown field `{0}` (expected GF(p) or Q)")]
    UnknownField(String),

    #[error("cannot parse scalar `{text}` over {field}")]
    BadScalar { text: String, field: String },

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("edge `{0}` is not in the ground set")]
    OutsideGround(String),

    #[error("sets must be disjoint, both contain `{0}`")]
    Overlap(String),

    #[error("not orthogonal: {0}")]
    NotOrthogonal(String),

    #[error("covectors are orthogonal to the vectors but not their full complement (dim V = {dim_v}, dim W = {dim_w}, |E| = {ground})")]
    NotComplement {
        dim_v: usize,
        dim_w: usize,
        ground: usize,
    },

    #[error("element `{0}` is already in the ground set")]
    StarPresent(String),

    #[error("vector is not a member of the subspace: {0}")]
    NotAVector(String),

    #[error("{what}: needs {needed}, cap is {cap}")]
    CapExceeded { what: String, needed: u64, cap: u64 },

    #[error("operation requires a finite field: {0}")]
    InfiniteField(String),

    #[error("invalid tree of presentations: {0}")]
    InvalidTree(String),

    #[error("invalid star: {0}")]
    InvalidStar(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("game has a cycle reachable from the start through `{0}`")]
    Cycle(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("strategy is not winning: {0}")]
    NotWinning(String),

    #[error("hypothesis fails: {detail}")]
    Hypothesis {
        detail: String,
        witness: Option<SparseVec>,
    },

    #[error("not a matroid: {0}")]
    NotMatroid(String),

    #[error("set systems are not matroidal: {0}")]
    NotMatroidal(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    pub(crate) fn cap(what: impl Into<String>, needed: u64, cap: u64) -> Self {
        Error::CapExceeded {
            what: what.into(),
            needed,
            cap,
        }
    }
}
