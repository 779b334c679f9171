use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },

    #[error("invalid edge {{{u}, {v}}} for a graph on {n} vertices")]
    InvalidEdge { u: usize, v: usize, n: usize },

    /// The sampler only works with strictly more than three colors per unit of degree.
    #[error("instance rejected: k={k} ≤ 3Δ={bound} (need k > 3Δ, Δ={delta})", bound = 3 * *delta as u64)]
    InstanceRejected { k: u32, delta: u32 },

    #[error("cannot draw from an empty complement: universe {k}, {excluded} excluded")]
    EmptyComplement { k: u32, excluded: usize },

    #[error("contract precondition violated: |S_L(v)|={s} is not < k-Δ={bound} (k={k}, Δ={delta})", bound = *k as i64 - *delta as i64)]
    ContractPrecondition { s: u32, k: u32, delta: u32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed update tuple: {0}")]
    MalformedTuple(String),

    #[error("lazy real exhausted its {0}-bit budget without resolving a comparison")]
    EntropyExhausted(usize),

    #[error("coloring has {got} entries, graph has {expected} vertices")]
    ColoringSize { expected: usize, got: usize },

    #[error("color {color} at vertex {vertex} is outside 1..={k}")]
    ColorOutOfRange { vertex: usize, color: u32, k: u32 },

    #[error("enumeration guard exceeded: k^n = {k}^{n} > {limit}")]
    GuardExceeded { k: u32, n: usize, limit: u64 },

    #[error("oracle precondition violated: {0}")]
    OraclePrecondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
