use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },

    #[error("edge {index} has non-positive weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid CFI parameters k={k}, l={l} (need k >= 2 and 0 <= l <= k + 1)")]
    InvalidCfiParams { k: usize, l: usize },

    #[error("invalid generator parameters: {0}")]
    InvalidGeneratorParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported graph schema version {0} (expected 1)")]
    SchemaVersionMismatch(u64),

    #[error("candidate cycles span rank {rank}, cycle space has dimension {betti}")]
    RankDeficient { rank: usize, betti: usize },

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("rho family '{family}': {stage} returned {got} values, declared {expected}")]
    DimMismatch {
        family: String,
        stage: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("unknown rho family '{0}'")]
    UnknownFamily(String),

    #[error("graph has no node coordinates")]
    NoCoordinates,

    #[error("axis {axis} out of range for {dim}-dimensional coordinates")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("node {root} is out of range")]
    RootOutOfRange { root: usize },

    #[error("{count} nodes unreachable from root {root}")]
    UnreachableNodes { root: usize, count: usize },

    #[error("unknown encoder '{0}'")]
    UnknownEncoder(String),

    #[error("unknown property '{0}'")]
    UnknownProperty(String),

    #[error("encoder requires a filter: {0}")]
    MissingFilter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
