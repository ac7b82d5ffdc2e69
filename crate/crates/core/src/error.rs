use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("blocks `{a}` and `{b}` overlap")]
    Overlap { a: String, b: String },

    #[error("block `{0}` lies outside the bounding box")]
    OutOfBounds(String),

    #[error("block `{block}` has invalid geometry: {reason}")]
    InvalidGeometry { block: String, reason: String },

    #[error("duplicate block name `{0}`")]
    DuplicateBlock(String),

    #[error("net `{net}` references unknown block `{block}`")]
    UnknownBlock { net: String, block: String },

    #[error("net `{net}` has degree {degree}, at least 2 distinct blocks are required")]
    NetDegree { net: String, degree: usize },

    #[error("block `{0}` has no placement")]
    MissingPlacement(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("no block covers the {0} corner of the bounding box")]
    CornerUncovered(&'static str),

    #[error("blocks {blocks:?} all claim the {corner} corner")]
    CornerConflict {
        corner: &'static str,
        blocks: Vec<String>,
    },

    #[error("block adjacency graph contains a cycle through {0} vertices")]
    Cycle(usize),

    #[error("{0} vertices are unreachable from the source")]
    Unreachable(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("staircase boundary is malformed: {0}")]
    MalformedBoundary(String),

    #[error("staircase boundary is disconnected ({0} pieces)")]
    DisconnectedBoundary(usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("enumeration needs n <= {cap}, got n = {n}")]
    CapExceeded { n: usize, cap: usize },

    #[error("node `{path}`: {source}")]
    Node {
        path: String,
        #[source]
        source: Box<Error>,
    },

    #[error("routing region `{0}` has zero capacity")]
    ZeroCapacity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}
