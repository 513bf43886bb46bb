use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced anywhere in the analysis pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate {axis} name: {name}")]
    DuplicateName { axis: &'static str, name: String },
    #[error("value {token:?} at row {row:?}, column {col:?} is outside the {schema} domain")]
    SchemaViolation {
        row: String,
        col: String,
        token: String,
        schema: &'static str,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("empty after filtering: {rows} rows x {cols} columns survive")]
    EmptyAfterFiltering { rows: usize, cols: usize },
    #[error("row not found: {0}")]
    RowNotFound(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("zero total variance: all rows are identical")]
    ZeroVariance,
    #[error("coincident points: {0}; deduplicate or jitter the input")]
    CoincidentPoints(String),
    #[error("eigensolver did not converge (off-diagonal residual {residual:e})")]
    NonConvergent { residual: f64 },
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("resource limit: {what} exceeds the configured cap of {limit} (counted at least {count})")]
    ResourceLimit {
        what: &'static str,
        limit: usize,
        count: usize,
    },
    #[error("radius grid too coarse: {components} components remain at the last grid value; use more steps or a larger radius")]
    GridTooCoarse { components: usize },
    #[error("leaf sets differ: only in first {only_first:?}, only in second {only_second:?}")]
    LeafMismatch {
        only_first: Vec<String>,
        only_second: Vec<String>,
    },
    #[error("newick parse error at byte {pos}: {msg}")]
    Newick { pos: usize, msg: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
