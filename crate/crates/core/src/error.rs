use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row {row} has {found} fields but the schema has {expected}")]
    RaggedRow {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("attribute `{0}` appears more than once in the schema")]
    DuplicateAttribute(String),
    #[error("input has no columns")]
    EmptyInput,
    #[error("malformed delimited input: {0}")]
    Malformed(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("tuple index {index} is out of range for a table of {len} tuples")]
    BadIndex { index: usize, len: usize },
    #[error("tuple has {found} values but the schema has {expected}")]
    ArityMismatch { found: usize, expected: usize },
    #[error("key attribute set is empty")]
    EmptyKey,
    #[error("attribute set is empty")]
    EmptyAttributeSet,
    #[error("key system has no keys")]
    EmptyKeySystem,
    #[error("key system lists the key {0} twice")]
    DuplicateKey(String),
    #[error("search gave up after {cap} nodes")]
    Exhausted { cap: u64 },
    #[error("instance too large for exhaustive enumeration ({count} > cap {cap})")]
    SizeGuard { count: u128, cap: u128 },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
}
