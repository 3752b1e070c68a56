use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("shape mismatch for `{field}`: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        field: String,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error("non-finite entry in `{0}`")]
    NonFinite(String),
    #[error("unknown module `{0}`")]
    UnknownModule(String),
    #[error("singular bilinear form on {0}")]
    SingularForm(&'static str),
    #[error("bad index specification: {0}")]
    BadIndexSpec(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constraint family `{0}`")]
    UnknownFamily(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
