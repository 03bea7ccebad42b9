use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("no image given for generator {0}")]
    MissingImage(usize),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("coset table is partial")]
    PartialTable,
    #[error("coset {0} is not live")]
    DeadCoset(usize),
    #[error("degree {degree} exceeds the configured bound {bound}")]
    DegreeBound { degree: usize, bound: usize },
    #[error("word does not lie in the subgroup")]
    NotInSubgroup,
    #[error("subgroup presentation not simplified to commutator form: {0}")]
    Unproven(String),
    #[error("basis words are not a basis (determinant {0})")]
    NotABasis(String),
    #[error("singular matrix")]
    Singular,
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("order exceeds cap {0}")]
    OrderCap(u64),
    #[error("incomplete presentation: {0}")]
    IncompletePresentation(String),
    #[error("invalid Euler characteristic input: {0}")]
    EulerInput(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
