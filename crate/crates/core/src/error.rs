use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by the process exit code the CLI maps them to, see
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {left} vs {right}")]
    OrderMismatch { left: u32, right: u32 },
    #[error("cyclotomic order must be positive, got {0}")]
    InvalidOrder(i64),
    #[error("cannot rescale from order {from} to order {to}: {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix does not have finite order dividing {0}")]
    NotFiniteOrder(u64),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("group too large or infinite: more than {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("not in SL(V): {0}")]
    NotSpecialLinear(String),
    #[error("age lemma violated: 2*age = {twice_age} but codim V^g = {codim}")]
    AgeLemmaViolated { twice_age: i64, codim: usize },
    #[error("degree bound {0} too small: no nonconstant invariant with positive value")]
    DegreeBoundTooSmall(usize),
    #[error("element index {index} out of range for group of order {order}")]
    ElementIndex { index: usize, order: usize },
    #[error("unknown corpus entry `{0}`")]
    UnknownCorpus(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group file: {0}")]
    InvalidGroupFile(String),
    #[error("internal invariant failed: {0}")]
    Corrupt(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code used by the `mckay` binary: 2 validation, 3 mathematical
    /// precondition, 4 resource cap, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::InvalidGroupFile(_)
            | Error::Json(_)
            | Error::UnknownCorpus(_)
            | Error::ElementIndex { .. }
            | Error::SingularGenerator(_)
            | Error::ShapeMismatch(_)
            | Error::InvalidOrder(_) => 2,
            Error::NotSpecialLinear(_)
            | Error::AgeLemmaViolated { .. }
            | Error::NotFiniteOrder(_)
            | Error::ZeroValuation
            | Error::DivisionByZero
            | Error::NotDivisible { .. }
            | Error::OrderMismatch { .. }
            | Error::DegreeBoundTooSmall(_) => 3,
            Error::GroupTooLarge { .. } => 4,
            Error::Corrupt(_) | Error::Io(_) => 1,
        }
    }
}
