use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("table shape mismatch: {0}")]
    TableShapeMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("unit witness fails the unit law: {0}")]
    BadUnitWitness(String),
    #[error("unknown example algebra {0:?}")]
    UnknownExample(String),
    #[error("ideal is the whole carrier, primality needs a proper ideal")]
    NotProper,
    #[error("algebra {0:?} has no unit witness")]
    NoUnitWitness(String),
    #[error("complement of {prime:?} is not multiplicatively closed: product of {tuple:?} with parameters {gammas:?} lands in the prime")]
    ComplementNotClosed {
        prime: Vec<usize>,
        tuple: Vec<usize>,
        gammas: Vec<usize>,
    },
    #[error("induced {operation} is not well-defined on fraction classes: representatives {left:?} and {right:?} give different classes")]
    WellDefinednessFailure {
        operation: String,
        left: Vec<(usize, usize)>,
        right: Vec<(usize, usize)>,
    },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("parameter semigroups differ")]
    GammaMismatch,
    #[error("construction would have {0} elements, above the cap of {1}")]
    SizeOverflow(u128, u128),
    #[error("point set {0:?} is not an open set of the topology")]
    NotOpen(Vec<usize>),
    #[error("{0:?} is not an open subset of the section's domain")]
    NotSubOpen(Vec<usize>),
    #[error("bi-module tables do not match the algebra: {0}")]
    ModuleShape(String),
    #[error("{0:?} is not closed under the ideal operations")]
    NotAnIdeal(Vec<usize>),
    #[error("sheaf data is inconsistent: {0}")]
    InconsistentSheaf(String),
}
