use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("element {element} out of range for a universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("congruences belong to different algebras")]
    AlgebraMismatch,

    #[error("not a congruence: {0}")]
    NotACongruence(CongruenceViolation),

    #[error("{what} budget of {limit} exceeded after exploring {explored}")]
    BudgetExceeded {
        what: &'static str,
        limit: u64,
        explored: u64,
    },

    #[error("targets {i} and {j} violate the system condition (pair not in the join)")]
    SystemCondition { i: usize, j: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a vector space: {0}")]
    NotAVectorSpace(String),

    #[error("unsupported scalar field of order {0} (prime fields only)")]
    UnsupportedField(usize),

    #[error("not a distributive nearlattice: {0}")]
    NotANearlattice(String),

    #[error("projection onto factors {i},{j} is neither full nor a cross")]
    NotDualDiscriminator { i: usize, j: usize },

    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid interpretation: {0}")]
    Interpretation(String),

    #[error("degenerate formula: {0}")]
    DegenerateFormula(String),

    #[error("formula is not a 3SAT' instance: {0}")]
    NotThreeSatPrime(String),

    #[error("assignment is not a model: {0}")]
    NotAModel(String),

    #[error("invalid parameters: {0}")]
    Parameters(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("classification failure: {0}")]
    ClassificationFailure(String),

    #[error("routing failure: {0}")]
    Routing(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Evidence that a partition is not compatible with some operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceViolation {
    pub op: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub images: (usize, usize),
}

impl std::fmt::Display for CongruenceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "operation {} maps related ({}) and ({}) to unrelated {} and {}",
            self.op,
            join(&self.left),
            join(&self.right),
            self.images.0,
            self.images.1
        )
    }
}
