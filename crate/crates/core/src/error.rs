use thiserror::Error;

/// Errors produced by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain size must be at least 1")]
    EmptyDomain,
    #[error("relation {index} is empty")]
    EmptyRelation { index: usize },
    #[error("relation {index}: entry {value} is outside the domain 0..{domain_size}")]
    EntryOutOfDomain {
        index: usize,
        value: usize,
        domain_size: usize,
    },
    #[error("relation {index}: tuple of length {found} in a relation of arity {expected}")]
    InconsistentArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("relation arity must be at least 1")]
    ZeroArity,
    #[error("expected a single ternary relation")]
    NotTernary,
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("source does not map homomorphically to target; not a template")]
    NotATemplate,
    #[error("operation requires the source structure 1in3")]
    SourceNotOneInThree,
    #[error("unknown template name `{0}`")]
    UnknownTemplate(String),
    #[error("template family `{name}` needs a size parameter k >= 2 (got {k})")]
    BadTemplateParameter { name: String, k: usize },
    #[error("target domain of size {0} is too large (at most 32 supported)")]
    TargetTooLarge(usize),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("arity must be at least 1")]
    ZeroArityFunction,
    #[error("arity {requested} exceeds the configured bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("value {value} is outside the target domain 0..{target_size}")]
    ValueOutOfRange { value: usize, target_size: usize },
    #[error("table cell {0} is unassigned")]
    PartialTable(usize),
    #[error("coloring does not cover variable {0}")]
    PartialColoring(usize),
    #[error("block size {0} is not divisible by 3")]
    BlockNotDivisible(usize),
    #[error("expected a structure on a domain of size {expected}, found {found}")]
    WrongDomainSize { expected: usize, found: usize },
    #[error("relation is not closed under coordinate permutations")]
    NotSymmetric,
    #[error("neither NAE nor T2 maps to the target; no relaxation route")]
    NoRelaxation,
    #[error("instance needs at least 3 variables to sample distinct indices (got {0})")]
    TooFewVariables(usize),
    #[error("variable index {index} out of range 1..={count}")]
    VariableOutOfRange { index: usize, count: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
