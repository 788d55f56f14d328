use thiserror::Error;

/// Errors shared across the crate.
///
/// Validation failures (bad input, unsupported shapes) and resource aborts
/// are kept in one enum so pipeline stages can propagate them unchanged.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    // -- base arithmetic --
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("zero form has no primitive part")]
    ZeroForm,
    #[error("resultant vanished identically: the cycle shares a factor with the correspondence")]
    DegenerateResultant,
    #[error("base substitution t -> u(t) requires deg u >= 1")]
    ConstantSubstitution,
    #[error("division by zero in {0}")]
    DivisionByZero(&'static str),

    // -- parsing --
    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("exponent must be a literal natural number at {line}:{col}")]
    NonLiteralExponent { line: usize, col: usize },

    // -- dynamics validation --
    #[error("output coordinate is not multihomogeneous: {0}")]
    InhomogeneousForm(String),
    #[error("unsupported block structure: {0}")]
    MixedBlockUnsupported(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("point has an all-zero coordinate tuple in factor {0}")]
    AllZeroCoordinates(usize),
    #[error("expected {expected} coordinates, found {found}")]
    WrongArity { expected: usize, found: usize },

    // -- evaluation / spectral --
    #[error("morphism undefined at the point: factor {0} evaluated to the zero tuple")]
    IndeterminatePoint(usize),
    #[error("an irreducible factor of the characteristic polynomial has roots on both sides of the unit circle; the invariant splitting is irrational")]
    UnsupportedSplit,
    #[error("no expanding eigenvalue: kappa <= 1, the canonical height does not exist")]
    NotExpanding,
    #[error("E+ is trivial; no vector canonical height")]
    EmptyEplus,
    #[error("no linear recurrence of order <= {0} fits the sequence")]
    NoRecurrenceFound(usize),

    // -- enumeration --
    #[error("enumeration of {0} points exceeds the configured limit {1}")]
    EnumerationTooLarge(u128, u64),
    #[error("bounded-height enumeration requires a finite base field")]
    RationalsNotEnumerable,
    #[error("a power of the pullback action fixes a non-torsion class: {0}")]
    HypothesisFailed(String),

    // -- resource guards --
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    // -- cli --
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 for validation errors, 3 for
    /// resource aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit(_) | Error::EnumerationTooLarge(..) => 3,
            _ => 2,
        }
    }

    /// Short machine-readable code for the CLI error record.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not-prime",
            Error::ZeroForm => "zero-form",
            Error::DegenerateResultant => "degenerate-resultant",
            Error::ConstantSubstitution => "constant-substitution",
            Error::DivisionByZero(_) => "division-by-zero",
            Error::SyntaxError { .. } => "syntax",
            Error::UnknownVariable { .. } => "unknown-variable",
            Error::NonLiteralExponent { .. } => "non-literal-exponent",
            Error::InhomogeneousForm(_) => "inhomogeneous-form",
            Error::MixedBlockUnsupported(_) => "mixed-block-unsupported",
            Error::SpaceMismatch(_) => "space-mismatch",
            Error::AllZeroCoordinates(_) => "all-zero-coordinates",
            Error::WrongArity { .. } => "wrong-arity",
            Error::IndeterminatePoint(_) => "indeterminate-point",
            Error::UnsupportedSplit => "unsupported-split",
            Error::NotExpanding => "not-expanding",
            Error::EmptyEplus => "empty-eplus",
            Error::NoRecurrenceFound(_) => "no-recurrence",
            Error::EnumerationTooLarge(..) => "enumeration-too-large",
            Error::RationalsNotEnumerable => "rationals-not-enumerable",
            Error::HypothesisFailed(_) => "hypothesis-failed",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Usage(_) => "usage",
            Error::Io(_) => "io",
        }
    }
}
