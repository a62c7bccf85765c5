use thiserror::Error;

/// Errors raised by the asymmetry toolkit.
///
/// Messages name the violated invariant so that callers (and the CLI) can
/// report it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid representation: {0}")]
    InvalidRep(String),

    #[error("group mismatch: operands are defined over different groups")]
    GroupMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("label mismatch: {0}")]
    LabelMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("pure-only: {0} requires pure states (reductions do not decide mixed-state equivalence)")]
    PureOnly(&'static str),

    #[error("tolerance error: {0}")]
    Tolerance(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("invalid characteristic function: {0}")]
    InvalidCharFunction(String),

    #[error("not an invariant isometry: {0}")]
    NotInvariantIsometry(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("non-endomorphic channel: d_in = {d_in}, d_out = {d_out}; embed it first")]
    NonEndomorphic { d_in: usize, d_out: usize },

    #[error("invalid input format: {0}")]
    Format(String),
}

impl Error {
    /// True for failures caused by floating-point degeneracy rather than
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalDegeneracy(_))
    }

    pub(crate) fn dim(expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { expected, got }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
