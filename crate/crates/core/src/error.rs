use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Each variant maps onto one CLI exit class, see [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Tensor or array of the wrong size.
    #[error("shape error: {0}")]
    Shape(String),

    /// A Hopf *-algebra axiom fails beyond tolerance.
    #[error("axiom violation: {name} (residual {residual:.3e})")]
    Axiom { name: String, residual: f64 },

    /// The bi-invariance system for the Haar state does not have a unique solution.
    #[error("Haar state error: {0}")]
    Haar(String),

    /// Invalid multiplication table.
    #[error("group table error: {0}")]
    Table(String),

    /// Invalid metric or length function.
    #[error("metric error: {0}")]
    Metric(String),

    /// Corepresentation fails unitarity, comultiplicativity or irreducibility.
    #[error("corepresentation error: {0}")]
    Corep(String),

    /// The supplied irreducibles do not exhaust the algebra.
    #[error("completeness error: sum of squared dimensions {got} but algebra has dimension {want}")]
    Completeness { got: usize, want: usize },

    /// Two supplied irreducibles are equivalent.
    #[error("equivalent irreducibles {0} and {1}")]
    Equivalent(usize, usize),

    /// Unknown irrep index or empty selection.
    #[error("selection error: {0}")]
    Selection(String),

    /// A functional is not a state.
    #[error("state certification error: {0}")]
    State(String),

    /// A seminorm does not satisfy the structural requirements of its use.
    #[error("seminorm error: {0}")]
    Seminorm(String),

    /// Linear program unbounded: the seminorm has a kernel larger than the scalars.
    #[error("kernel error: {0}")]
    Kernel(String),

    /// A numerical certificate exceeded its tolerance.
    #[error("certification failure: {what} residual {residual:.3e} exceeds {tol:.1e}")]
    Certification { what: String, residual: f64, tol: f64 },

    /// Parameter out of its domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Configuration error (CLI or sweep config).
    #[error("config error: {0}")]
    Config(String),

    /// Operation not available for this algebra.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI: 2 validation, 3 configuration, 4 numeric certification.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Axiom { .. }
            | Error::Haar(_)
            | Error::Table(_)
            | Error::Metric(_)
            | Error::Corep(_)
            | Error::Completeness { .. }
            | Error::Equivalent(..)
            | Error::Shape(_) => 2,
            Error::Certification { .. } | Error::State(_) | Error::Kernel(_) => 4,
            Error::Parse(_)
            | Error::Selection(_)
            | Error::Seminorm(_)
            | Error::Domain(_)
            | Error::Config(_)
            | Error::Unsupported(_)
            | Error::Io(_) => 3,
        }
    }

    pub(crate) fn cert(what: impl Into<String>, residual: f64, tol: f64) -> Self {
        Error::Certification { what: what.into(), residual, tol }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
