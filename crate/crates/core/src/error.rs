//! Error taxonomy shared by every module.
//!
//! Two families matter downstream: user/input errors (invalid arguments,
//! unsupported parameter ranges) and numerical diagnostics (a computation ran
//! but detected that a mathematical hypothesis fails, e.g. an admissibility
//! violation). The CLI maps the former to exit code 2 and the latter to 3.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A boundary or density evaluation produced a non-finite value.
    #[error("evaluation failure at theta = {theta}: {detail}")]
    Evaluation { theta: f64, detail: String },

    /// Parameters outside the supported range (q <= 1, |x0| >= R0, ...).
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    /// Malformed call arguments (bad grid size, bad branch index, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An angle left the branch interval on which a stationary map is defined.
    #[error("branch violation: {0}")]
    BranchViolation(String),

    /// The unique-root guarantee for a stationary branch failed numerically.
    #[error("admissibility violation: {0}")]
    AdmissibilityViolation(String),

    /// A stationary point with |det D^2 psi| below the degeneracy threshold.
    #[error("degenerate stationary point: {0}")]
    DegenerateStationaryPoint(String),

    /// Input outside an operation's structural precondition.
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// Spectral differentiation detected aliasing; the caller must refine.
    #[error("refine grid: {0}")]
    RefineGrid(String),

    /// Special-function evaluation outside the certified range.
    #[error("range error: {0}")]
    Range(String),
}

impl Error {
    /// True for errors that indicate misuse of the API rather than a
    /// mathematical diagnostic discovered during a valid computation.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedParameter(_)
                | Error::InvalidArgument(_)
                | Error::UnsupportedInput(_)
                | Error::Range(_)
        )
    }
}
