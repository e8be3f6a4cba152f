//! Error taxonomy for the numerical pipeline.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish caller
//! mistakes (domain violations) from numerical failures (non-convergence,
//! ill-conditioning, pole proximity) so the CLI can map them to distinct
//! exit codes.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter violated a precondition (e.g. a ratio outside (0,1)).
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma evaluated at a nonpositive integer, where it has a pole.
    #[error("gamma pole at z = {0}")]
    GammaPole(f64),

    /// The Meijer G evaluator was asked for a parameter class it does not
    /// support (wrong pole configuration or an empty contour strip).
    #[error("unsupported Meijer G parameter class: {0}")]
    Unsupported(String),

    /// An iterative scheme failed to reach its tolerance.
    #[error("convergence failure in {context}: {detail}")]
    Convergence { context: &'static str, detail: String },

    /// A linear system was too ill-conditioned to trust.
    #[error("ill-conditioned system: {0}")]
    Conditioning(String),

    /// A rational MGF approximant was evaluated too close to one of its poles.
    #[error("MGF evaluated too close to a pole near s = {re}{im:+}i")]
    PoleProximity { re: f64, im: f64 },

    /// A statistic degenerated (e.g. a vanishing first moment in AoF).
    #[error("degenerate statistic: {0}")]
    Degenerate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence { context, detail: detail.into() }
    }

    pub(crate) fn pole_proximity(s: Complex64) -> Self {
        Error::PoleProximity { re: s.re, im: s.im }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
