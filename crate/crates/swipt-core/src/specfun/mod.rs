//! Special functions underpinning the analytic pipeline: the complex
//! log-gamma function and a Mellin–Barnes evaluator for the Meijer G
//! functions that appear in the closed-form moments and high-SNR limits.

mod gamma;
mod meijer;

pub use gamma::{binomial, gamma_complex, gamma_real, ln_gamma};
pub use meijer::{meijer_g, meijer_g_with_abscissa, MeijerGSpec};
