//! Analytic and simulation toolkit for dual-hop amplify-and-forward relay
//! links whose relay is powered by RF energy harvesting (SWIPT), detected
//! noncoherently with M-DPSK or M-FSK.
//!
//! Both harvesting protocols — time switching (a fraction β of each block
//! spent harvesting) and power splitting (a fraction θ of the received
//! power tapped off) — reduce to one unified end-to-end SNR
//!
//! ```text
//! γ_eq = â·b̂·γ_sr²·γ_rd / (b̂·γ_sr·γ_rd + C),
//! ```
//!
//! parameterized in [`model`]. Everything downstream works off that form:
//!
//! - [`moments`]: closed-form raw moments E[γ_eq^n] (Meijer G), with an
//!   independent double-quadrature oracle, average SNR and amount of fading;
//! - [`mgf`]: rational [X/X+1] MGF approximants fitted to the moments;
//! - [`metrics`]: outage via Euler-summation Laplace inversion of the MGF,
//!   delay-limited throughput, and average symbol error rates;
//! - [`asymptotics`]: high-SNR limits, their quadrature oracle, and
//!   diversity-order slope fits;
//! - [`mcsim`]: reproducible Monte-Carlo cross-checks;
//! - [`pipeline`]: one-call composition from a [`model::SystemConfig`] to a
//!   full metric report.
//!
//! The supporting numerics live in [`specfun`] (complex log-gamma,
//! Mellin–Barnes contour integration) and [`quad`] (adaptive
//! Gauss–Kronrod, Gauss–Legendre rules).
//!
//! All probabilities and SNRs are linear-scale internally; decibels are a
//! presentation-layer concern.

// Validation guards are written `!(x > 0.0)` rather than `x <= 0.0` on
// purpose: the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod mcsim;
pub mod metrics;
pub mod mgf;
pub mod model;
pub mod moments;
pub mod pipeline;
pub mod quad;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{ModulationScheme, ProtocolScheme, SystemConfig, UnifiedParams};
pub use pipeline::{point_report, AnalysisOptions, LinkAnalysis, PadeSelection, PointReport};
