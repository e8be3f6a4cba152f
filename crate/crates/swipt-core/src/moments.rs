//! Moments of the end-to-end SNR: closed form and brute-force oracle.
//!
//! The n-th moment of γ_eq admits a closed form in terms of a Meijer
//! G-function,
//!
//! ```text
//! μ_n = â^n · C · λ_sr^{n−1} / (b̂ · λ_rd · Γ(n)) ·
//!       G^{1,3}_{3,1}( b̂·λ_sr·λ_rd / C | 1, 1−n, 2 ; n+1 ),
//! ```
//!
//! while the defining double integral over the two exponential channel
//! densities serves as an independent oracle. ASNR (the mean SNR) and the
//! amount of fading μ₂/μ₁² − 1 are thin wrappers.

use crate::error::{Error, Result};
use crate::model::{gamma_eq, UnifiedParams};
use crate::quad;
use crate::specfun::{meijer_g, MeijerGSpec};
use std::cell::Cell;

/// Moments beyond this order are refused: Γ(n) growth makes the values
/// useless for the downstream Hankel-type solve and the quadrature oracle
/// loses all relative accuracy.
pub const MAX_MOMENT_ORDER: u32 = 20;

/// Relative tolerance of the quadrature oracle.
const ORACLE_REL_TOL: f64 = 1e-9;
/// Integration cutoff per axis, in units of the channel mean; extended
/// automatically (with a tail bound check) when the moment order pushes
/// integrand mass past it.
const ORACLE_CUTOFF: f64 = 40.0;

/// A request for the n-th moment of γ_eq under given link statistics.
#[derive(Debug, Clone, Copy)]
pub struct MomentRequest {
    pub params: UnifiedParams,
    pub lambda_sr: f64,
    pub lambda_rd: f64,
    pub n: u32,
}

impl MomentRequest {
    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::domain("moment order n must be >= 1 (mu_0 = 1 by convention)"));
        }
        if self.n > MAX_MOMENT_ORDER {
            return Err(Error::domain(format!(
                "moment order {} exceeds the supported cap {MAX_MOMENT_ORDER}",
                self.n
            )));
        }
        if !(self.lambda_sr > 0.0) || !(self.lambda_rd > 0.0) {
            return Err(Error::domain("channel means must be positive"));
        }
        Ok(())
    }
}

/// Γ(n) = (n−1)! for the prefactor; exact in f64 products up to the cap.
fn gamma_int(n: u32) -> f64 {
    (1..n).fold(1.0, |acc, k| acc * k as f64)
}

/// Closed-form n-th moment of γ_eq.
pub fn moment_closed_form(req: &MomentRequest) -> Result<f64> {
    req.validate()?;
    let p = &req.params;
    let n = req.n as f64;
    let z = p.b_hat * req.lambda_sr * req.lambda_rd / p.c;
    let spec = MeijerGSpec::new(1, 3, vec![1.0, 1.0 - n, 2.0], vec![n + 1.0])?;
    let g = meijer_g(&spec, z)?;
    let prefactor = p.a_hat.powi(req.n as i32) * p.c * req.lambda_sr.powi(req.n as i32 - 1)
        / (p.b_hat * req.lambda_rd * gamma_int(req.n));
    Ok(prefactor * g)
}

/// Upper incomplete gamma Γ(n+1, u) = n! e^{−u} Σ_{k≤n} u^k/k!, used by the
/// oracle's tail bound (n integer).
fn upper_gamma_int(n: u32, u: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=n {
        term *= u / k as f64;
        sum += term;
    }
    gamma_int(n + 1) * (-u).exp() * sum
}

/// Brute-force oracle: nested adaptive quadrature of the defining double
/// integral ∬ γ_eq(x,y)^n f_sr(x) f_rd(y) dx dy.
pub fn moment_quadrature(req: &MomentRequest) -> Result<f64> {
    req.validate()?;
    let p = req.params;
    let (ls, lr) = (req.lambda_sr, req.lambda_rd);
    let n = req.n;

    let mut cutoff = ORACLE_CUTOFF;
    for _ in 0..4 {
        let (x_max, y_max) = (cutoff * ls, cutoff * lr);
        let inner_err: Cell<Option<Error>> = Cell::new(None);
        let outer = quad::integrate(
            |x| {
                let inner = quad::integrate(
                    |y| gamma_eq(&p, x, y).powi(n as i32) * (-y / lr).exp() / lr,
                    0.0,
                    y_max,
                    0.0,
                    ORACLE_REL_TOL * 1e-2,
                );
                match inner {
                    Ok(r) => r.value * (-x / ls).exp() / ls,
                    Err(e) => {
                        inner_err.set(Some(e));
                        f64::NAN
                    }
                }
            },
            0.0,
            x_max,
            0.0,
            ORACLE_REL_TOL,
        );
        if let Some(e) = inner_err.take() {
            return Err(e);
        }
        let est = outer?.value;

        // Tail bounds from γ_eq ≤ â·γ_sr: the neglected x-tail is at most
        // â^n E[X^n 1_{X>x_max}] and the y-tail at most â^n E[X^n] P(Y>y_max).
        let a_n = p.a_hat.powi(n as i32);
        let tail_x = a_n * ls.powi(n as i32) * upper_gamma_int(n, x_max / ls);
        let tail_y = a_n * ls.powi(n as i32) * gamma_int(n + 1) * (-y_max / lr).exp();
        if tail_x + tail_y <= 1e-9 * est.abs() {
            return Ok(est);
        }
        cutoff *= 2.0;
    }
    Err(Error::convergence(
        "moment_quadrature",
        format!("tail bound still significant at cutoff {cutoff} channel means (n = {n})"),
    ))
}

/// Average SNR: the first moment μ₁.
pub fn asnr(params: &UnifiedParams, lambda_sr: f64, lambda_rd: f64) -> Result<f64> {
    moment_closed_form(&MomentRequest { params: *params, lambda_sr, lambda_rd, n: 1 })
}

/// Amount of fading, μ₂/μ₁² − 1 (normalized SNR variance).
pub fn aof(params: &UnifiedParams, lambda_sr: f64, lambda_rd: f64) -> Result<f64> {
    let mu1 = moment_closed_form(&MomentRequest { params: *params, lambda_sr, lambda_rd, n: 1 })?;
    let mu2 = moment_closed_form(&MomentRequest { params: *params, lambda_sr, lambda_rd, n: 2 })?;
    if mu1 < 1e-150 {
        return Err(Error::Degenerate(format!(
            "first moment {mu1:.3e} too small for a meaningful AoF"
        )));
    }
    Ok(mu2 / (mu1 * mu1) - 1.0)
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
