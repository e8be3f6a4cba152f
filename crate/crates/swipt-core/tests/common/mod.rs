//! Brute-force oracles shared by the integration tests: direct quadrature of
//! the defining probability integrals, independent of the moment/Padé/Euler
//! pipeline they are used to check.

#![allow(dead_code)]

use swipt_core::model::{gamma_eq, ModulationScheme, UnifiedParams};
use swipt_core::quad;

/// Integration cutoff in units of the channel mean; the neglected tail
/// carries weight below e^{-60} ≈ 9e-27.
const CUTOFF: f64 = 60.0;

/// Number of geometric panels used to resolve integrands that spike near the
/// lower endpoint (at high SNR the probability mass concentrates in a region
/// ~2^{-24} of the integration interval, far below what a single adaptive
/// pass starting from one coarse segment reliably detects).
const PANELS: i32 = 28;

/// Adaptive quadrature over [a, b] on geometric panels refining toward `a`.
fn panel_integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let width = b - a;
    let mut total = 0.0;
    let mut lo = a;
    for k in (0..=PANELS).rev() {
        let hi = if k == 0 { b } else { a + width * (0.5f64).powi(k) };
        total += quad::integrate(&f, lo, hi, 0.0, rel_tol)
            .expect("oracle panel quadrature failed")
            .value;
        lo = hi;
    }
    total
}

/// Outage probability by direct integration.
///
/// Conditioning on the first-hop gain x, the event γ_eq ≤ γ_th reads
/// b̂·x·y·(â·x − γ_th) ≤ γ_th·C. For â·x ≤ γ_th it holds for every y
/// (the ceiling â·γ_sr is already below threshold); otherwise it caps the
/// second-hop gain at y*(x) = γ_th·C / (b̂·x·(â·x − γ_th)). With both gains
/// exponential this leaves a single smooth integral over x.
pub fn outage_oracle(p: &UnifiedParams, lambda_sr: f64, lambda_rd: f64, gamma_th: f64) -> f64 {
    let x0 = gamma_th / p.a_hat;
    let below = -(-x0 / lambda_sr).exp_m1();
    let tail = panel_integrate(
        |x| {
            let y_star = gamma_th * p.c / (p.b_hat * x * (p.a_hat * x - gamma_th));
            -(-y_star / lambda_rd).exp_m1() * (-x / lambda_sr).exp() / lambda_sr
        },
        x0,
        x0 + CUTOFF * lambda_sr,
        1e-11,
    );
    below + tail
}

/// MGF by nested quadrature of E[e^{−s·γ_eq}] over both channel gains.
pub fn mgf_oracle(p: &UnifiedParams, lambda_sr: f64, lambda_rd: f64, s: f64) -> f64 {
    let params = *p;
    panel_integrate(
        |x| {
            let inner = panel_integrate(
                |y| (-s * gamma_eq(&params, x, y)).exp() * (-y / lambda_rd).exp() / lambda_rd,
                0.0,
                CUTOFF * lambda_rd,
                1e-10,
            );
            inner * (-x / lambda_sr).exp() / lambda_sr
        },
        0.0,
        CUTOFF * lambda_sr,
        1e-9,
    )
}

/// ASER of the exact SNR law: the analytic ASER formulas fed with the
/// quadrature MGF instead of the Padé reconstruction. The DPSK angular
/// integral uses a fixed high-order rule so the expensive MGF oracle is
/// evaluated a bounded number of times; the integrand is smooth, so the
/// rule is exact far beyond the oracle's own accuracy.
pub fn aser_oracle(
    p: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
    modulation: ModulationScheme,
) -> f64 {
    match modulation {
        ModulationScheme::Fsk { m } => {
            let mut sum = 0.0;
            let mut binom = 1.0;
            for k in 1..m {
                binom *= (m - k) as f64 / k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let kf = k as f64;
                sum += sign * binom / (kf + 1.0)
                    * mgf_oracle(p, lambda_sr, lambda_rd, kf / (kf + 1.0));
            }
            sum
        }
        ModulationScheme::Dpsk { m } => {
            let mf = f64::from(m);
            let g = (std::f64::consts::PI / mf).sin().powi(2);
            let upper = (mf - 1.0) * std::f64::consts::PI / mf;
            let (nodes, weights) = quad::gauss_legendre(64);
            let mut sum = 0.0;
            for (x, w) in nodes.iter().zip(&weights) {
                let phi = 0.5 * upper * (x + 1.0);
                let s = g / (1.0 + (1.0 - g).sqrt() * phi.cos());
                sum += w * mgf_oracle(p, lambda_sr, lambda_rd, s);
            }
            sum * 0.5 * upper / std::f64::consts::PI
        }
    }
}

/// Three binomial standard errors for a proportion estimated from `trials`.
pub fn three_se(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
