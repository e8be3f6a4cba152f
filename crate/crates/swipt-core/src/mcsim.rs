//! Monte-Carlo estimation of the link metrics, used to cross-check the
//! analytic pipeline.
//!
//! Trials are split into fixed-size shards, each driven by its own
//! counter-mode RNG stream derived from the plan seed. Shards run in
//! parallel, but their partial sums are merged in shard order, so every
//! estimate is bit-identical across runs and thread counts.
//!
//! ASER is estimated semi-analytically: the conditional symbol-error
//! probability given the instantaneous SNR is a known kernel, so averaging
//! the kernel over sampled SNRs converges far faster than counting symbol
//! errors would.

use crate::error::{Error, Result};
use crate::model::{gamma_eq, ModulationScheme, UnifiedParams};
use crate::quad::gauss_legendre;
use crate::specfun::binomial;
use rand::distributions::OpenClosed01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Trials per RNG stream. Small enough to parallelize well, large enough
/// that per-shard overhead is negligible.
const SHARD_TRIALS: u64 = 1 << 16;

/// Everything needed to reproduce a simulation exactly.
#[derive(Debug, Clone, Copy)]
pub struct SimPlan {
    pub params: UnifiedParams,
    pub lambda_sr: f64,
    pub lambda_rd: f64,
    pub trials: u64,
    pub seed: u64,
}

impl SimPlan {
    fn validate(&self) -> Result<()> {
        if !(self.lambda_sr > 0.0) || !(self.lambda_rd > 0.0) {
            return Err(Error::domain(format!(
                "fading means must be positive, got lambda_sr={}, lambda_rd={}",
                self.lambda_sr, self.lambda_rd
            )));
        }
        if self.trials < 2 {
            return Err(Error::domain(format!(
                "need at least 2 trials for an error estimate, got {}",
                self.trials
            )));
        }
        if !(self.params.a_hat >= 0.0) || !(self.params.b_hat >= 0.0) || !(self.params.c > 0.0) {
            return Err(Error::domain(
                "unified parameters must satisfy a_hat >= 0, b_hat >= 0, c > 0",
            ));
        }
        Ok(())
    }
}

/// A simulated estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

/// Draw one end-to-end SNR. The per-hop gains are exponential with the
/// given means; sampling via −λ·ln U with U ∈ (0, 1] avoids ln(0).
pub fn sample_gamma_eq<R: Rng>(
    rng: &mut R,
    params: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
) -> f64 {
    let u1: f64 = rng.sample(OpenClosed01);
    let u2: f64 = rng.sample(OpenClosed01);
    let g_sr = -lambda_sr * u1.ln();
    let g_rd = -lambda_rd * u2.ln();
    gamma_eq(params, g_sr, g_rd)
}

/// Mean of `f(γ_eq)` over the plan's trials, with the sample standard
/// error. The kernel must be deterministic for reproducibility.
fn run_mean<F>(plan: &SimPlan, f: F) -> Result<SimEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    plan.validate()?;
    let shards = plan.trials.div_ceil(SHARD_TRIALS);
    let partials: Vec<(f64, f64)> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha12Rng::seed_from_u64(plan.seed);
            rng.set_stream(shard);
            let lo = shard * SHARD_TRIALS;
            let hi = ((shard + 1) * SHARD_TRIALS).min(plan.trials);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for _ in lo..hi {
                let v = f(sample_gamma_eq(&mut rng, &plan.params, plan.lambda_sr, plan.lambda_rd));
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq)
        })
        .collect();

    // Deterministic merge: shard order, not completion order.
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for (s, s2) in partials {
        sum += s;
        sumsq += s2;
    }
    let n = plan.trials as f64;
    let mean = sum / n;
    let var = ((sumsq - sum * sum / n) / (n - 1.0)).max(0.0);
    Ok(SimEstimate { mean, std_error: (var / n).sqrt(), trials: plan.trials })
}

/// Empirical outage probability P(γ_eq ≤ γ_th), with the binomial
/// standard error √(p(1−p)/N).
pub fn empirical_outage(plan: &SimPlan, gamma_th: f64) -> Result<SimEstimate> {
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::domain(format!("gamma_th must be positive, got {gamma_th}")));
    }
    let est = run_mean(plan, |g| if g <= gamma_th { 1.0 } else { 0.0 })?;
    let p = est.mean;
    let se = (p * (1.0 - p) / plan.trials as f64).sqrt();
    Ok(SimEstimate { mean: p, std_error: se, trials: est.trials })
}

/// Empirical MGF E[e^{−s·γ_eq}] at real s ≥ 0.
pub fn empirical_mgf(plan: &SimPlan, s: f64) -> Result<SimEstimate> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("MGF argument must be nonnegative, got {s}")));
    }
    run_mean(plan, |g| (-s * g).exp())
}

/// Empirical raw moment E[γ_eq^n].
pub fn empirical_moment(plan: &SimPlan, n: u32) -> Result<SimEstimate> {
    if n == 0 || n > crate::moments::MAX_MOMENT_ORDER {
        return Err(Error::domain(format!(
            "moment order must be in 1..={}, got {n}",
            crate::moments::MAX_MOMENT_ORDER
        )));
    }
    run_mean(plan, |g| g.powi(n as i32))
}

/// Nodes of the fixed rule used for the M-DPSK conditional-error kernel.
const DPSK_KERNEL_NODES: usize = 64;

/// Conditional symbol-error kernels: ASER = E[kernel(γ_eq)].
enum AserKernel {
    /// Σ (−1)^{m+1} C(M−1,m)/(m+1) · e^{−γ m/(m+1)}, precomputed as
    /// (coefficient, rate) pairs.
    Exponentials(Vec<(f64, f64)>),
    /// (1/π) ∫ e^{−γ·g/(1+√(1−g)·cos φ)} dφ as a fixed quadrature,
    /// precomputed as (weight/π, rate) pairs.
    Quadrature(Vec<(f64, f64)>),
}

impl AserKernel {
    fn new(modulation: ModulationScheme) -> Result<Self> {
        modulation.validate()?;
        match modulation {
            ModulationScheme::Fsk { m } => {
                let mut terms = Vec::with_capacity((m - 1) as usize);
                for k in 1..m {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    let coeff = sign * binomial(m - 1, k)? / (k as f64 + 1.0);
                    terms.push((coeff, k as f64 / (k as f64 + 1.0)));
                }
                Ok(AserKernel::Exponentials(terms))
            }
            // Binary DPSK collapses to a single exponential (g = 1).
            ModulationScheme::Dpsk { m: 2 } => Ok(AserKernel::Exponentials(vec![(0.5, 1.0)])),
            ModulationScheme::Dpsk { m } => {
                let g = (PI / m as f64).sin().powi(2);
                let root = (1.0 - g).sqrt();
                let upper = (m as f64 - 1.0) * PI / m as f64;
                let (nodes, weights) = gauss_legendre(DPSK_KERNEL_NODES);
                let terms = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| {
                        let phi = 0.5 * upper * (x + 1.0);
                        let rate = g / (1.0 + root * phi.cos());
                        (0.5 * upper * w / PI, rate)
                    })
                    .collect();
                Ok(AserKernel::Quadrature(terms))
            }
        }
    }

    fn eval(&self, g: f64) -> f64 {
        let terms = match self {
            AserKernel::Exponentials(t) | AserKernel::Quadrature(t) => t,
        };
        terms.iter().map(|&(c, rate)| c * (-rate * g).exp()).sum()
    }
}

/// Semi-analytic ASER: averages the conditional symbol-error kernel over
/// sampled SNRs.
pub fn semi_analytic_aser(plan: &SimPlan, modulation: ModulationScheme) -> Result<SimEstimate> {
    let kernel = AserKernel::new(modulation)?;
    run_mean(plan, |g| kernel.eval(g))
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;
    use crate::mgf::MgfFn;
    use crate::quad;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use num_complex::Complex64;

    /// b̂ → ∞ drives γ_eq → â·γ_sr, an exponential with mean â·λ_sr; with
    /// â = λ_sr = 1 every estimate has a textbook reference.
    fn exponential_limit_plan(trials: u64, seed: u64) -> SimPlan {
        SimPlan {
            params: UnifiedParams { a_hat: 1.0, b_hat: 1e12, psi: 1.0, sigma2_sr: 1.0, c: 2.0 },
            lambda_sr: 1.0,
            lambda_rd: 1.0,
            trials,
            seed,
        }
    }

    #[test]
    fn estimates_are_bit_identical_across_runs() {
        // Trials deliberately not a multiple of the shard size.
        let plan = exponential_limit_plan(100_000, 7);
        let a = empirical_outage(&plan, 1.0).unwrap();
        let b = empirical_outage(&plan, 1.0).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());

        let m1 = empirical_mgf(&plan, 1.0).unwrap();
        let m2 = empirical_mgf(&plan, 1.0).unwrap();
        assert_eq!(m1.mean.to_bits(), m2.mean.to_bits());
    }

    #[test]
    fn different_seeds_decorrelate() {
        let a = empirical_outage(&exponential_limit_plan(50_000, 1), 1.0).unwrap();
        let b = empirical_outage(&exponential_limit_plan(50_000, 2), 1.0).unwrap();
        assert_ne!(a.mean.to_bits(), b.mean.to_bits());
    }

    #[test]
    fn outage_matches_exponential_law() {
        let plan = exponential_limit_plan(200_000, 42);
        let est = empirical_outage(&plan, 1.0).unwrap();
        let want = 1.0 - (-1f64).exp();
        assert!(
            (est.mean - want).abs() <= 4.0 * est.std_error,
            "outage {} vs {} (SE {})",
            est.mean,
            want,
            est.std_error
        );
    }

    #[test]
    fn mgf_and_moments_match_exponential_law() {
        let plan = exponential_limit_plan(200_000, 11);
        let mgf = empirical_mgf(&plan, 1.0).unwrap();
        assert!((mgf.mean - 0.5).abs() <= 4.0 * mgf.std_error);
        let m1 = empirical_moment(&plan, 1).unwrap();
        assert!((m1.mean - 1.0).abs() <= 4.0 * m1.std_error);
        let m2 = empirical_moment(&plan, 2).unwrap();
        assert!((m2.mean - 2.0).abs() <= 4.0 * m2.std_error);
    }

    #[test]
    fn semi_analytic_bdpsk_matches_exponential_law() {
        let plan = exponential_limit_plan(200_000, 3);
        let est = semi_analytic_aser(&plan, ModulationScheme::Dpsk { m: 2 }).unwrap();
        // E[0.5·e^{−γ}] = 0.5·M(1) = 0.25 for a unit-mean exponential.
        assert!((est.mean - 0.25).abs() <= 4.0 * est.std_error);
    }

    #[test]
    fn kernels_average_to_the_mgf_formulas() {
        // For γ ~ Exp(1), E[kernel(γ)] must equal the ASER computed from
        // M(s) = 1/(1+s); the expectation is taken by quadrature, making
        // this a deterministic identity between the two code paths.
        let mgf = MgfFn(|s: Complex64| 1.0 / (1.0 + s));
        for modulation in [
            ModulationScheme::Fsk { m: 2 },
            ModulationScheme::Fsk { m: 8 },
            ModulationScheme::Dpsk { m: 2 },
            ModulationScheme::Dpsk { m: 4 },
            ModulationScheme::Dpsk { m: 8 },
        ] {
            let kernel = AserKernel::new(modulation).unwrap();
            let avg = quad::integrate(|g| kernel.eval(g) * (-g).exp(), 0.0, 46.0, 1e-12, 1e-12)
                .unwrap()
                .value;
            let reference = match modulation {
                ModulationScheme::Fsk { m } => metrics::aser_fsk(&mgf, m).unwrap(),
                ModulationScheme::Dpsk { m } => metrics::aser_dpsk(&mgf, m).unwrap(),
            };
            assert_relative_eq!(avg, reference, max_relative = 1e-8);
        }
    }

    #[test]
    fn degenerate_channel_is_always_in_outage() {
        let plan = SimPlan {
            params: UnifiedParams { a_hat: 0.0, b_hat: 1.0, psi: 1.0, sigma2_sr: 1.0, c: 1.0 },
            lambda_sr: 1.0,
            lambda_rd: 1.0,
            trials: 1_000,
            seed: 9,
        };
        let est = empirical_outage(&plan, 7.0).unwrap();
        assert_abs_diff_eq!(est.mean, 1.0);
        assert_abs_diff_eq!(est.std_error, 0.0);
    }

    #[test]
    fn plan_validation() {
        let mut plan = exponential_limit_plan(10, 0);
        plan.trials = 1;
        assert!(empirical_outage(&plan, 1.0).is_err());
        let mut plan = exponential_limit_plan(10, 0);
        plan.lambda_sr = 0.0;
        assert!(empirical_mgf(&plan, 1.0).is_err());
        let plan = exponential_limit_plan(10, 0);
        assert!(empirical_outage(&plan, -1.0).is_err());
        assert!(empirical_mgf(&plan, -0.5).is_err());
        assert!(empirical_moment(&plan, 0).is_err());
        assert!(empirical_moment(&plan, 21).is_err());
    }
}
