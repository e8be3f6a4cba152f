//! High-SNR limits of outage, MGF, and ASER, plus the empirical diversity
//! order extracted from a slope fit.
//!
//! Three nested regimes are exposed. `FirstHopHigh` keeps the full
//! Mellin–Barnes form of the limiting distribution reached when the first
//! hop is noise-free; `BothHopsHigh` additionally expands that form for a
//! strong second hop, leaving a three-term bracket; `DominantTerm` keeps
//! only the slowest-decaying term of the bracket, which makes the
//! diversity order (1/2) readable directly off the exponent.
//!
//! Asymptotic probabilities are reported as computed — they may exceed 1
//! at low SNR, where the expansion has no business being accurate. The
//! `valid` flag marks the regime where the leading-order approximation is
//! trustworthy; callers decide whether to display flagged values.

use crate::error::{Error, Result};
use crate::metrics;
use crate::mgf::Mgf;
use crate::model::{ModulationScheme, UnifiedParams};
use crate::quad;
use crate::specfun::{gamma_real, meijer_g, MeijerGSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// First-hop mean SNR â·λ_sr above which the limiting distribution is a
/// good stand-in for the exact one (relative error well under 2%).
pub const VALIDITY_MIN_FIRST_HOP_SNR: f64 = 100.0;

/// Which level of high-SNR expansion to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticRegime {
    /// First hop noise-free; full limiting law.
    FirstHopHigh,
    /// Both hops strong; three-term expansion of the limiting law.
    BothHopsHigh,
    /// Slowest-decaying term only.
    DominantTerm,
}

/// An asymptotic value with its validity flag (see module docs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: f64,
    /// True when â·λ_sr ≥ [`VALIDITY_MIN_FIRST_HOP_SNR`].
    pub valid: bool,
}

fn check_fading(lambda_sr: f64, lambda_rd: f64) -> Result<()> {
    if !(lambda_sr > 0.0) || !(lambda_rd > 0.0) {
        return Err(Error::domain(format!(
            "fading means must be positive, got lambda_sr={lambda_sr}, lambda_rd={lambda_rd}"
        )));
    }
    Ok(())
}

fn in_validity_region(params: &UnifiedParams, lambda_sr: f64) -> bool {
    params.a_hat * lambda_sr >= VALIDITY_MIN_FIRST_HOP_SNR
}

/// Shared core of the outage asymptotics: everything depends on the single
/// combined argument Z = 4 λ_sr² λ_rd b̂ / γ_th.
fn outage_asym_value(z: f64, regime: AsymptoticRegime) -> Result<f64> {
    match regime {
        AsymptoticRegime::FirstHopHigh => {
            let spec = MeijerGSpec::new(0, 3, vec![0.0, 0.5, 1.0], vec![])?;
            Ok(1.0 - meijer_g(&spec, z)? / PI.sqrt())
        }
        AsymptoticRegime::BothHopsHigh => {
            let g_half = gamma_real(0.5)?;
            let g_neg_half = gamma_real(-0.5)?;
            let bracket = g_neg_half / z + g_half * g_neg_half / z.sqrt() + g_half;
            Ok(1.0 - bracket / PI.sqrt())
        }
        AsymptoticRegime::DominantTerm => {
            Ok(-gamma_real(0.5)? * gamma_real(-0.5)? / (PI * z).sqrt())
        }
    }
}

/// Asymptotic outage probability at threshold `gamma_th`.
pub fn outage_asym(
    params: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
    gamma_th: f64,
    regime: AsymptoticRegime,
) -> Result<AsymptoticValue> {
    check_fading(lambda_sr, lambda_rd)?;
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::domain(format!("gamma_th must be positive, got {gamma_th}")));
    }
    if !(params.b_hat > 0.0) {
        return Err(Error::domain(format!("b_hat must be positive, got {}", params.b_hat)));
    }
    let omega = 4.0 * lambda_sr * lambda_sr * lambda_rd / gamma_th;
    let value = outage_asym_value(omega * params.b_hat, regime)?;
    Ok(AsymptoticValue { value, valid: in_validity_region(params, lambda_sr) })
}

/// Integration cutoff for the oracle CDF, in units of the mean λ_sr;
/// the neglected tail is below e^{−46} ≈ 1e−20.
const ORACLE_CUTOFF: f64 = 46.0;

/// Independent check of the limiting-law outage: with the first hop
/// noise-free, γ_eq → b̂·X²·Y with X, Y the per-hop channel gains, so
///
/// ```text
/// P_out = 1 − (1/λ_sr) ∫_0^∞ e^{−γ/λ_sr} e^{−γ_th/(b̂ λ_rd γ²)} dγ,
/// ```
///
/// evaluated here by direct quadrature (as 1 − ∫ = ∫ e^{−x}(1 − e^{−k/x²})
/// to avoid cancellation when the outage is small). Accurate to better
/// than 1e−10 absolute; intended for tests and `validate` runs, not hot
/// paths.
pub fn outage_asym_oracle(
    params: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
    gamma_th: f64,
) -> Result<f64> {
    check_fading(lambda_sr, lambda_rd)?;
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::domain(format!("gamma_th must be positive, got {gamma_th}")));
    }
    if !(params.b_hat > 0.0) {
        return Err(Error::domain(format!("b_hat must be positive, got {}", params.b_hat)));
    }
    // x = γ/λ_sr; k collects every scale into the exponent.
    let k = gamma_th / (params.b_hat * lambda_rd * lambda_sr * lambda_sr);
    let integrand = |x: f64| (-x).exp() * -(-k / (x * x)).exp_m1();
    let q = quad::integrate(integrand, 0.0, ORACLE_CUTOFF, 1e-12, 1e-12)?;
    Ok(q.value)
}

/// Shared core of the MGF asymptotics with combined argument
/// y = 4 λ_sr² λ_rd b̂ s.
fn mgf_asym_value(y: f64, regime: AsymptoticRegime) -> Result<f64> {
    match regime {
        AsymptoticRegime::FirstHopHigh => {
            let spec = MeijerGSpec::new(1, 3, vec![0.0, 0.5, 1.0], vec![1.0])?;
            Ok(1.0 - meijer_g(&spec, y)? / PI.sqrt())
        }
        AsymptoticRegime::BothHopsHigh => {
            let g_half = gamma_real(0.5)?;
            let g_neg_half = gamma_real(-0.5)?;
            let g_three_half = gamma_real(1.5)?;
            let bracket =
                g_neg_half / y + g_half * g_neg_half * g_three_half / y.sqrt() + g_half;
            Ok(1.0 - bracket / PI.sqrt())
        }
        AsymptoticRegime::DominantTerm => {
            Ok(-gamma_real(0.5)? * gamma_real(-0.5)? * gamma_real(1.5)? / (PI * y).sqrt())
        }
    }
}

/// Asymptotic MGF M(s) of γ_eq at real s > 0.
pub fn mgf_asym(
    params: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
    s: f64,
    regime: AsymptoticRegime,
) -> Result<AsymptoticValue> {
    check_fading(lambda_sr, lambda_rd)?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("asymptotic MGF needs s > 0, got {s}")));
    }
    if !(params.b_hat > 0.0) {
        return Err(Error::domain(format!("b_hat must be positive, got {}", params.b_hat)));
    }
    let xi = 4.0 * lambda_sr * lambda_sr * lambda_rd;
    let value = mgf_asym_value(xi * params.b_hat * s, regime)?;
    Ok(AsymptoticValue { value, valid: in_validity_region(params, lambda_sr) })
}

/// Asymptotic MGF packaged as an [`Mgf`] evaluator so the ASER formulas in
/// [`metrics`] can consume it. Defined on the positive real axis only —
/// the ASER sums and quadratures never leave it.
#[derive(Debug, Clone)]
pub struct AsymptoticMgf {
    xi_b: f64,
    regime: AsymptoticRegime,
}

impl AsymptoticMgf {
    pub fn new(
        params: &UnifiedParams,
        lambda_sr: f64,
        lambda_rd: f64,
        regime: AsymptoticRegime,
    ) -> Result<Self> {
        check_fading(lambda_sr, lambda_rd)?;
        if !(params.b_hat > 0.0) {
            return Err(Error::domain(format!("b_hat must be positive, got {}", params.b_hat)));
        }
        Ok(AsymptoticMgf {
            xi_b: 4.0 * lambda_sr * lambda_sr * lambda_rd * params.b_hat,
            regime,
        })
    }
}

impl Mgf for AsymptoticMgf {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        if s.im != 0.0 {
            return Err(Error::Unsupported(
                "asymptotic MGF is defined on the positive real axis only".into(),
            ));
        }
        if !(s.re > 0.0) {
            return Err(Error::domain(format!(
                "asymptotic MGF needs s > 0, got {}",
                s.re
            )));
        }
        Ok(Complex64::new(mgf_asym_value(self.xi_b * s.re, self.regime)?, 0.0))
    }
}

/// Asymptotic ASER: the regime's MGF pushed through the exact ASER
/// formulas for the given modulation.
pub fn aser_asym(
    params: &UnifiedParams,
    lambda_sr: f64,
    lambda_rd: f64,
    modulation: ModulationScheme,
    regime: AsymptoticRegime,
) -> Result<AsymptoticValue> {
    modulation.validate()?;
    let mgf = AsymptoticMgf::new(params, lambda_sr, lambda_rd, regime)?;
    let value = match modulation {
        ModulationScheme::Fsk { m } => metrics::aser_fsk(&mgf, m)?,
        ModulationScheme::Dpsk { m } => metrics::aser_dpsk(&mgf, m)?,
    };
    Ok(AsymptoticValue { value, valid: in_validity_region(params, lambda_sr) })
}

/// Diversity order estimated as the least-squares slope of −log10(metric)
/// against SNR in decades (dB/10). Feed it points on the high-SNR tail;
/// mixing in low-SNR points flattens the fit.
pub fn diversity_order(snr_db: &[f64], values: &[f64]) -> Result<f64> {
    if snr_db.len() != values.len() {
        return Err(Error::domain(format!(
            "mismatched slope-fit inputs: {} SNR points vs {} values",
            snr_db.len(),
            values.len()
        )));
    }
    if snr_db.len() < 2 {
        return Err(Error::domain("slope fit needs at least two points"));
    }
    for (&x, &p) in snr_db.iter().zip(values) {
        if !x.is_finite() || !(p > 0.0) || !p.is_finite() {
            return Err(Error::domain(format!(
                "slope fit needs finite SNR and positive values, got ({x}, {p})"
            )));
        }
    }
    let xs: Vec<f64> = snr_db.iter().map(|db| db / 10.0).collect();
    let ys: Vec<f64> = values.iter().map(|p| -p.log10()).collect();
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::domain("slope fit needs distinct SNR points"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    Ok(sxy / sxx)
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn params_with_b_hat(a_hat: f64, b_hat: f64) -> UnifiedParams {
        UnifiedParams {
            a_hat,
            b_hat,
            psi: 1.0,
            sigma2_sr: 1.0,
            c: a_hat + 1.0,
        }
    }

    #[test]
    fn limiting_law_outage_reference_value() {
        // Unit fading means, b̂ = 1, γ_th = 7; reference from 30-digit
        // quadrature of the limiting-law CDF integral.
        let p = params_with_b_hat(1e4, 1.0);
        let r = outage_asym(&p, 1.0, 1.0, 7.0, AsymptoticRegime::FirstHopHigh).unwrap();
        assert_abs_diff_eq!(r.value, 0.9330550360410978, epsilon = 1e-10);
        assert!(r.valid);
    }

    #[test]
    fn limiting_law_outage_matches_oracle() {
        let cases = [(1.0, 7.0), (10.0, 7.0), (100.0, 3.0), (0.3, 1.0)];
        for (b_hat, gamma_th) in cases {
            let p = params_with_b_hat(1e4, b_hat);
            let mb = outage_asym(&p, 1.0, 1.5, gamma_th, AsymptoticRegime::FirstHopHigh)
                .unwrap()
                .value;
            let oracle = outage_asym_oracle(&p, 1.0, 1.5, gamma_th).unwrap();
            assert_abs_diff_eq!(mb, oracle, epsilon = 1e-8);
        }
    }

    #[test]
    fn outage_regimes_converge_at_high_snr() {
        let gamma_th = 7.0;
        let gap = |b_hat: f64| {
            let p = params_with_b_hat(1e6, b_hat);
            let full = outage_asym(&p, 1.0, 1.0, gamma_th, AsymptoticRegime::FirstHopHigh)
                .unwrap()
                .value;
            let both = outage_asym(&p, 1.0, 1.0, gamma_th, AsymptoticRegime::BothHopsHigh)
                .unwrap()
                .value;
            let dom = outage_asym(&p, 1.0, 1.0, gamma_th, AsymptoticRegime::DominantTerm)
                .unwrap()
                .value;
            let rel = |x: f64, y: f64| ((x - y) / y).abs();
            (rel(both, full), rel(dom, full))
        };
        let (b_lo, d_lo) = gap(1e4);
        let (b_hi, d_hi) = gap(1e8);
        assert!(b_hi < b_lo && d_hi < d_lo, "gaps must shrink: {b_lo}->{b_hi}, {d_lo}->{d_hi}");
        assert!(b_hi < 1e-2 && d_hi < 1e-2);
    }

    #[test]
    fn dominant_outage_closed_form() {
        // −Γ(1/2)Γ(−1/2)/√(πZ) simplifies to 2√π/√Z.
        let p = params_with_b_hat(1e4, 5.0);
        let r = outage_asym(&p, 1.0, 1.0, 7.0, AsymptoticRegime::DominantTerm).unwrap();
        let z: f64 = 4.0 / 7.0 * 5.0;
        assert_relative_eq!(r.value, 2.0 * PI.sqrt() / z.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn asymptote_flags_instead_of_clamping() {
        // Tiny b̂ pushes the expansion far outside its regime: the value
        // exceeds 1 and must be reported as-is with valid = false.
        let p = params_with_b_hat(1.0, 0.01);
        let r = outage_asym(&p, 1.0, 1.0, 7.0, AsymptoticRegime::DominantTerm).unwrap();
        assert!(r.value > 1.0);
        assert!(!r.valid);
    }

    #[test]
    fn validity_flag_threshold() {
        let at = |a_hat: f64| {
            outage_asym(
                &params_with_b_hat(a_hat, 1.0),
                1.0,
                1.0,
                7.0,
                AsymptoticRegime::FirstHopHigh,
            )
            .unwrap()
            .valid
        };
        assert!(at(100.0));
        assert!(at(250.0));
        assert!(!at(99.9));
    }

    #[test]
    fn mgf_asym_matches_laplace_transform_of_limiting_law() {
        // Independent oracle: M(s) = E[1/(1 + s b̂ λ_rd X²)] with X the
        // first-hop gain, by direct quadrature.
        let p = params_with_b_hat(1e4, 2.0);
        let (l_sr, l_rd) = (1.0, 1.5);
        for s in [0.5, 1.0, 3.0] {
            let mb = mgf_asym(&p, l_sr, l_rd, s, AsymptoticRegime::FirstHopHigh)
                .unwrap()
                .value;
            let oracle = quad::integrate(
                |x| (-x / l_sr).exp() / (1.0 + s * p.b_hat * l_rd * x * x) / l_sr,
                0.0,
                46.0 * l_sr,
                1e-12,
                1e-12,
            )
            .unwrap()
            .value;
            assert_relative_eq!(mb, oracle, max_relative = 1e-8);
        }
    }

    #[test]
    fn mgf_asym_limits() {
        let p = params_with_b_hat(1e4, 1.0);
        // s → 0⁺: the MGF must approach 1.
        let near_zero = mgf_asym(&p, 1.0, 1.0, 1e-8, AsymptoticRegime::FirstHopHigh)
            .unwrap()
            .value;
        assert_abs_diff_eq!(near_zero, 1.0, epsilon = 1e-5);
        // Nonincreasing in s.
        let mut prev = near_zero;
        for s in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let v = mgf_asym(&p, 1.0, 1.0, s, AsymptoticRegime::FirstHopHigh)
                .unwrap()
                .value;
            assert!(v <= prev + 1e-12, "MGF must not increase: {prev} -> {v} at s={s}");
            assert!(v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn mgf_regimes_converge_at_high_snr() {
        let s = 1.0;
        let gap = |b_hat: f64| {
            let p = params_with_b_hat(1e6, b_hat);
            let full = mgf_asym(&p, 1.0, 1.0, s, AsymptoticRegime::FirstHopHigh)
                .unwrap()
                .value;
            let both = mgf_asym(&p, 1.0, 1.0, s, AsymptoticRegime::BothHopsHigh)
                .unwrap()
                .value;
            let dom = mgf_asym(&p, 1.0, 1.0, s, AsymptoticRegime::DominantTerm)
                .unwrap()
                .value;
            let rel = |x: f64, y: f64| ((x - y) / y).abs();
            (rel(both, full), rel(dom, full))
        };
        let (b_lo, d_lo) = gap(1e4);
        let (b_hi, d_hi) = gap(1e8);
        assert!(b_hi < b_lo && d_hi < d_lo);
        assert!(b_hi < 1e-2 && d_hi < 1e-2);
    }

    #[test]
    fn dominant_mgf_closed_form() {
        // −Γ(1/2)Γ(−1/2)Γ(3/2)/√(πy) simplifies to π/√y.
        let p = params_with_b_hat(1e4, 3.0);
        let r = mgf_asym(&p, 1.0, 1.0, 2.0, AsymptoticRegime::DominantTerm).unwrap();
        let y: f64 = 4.0 * 3.0 * 2.0;
        assert_relative_eq!(r.value, PI / y.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn dominant_aser_has_half_order_slope() {
        // Under the dominant term, ASER ∝ 1/√b̂ exactly, so doubling b̂ in
        // dB must produce a slope of 1/2 on the diversity fit.
        let l = 1.0;
        let snr_db: Vec<f64> = (30..=50).step_by(5).map(|d| d as f64).collect();
        let asers: Vec<f64> = snr_db
            .iter()
            .map(|db| {
                // b̂ ∝ SNR for a fixed split; scale is irrelevant to the slope.
                let b_hat = 10f64.powf(db / 10.0);
                let p = params_with_b_hat(1e6, b_hat);
                aser_asym(&p, l, l, ModulationScheme::Dpsk { m: 2 }, AsymptoticRegime::DominantTerm)
                    .unwrap()
                    .value
            })
            .collect();
        let slope = diversity_order(&snr_db, &asers).unwrap();
        assert_abs_diff_eq!(slope, 0.5, epsilon = 1e-10);
    }

    #[test]
    fn aser_asym_binary_orderings_hold_in_regime() {
        // BDPSK beats BFSK (its effective SNR argument is twice as large).
        let p = params_with_b_hat(1e4, 50.0);
        let bdpsk = aser_asym(&p, 1.0, 1.0, ModulationScheme::Dpsk { m: 2 }, AsymptoticRegime::FirstHopHigh)
            .unwrap()
            .value;
        let bfsk = aser_asym(&p, 1.0, 1.0, ModulationScheme::Fsk { m: 2 }, AsymptoticRegime::FirstHopHigh)
            .unwrap()
            .value;
        assert!(bdpsk < bfsk, "BDPSK {bdpsk} should beat BFSK {bfsk}");
    }

    #[test]
    fn diversity_order_recovers_synthetic_slope() {
        let snr_db: Vec<f64> = (0..6).map(|i| 20.0 + 5.0 * i as f64).collect();
        let probs: Vec<f64> = snr_db.iter().map(|db| 3.7 * 10f64.powf(-0.5 * db / 10.0)).collect();
        let slope = diversity_order(&snr_db, &probs).unwrap();
        assert_abs_diff_eq!(slope, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn diversity_order_rejects_bad_inputs() {
        assert!(diversity_order(&[30.0], &[0.1]).is_err());
        assert!(diversity_order(&[30.0, 40.0], &[0.1]).is_err());
        assert!(diversity_order(&[30.0, 30.0], &[0.1, 0.1]).is_err());
        assert!(diversity_order(&[30.0, 40.0], &[0.1, -0.1]).is_err());
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        let p = params_with_b_hat(1e4, 1.0);
        assert!(outage_asym(&p, 1.0, 1.0, 0.0, AsymptoticRegime::FirstHopHigh).is_err());
        assert!(mgf_asym(&p, 1.0, 1.0, 0.0, AsymptoticRegime::FirstHopHigh).is_err());
        assert!(mgf_asym(&p, 1.0, 1.0, -1.0, AsymptoticRegime::DominantTerm).is_err());
        let bad = params_with_b_hat(1e4, 0.0);
        assert!(outage_asym(&bad, 1.0, 1.0, 7.0, AsymptoticRegime::FirstHopHigh).is_err());
    }
}
