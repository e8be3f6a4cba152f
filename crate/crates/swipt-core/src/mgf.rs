//! MGF reconstruction from moments via subdiagonal Padé approximants.
//!
//! The MGF M(s) = E[e^{−sγ}] has the formal power series Σ (−1)^n μ_n s^n/n!.
//! A subdiagonal [X/X+1] Padé approximant to that series converges to the
//! MGF as X grows and — unlike the truncated series — decays at infinity,
//! which is what the Laplace-inversion-based outage computation needs.
//!
//! Conditioning matters more than algebra here: the raw Hankel-type system
//! is hopeless once μ_n spans many decades, so the series is first rescaled
//! to u = s·μ₁ (making the scaled moments O(n!)) and the small linear system
//! is solved with full pivoting. A built approximant is only returned after
//! (a) its re-expanded Taylor coefficients reproduce the inputs and (b) a
//! denominator root scan finds no pole threatening the evaluation region.

use crate::error::{Error, Result};
use crate::model::UnifiedParams;
use crate::moments::{moment_closed_form, MomentRequest};
use num_complex::Complex64;

/// Default numerator order X of the [X/X+1] approximant (W = 2X+1 moments).
pub const DEFAULT_PADE_ORDER: usize = 7;
/// Real evaluation range screened against denominator roots, in s units.
const EVAL_S_MAX: f64 = 20.0;
/// Re-expansion of the fitted approximant must match each input Taylor
/// coefficient to this relative tolerance.
const SELF_CHECK_REL: f64 = 1e-8;
/// Two successive Padé orders must agree to this absolute tolerance on
/// s ∈ [0, 5] for the adaptive builder to accept.
const ADAPTIVE_ABS: f64 = 1e-4;

/// Moments μ_0..μ_W of a nonnegative random variable, with μ_0 = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSeries {
    mu: Vec<f64>,
}

impl MomentSeries {
    /// Wraps a raw moment list; `mu[0]` must be 1 and all entries positive.
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() || mu[0] != 1.0 {
            return Err(Error::domain("moment series must start with mu_0 = 1"));
        }
        if mu.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
            return Err(Error::domain("all moments must be positive and finite"));
        }
        Ok(MomentSeries { mu })
    }

    /// Computes μ_0..μ_w of γ_eq from the closed form.
    pub fn from_params(
        params: &UnifiedParams,
        lambda_sr: f64,
        lambda_rd: f64,
        w: u32,
    ) -> Result<Self> {
        let mut mu = Vec::with_capacity(w as usize + 1);
        mu.push(1.0);
        for n in 1..=w {
            mu.push(moment_closed_form(&MomentRequest { params: *params, lambda_sr, lambda_rd, n })?);
        }
        MomentSeries::new(mu)
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    /// Taylor coefficients c_n = (−1)^n μ_n / n! of the MGF series.
    pub fn taylor_coeffs(&self) -> Vec<f64> {
        let mut fact = 1.0;
        self.mu
            .iter()
            .enumerate()
            .map(|(n, &m)| {
                if n > 0 {
                    fact *= n as f64;
                }
                if n % 2 == 0 {
                    m / fact
                } else {
                    -m / fact
                }
            })
            .collect()
    }
}

/// Rational [X/X+1] MGF approximant in the scaled variable u = scale·s.
///
/// `x` holds the X+1 numerator coefficients (x[0] = 1 since μ_0 = 1) and
/// `y` the X+1 denominator coefficients beyond the fixed constant term 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    x: Vec<f64>,
    y: Vec<f64>,
    scale: f64,
}

/// Solves A·w = rhs by Gaussian elimination with full pivoting.
///
/// Sizes here are at most ~10×10, so robustness beats speed; full pivoting
/// keeps the elimination stable even when the Hankel structure makes the
/// matrix nearly singular.
#[allow(clippy::needless_range_loop)] // elimination reads row k while updating row r
fn solve_full_pivot(mut a: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Result<Vec<f64>> {
    let n = rhs.len();
    let mut col_perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // Locate the largest remaining entry.
        let (mut pr, mut pc, mut pv) = (k, k, 0.0f64);
        for (r, row) in a.iter().enumerate().skip(k) {
            for (c, &v) in row.iter().enumerate().skip(k) {
                if v.abs() > pv {
                    (pr, pc, pv) = (r, c, v.abs());
                }
            }
        }
        if pv < 1e-280 {
            return Err(Error::Conditioning(
                "singular system in Padé fit; try a smaller order X".into(),
            ));
        }
        a.swap(k, pr);
        rhs.swap(k, pr);
        if pc != k {
            for row in a.iter_mut() {
                row.swap(k, pc);
            }
            col_perm.swap(k, pc);
        }
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            for c in k..n {
                a[r][c] -= f * a[k][c];
            }
            rhs[r] -= f * rhs[k];
        }
    }
    // Back substitution, then undo the column permutation.
    let mut w = vec![0.0; n];
    for k in (0..n).rev() {
        let mut v = rhs[k];
        for c in k + 1..n {
            v -= a[k][c] * w[c];
        }
        w[k] = v / a[k][k];
    }
    let mut out = vec![0.0; n];
    for (slot, &col) in col_perm.iter().enumerate() {
        out[col] = w[slot];
    }
    Ok(out)
}

/// All roots of a real polynomial (coefficients low -> high) via the
/// Durand-Kerner simultaneous iteration.
fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = *c.last().unwrap();
    let monic: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &ck in monic.iter().rev() {
            acc = acc * z + ck;
        }
        acc
    };
    // Standard non-real, non-unit starting spread.
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..200 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step < 1e-13 {
            break;
        }
    }
    roots
}

/// True when a denominator root endangers evaluation on the nonnegative
/// real axis: positive real part, nearly real, and within the screened
/// range (u = scale·s with s up to `EVAL_S_MAX`).
fn is_threatening_pole(root: Complex64, scale: f64) -> bool {
    root.re > 0.0
        && root.re <= EVAL_S_MAX * scale.max(1.0)
        && root.im.abs() < 0.5 * (1.0 + root.re)
}

/// Builds the [X/X+1] approximant from μ_0..μ_{2X+1}.
///
/// Falls back to successively smaller orders if the denominator root scan
/// finds a pole inside the evaluation region; errors out if even X = 0 is
/// rejected or the system is too ill-conditioned at every order.
pub fn build_pade(mu: &MomentSeries, x_order: usize) -> Result<PadeApproximant> {
    let mut last_err = None;
    for x in (0..=x_order).rev() {
        match build_pade_exact_order(mu, x) {
            Ok(p) => return Ok(p),
            // Conditioning covers both a numerically singular fit and a
            // rejected pole screen; both improve with a smaller order.
            Err(e @ Error::Conditioning(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Conditioning("no Padé order accepted".into())))
}

/// Single-order builder: no fallback.
fn build_pade_exact_order(mu: &MomentSeries, x_order: usize) -> Result<PadeApproximant> {
    let w = 2 * x_order + 1;
    if mu.len() < w + 1 {
        return Err(Error::domain(format!(
            "order X={x_order} needs {} moments (mu_0..mu_{w}), got {}",
            w + 1,
            mu.len()
        )));
    }
    let scale = mu.mu()[1];
    if !(scale > 0.0) {
        return Err(Error::domain("mu_1 must be positive to set the Padé scale"));
    }
    // Taylor coefficients of the scaled series: fitting in u = s·mu_1 keeps
    // every c_k within a few orders of 1/k!.
    let scaled = MomentSeries::new(
        mu.mu()[..=w]
            .iter()
            .enumerate()
            .map(|(k, &m)| m / scale.powi(k as i32))
            .collect(),
    )?;
    let c = scaled.taylor_coeffs();

    let ydim = x_order + 1;
    // Power-matching at orders X+1..X+Y+1 gives Y equations
    //   Σ_{i=1..Y} y_i c_{k−i} = −c_k.
    let mut a = vec![vec![0.0; ydim]; ydim];
    let mut rhs = vec![0.0; ydim];
    for (row, k) in (x_order + 1..=x_order + ydim).enumerate() {
        for i in 1..=ydim {
            a[row][i - 1] = if k >= i { c[k - i] } else { 0.0 };
        }
        rhs[row] = -c[k];
    }
    let y = solve_full_pivot(a, rhs)?;

    // Numerator by convolution through order X.
    let mut x = Vec::with_capacity(x_order + 1);
    for k in 0..=x_order {
        let mut v = c[k];
        for i in 1..=k.min(ydim) {
            v += y[i - 1] * c[k - i];
        }
        x.push(v);
    }

    let approx = PadeApproximant { x, y, scale };

    // Self-check: the approximant's own Taylor expansion must reproduce the
    // input coefficients through order W.
    let t = approx.taylor_expansion(w);
    for k in 0..=w {
        let denom = c[k].abs().max(1e-300);
        if (t[k] - c[k]).abs() > SELF_CHECK_REL * denom {
            return Err(Error::Conditioning(format!(
                "re-expanded coefficient {k} off by {:.2e} (relative); try a smaller order X",
                (t[k] - c[k]).abs() / denom
            )));
        }
    }

    // Pole screen on the denominator 1 + y_1 u + … + y_Y u^Y.
    let mut den_coeffs = vec![1.0];
    den_coeffs.extend_from_slice(&approx.y);
    if polynomial_roots(&den_coeffs)
        .into_iter()
        .any(|r| is_threatening_pole(r, scale))
    {
        return Err(Error::Conditioning(format!(
            "denominator pole inside the evaluation region at order X={x_order}; try a smaller order"
        )));
    }

    Ok(approx)
}

/// Raises X from 2 until two successive orders agree to `ADAPTIVE_ABS` on
/// s ∈ [0, 5], or the moment budget / conditioning stops the climb (the
/// last order that built successfully is then returned).
pub fn build_pade_adaptive(mu: &MomentSeries) -> Result<PadeApproximant> {
    let x_max = (mu.len().saturating_sub(2)) / 2; // W = 2X+1 ≤ len−1
    let mut prev: Option<PadeApproximant> = None;
    for x in 2..=x_max {
        let cur = match build_pade_exact_order(mu, x) {
            Ok(p) => p,
            Err(Error::Conditioning(_)) => {
                return prev.ok_or_else(|| {
                    Error::Conditioning("conditioning failure before any order converged".into())
                })
            }
            Err(e) => return Err(e),
        };
        if let Some(p) = &prev {
            let mut agree = true;
            for i in 0..=50 {
                let s = 5.0 * i as f64 / 50.0;
                let d = (p.eval(Complex64::new(s, 0.0))?.re
                    - cur.eval(Complex64::new(s, 0.0))?.re)
                    .abs();
                if d > ADAPTIVE_ABS {
                    agree = false;
                    break;
                }
            }
            if agree {
                return Ok(cur);
            }
        }
        prev = Some(cur);
    }
    prev.ok_or_else(|| Error::domain("not enough moments for adaptive Padé (need X >= 2)"))
}

impl PadeApproximant {
    pub fn order(&self) -> usize {
        self.x.len() - 1
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn numerator(&self) -> &[f64] {
        &self.x
    }

    /// Denominator coefficients beyond the fixed constant term 1.
    pub fn denominator_tail(&self) -> &[f64] {
        &self.y
    }

    /// Taylor coefficients (in u) of the rational function through `w`.
    fn taylor_expansion(&self, w: usize) -> Vec<f64> {
        let mut t = Vec::with_capacity(w + 1);
        for k in 0..=w {
            let mut v = if k < self.x.len() { self.x[k] } else { 0.0 };
            for i in 1..=k.min(self.y.len()) {
                v -= self.y[i - 1] * t[k - i];
            }
            t.push(v);
        }
        t
    }

    /// Rational evaluation at complex s (Horner in u = scale·s).
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        let u = self.scale * s;
        let mut num = Complex64::new(0.0, 0.0);
        for &xk in self.x.iter().rev() {
            num = num * u + xk;
        }
        let mut den = Complex64::new(0.0, 0.0);
        for &yk in self.y.iter().rev() {
            den = den * u + yk;
        }
        den = den * u + 1.0;
        if den.norm() < 1e-14 * num.norm() {
            return Err(Error::pole_proximity(s));
        }
        Ok(num / den)
    }
}

/// Anything that can evaluate an MGF at complex arguments.
pub trait Mgf {
    fn eval(&self, s: Complex64) -> Result<Complex64>;

    /// Real-axis evaluation (the common case for ASER formulas).
    fn eval_real(&self, s: f64) -> Result<f64> {
        Ok(self.eval(Complex64::new(s, 0.0))?.re)
    }
}

impl Mgf for PadeApproximant {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        PadeApproximant::eval(self, s)
    }
}

/// Adapter turning a plain closure into an (infallible) MGF evaluator;
/// handy for analytically known MGFs in calibration and tests.
pub struct MgfFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> Mgf for MgfFn<F> {
    fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok((self.0)(s))
    }
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
