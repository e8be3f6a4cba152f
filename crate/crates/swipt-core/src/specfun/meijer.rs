//! Numerical Meijer G-function via its Mellin-Barnes contour integral.
//!
//! For real parameters and z > 0,
//!
//! ```text
//!                     1    ⌠   Π_{j=1..m} Γ(b_j − s) · Π_{j=1..n} Γ(1 − a_j + s)
//! G^{m,n}_{p,q}(z) = ────  ⎮  ──────────────────────────────────────────────────── z^s ds
//!                    2πi   ⌡   Π_{j=m+1..q} Γ(1 − b_j + s) · Π_{j=n+1..p} Γ(a_j − s)
//! ```
//!
//! integrated along a vertical line Re(s) = c that separates the poles of
//! the Γ(b_j − s) factors (at s = b_j + k, the "right" poles) from those of
//! the Γ(1 − a_j + s) factors (at s = a_j − 1 − k, the "left" poles).
//!
//! The integrand is evaluated in log space (sums of `ln_gamma`) and the
//! line integral is computed by the trapezoid rule, which is spectrally
//! accurate for integrands analytic in a strip around the contour. Two
//! parts of the scheme are load-bearing for f64 accuracy:
//!
//! * **Abscissa choice.** A badly placed contour can carry an integrand
//!   many orders of magnitude larger than the final value (the oscillation
//!   has to cancel it), destroying double-precision results. The integrand
//!   magnitude along the contour peaks at t = 0, and its log at t = 0,
//!   φ(c) = ln|kernel(c)| + c·ln z, is convex in c on the strip, so the
//!   abscissa is placed at the minimizer of φ (the real saddle point). This
//!   keeps the peak within a modest factor of the final value — e.g. for
//!   the e^{−z} identity class it reproduces the classic c ≈ b − z saddle,
//!   accurate in *relative* terms even where the value is ~1e−44.
//! * **Non-integer offset.** The abscissa always sits `EPS_SHIFT` = 0.25
//!   away from the nearest pole, so classes whose integer parameters make
//!   left poles coalesce need no residue bookkeeping at all.

use crate::error::{Error, Result};
use crate::specfun::gamma::ln_gamma;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Offset keeping the contour a fixed, non-integer distance from poles.
const EPS_SHIFT: f64 = 0.25;
/// Truncate the contour where the integrand falls below this fraction of
/// its peak (the peak sits at t = 0 since every |Γ(x ± it)| decreases in |t|).
const TRUNC_RATIO: f64 = 1e-16;
/// Initial trapezoid step; halved until successive estimates agree.
const H0: f64 = 0.25;
/// Successive trapezoid estimates must agree to this relative tolerance.
/// Kept two orders below the documented accuracy so that independently
/// chosen contour positions agree to well under 1e-9 relative.
const REL_TOL: f64 = 1e-11;
/// Hard cap on step-halving rounds.
const MAX_REFINE: usize = 13;
/// Hard cap on the truncation half-length.
const MAX_T: f64 = 1e5;

/// Parameter set of G^{m,n}_{p,q}(a; b | z) with p = a.len(), q = b.len().
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MeijerGSpec {
    /// Validates m ≤ q, n ≤ p and finite parameters.
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if n > a.len() || m > b.len() {
            return Err(Error::domain(format!(
                "Meijer G orders (m={m}, n={n}) exceed parameter counts (p={}, q={})",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::domain("Meijer G parameters must be finite"));
        }
        Ok(MeijerGSpec { m, n, a, b })
    }

    /// Supremum of the left pole group, max_j≤n (a_j − 1), if any.
    fn left_edge(&self) -> Option<f64> {
        self.a[..self.n].iter().map(|a| a - 1.0).fold(None, |acc, v| {
            Some(acc.map_or(v, |m: f64| m.max(v)))
        })
    }

    /// Infimum of the right pole group, min_j≤m (b_j), if any.
    fn right_edge(&self) -> Option<f64> {
        self.b[..self.m]
            .iter()
            .copied()
            .fold(None, |acc, v| Some(acc.map_or(v, |m: f64| m.min(v))))
    }

    /// Exponential decay index μ = 2(m+n) − p − q; the integrand decays
    /// like e^{−μπ|t|/2} along the contour, so μ ≥ 1 is required.
    fn decay_index(&self) -> i64 {
        2 * (self.m + self.n) as i64 - self.a.len() as i64 - self.b.len() as i64
    }

    /// ln of the Mellin-Barnes integrand at s (without the z^s factor).
    fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &bj in &self.b[..self.m] {
            acc += ln_gamma(bj - s);
        }
        for &aj in &self.a[..self.n] {
            acc += ln_gamma(1.0 - aj + s);
        }
        for &bj in &self.b[self.m..] {
            acc -= ln_gamma(1.0 - bj + s);
        }
        for &aj in &self.a[self.n..] {
            acc -= ln_gamma(aj - s);
        }
        acc
    }

    /// Peak magnitude profile φ(c) = ln|integrand| at s = c (see module docs).
    fn ln_peak(&self, c: f64, ln_z: f64) -> f64 {
        self.ln_kernel(Complex64::new(c, 0.0)).re + c * ln_z
    }

    /// Minimizes the convex profile φ over [lo, hi] by golden-section search.
    fn min_peak_abscissa(&self, lo: f64, hi: f64, ln_z: f64) -> f64 {
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut c1 = b - ratio * (b - a);
        let mut c2 = a + ratio * (b - a);
        let mut f1 = self.ln_peak(c1, ln_z);
        let mut f2 = self.ln_peak(c2, ln_z);
        while b - a > 1e-8 {
            if f1 <= f2 {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - ratio * (b - a);
                f1 = self.ln_peak(c1, ln_z);
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + ratio * (b - a);
                f2 = self.ln_peak(c2, ln_z);
            }
        }
        0.5 * (a + b)
    }

    /// Default contour abscissa: the minimizer of the peak profile within
    /// the admissible range, kept `EPS_SHIFT` clear of the pole edges.
    ///
    /// For one-sided classes the far end of the search window follows the
    /// asymptotic location of the saddle, ~z^{∓1/(m+n)} away from the edge.
    fn abscissa(&self, z: f64) -> Result<f64> {
        let ln_z = z.ln();
        let gammas = (self.m + self.n) as f64;
        match (self.left_edge(), self.right_edge()) {
            (Some(l), Some(r)) => {
                let width = r - l;
                if width <= 0.0 {
                    return Err(Error::Unsupported(format!(
                        "empty fundamental strip: left edge {l} >= right edge {r}"
                    )));
                }
                if width < 2.0 * EPS_SHIFT {
                    Ok(0.5 * (l + r))
                } else {
                    Ok(self.min_peak_abscissa(l + EPS_SHIFT, r - EPS_SHIFT, ln_z))
                }
            }
            (Some(l), None) => {
                let lo = l + EPS_SHIFT;
                let span = 10.0 + z.powf(-1.0 / gammas).min(1e6);
                Ok(self.min_peak_abscissa(lo, lo + span, ln_z))
            }
            (None, Some(r)) => {
                let hi = r - EPS_SHIFT;
                let span = 10.0 + z.powf(1.0 / gammas).min(1e6);
                Ok(self.min_peak_abscissa(hi - span, hi, ln_z))
            }
            (None, None) => Err(Error::Unsupported(
                "no gamma poles on either side (m = n = 0)".into(),
            )),
        }
    }
}

/// Evaluates G at z > 0 on the default contour for its parameter class.
///
/// Estimated relative error ≤ 1e−8 for the supported classes (enforced by
/// requiring successive refinements to agree to 1e−9).
pub fn meijer_g(spec: &MeijerGSpec, z: f64) -> Result<f64> {
    let c = spec.abscissa(z)?;
    meijer_g_with_abscissa(spec, z, c)
}

/// Evaluates G on an explicit contour abscissa.
///
/// Exposed for contour-independence diagnostics; `c` must lie inside the
/// legal strip of the parameter class. Accuracy degrades away from the
/// peak-minimizing abscissa (cancellation grows with the peak-to-value
/// ratio), which is why [`meijer_g`] searches for the saddle.
pub fn meijer_g_with_abscissa(spec: &MeijerGSpec, z: f64, c: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(format!("Meijer G argument must be positive, got {z}")));
    }
    if spec.decay_index() < 1 {
        return Err(Error::Unsupported(format!(
            "contour integrand does not decay (2(m+n) - p - q = {} < 1)",
            spec.decay_index()
        )));
    }
    if let Some(l) = spec.left_edge() {
        if c <= l {
            return Err(Error::domain(format!("abscissa {c} not right of left poles ({l})")));
        }
    }
    if let Some(r) = spec.right_edge() {
        if c >= r {
            return Err(Error::domain(format!("abscissa {c} not left of right poles ({r})")));
        }
    }

    let ln_z = z.ln();
    // Conjugate symmetry: for real parameters the integrand at c − it is the
    // conjugate of the one at c + it, so G = (1/π) ∫_0^∞ Re f(c + it) dt.
    let f = |t: f64| -> Complex64 {
        let s = Complex64::new(c, t);
        (spec.ln_kernel(s) + s * ln_z).exp()
    };

    let peak = f(0.0).norm();
    if !peak.is_finite() {
        return Err(Error::convergence(
            "meijer_g",
            format!("integrand not finite at contour center (c = {c}, z = {z})"),
        ));
    }

    // Truncation: walk outward until the envelope drops below TRUNC_RATIO
    // of the peak. The envelope is monotone, so a forward scan suffices.
    let mut tmax = 4.0;
    while f(tmax).norm() > TRUNC_RATIO * peak {
        tmax *= 1.25;
        if tmax > MAX_T {
            return Err(Error::convergence(
                "meijer_g",
                format!("contour tail did not decay by |t| = {MAX_T} (c = {c}, z = {z})"),
            ));
        }
    }

    // Trapezoid with step halving until two estimates agree to REL_TOL.
    let mut h = H0;
    let mut prev: Option<f64> = None;
    for _ in 0..=MAX_REFINE {
        let steps = (tmax / h).ceil() as usize;
        let mut sum = 0.5 * f(0.0).re;
        for k in 1..=steps {
            sum += f(k as f64 * h).re;
        }
        let est = sum * h / PI;
        if let Some(p) = prev {
            if (est - p).abs() <= REL_TOL * est.abs().max(p.abs()).max(1e-300) {
                return Ok(est);
            }
        }
        prev = Some(est);
        h *= 0.5;
    }
    Err(Error::convergence(
        "meijer_g",
        format!("trapezoid refinement stalled (c = {c}, z = {z}, last h = {h})"),
    ))
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// G^{1,0}_{0,1}(z | −; 0) = e^{−z}.
    fn exp_class() -> MeijerGSpec {
        MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap()
    }

    /// G^{1,1}_{1,1}(z | 1; 1) = z/(1+z).
    fn rational_class() -> MeijerGSpec {
        MeijerGSpec::new(1, 1, vec![1.0], vec![1.0]).unwrap()
    }

    #[test]
    fn identity_exp_small_to_large_z() {
        let spec = exp_class();
        for &z in &[0.01, 0.1, 1.0, 10.0, 100.0] {
            let got = meijer_g(&spec, z).unwrap();
            let want = (-z).exp();
            // Saddle abscissa keeps this accurate in a *relative* sense even
            // at z = 100 where the value is ~3.7e−44.
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn identity_rational_small_to_large_z() {
        let spec = rational_class();
        for &z in &[0.01, 0.1, 1.0, 3.0, 10.0, 100.0] {
            let got = meijer_g(&spec, z).unwrap();
            let want = z / (1.0 + z);
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn rational_class_spot_value() {
        assert_relative_eq!(meijer_g(&rational_class(), 3.0).unwrap(), 0.75, max_relative = 1e-10);
    }

    #[test]
    fn contour_shift_independence() {
        // Perturbing the abscissa inside the strip must not move the result.
        let spec = rational_class(); // strip (0, 1), default edges 0.25/0.75
        for &z in &[0.5, 2.0] {
            let base = meijer_g(&spec, z).unwrap();
            for dc in [-0.1, -0.05, 0.05, 0.1] {
                let c = spec.abscissa(z).unwrap() + dc;
                let shifted = meijer_g_with_abscissa(&spec, z, c).unwrap();
                assert_relative_eq!(shifted, base, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn rejects_empty_strip_and_bad_argument() {
        // Left edge 1 − 1 = 0 … right edge 0 with a = b: strip collapses.
        let spec = MeijerGSpec::new(1, 1, vec![1.0], vec![-0.5]).unwrap();
        assert!(matches!(meijer_g(&spec, 1.0), Err(Error::Unsupported(_))));

        let ok = rational_class();
        assert!(meijer_g(&ok, 0.0).is_err());
        assert!(meijer_g(&ok, -1.0).is_err());
    }

    #[test]
    fn rejects_orders_exceeding_parameter_counts() {
        assert!(MeijerGSpec::new(2, 0, vec![], vec![0.0]).is_err());
        assert!(MeijerGSpec::new(0, 1, vec![], vec![0.0]).is_err());
    }
}
