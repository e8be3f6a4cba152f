//! System model: physical link configuration and the unified SNR
//! parameterization.
//!
//! A source powers a battery-free amplify-and-forward relay over the first
//! hop; the relay harvests energy from the same RF signal under either a
//! time-switching (TS) or power-splitting (PS) policy and retransmits to
//! the destination. For noncoherent M-DPSK / M-FSK signaling all four
//! protocol x modulation combinations collapse onto one instantaneous
//! end-to-end SNR form,
//!
//! ```text
//! γ_eq = â·b̂·γ_sr²·γ_rd / (b̂·γ_sr·γ_rd + C),   C = â·σ²_sr + Ψ,
//! ```
//!
//! where γ_sr and γ_rd are the exponential channel power gains of the two
//! hops and (â, b̂, Ψ) absorb protocol, modulation, path loss and noise.

use crate::error::{Error, Result};

/// Physical and noise parameters of the two-hop link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Source transmit power.
    pub ps: f64,
    /// Energy conversion efficiency of the harvester, in (0, 1].
    pub eta: f64,
    /// Path-loss exponent, > 2.
    pub alpha: f64,
    /// Source-relay distance (normalized).
    pub d_sr: f64,
    /// Relay-destination distance (normalized).
    pub d_rd: f64,
    /// Relay antenna noise variance.
    pub n0_ra: f64,
    /// Relay conversion noise variance.
    pub n0_rc: f64,
    /// Destination noise variance.
    pub n0_rd: f64,
    /// Mean of the exponential first-hop channel power gain.
    pub lambda_sr: f64,
    /// Mean of the exponential second-hop channel power gain.
    pub lambda_rd: f64,
    /// Variance of the first-hop fading coefficient (1 for Rayleigh).
    pub sigma2_sr: f64,
    /// Transmission rate in bits/sec/Hz; sets the outage threshold 2^R − 1.
    pub rate: f64,
}

impl SystemConfig {
    /// Defaults matching the reference experiment setup: unit power,
    /// distances and channel means, η = 1, α = 2.7, R = 3, and noise
    /// variances from `with_snr_db`.
    pub fn default_with_n0(n0: f64) -> Result<Self> {
        let cfg = SystemConfig {
            ps: 1.0,
            eta: 1.0,
            alpha: 2.7,
            d_sr: 1.0,
            d_rd: 1.0,
            // Antenna and conversion noise take equal shares of N0.
            n0_ra: 0.5 * n0,
            n0_rc: 0.5 * n0,
            n0_rd: n0,
            lambda_sr: 1.0,
            lambda_rd: 1.0,
            sigma2_sr: 1.0,
            rate: 3.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Defaults at a given SNR, with SNR defined as Ps/N0 (Ps = 1).
    pub fn with_snr_db(snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::domain("SNR must be finite"));
        }
        Self::default_with_n0(10f64.powf(-snr_db / 10.0))
    }

    /// Checks positivity and range invariants.
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("ps", self.ps),
            ("eta", self.eta),
            ("alpha", self.alpha),
            ("d_sr", self.d_sr),
            ("d_rd", self.d_rd),
            ("n0_ra", self.n0_ra),
            ("n0_rc", self.n0_rc),
            ("n0_rd", self.n0_rd),
            ("lambda_sr", self.lambda_sr),
            ("lambda_rd", self.lambda_rd),
            ("sigma2_sr", self.sigma2_sr),
            ("rate", self.rate),
        ];
        for (name, v) in positives {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.eta > 1.0 {
            return Err(Error::domain(format!("eta must be <= 1, got {}", self.eta)));
        }
        if self.alpha <= 2.0 {
            return Err(Error::domain(format!("alpha must exceed 2, got {}", self.alpha)));
        }
        Ok(())
    }

    /// Outage threshold γ_th = 2^R − 1 implied by the transmission rate.
    pub fn gamma_th(&self) -> f64 {
        (2f64).powf(self.rate) - 1.0
    }
}

/// Energy-harvesting protocol at the relay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolScheme {
    /// Power splitting: fraction θ of received power feeds the harvester.
    Ps { theta: f64 },
    /// Time switching: fraction β of the block is dedicated to harvesting.
    Ts { beta: f64 },
}

impl ProtocolScheme {
    /// The protocol's splitting ratio (θ or β).
    pub fn ratio(&self) -> f64 {
        match *self {
            ProtocolScheme::Ps { theta } => theta,
            ProtocolScheme::Ts { beta } => beta,
        }
    }

    /// Ratios exactly 0 or 1 are rejected: either extreme disables one of
    /// the relay's two functions and the model breaks down.
    pub fn validate(&self) -> Result<()> {
        let r = self.ratio();
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(format!(
                "protocol ratio must lie strictly inside (0,1), got {r}"
            )));
        }
        Ok(())
    }
}

/// Noncoherent modulation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationScheme {
    Dpsk { m: u32 },
    Fsk { m: u32 },
}

impl ModulationScheme {
    pub fn m(&self) -> u32 {
        match *self {
            ModulationScheme::Dpsk { m } | ModulationScheme::Fsk { m } => m,
        }
    }

    /// Noise-dimension constant Ψ: 1 for M-DPSK, M for M-FSK.
    pub fn psi(&self) -> f64 {
        match *self {
            ModulationScheme::Dpsk { .. } => 1.0,
            ModulationScheme::Fsk { m } => m as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m() < 2 {
            return Err(Error::domain(format!("constellation size must be >= 2, got {}", self.m())));
        }
        Ok(())
    }
}

/// The (â, b̂, Ψ, σ²_sr, C) tuple of the unified SNR expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnifiedParams {
    pub a_hat: f64,
    pub b_hat: f64,
    pub psi: f64,
    pub sigma2_sr: f64,
    /// Composite constant C = â·σ²_sr + Ψ.
    pub c: f64,
}

/// Maps a configuration, protocol and modulation onto the unified SNR
/// parameters.
pub fn unified_params(
    cfg: &SystemConfig,
    proto: ProtocolScheme,
    modulation: ModulationScheme,
) -> Result<UnifiedParams> {
    cfg.validate()?;
    proto.validate()?;
    modulation.validate()?;

    let d_sr_a = cfg.d_sr.powf(cfg.alpha);
    let d_rd_a = cfg.d_rd.powf(cfg.alpha);
    let rho_rd = cfg.ps / cfg.n0_rd;

    let (a_hat, b_hat) = match proto {
        ProtocolScheme::Ps { theta } => {
            // The information branch keeps κ = 1−θ of the received power,
            // which also scales the antenna-noise share of the first hop.
            let kappa = 1.0 - theta;
            let n0_sr = kappa * cfg.n0_ra + cfg.n0_rc;
            let rho_sr = cfg.ps / n0_sr;
            (kappa * rho_sr / d_sr_a, cfg.eta * theta * rho_rd / (d_sr_a * d_rd_a))
        }
        ProtocolScheme::Ts { beta } => {
            let n0_sr = cfg.n0_ra + cfg.n0_rc;
            let rho_sr = cfg.ps / n0_sr;
            // Harvesting for β of the block powers transmission over the
            // (1−β)/2 data phase, hence the 2β/(1−β) energy scale.
            (
                rho_sr / d_sr_a,
                2.0 * cfg.eta * beta * rho_rd / (d_sr_a * d_rd_a * (1.0 - beta)),
            )
        }
    };

    let psi = modulation.psi();
    Ok(UnifiedParams {
        a_hat,
        b_hat,
        psi,
        sigma2_sr: cfg.sigma2_sr,
        c: a_hat * cfg.sigma2_sr + psi,
    })
}

/// Instantaneous end-to-end SNR for channel gains (g_sr, g_rd).
pub fn gamma_eq(p: &UnifiedParams, g_sr: f64, g_rd: f64) -> f64 {
    let num = p.a_hat * p.b_hat * g_sr * g_sr * g_rd;
    let den = p.b_hat * g_sr * g_rd + p.c;
    num / den
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
