//! Back-of-envelope experimental numbers: Raman-induced χ, the photon-number
//! estimate of J, and fiber attenuation in dB converted to a loss exponent.
//!
//! Rates are angular frequencies in rad/µs, so `2π × 1 MHz` is `TAU`.

use std::f64::consts::{FRAC_PI_4, LN_10, TAU};

use crate::error::{Error, Result};
use crate::network::{self, NetworkParams, Units};
use crate::numerics::c;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanParams {
    /// Single-photon Rabi frequency.
    pub g: f64,
    /// Classical (pump) Rabi frequency Ω.
    pub omega: f64,
    /// Atomic detuning Δ_a; may be negative.
    pub delta_a: f64,
    /// Cavity decay rate γ.
    pub gamma: f64,
    /// Mean photon number in cavity 1.
    pub nbar: f64,
}

impl RamanParams {
    /// `(g, Ω, Δ_a) = 2π·(2.5, 8, −20) MHz` with the cavity decay raised five
    /// times from `2π·1.25` to `2π·6.25 MHz`, and `n̄ = 100`.
    pub fn paper_feasibility() -> Self {
        RamanParams {
            g: TAU * 2.5,
            omega: TAU * 8.0,
            delta_a: TAU * -20.0,
            gamma: TAU * 1.25 * 5.0,
            nbar: 100.0,
        }
    }
}

/// Raman coupling magnitude and the sign of `gΩ/Δ_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanCoupling {
    pub chi: f64,
    pub sign: f64,
}

pub fn chi_from_raman(p: &RamanParams) -> Result<RamanCoupling> {
    if p.delta_a == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    let raw = p.g * p.omega / p.delta_a;
    Ok(RamanCoupling {
        chi: raw.abs(),
        sign: if raw < 0.0 { -1.0 } else { 1.0 },
    })
}

/// `χ²n̄/(2γ)`
pub fn j_estimate(chi: f64, nbar: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::NonpositiveGamma(gamma));
    }
    Ok(chi * chi * nbar / (2.0 * gamma))
}

/// Whether a loss exponent describes power or amplitude attenuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossConvention {
    /// `P_out/P_in = e^{−Γ_f}`
    PowerExponent,
    /// `|A_out/A_in| = e^{−Γ_f}`
    AmplitudeExponent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberLossSpec {
    pub db_per_km: f64,
    pub length_km: f64,
    pub convention: LossConvention,
}

impl FiberLossSpec {
    pub fn new(db_per_km: f64, length_km: f64, convention: LossConvention) -> Result<Self> {
        if !(db_per_km >= 0.0 && db_per_km.is_finite()) {
            return Err(Error::InvalidParams(format!("db_per_km must be >= 0, got {db_per_km}")));
        }
        if !(length_km >= 0.0 && length_km.is_finite()) {
            return Err(Error::InvalidParams(format!("length_km must be >= 0, got {length_km}")));
        }
        Ok(FiberLossSpec {
            db_per_km,
            length_km,
            convention,
        })
    }
}

pub fn gamma_f_from_db(spec: &FiberLossSpec) -> f64 {
    let power = spec.db_per_km * spec.length_km * LN_10 / 10.0;
    match spec.convention {
        LossConvention::PowerExponent => power,
        LossConvention::AmplitudeExponent => 0.5 * power,
    }
}

/// Lossy coupling under both attenuation rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyCoupling {
    /// `J·e^{−Γ_f}`
    pub single: f64,
    /// `J·e^{−2Γ_f}`
    pub squared: f64,
}

pub fn lossy_coupling_report(j: f64, gamma_f: f64) -> Result<LossyCoupling> {
    if !(gamma_f >= 0.0) {
        return Err(Error::NegativeLoss(gamma_f));
    }
    Ok(LossyCoupling {
        single: j * (-gamma_f).exp(),
        squared: network::coupling_largedelta_lossy(j, gamma_f)?,
    })
}

/// Full cavity-network parameters matching a Raman setup: χ from
/// [`chi_from_raman`], drive scaled so that `|α|² = n̄`.
pub fn network_for_photon_number(p: &RamanParams, delta: f64, phi12: f64, phi21: f64) -> Result<NetworkParams> {
    let chi = chi_from_raman(p)?.chi;
    if !(p.nbar >= 0.0) {
        return Err(Error::InvalidParams(format!("nbar must be >= 0, got {}", p.nbar)));
    }
    let unit = NetworkParams::new(p.gamma, delta, chi, c(1.0, 0.0), phi12, phi21)?;
    let alpha_per_drive = network::steady_fields(&unit)?.alpha.norm();
    let drive = c(p.nbar.sqrt() / alpha_per_drive, 0.0);
    Ok(NetworkParams { drive, ..unit }.with_units(Units::AngularMHz))
}

/// The near-resonant operating point used for the estimate: Δ = γ/1000,
/// φ₁₂ = φ₂₁ = π/4.
pub fn paper_operating_point(p: &RamanParams) -> Result<NetworkParams> {
    network_for_photon_number(p, p.gamma * 1e-3, FRAC_PI_4, FRAC_PI_4)
}
