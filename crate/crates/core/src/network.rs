//! Driven, fiber-linked cavity pair.
//!
//! Cavity 1 is driven with amplitude `𝒜`; each cavity output feeds the
//! other cavity's input through a fiber carrying phase `φ₁₂` (1 → 2 leg
//! seen by cavity 1) or `φ₂₁`, and an optional loss exponent `Γ_f`. Every
//! fiber factor `e^{iφ}` becomes `e^{iφ − Γ_f}`.
//!
//! The coupling `J` is computed two ways. The oracle eliminates the field
//! fluctuations numerically for each spin configuration and reads `J` off the
//! resulting energies; the closed form evaluates `γχ²(θ₁ + θ₂)`. They agree
//! identically, which the tests enforce.

use std::f64::consts::TAU;
use std::fmt;

use crate::dd::{solve2_dd, Cdd, Dd};
use crate::error::{Error, Result};
use crate::numerics::{c, solve2, CMatrix2, C64};

/// Relative threshold on `|D| / (γ² + Δ²)` below which the steady state is
/// treated as divergent.
pub const RECYCLING_EPS_SING: f64 = 1e-9;

/// Unit system shared by all rates in a [`NetworkParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Dimensionless,
    /// Angular frequency in rad/µs (i.e. `2π × MHz`).
    AngularMHz,
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::Dimensionless => f.write_str("dimensionless"),
            Units::AngularMHz => f.write_str("rad/us"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams {
    /// Cavity decay rate γ, same for both cavities.
    pub gamma: f64,
    /// Cavity detuning Δ.
    pub delta: f64,
    /// Dispersive coupling χ.
    pub chi: f64,
    /// Drive amplitude on cavity 1.
    pub drive: C64,
    pub phi12: f64,
    pub phi21: f64,
    /// Per-traversal fiber loss exponent, `≥ 0`.
    pub gamma_f: f64,
    pub units: Units,
}

impl NetworkParams {
    /// Lossless, dimensionless parameters. Phases are reduced to `[0, 2π)`.
    pub fn new(gamma: f64, delta: f64, chi: f64, drive: C64, phi12: f64, phi21: f64) -> Result<Self> {
        let p = NetworkParams {
            gamma,
            delta,
            chi,
            drive,
            phi12: reduce_phase(phi12),
            phi21: reduce_phase(phi21),
            gamma_f: 0.0,
            units: Units::Dimensionless,
        };
        p.validate()?;
        Ok(p)
    }

    /// γ = 1, Δ = 1, φ₁₂ = φ₂₁ = π/4, 𝒜 = 10, χ = 0.1. Sits on the manifold
    /// where both θ expressions agree.
    pub fn example_sym() -> Self {
        let q = std::f64::consts::FRAC_PI_4;
        NetworkParams::new(1.0, 1.0, 0.1, c(10.0, 0.0), q, q).expect("valid preset")
    }

    /// γ = 1, Δ = 0.5, φ₁₂ = 0.3, φ₂₁ = 0.9, 𝒜 = 1, χ = 0.1. Off the symmetric
    /// manifold, so θ₁ ≠ θ₂.
    pub fn example_asym() -> Self {
        NetworkParams::new(1.0, 0.5, 0.1, c(1.0, 0.0), 0.3, 0.9).expect("valid preset")
    }

    pub fn with_units(mut self, units: Units) -> Self {
        self.units = units;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.gamma, self.delta, self.chi, self.phi12, self.phi21, self.gamma_f]
            .iter()
            .all(|x| x.is_finite())
            && self.drive.re.is_finite()
            && self.drive.im.is_finite();
        if !finite {
            return Err(Error::NonFinite("network parameters"));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::NonpositiveGamma(self.gamma));
        }
        if self.gamma_f < 0.0 {
            return Err(Error::NegativeLoss(self.gamma_f));
        }
        Ok(())
    }

    /// `γ + iΔ`
    pub fn cavity_rate(&self) -> C64 {
        c(self.gamma, self.delta)
    }

    /// `e^{iφ₁₂ − Γ_f}`
    pub fn link12(&self) -> C64 {
        C64::from_polar((-self.gamma_f).exp(), self.phi12)
    }

    /// `e^{iφ₂₁ − Γ_f}`
    pub fn link21(&self) -> C64 {
        C64::from_polar((-self.gamma_f).exp(), self.phi21)
    }

    /// Coefficient matrix of the steady-state fluctuation equations; its
    /// determinant is [`denominator`].
    pub fn fluctuation_matrix(&self) -> CMatrix2 {
        let k = self.cavity_rate();
        CMatrix2::new(k, -self.link12() * self.gamma, -self.link21() * self.gamma, k)
    }
}

fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Phase sum `φ₁₂ + φ₂₁ = 2·atan2(Δ, γ)` on which θ₁ = θ₂ (lossless case).
pub fn symmetric_phase_sum(gamma: f64, delta: f64) -> f64 {
    2.0 * delta.atan2(gamma)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyFields {
    pub alpha: C64,
    pub beta: C64,
}

/// Amplitudes of the eliminated fluctuations:
/// `a = c_a1·σ₁ᶻ + c_a2·σ₂ᶻ`, `b = c_b1·σ₁ᶻ + c_b2·σ₂ᶻ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationCoefficients {
    pub c_a1: C64,
    pub c_a2: C64,
    pub c_b1: C64,
    pub c_b2: C64,
}

impl FluctuationCoefficients {
    pub fn as_array(&self) -> [C64; 4] {
        [self.c_a1, self.c_a2, self.c_b1, self.c_b2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingResult {
    /// Ising strength from numerical elimination; the authoritative value.
    pub j_oracle: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// `γχ²(θ₁ + θ₂)`, summed in extended precision.
    pub j_closed: f64,
    /// `γχ²θ₁`, the single-θ form, kept for comparison.
    pub j_paper: f64,
    /// Local σ₁ᶻ shift `χ|α|²`.
    pub local1: f64,
    /// Local σ₂ᶻ shift `χ|β|²`.
    pub local2: f64,
}

impl CouplingResult {
    pub fn theta_mismatch(&self) -> f64 {
        (self.theta1 - self.theta2).abs()
    }

    /// True when θ₁ and θ₂ differ by more than `rel` relative to the larger.
    pub fn thetas_disagree(&self, rel: f64) -> bool {
        self.theta_mismatch() > rel * self.theta1.abs().max(self.theta2.abs())
    }

    fn all_finite(&self) -> bool {
        [
            self.j_oracle,
            self.theta1,
            self.theta2,
            self.j_closed,
            self.j_paper,
            self.local1,
            self.local2,
        ]
        .iter()
        .all(|x| x.is_finite())
    }
}

/// Non-fatal diagnostics for the elimination regime `1 ≪ γ/χ ≪ |α|`, `γ > χ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegimeWarning {
    /// `γ/χ ≤ 5`
    DampingNotDominant { ratio: f64 },
    /// `|α| ≤ 2γ/χ`
    FieldNotStrong { alpha: f64, ratio: f64 },
    /// `γ ≤ χ`
    GammaNotAboveChi { gamma: f64, chi: f64 },
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeWarning::DampingNotDominant { ratio } => {
                write!(f, "γ/χ not ≫ 1 (γ/χ = {ratio})")
            }
            RegimeWarning::FieldNotStrong { alpha, ratio } => {
                write!(f, "|α| not ≫ γ/χ (|α| = {alpha}, γ/χ = {ratio})")
            }
            RegimeWarning::GammaNotAboveChi { gamma, chi } => {
                write!(f, "γ > χ violated (γ = {gamma}, χ = {chi})")
            }
        }
    }
}

/// `D = (γ+iΔ)² − γ²·e^{i(φ₁₂+φ₂₁) − 2Γ_f}`. No validation; callers check `|D|`.
pub fn denominator(p: &NetworkParams) -> C64 {
    let k = p.cavity_rate();
    k * k - p.link12() * p.link21() * (p.gamma * p.gamma)
}

fn checked_denominator(p: &NetworkParams) -> Result<C64> {
    p.validate()?;
    let d = denominator(p);
    let threshold = RECYCLING_EPS_SING * (p.gamma * p.gamma + p.delta * p.delta);
    if !(d.norm() > threshold) {
        return Err(Error::ResonantRecycling {
            magnitude: d.norm(),
            threshold,
        });
    }
    Ok(d)
}

/// Mean intracavity fields `α = 𝒜(γ+iΔ)/D`, `β = γα·e^{iφ₂₁−Γ_f}/(γ+iΔ)`.
pub fn steady_fields(p: &NetworkParams) -> Result<SteadyFields> {
    let d = checked_denominator(p)?;
    let k = p.cavity_rate();
    let alpha = p.drive * k / d;
    let beta = alpha * p.link21() * p.gamma / k;
    if !(alpha.is_finite() && beta.is_finite()) {
        return Err(Error::NonFinite("steady fields"));
    }
    Ok(SteadyFields { alpha, beta })
}

pub fn validate_regime(p: &NetworkParams, s: &SteadyFields) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    let chi = p.chi.abs();
    let ratio = p.gamma / chi;
    if ratio <= 5.0 {
        out.push(RegimeWarning::DampingNotDominant { ratio });
    }
    let alpha = s.alpha.norm();
    if alpha <= 2.0 * ratio {
        out.push(RegimeWarning::FieldNotStrong { alpha, ratio });
    }
    if p.gamma <= chi {
        out.push(RegimeWarning::GammaNotAboveChi {
            gamma: p.gamma,
            chi: p.chi,
        });
    }
    out
}

/// Solves the steady linearized fluctuation equations
/// `(γ+iΔ)a − γe^{iφ₁₂−Γ_f}b = −iχα·σ₁ᶻ`, `−γe^{iφ₂₁−Γ_f}a + (γ+iΔ)b = −iχβ·σ₂ᶻ`
/// column by column with [`solve2`].
pub fn fluctuation_coefficients(p: &NetworkParams, s: &SteadyFields) -> Result<FluctuationCoefficients> {
    checked_denominator(p)?;
    let m = p.fluctuation_matrix();
    let minus_i_chi = c(0.0, -p.chi);
    let from_spin1 = solve2(&m, &[minus_i_chi * s.alpha, c(0.0, 0.0)])?;
    let from_spin2 = solve2(&m, &[c(0.0, 0.0), minus_i_chi * s.beta])?;
    Ok(FluctuationCoefficients {
        c_a1: from_spin1[0],
        c_b1: from_spin1[1],
        c_a2: from_spin2[0],
        c_b2: from_spin2[1],
    })
}

/// Cramer's-rule closed forms of [`fluctuation_coefficients`].
pub fn fluctuation_closed_form(p: &NetworkParams, s: &SteadyFields) -> Result<FluctuationCoefficients> {
    let d = checked_denominator(p)?;
    let k = p.cavity_rate();
    let minus_i_chi = c(0.0, -p.chi);
    Ok(FluctuationCoefficients {
        c_a1: minus_i_chi * s.alpha * k / d,
        c_a2: minus_i_chi * s.beta * p.link12() * p.gamma / d,
        c_b1: minus_i_chi * s.alpha * p.link21() * p.gamma / d,
        c_b2: minus_i_chi * s.beta * k / d,
    })
}

/// `θ₁ = Im{α*β·e^{iφ₁₂−Γ_f}/D}`, `θ₂ = Im{αβ*·e^{iφ₂₁−Γ_f}/D}`.
pub fn theta_variants(p: &NetworkParams, s: &SteadyFields) -> (f64, f64) {
    let d = denominator(p);
    let theta1 = (s.alpha.conj() * s.beta * p.link12() / d).im;
    let theta2 = (s.alpha * s.beta.conj() * p.link21() / d).im;
    (theta1, theta2)
}

/// Energy of the dispersive interaction, linear in the fluctuations, for
/// fixed spin values `z1, z2 ∈ {±1}`. Kept in double-double: the individual
/// energies can exceed J by seven orders of magnitude.
fn configuration_energy(p: &NetworkParams, s: &SteadyFields, z1: f64, z2: f64) -> Result<Dd> {
    let m = p.fluctuation_matrix();
    let (alpha, beta) = (Cdd::from(s.alpha), Cdd::from(s.beta));
    let rhs = [
        alpha.times_minus_i().scale(p.chi * z1),
        beta.times_minus_i().scale(p.chi * z2),
    ];
    let [a, b] = solve2_dd(&m, rhs)?;
    let e = (alpha.conj() * a).re * Dd::from(z1) + (beta.conj() * b).re * Dd::from(z2);
    Ok(Dd::from(2.0 * p.chi) * e)
}

/// `χ²·Im{α*β·g₁₂/D + αβ*·g₂₁/D}` with `g = γe^{iφ−Γ_f}` read from the
/// fluctuation matrix: `γχ²(θ₁ + θ₂)` on exactly the oracle's inputs, summed
/// before rounding so that θ₁ ≈ −θ₂ loses nothing.
fn closed_form_coupling(p: &NetworkParams, s: &SteadyFields) -> f64 {
    let m = p.fluctuation_matrix();
    let k = Cdd::from(m.0[0][0]);
    let g12 = Cdd::from(-m.0[0][1]);
    let g21 = Cdd::from(-m.0[1][0]);
    let d = k * k - g12 * g21;
    let (alpha, beta) = (Cdd::from(s.alpha), Cdd::from(s.beta));
    let sum = (alpha.conj() * beta * g12 + alpha * beta.conj() * g21) / d;
    (Dd::from(p.chi) * Dd::from(p.chi) * sum.im).to_f64()
}

pub fn coupling(p: &NetworkParams) -> Result<CouplingResult> {
    let s = steady_fields(p)?;
    let e_pp = configuration_energy(p, &s, 1.0, 1.0)?;
    let e_pm = configuration_energy(p, &s, 1.0, -1.0)?;
    let e_mp = configuration_energy(p, &s, -1.0, 1.0)?;
    let e_mm = configuration_energy(p, &s, -1.0, -1.0)?;
    // H_eff = 2J σ₁ᶻσ₂ᶻ, and the mixed difference isolates 4 × (2J)
    let j_oracle = (((e_pp - e_pm) - (e_mp - e_mm)) / Dd::from(8.0)).to_f64();

    let (theta1, theta2) = theta_variants(p, &s);
    let prefactor = p.gamma * p.chi * p.chi;
    let result = CouplingResult {
        j_oracle,
        theta1,
        theta2,
        j_closed: closed_form_coupling(p, &s),
        j_paper: prefactor * theta1,
        local1: p.chi * s.alpha.norm_sqr(),
        local2: p.chi * s.beta.norm_sqr(),
    };
    if !result.all_finite() {
        return Err(Error::NonFinite("coupling"));
    }
    Ok(result)
}

pub fn apply_fiber_loss(p: &NetworkParams, gamma_f: f64) -> Result<NetworkParams> {
    if !(gamma_f >= 0.0) {
        return Err(Error::NegativeLoss(gamma_f));
    }
    Ok(NetworkParams { gamma_f, ..*p })
}

/// Large-detuning (Δ ≫ γ) lossy coupling `J·e^{−2Γ_f}`.
pub fn coupling_largedelta_lossy(j_lossless: f64, gamma_f: f64) -> Result<f64> {
    if !(gamma_f >= 0.0) {
        return Err(Error::NegativeLoss(gamma_f));
    }
    Ok(j_lossless * (-2.0 * gamma_f).exp())
}
