//! Wootters concurrence and entanglement of formation, and the `E(τ)`
//! dynamics generated from `|gg⟩`.

use crate::error::{Error, Result};
use crate::numerics::{c, eig_hermitian4, singular_values4, CMatrix4, C64};
use crate::spin::{AnalyticEvolution, TwoQubitPureState};

pub const DEFAULT_WINDOW: f64 = 1e4;
pub const DEFAULT_STEP: f64 = 1e-2;
pub const DEFAULT_TOLERANCE: f64 = 1e-2;
/// Largest step accepted for an `E(τ)` grid; the fastest phase turns by
/// `≈ 4·step` radians per sample.
pub const MAX_STEP: f64 = 0.1;

const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix4,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace, and positivity, each to 1e-10.
    pub fn new(rho: CMatrix4) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::InvalidDensityMatrix("non-finite entries".into()));
        }
        let dev = rho.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - c(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {} != 1", tr.re)));
        }
        let eig = eig_hermitian4(&rho)?;
        if eig.eigenvalues[0] < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {}",
                eig.eigenvalues[0]
            )));
        }
        Ok(DensityMatrix { rho })
    }

    pub fn from_pure(psi: &TwoQubitPureState) -> Self {
        DensityMatrix {
            rho: CMatrix4::outer(&psi.amplitudes, &psi.amplitudes),
        }
    }

    /// `I/4`
    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            rho: CMatrix4::from_real_diag([0.25; 4]),
        }
    }

    /// `p·|ψ⟩⟨ψ| + (1−p)·I/4`
    pub fn werner(psi: &TwoQubitPureState, p: f64) -> Result<Self> {
        let pure = DensityMatrix::from_pure(psi).rho.scaled(c(p, 0.0));
        let noise = CMatrix4::from_real_diag([0.25 * (1.0 - p); 4]);
        DensityMatrix::new(pure + noise)
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.rho
    }
}

/// `σʸ⊗σʸ` in the (|ee⟩, |eg⟩, |ge⟩, |gg⟩) basis.
fn spin_flip() -> CMatrix4 {
    let mut y = CMatrix4::zeros();
    y.0[0][3] = c(-1.0, 0.0);
    y.0[1][2] = c(1.0, 0.0);
    y.0[2][1] = c(1.0, 0.0);
    y.0[3][0] = c(-1.0, 0.0);
    y
}

/// `2|c_ee·c_gg − c_eg·c_ge|`
pub fn concurrence_pure(psi: &TwoQubitPureState) -> Result<f64> {
    let n = psi.norm();
    if !((n - 1.0).abs() <= crate::numerics::NORM_TOL) {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(pure_concurrence_unchecked(&psi.amplitudes))
}

fn pure_concurrence_unchecked(a: &[C64; 4]) -> f64 {
    (2.0 * (a[0] * a[3] - a[1] * a[2]).norm()).min(1.0)
}

/// `max(0, λ₁−λ₂−λ₃−λ₄)`, with `λᵢ` the descending square roots of the
/// eigenvalues of `ρ·ρ̃`, `ρ̃ = (σʸ⊗σʸ)ρ*(σʸ⊗σʸ)`.
///
/// Since `√ρ·ρ̃·√ρ = A·A†` with `A = √ρ·(σʸ⊗σʸ)·√ρ*`, the `λᵢ` are the
/// singular values of `A`, which avoids square roots of rounding noise.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    let rho = rho.rho;
    let eig = eig_hermitian4(&rho)?;
    let sqrt_rho = eig.apply_fn(|l| c(l.max(0.0).sqrt(), 0.0));
    let a = sqrt_rho * spin_flip() * sqrt_rho.conj();
    let lambdas = singular_values4(&a)?;
    let conc = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(conc.clamp(0.0, 1.0))
}

/// Entanglement of formation `h((1+√(1−C²))/2)`, `h` the binary entropy.
pub fn eof_from_concurrence(conc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&conc) {
        return Err(Error::OutOfRange(conc));
    }
    Ok(eof_unchecked(conc))
}

fn eof_unchecked(conc: f64) -> f64 {
    let r = (1.0 - conc * conc).max(0.0).sqrt();
    let x = 0.5 * (1.0 + r);
    // 1 − x without cancellation
    let y = 0.5 * conc * conc / (1.0 + r);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    (term(x) + term(y)).clamp(0.0, 1.0)
}

/// `E(τ)` for a prepared evolution.
pub fn entanglement_at(evo: &AnalyticEvolution, tau: f64) -> f64 {
    eof_unchecked(pure_concurrence_unchecked(&evo.at(tau).amplitudes))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementTrace {
    /// `(τ, E)` on a uniform grid starting at τ = 0.
    pub points: Vec<(f64, f64)>,
    pub eta: f64,
    pub step: f64,
}

impl EntanglementTrace {
    /// Largest sampled E and the first τ at which it occurs.
    pub fn max(&self) -> (f64, f64) {
        self.points.iter().fold(
            (f64::NAN, f64::NEG_INFINITY),
            |(bt, be), &(t, e)| {
                if e > be {
                    (t, e)
                } else {
                    (bt, be)
                }
            },
        )
    }
}

/// Grid points `i·step`, `i = 0..=n` with `n·step ≤ tau_max`.
pub fn grid_len(tau_max: f64, step: f64) -> Result<usize> {
    if !(step.is_finite() && step > 0.0 && step <= MAX_STEP) {
        return Err(Error::BadGrid(format!("step must lie in (0, {MAX_STEP}], got {step}")));
    }
    if !(tau_max.is_finite() && tau_max >= step) {
        return Err(Error::BadGrid(format!(
            "tau_max must be finite and >= step, got {tau_max}"
        )));
    }
    let n = (tau_max / step + 1e-9).floor();
    if n > 1e9 {
        return Err(Error::BadGrid(format!("{n} grid points is too many")));
    }
    Ok(n as usize + 1)
}

fn check_positive_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::DegenerateEta(eta));
    }
    Ok(())
}

pub fn entanglement_trace(eta: f64, tau_max: f64, step: f64) -> Result<EntanglementTrace> {
    check_positive_eta(eta)?;
    let len = grid_len(tau_max, step)?;
    let evo = AnalyticEvolution::new(eta)?;
    let points = (0..len)
        .map(|i| {
            let tau = i as f64 * step;
            (tau, entanglement_at(&evo, tau))
        })
        .collect();
    Ok(EntanglementTrace { points, eta, step })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauStarResult {
    pub eta: f64,
    pub tau_star: f64,
    pub e_max: f64,
    pub window: f64,
    pub step: f64,
    pub tolerance: f64,
}

/// Earliest grid τ with `E(τ) ≥ E_max − tolerance`, where `E_max` is the
/// largest E on the grid over `[0, window]`.
pub fn tau_star(eta: f64, window: f64, step: f64, tolerance: f64) -> Result<TauStarResult> {
    check_positive_eta(eta)?;
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(Error::BadGrid(format!(
            "tolerance must be finite and >= 0, got {tolerance}"
        )));
    }
    let len = grid_len(window, step)?;
    let evo = AnalyticEvolution::new(eta)?;
    let values: Vec<f64> = (0..len).map(|i| entanglement_at(&evo, i as f64 * step)).collect();
    let e_max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first = values
        .iter()
        .position(|&e| e >= e_max - tolerance)
        .expect("the maximum itself qualifies");
    Ok(TauStarResult {
        eta,
        tau_star: first as f64 * step,
        e_max,
        window,
        step,
        tolerance,
    })
}
