//! Two-qubit Ising dynamics with a transverse field.
//!
//! `H_tot = B(σ₁ˣ + σ₂ˣ) + 2Jσ₁ᶻσ₂ᶻ`, with `ħ = 1` and the state written in
//! the basis fixed by [`BasisConvention`]. The closed-form eigensystem and
//! evolution below are checked against [`crate::numerics`] in the tests.

use crate::error::{Error, Result};
use crate::numerics::{c, inner, norm, CMatrix4, Vec4, C64, NORM_TOL, ZERO};

/// Basis ordering `(|ee⟩, |eg⟩, |ge⟩, |gg⟩)` with `σᶻ|e⟩ = +|e⟩`,
/// `σᶻ|g⟩ = −|g⟩`. The first letter is atom 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisConvention;

impl BasisConvention {
    pub const EE: usize = 0;
    pub const EG: usize = 1;
    pub const GE: usize = 2;
    pub const GG: usize = 3;

    /// σᶻ eigenvalues `(z₁, z₂)` of basis state `idx`.
    pub const fn spins(idx: usize) -> (f64, f64) {
        match idx {
            0 => (1.0, 1.0),
            1 => (1.0, -1.0),
            2 => (-1.0, 1.0),
            _ => (-1.0, -1.0),
        }
    }

    pub fn basis_vector(idx: usize) -> Vec4 {
        let mut v = [ZERO; 4];
        v[idx] = c(1.0, 0.0);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    pub j: f64,
    pub b: f64,
    /// `b / j`; not finite when `j = 0`.
    pub eta: f64,
}

impl SpinParams {
    pub fn new(j: f64, b: f64) -> Self {
        SpinParams { j, b, eta: b / j }
    }

    pub fn from_eta(j: f64, eta: f64) -> Self {
        SpinParams { j, b: eta * j, eta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitPureState {
    pub amplitudes: Vec4,
}

impl TwoQubitPureState {
    pub fn new(amplitudes: Vec4) -> Result<Self> {
        let n = norm(&amplitudes);
        if !((n - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(TwoQubitPureState { amplitudes })
    }

    /// Normalizes `amplitudes`; fails only for the zero vector.
    pub fn normalized(amplitudes: Vec4) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(TwoQubitPureState {
            amplitudes: amplitudes.map(|x| x / n),
        })
    }

    /// `|gg⟩`, both atoms in the lower level.
    pub fn ground() -> Self {
        TwoQubitPureState {
            amplitudes: BasisConvention::basis_vector(BasisConvention::GG),
        }
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn overlap(&self, other: &TwoQubitPureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticEigensystem {
    pub states: [TwoQubitPureState; 4],
    pub energies: [f64; 4],
}

pub fn build_hamiltonian(sp: &SpinParams) -> CMatrix4 {
    let mut h = CMatrix4::zeros();
    for i in 0..4 {
        let (z1, z2) = BasisConvention::spins(i);
        h.0[i][i] = c(2.0 * sp.j * z1 * z2, 0.0);
    }
    let b = c(sp.b, 0.0);
    // σ₁ˣ flips the first atom (ee↔ge, eg↔gg); σ₂ˣ the second (ee↔eg, ge↔gg)
    for (i, k) in [(0, 2), (1, 3), (0, 1), (2, 3)] {
        h.0[i][k] = b;
        h.0[k][i] = b;
    }
    h
}

fn check_eta(eta: f64) -> Result<()> {
    if eta == 0.0 || !eta.is_finite() {
        return Err(Error::DegenerateEta(eta));
    }
    Ok(())
}

/// `√(1+η²)`
fn root(eta: f64) -> f64 {
    eta.hypot(1.0)
}

/// `s − 1 = η²/(1+s)`, free of cancellation for small η.
fn root_minus_one(eta: f64) -> f64 {
    eta * eta / (1.0 + root(eta))
}

/// `N₋ = √(1+η²+s)` and `N₊ = √(1+η²−s) = |η|·√(s/(1+s))`.
fn norms(eta: f64) -> (f64, f64) {
    let s = root(eta);
    ((1.0 + eta * eta + s).sqrt(), eta.abs() * (s / (1.0 + s)).sqrt())
}

/// The closed-form eigenvectors `ψ₁…ψ₄` and energies `J·(−2s, −2, 2, 2s)`,
/// `s = √(1+η²)`. For `J > 0` the energies ascend and equal
/// `(−2√(B²+J²), −2J, 2J, 2√(B²+J²))`.
pub fn analytic_eigensystem(sp: &SpinParams) -> Result<AnalyticEigensystem> {
    check_eta(sp.eta)?;
    let eta = sp.eta;
    let s = root(eta);
    let (n_minus, n_plus) = norms(eta);
    let r2 = std::f64::consts::FRAC_1_SQRT_2;

    // a(|gg⟩ + |ee⟩) − b(|eg⟩ + |ge⟩)
    let mix = |a: f64, b: f64| [c(a, 0.0), c(-b, 0.0), c(-b, 0.0), c(a, 0.0)];
    let psi1 = mix(eta / (2.0 * n_minus), (1.0 + s) / (2.0 * n_minus));
    let psi2 = [ZERO, c(r2, 0.0), c(-r2, 0.0), ZERO];
    let psi3 = [c(-r2, 0.0), ZERO, ZERO, c(r2, 0.0)];
    let psi4 = mix(eta / (2.0 * n_plus), -root_minus_one(eta) / (2.0 * n_plus));

    let states = [psi1, psi2, psi3, psi4].map(|amplitudes| TwoQubitPureState { amplitudes });
    let j = sp.j;
    Ok(AnalyticEigensystem {
        states,
        energies: [-2.0 * s * j, -2.0 * j, 2.0 * j, 2.0 * s * j],
    })
}

/// Expansion of `|gg⟩` over `ψ₁…ψ₄`; `c₂` is identically zero.
pub fn initial_coefficients(eta: f64) -> Result<[f64; 4]> {
    check_eta(eta)?;
    let s = root(eta);
    let (n_minus, n_plus) = norms(eta);
    let c1 = root_minus_one(eta) * n_minus / (2.0 * eta * s);
    let c3 = std::f64::consts::FRAC_1_SQRT_2;
    let c4 = (1.0 + s) * n_plus / (2.0 * eta * s);
    Ok([c1, 0.0, c3, c4])
}

/// Closed-form evolution from `|gg⟩` at fixed η, reusable across many τ.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticEvolution {
    states: [Vec4; 4],
    coefficients: [f64; 4],
    /// Energies in units of J.
    frequencies: [f64; 4],
}

impl AnalyticEvolution {
    pub fn new(eta: f64) -> Result<Self> {
        let sys = analytic_eigensystem(&SpinParams::from_eta(1.0, eta))?;
        Ok(AnalyticEvolution {
            states: sys.states.map(|s| s.amplitudes),
            coefficients: initial_coefficients(eta)?,
            frequencies: sys.energies,
        })
    }

    /// `Σⱼ cⱼ·e^{−iEⱼτ/J}·ψⱼ`. The `e^{−2iτ}` term goes with ψ₃, the only
    /// `E = 2J` state with nonzero weight.
    ///
    /// Evaluated as `|gg⟩ + Σⱼ cⱼ·(e^{−iEⱼτ/J} − 1)·ψⱼ`, which is exact at τ = 0.
    pub fn at(&self, tau: f64) -> TwoQubitPureState {
        let mut out = BasisConvention::basis_vector(BasisConvention::GG);
        for ((psi, &cj), &e) in self.states.iter().zip(&self.coefficients).zip(&self.frequencies) {
            if cj == 0.0 {
                continue;
            }
            // e^{−iθ} − 1 = −2sin²(θ/2) − i·sin θ
            let theta = e * tau;
            let half = (0.5 * theta).sin();
            let amp = c(-2.0 * half * half, -theta.sin()) * cj;
            for (o, p) in out.iter_mut().zip(psi) {
                *o += amp * p;
            }
        }
        TwoQubitPureState { amplitudes: out }
    }
}

/// State at scaled time `τ = Jt` starting from `|gg⟩`.
pub fn evolve_analytic(eta: f64, tau: f64) -> Result<TwoQubitPureState> {
    if !tau.is_finite() {
        return Err(Error::NonFinite("scaled time"));
    }
    Ok(AnalyticEvolution::new(eta)?.at(tau))
}

pub fn scaled_time(t: f64, j: f64) -> f64 {
    j * t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eig_hermitian4, fidelity, propagate};

    #[test]
    fn hamiltonian_pure_ising() {
        let h = build_hamiltonian(&SpinParams::new(1.0, 0.0));
        assert_eq!(h, CMatrix4::from_real_diag([2.0, -2.0, -2.0, 2.0]));
    }

    #[test]
    fn hamiltonian_pure_transverse() {
        let h = build_hamiltonian(&SpinParams::new(0.0, 1.0));
        let expect = [[0., 1., 1., 0.], [1., 0., 0., 1.], [1., 0., 0., 1.], [0., 1., 1., 0.]];
        for i in 0..4 {
            for k in 0..4 {
                assert_eq!(h.0[i][k], c(expect[i][k], 0.0));
            }
        }
    }

    #[test]
    fn hamiltonian_spectrum_matches_closed_form() {
        let h = build_hamiltonian(&SpinParams::new(1.0, 0.1));
        let e = eig_hermitian4(&h).unwrap();
        let r = 1.01f64.sqrt();
        let expect = [-2.0 * r, -2.0, 2.0, 2.0 * r];
        for (a, b) in e.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn eigensystem_eta_point_one() {
        let sp = SpinParams::from_eta(1.0, 0.1);
        let sys = analytic_eigensystem(&sp).unwrap();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(sys.states[1].amplitudes, [ZERO, c(r2, 0.), c(-r2, 0.), ZERO]);
        assert_eq!(sys.states[2].amplitudes, [c(-r2, 0.), ZERO, ZERO, c(r2, 0.)]);
        assert_eq!(sys.energies[1], -2.0);
        assert_eq!(sys.energies[2], 2.0);

        let h = build_hamiltonian(&sp);
        for (state, e) in sys.states.iter().zip(sys.energies) {
            let hpsi = h.mul_vec(&state.amplitudes);
            for (x, y) in hpsi.iter().zip(&state.amplitudes) {
                assert!((x - y * e).norm() < 1e-10 * h.max_abs());
            }
        }
        assert!((sys.energies[0] + 2.0 * 1.01f64.sqrt()).abs() < 1e-15);

        for i in 0..4 {
            for k in 0..4 {
                let g = sys.states[i].overlap(&sys.states[k]);
                let expect = if i == k { 1.0 } else { 0.0 };
                assert!((g - c(expect, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn eigensystem_rejects_zero_eta() {
        assert!(matches!(
            analytic_eigensystem(&SpinParams::new(1.0, 0.0)),
            Err(Error::DegenerateEta(_))
        ));
        assert!(analytic_eigensystem(&SpinParams::new(0.0, 1.0)).is_err());
        assert!(initial_coefficients(0.0).is_err());
        assert!(evolve_analytic(0.0, 1.0).is_err());
    }

    #[test]
    fn coefficients_eta_point_one() {
        let cs = initial_coefficients(0.1).unwrap();
        // values from the inner-product oracle ⟨ψᵢ|gg⟩ evaluated in numpy
        assert!((cs[0] - 0.03522360639546549).abs() < 1e-12);
        assert_eq!(cs[1], 0.0);
        assert!((cs[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((cs[3] - 0.7062289271564028).abs() < 1e-12);
        let sum: f64 = cs.iter().map(|x| x * x).sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvectors_accurate_at_small_eta() {
        for eta in [1e-3, 1e-5, 1e-8] {
            let sp = SpinParams::from_eta(1.0, eta);
            let sys = analytic_eigensystem(&sp).unwrap();
            let h = build_hamiltonian(&sp);
            for (state, e) in sys.states.iter().zip(sys.energies) {
                assert!((state.norm() - 1.0).abs() < 1e-14, "eta={eta}");
                let hpsi = h.mul_vec(&state.amplitudes);
                for (x, y) in hpsi.iter().zip(&state.amplitudes) {
                    assert!((x - y * e).norm() < 1e-14, "eta={eta}");
                }
            }
            let cs = initial_coefficients(eta).unwrap();
            assert!((cs.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficients_are_overlaps_with_ground() {
        for eta in [0.01, 0.1, 0.5, 1.0, 3.0, -0.7] {
            let sys = analytic_eigensystem(&SpinParams::from_eta(1.0, eta)).unwrap();
            let cs = initial_coefficients(eta).unwrap();
            let gg = TwoQubitPureState::ground();
            for (state, ci) in sys.states.iter().zip(cs) {
                let ov = state.overlap(&gg);
                assert!((ov - c(ci, 0.0)).norm() < 1e-10, "eta={eta}");
            }
        }
    }

    #[test]
    fn evolution_initial_condition_and_norm() {
        let psi = evolve_analytic(0.1, 0.0).unwrap();
        assert!(fidelity(&psi.amplitudes, &TwoQubitPureState::ground().amplitudes) > 1.0 - 1e-14);
        for tau in [0.3, 7.0, 1234.5] {
            assert!((evolve_analytic(0.37, tau).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn evolution_matches_propagator() {
        let h = build_hamiltonian(&SpinParams::new(1.0, 0.1));
        let gg = TwoQubitPureState::ground().amplitudes;
        let numeric = propagate(&h, 5.0, &gg).unwrap();
        let analytic = evolve_analytic(0.1, 5.0).unwrap();
        assert!(fidelity(&numeric, &analytic.amplitudes) >= 1.0 - 1e-10);
        // global phase included: both follow e^{−iEt}
        for (a, b) in numeric.iter().zip(&analytic.amplitudes) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn scaled_time_definition() {
        assert_eq!(scaled_time(2.0, 3.0), 6.0);
        assert_eq!(scaled_time(0.0, 17.0), 0.0);
        let j = 0.37;
        assert!((scaled_time(1.0 / j, j) - 1.0).abs() < 1e-15);
    }
}
