//! Seeded cross-check suites: each closed form against its independent
//! numerical counterpart.
//!
//! The same suites back the `validate` CLI subcommand and parts of the
//! acceptance tests.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::entanglement::{concurrence_mixed, concurrence_pure, DensityMatrix};
use crate::network::{coupling, NetworkParams};
use crate::numerics::{c, eig_hermitian4, fidelity, propagate, Vec4, C64};
use crate::spin::{analytic_eigensystem, build_hamiltonian, evolve_analytic, SpinParams, TwoQubitPureState};

pub const ORACLE_TOL: f64 = 1e-10;
pub const SPECTRAL_TOL: f64 = 1e-10;
pub const EVOLUTION_TOL: f64 = 1e-10;
pub const MIXED_PURE_TOL: f64 = 1e-8;

pub const EVOLUTION_TAUS: [f64; 4] = [0.1, 1.0, 10.0, 100.0];
pub const EVOLUTION_ETAS: [f64; 4] = [0.05, 0.1, 0.5, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub samples: usize,
    /// Worst observed discrepancy, in the suite's own metric.
    pub worst: f64,
    pub tolerance: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AuditConfig {
    pub seed: u64,
    pub oracle_samples: usize,
    pub spectral_samples: usize,
    pub entanglement_samples: usize,
    /// Replaces every suite tolerance when set.
    pub tolerance_override: Option<f64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            seed: 0x5eed,
            oracle_samples: 10_000,
            spectral_samples: 1_000,
            entanglement_samples: 1_000,
            tolerance_override: None,
        }
    }
}

impl AuditConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance_override.unwrap_or(default)
    }
}

/// Parameters drawn from a box well inside the non-singular region;
/// about one in five has a lossless fiber.
pub fn random_network_params<R: Rng>(rng: &mut R) -> NetworkParams {
    let gamma = rng.random_range(0.2..5.0);
    let drive = c(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
    let mut p = NetworkParams::new(
        gamma,
        rng.random_range(-5.0..5.0),
        rng.random_range(0.01..1.0),
        drive,
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    )
    .expect("sampled parameters are valid");
    if rng.random_bool(0.8) {
        p.gamma_f = rng.random_range(0.0..0.5);
    }
    p
}

/// Haar-random pure state (normalized complex Gaussian vector).
pub fn random_pure_state<R: Rng>(rng: &mut R) -> TwoQubitPureState {
    let v: Vec4 = std::array::from_fn(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    TwoQubitPureState::normalized(v).expect("nonzero with probability one")
}

/// Random single-qubit unitary as a 2×2 row-major array.
pub fn random_unitary2<R: Rng>(rng: &mut R) -> [[C64; 2]; 2] {
    let (a, b, ph) = (
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    );
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let (s, co) = (0.5 * theta).sin_cos();
    let g = C64::from_polar(1.0, ph);
    [
        [g * C64::from_polar(co, a), g * C64::from_polar(s, b)],
        [-g * C64::from_polar(s, -b), g * C64::from_polar(co, -a)],
    ]
}

/// `(u₁ ⊗ u₂)·ψ` in the (|ee⟩, |eg⟩, |ge⟩, |gg⟩) basis.
pub fn apply_local(u1: &[[C64; 2]; 2], u2: &[[C64; 2]; 2], psi: &Vec4) -> Vec4 {
    std::array::from_fn(|row| {
        let (r1, r2) = (row / 2, row % 2);
        (0..4).map(|col| u1[r1][col / 2] * u2[r2][col % 2] * psi[col]).sum()
    })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Oracle J against `γχ²(θ₁+θ₂)`, worst relative error.
pub fn oracle_identity(cfg: &AuditConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    while samples < cfg.oracle_samples {
        let p = random_network_params(&mut rng);
        let Ok(r) = coupling(&p) else { continue };
        worst = worst.max(relative(r.j_oracle, r.j_closed));
        samples += 1;
    }
    SuiteReport {
        name: "oracle-identity",
        samples,
        worst,
        tolerance: cfg.tol(ORACLE_TOL),
    }
}

/// Analytic eigensystem against the numeric eigensolver: worst of relative
/// eigenvalue error, eigen-residual, and orthonormality defect.
pub fn spectral_agreement(cfg: &AuditConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51ec);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.spectral_samples {
        // η ∈ (0, 2]
        let eta = 2.0 - rng.random_range(0.0..2.0);
        let sp = SpinParams::from_eta(1.0, eta);
        let h = build_hamiltonian(&sp);
        let scale = h.max_abs();
        let numeric = eig_hermitian4(&h).expect("Hermitian by construction");
        let analytic = analytic_eigensystem(&sp).expect("eta > 0");
        for (a, n) in analytic.energies.iter().zip(numeric.eigenvalues) {
            worst = worst.max(relative(*a, n));
        }
        for (i, (si, ei)) in analytic.states.iter().zip(analytic.energies).enumerate() {
            let hpsi = h.mul_vec(&si.amplitudes);
            for (x, y) in hpsi.iter().zip(&si.amplitudes) {
                worst = worst.max((x - y * ei).norm() / scale);
            }
            for (k, sk) in analytic.states.iter().enumerate() {
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((si.overlap(sk) - c(target, 0.0)).norm());
            }
        }
    }
    SuiteReport {
        name: "spectral-agreement",
        samples: cfg.spectral_samples,
        worst,
        tolerance: cfg.tol(SPECTRAL_TOL),
    }
}

/// Closed-form evolution against the matrix-exponential propagator, worst
/// infidelity `1 − |⟨ψ_a|ψ_n⟩|²`.
pub fn evolution_fidelity(cfg: &AuditConfig) -> SuiteReport {
    let gg = TwoQubitPureState::ground().amplitudes;
    let mut worst: f64 = 0.0;
    let mut samples = 0;
    for eta in EVOLUTION_ETAS {
        let h = build_hamiltonian(&SpinParams::from_eta(1.0, eta));
        for tau in EVOLUTION_TAUS {
            let numeric = propagate(&h, tau, &gg).expect("valid input");
            let analytic = evolve_analytic(eta, tau).expect("eta > 0");
            worst = worst.max(1.0 - fidelity(&numeric, &analytic.amplitudes));
            samples += 1;
        }
    }
    SuiteReport {
        name: "evolution-fidelity",
        samples,
        worst,
        tolerance: cfg.tol(EVOLUTION_TOL),
    }
}

/// Mixed-state concurrence on `|ψ⟩⟨ψ|` against the pure-state formula.
pub fn entanglement_consistency(cfg: &AuditConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe0f);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.entanglement_samples {
        let psi = random_pure_state(&mut rng);
        let pure = concurrence_pure(&psi).expect("normalized");
        let mixed = concurrence_mixed(&DensityMatrix::from_pure(&psi)).expect("valid");
        worst = worst.max((pure - mixed).abs());
    }
    SuiteReport {
        name: "entanglement-consistency",
        samples: cfg.entanglement_samples,
        worst,
        tolerance: cfg.tol(MIXED_PURE_TOL),
    }
}

pub fn run_all(cfg: &AuditConfig) -> Vec<SuiteReport> {
    vec![
        oracle_identity(cfg),
        spectral_agreement(cfg),
        evolution_fidelity(cfg),
        entanglement_consistency(cfg),
    ]
}
