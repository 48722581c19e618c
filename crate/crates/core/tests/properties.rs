use std::f64::consts::TAU;

use proptest::prelude::*;

use cavnet::audit::{apply_local, random_pure_state, random_unitary2};
use cavnet::entanglement::{concurrence_mixed, concurrence_pure, eof_from_concurrence, DensityMatrix};
use cavnet::network::{
    coupling, fluctuation_closed_form, fluctuation_coefficients, steady_fields, symmetric_phase_sum, theta_variants,
    NetworkParams,
};
use cavnet::numerics::{c, eig_hermitian4, fidelity, norm, propagate, solve2, CMatrix2, CMatrix4, Vec4, C64};
use cavnet::spin::{analytic_eigensystem, build_hamiltonian, initial_coefficients, SpinParams, TwoQubitPureState};
use cavnet::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex() -> impl Strategy<Value = C64> {
    (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(re, im)| c(re, im))
}

fn hermitian() -> impl Strategy<Value = CMatrix4> {
    (prop::array::uniform4(-5.0..5.0f64), prop::array::uniform6(complex())).prop_map(|(diag, off)| {
        let mut m = CMatrix4::from_real_diag(diag);
        let mut k = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                m.0[i][j] = off[k];
                m.0[j][i] = off[k].conj();
                k += 1;
            }
        }
        m
    })
}

fn unit_vec4() -> impl Strategy<Value = Vec4> {
    prop::array::uniform4(complex())
        .prop_filter("nonzero", |v| norm(v) > 1e-3)
        .prop_map(|v| {
            let n = norm(&v);
            v.map(|x| x / n)
        })
}

fn network() -> impl Strategy<Value = NetworkParams> {
    (
        0.2..5.0f64,
        -5.0..5.0f64,
        0.01..1.0f64,
        complex(),
        0.0..TAU,
        0.0..TAU,
        prop_oneof![Just(0.0), 0.0..0.5f64],
    )
        .prop_filter_map("non-singular", |(g, d, chi, drive, p12, p21, gf)| {
            let mut p = NetworkParams::new(g, d, chi, drive, p12, p21).ok()?;
            p.gamma_f = gf;
            steady_fields(&p).ok()?;
            Some(p)
        })
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eig_reconstructs_and_is_unitary(h in hermitian()) {
        let e = eig_hermitian4(&h).unwrap();
        for w in e.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        let v = e.vector_matrix();
        let gram = v.adjoint() * v - CMatrix4::identity();
        prop_assert!(gram.max_abs() <= 1e-12);
        let rec = v * CMatrix4::from_real_diag(e.eigenvalues) * v.adjoint() - h;
        prop_assert!(rec.max_abs() <= 1e-10 * h.max_abs());
    }

    #[test]
    fn propagate_preserves_norm_and_composes(h in hermitian(), psi in unit_vec4(), t1 in -3.0..3.0f64, t2 in -3.0..3.0f64) {
        let once = propagate(&h, t1 + t2, &psi).unwrap();
        prop_assert!((norm(&once) - 1.0).abs() <= 1e-10);
        let mid = propagate(&h, t1, &psi).unwrap();
        let twice = propagate(&h, t2, &mid).unwrap();
        prop_assert!(fidelity(&once, &twice) >= 1.0 - 1e-10);
    }

    #[test]
    fn solve2_round_trip(m in prop::array::uniform4(complex()), rhs in prop::array::uniform2(complex())) {
        let m = CMatrix2::new(m[0], m[1], m[2], m[3]);
        prop_assume!(m.det().norm() > 1e-3 * m.max_abs().powi(2));
        let x = solve2(&m, &rhs).unwrap();
        let r = m.mul_vec(&x);
        let xn = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let bn = rhs.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for (ri, bi) in r.iter().zip(&rhs) {
            prop_assert!((ri - bi).norm() <= 1e-12 * (2.0 * m.max_abs() * xn + bn));
        }
    }

    #[test]
    fn oracle_matches_closed_form(p in network()) {
        let r = coupling(&p).unwrap();
        prop_assert!(rel(r.j_oracle, r.j_closed) <= 1e-10, "{r:?}");
    }

    #[test]
    fn fluctuation_solver_matches_cramer(p in network()) {
        let s = steady_fields(&p).unwrap();
        let solved = fluctuation_coefficients(&p, &s).unwrap();
        let closed = fluctuation_closed_form(&p, &s).unwrap();
        for (x, y) in solved.as_array().iter().zip(closed.as_array()) {
            prop_assert!((x - y).norm() <= 1e-12 * x.norm().max(y.norm()).max(f64::MIN_POSITIVE));
        }
    }

    #[test]
    fn thetas_agree_on_symmetric_manifold(gamma in 0.2..5.0f64, delta in -5.0..5.0f64, drive in complex(), split in 0.0..1.0f64) {
        let sum = symmetric_phase_sum(gamma, delta);
        let p = NetworkParams::new(gamma, delta, 0.1, drive, sum * split, sum * (1.0 - split)).unwrap();
        let Ok(s) = steady_fields(&p) else { return Ok(()) };
        let (t1, t2) = theta_variants(&p, &s);
        prop_assert!(rel(t1, t2) <= 1e-10, "{t1} {t2}");
    }

    #[test]
    fn coupling_scales_with_drive_squared(p in network()) {
        let j1 = coupling(&p).unwrap().j_oracle;
        let doubled = NetworkParams { drive: p.drive * 2.0, ..p };
        let j2 = coupling(&doubled).unwrap().j_oracle;
        prop_assert!(rel(j2, 4.0 * j1) <= 1e-10);
    }

    // The θ₁ + θ₂ sum cancels at leading order when φ₁₂ + φ₂₁ ≈ 0, so the
    // phase sum is kept in [π/2, 3π/2].
    #[test]
    fn loss_follows_exp_minus_two_gamma_f_at_large_detuning(
        gamma in 0.2..2.0f64,
        ratio in 20.0..60.0f64,
        phi12 in 0.0..TAU,
        sum in (0.5 * std::f64::consts::PI)..(1.5 * std::f64::consts::PI),
        losses in prop::collection::vec(0.0..1.0f64, 2..6),
    ) {
        let base = NetworkParams::new(gamma, gamma * ratio, 0.1, c(3.0, 0.0), phi12, sum - phi12).unwrap();
        let j0 = coupling(&base).unwrap().j_oracle;
        let mut losses = losses;
        losses.sort_by(f64::total_cmp);
        let mut last = j0.abs();
        for gf in losses {
            let j = coupling(&NetworkParams { gamma_f: gf, ..base }).unwrap().j_oracle;
            prop_assert!(j.abs() <= last * (1.0 + 1e-12));
            prop_assert!(rel(j, j0 * (-2.0 * gf).exp()) <= 0.05);
            last = j.abs();
        }
    }

    #[test]
    fn analytic_spectrum_matches_numeric(eta in 1e-3..2.0f64, j in prop_oneof![0.1..10.0f64, -10.0..-0.1f64]) {
        let sp = SpinParams::from_eta(j, eta);
        let mut analytic = analytic_eigensystem(&sp).unwrap().energies;
        analytic.sort_by(f64::total_cmp);
        let numeric = eig_hermitian4(&build_hamiltonian(&sp)).unwrap().eigenvalues;
        for (a, n) in analytic.iter().zip(numeric) {
            prop_assert!(rel(*a, n) <= 1e-10);
        }
    }

    #[test]
    fn parseval(eta in 1e-3..10.0f64) {
        let cs = initial_coefficients(eta).unwrap();
        prop_assert_eq!(cs[1], 0.0);
        prop_assert!((cs.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn concurrence_and_eof_bounded(psi in unit_vec4()) {
        let st = TwoQubitPureState::new(psi).unwrap();
        let conc = concurrence_pure(&st).unwrap();
        prop_assert!((0.0..=1.0).contains(&conc));
        let e = eof_from_concurrence(conc).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
    }

    #[test]
    fn eof_strictly_increasing(a in 1e-6..1.0f64, b in 1e-6..1.0f64) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(eof_from_concurrence(lo).unwrap() < eof_from_concurrence(hi).unwrap());
    }

    #[test]
    fn concurrence_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_pure_state(&mut rng);
        let moved = apply_local(&random_unitary2(&mut rng), &random_unitary2(&mut rng), &psi.amplitudes);
        let moved = TwoQubitPureState::new(moved).unwrap();
        let before = concurrence_pure(&psi).unwrap();
        prop_assert!((before - concurrence_pure(&moved).unwrap()).abs() <= 1e-9);
        let mixed = concurrence_mixed(&DensityMatrix::from_pure(&moved)).unwrap();
        prop_assert!((before - mixed).abs() <= 1e-8);
    }
}

#[test]
fn degenerate_clusters_compared_by_projector() {
    // B = 0: two doubly degenerate levels; only the spectral projectors are unique
    let h = build_hamiltonian(&SpinParams::new(1.0, 0.0));
    let e = eig_hermitian4(&h).unwrap();
    let projector = |range: std::ops::Range<usize>| {
        range.fold(CMatrix4::zeros(), |acc, k| {
            acc + CMatrix4::outer(&e.eigenvectors[k], &e.eigenvectors[k])
        })
    };
    let low = projector(0..2);
    let high = projector(2..4);
    assert!((low - CMatrix4::from_real_diag([0.0, 1.0, 1.0, 0.0])).max_abs() < 1e-14);
    assert!((high - CMatrix4::from_real_diag([1.0, 0.0, 0.0, 1.0])).max_abs() < 1e-14);
}

#[test]
fn ground_state_stationary_without_transverse_field() {
    let h = build_hamiltonian(&SpinParams::new(1.0, 0.0));
    let gg = TwoQubitPureState::ground().amplitudes;
    for tau in [0.1, 1.0, 10.0, 1e3, 1e5] {
        let out = propagate(&h, tau, &gg).unwrap();
        assert!(fidelity(&out, &gg) >= 1.0 - 1e-12);
    }
}

#[test]
fn coupling_errors_are_typed() {
    let p = NetworkParams::new(1.0, 0.0, 0.1, c(1.0, 0.0), 0.0, 0.0).unwrap();
    assert!(matches!(coupling(&p), Err(Error::ResonantRecycling { .. })));
}
