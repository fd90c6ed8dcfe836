use std::vec::Vec;

use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use proptest::prelude::*;

use super::*;
use crate::hilbert::{evolve_isolated, inner, spectral_decompose};
use crate::linalg::{frobenius_norm, from_rows, identity, is_hermitian};

const HBAR: f64 = 1.0;

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn vec_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn apply(m: &CMatrix, v: &StateVector) -> CVector {
    m * v.as_vector()
}

#[test]
fn spin_half_matrices_are_half_pauli() {
    let hbar = 1.7;
    let s = spin_matrices(1, hbar).unwrap();
    let h = 0.5 * hbar;
    let (o, r, i) = (c64(0.0, 0.0), c64(h, 0.0), c64(0.0, h));
    assert_eq!(s.jx, from_rows(2, 2, &[o, r, r, o]));
    assert_eq!(s.jy, from_rows(2, 2, &[o, -i, i, o]));
    assert_eq!(s.jz, from_rows(2, 2, &[r, o, o, -r]));
}

#[test]
fn raising_spin_half_down_gives_up() {
    let s = spin_matrices(1, HBAR).unwrap();
    let up = apply(&s.jplus, &StateVector::basis(2, 1));
    assert_eq!(up, StateVector::basis(2, 0).as_vector() * c64(HBAR, 0.0));
}

#[test]
fn ladder_annihilates_extreme_states() {
    for two_j in 1..=MAX_TWO_J {
        let s = spin_matrices(two_j, HBAR).unwrap();
        let d = s.dim();
        assert_eq!(apply(&s.jplus, &StateVector::basis(d, 0)).norm(), 0.0);
        assert_eq!(apply(&s.jminus, &StateVector::basis(d, d - 1)).norm(), 0.0);
    }
}

#[test]
fn commutation_relations_hold_for_all_supported_j() {
    assert!(check_su2(&spin_matrices(1, HBAR).unwrap()) < 1e-14);
    assert!(check_su2(&spin_matrices(7, HBAR).unwrap()) < 1e-12);
    for two_j in 1..=MAX_TWO_J {
        let s = spin_matrices(two_j, HBAR).unwrap();
        assert!(check_su2(&s) < 1e-12, "2j = {two_j}: {}", check_su2(&s));
    }
}

#[test]
fn casimir_is_scalar() {
    for two_j in 1..=MAX_TWO_J {
        let s = spin_matrices(two_j, HBAR).unwrap();
        let j = s.j();
        let expected = identity(s.dim()) * c64(j * (j + 1.0) * HBAR * HBAR, 0.0);
        assert!(max_diff(&s.j_squared(), &expected) < 1e-12, "2j = {two_j}");
    }
}

#[test]
fn jz_spectrum_is_descending_m() {
    let s = spin_matrices(5, 2.0).unwrap();
    for i in 0..s.dim() {
        assert_eq!(s.jz[(i, i)].re, 2.0 * (2.5 - i as f64));
    }
}

#[test]
fn ladder_norms() {
    for two_j in [1u32, 2, 5, 12] {
        let s = spin_matrices(two_j, HBAR).unwrap();
        let j = s.j();
        for i in 0..s.dim() {
            let m = s.m(i);
            let e = StateVector::basis(s.dim(), i);
            let up = apply(&s.jplus, &e).norm_squared();
            let down = apply(&s.jminus, &e).norm_squared();
            assert!((up - (j * (j + 1.0) - m * (m + 1.0))).abs() < 1e-12);
            assert!((down - (j * (j + 1.0) - m * (m - 1.0))).abs() < 1e-12);
        }
    }
}

#[test]
fn perturbed_matrices_fail_the_algebra() {
    let mut s = spin_matrices(3, HBAR).unwrap();
    s.jx[(0, 1)] += c64(1e-3, 0.0);
    assert!(check_su2(&s) >= 1e-4);
}

#[test]
fn invalid_j() {
    assert_eq!(spin_matrices(0, HBAR), Err(Error::InvalidJ(0)));
    assert_eq!(spin_matrices(41, HBAR), Err(Error::InvalidJ(41)));
}

#[test]
fn larmor_sign_flip_and_period() {
    let (a, b) = (c64(0.6, 0.0), c64(0.0, 0.8));
    let w = 2.5;
    let psi0 = larmor_evolve(a, b, w, 0.0).unwrap();
    let half = larmor_evolve(a, b, w, TAU / w).unwrap();
    let full = larmor_evolve(a, b, w, 2.0 * TAU / w).unwrap();
    for (p, q) in psi0.amplitudes().iter().zip(half.amplitudes()) {
        assert!((p + q).norm() < 1e-14);
    }
    assert!(vec_diff(&psi0, &full) < 1e-14);
}

#[test]
fn larmor_rejects_unnormalized_input() {
    assert!(matches!(
        larmor_evolve(c64(1.0, 0.0), c64(1.0, 0.0), 1.0, 0.0),
        Err(Error::NotNormalized { .. })
    ));
}

#[test]
fn up_state_only_gains_phase() {
    for t in [0.0, 0.3, 5.0] {
        let mu = magnetic_moment_means(c64(1.0, 0.0), c64(0.0, 0.0), 2.0, 1.0, t, HBAR).unwrap();
        assert_eq!(mu[0], 0.0);
        assert_eq!(mu[1], 0.0);
        assert!((mu[2] - 0.5).abs() < 1e-15);
    }
}

#[test]
fn equal_superposition_moments() {
    let r = c64(FRAC_1_SQRT_2, 0.0);
    let gamma = 3.0;
    let mu = magnetic_moment_means(r, r, 1.0, gamma, 0.0, HBAR).unwrap();
    assert!(mu[2].abs() < 1e-15);
    assert!((mu[0] - gamma * HBAR / 2.0).abs() < 1e-14);
    assert!(mu[1].abs() < 1e-15);
    // a quarter period later the moment points along +y
    let mu = magnetic_moment_means(r, r, 1.0, gamma, PI / 2.0, HBAR).unwrap();
    assert!(mu[0].abs() < 1e-14 && (mu[1] - gamma * HBAR / 2.0).abs() < 1e-14);
}

/// Gauss-Newton fit of `A cos(w t) + B sin(w t)` starting from `w0`, over
/// windows of growing length so the phase error stays small at each stage.
fn fit_frequency(ts: &[f64], ys: &[f64], w0: f64) -> f64 {
    let mut w = w0;
    let mut len = ts.len() / 16;
    loop {
        for _ in 0..8 {
            let (t, y) = (&ts[..len], &ys[..len]);
            // linear amplitudes for the current w
            let lin = nalgebra::DMatrix::from_fn(len, 2, |i, c| {
                if c == 0 {
                    (w * t[i]).cos()
                } else {
                    (w * t[i]).sin()
                }
            });
            let ab = lin
                .clone()
                .svd(true, true)
                .solve(&nalgebra::DVector::from_column_slice(y), 1e-14)
                .unwrap();
            let (a, b) = (ab[0], ab[1]);
            let jac = nalgebra::DMatrix::from_fn(len, 3, |i, c| match c {
                0 => (w * t[i]).cos(),
                1 => (w * t[i]).sin(),
                _ => t[i] * (-a * (w * t[i]).sin() + b * (w * t[i]).cos()),
            });
            let resid = nalgebra::DVector::from_fn(len, |i, _| {
                y[i] - a * (w * t[i]).cos() - b * (w * t[i]).sin()
            });
            let step = jac.svd(true, true).solve(&resid, 1e-14).unwrap();
            w += step[2];
        }
        if len == ts.len() {
            return w;
        }
        len = (len * 2).min(ts.len());
    }
}

#[test]
fn precession_period_from_sampled_trace() {
    let (a, b) = (c64(0.8, 0.0), c64(0.36, 0.48));
    let w = 1.37;
    let n = 1024;
    let dt = 0.05;
    let ts: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    let mx: Vec<f64> = ts
        .iter()
        .map(|&t| magnetic_moment_means(a, b, w, 1.0, t, HBAR).unwrap()[0])
        .collect();
    let mut spectrum: Vec<Complex64> = mx.iter().map(|&v| c64(v, 0.0)).collect();
    rustfft::FftPlanner::new()
        .plan_fft_forward(n)
        .process(&mut spectrum);
    let peak = (1..n / 2)
        .max_by(|&i, &j| spectrum[i].norm().total_cmp(&spectrum[j].norm()))
        .unwrap();
    let coarse = TAU * peak as f64 / (n as f64 * dt);
    assert!((coarse - w).abs() < TAU / (n as f64 * dt));
    let fitted = fit_frequency(&ts, &mx, coarse);
    assert!((TAU / fitted - TAU / w).abs() < 1e-9);
}

#[test]
fn two_spin_total_spin_spectrum() {
    let ops = couple_two_spins(HBAR).unwrap();
    let spec = spectral_decompose(&ops.s_squared).unwrap();
    assert_eq!(spec.groups.len(), 2);
    assert_eq!(spec.groups[0].len(), 1);
    assert_eq!(spec.groups[1].len(), 3);
    assert!(spec.group_value(0).abs() < 1e-14);
    assert!((spec.group_value(1) - 2.0 * HBAR * HBAR).abs() < 1e-14);
    assert!(frobenius_norm(&crate::linalg::commutator(&ops.s_squared, &ops.sz).unwrap()) < 1e-14);
}

#[test]
fn coupled_basis() {
    let ops = couple_two_spins(HBAR).unwrap();
    for a in 1..=4 {
        for b in 1..=4 {
            let ip = inner(&TwoSpinBasis::theta(a), &TwoSpinBasis::theta(b)).unwrap();
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((ip - c64(expected, 0.0)).norm() < 1e-15);
        }
        let v = TwoSpinBasis::theta(a);
        let s2 = apply(&ops.s_squared, &v);
        let eig = if a == 4 { 0.0 } else { 2.0 };
        assert!((s2 - v.as_vector() * c64(eig, 0.0)).norm() < 1e-14);
    }
    let upup = TwoSpinBasis::product(true, true);
    assert!((apply(&ops.sz, &upup) - upup.as_vector() * c64(HBAR, 0.0)).norm() < 1e-15);
    assert_eq!(
        TwoSpinBasis::product(false, true),
        StateVector::basis(4, TwoSpinBasis::DOWN_UP)
    );
}

#[test]
fn exchange_symmetry() {
    let p = exchange_operator(2);
    for k in 1..=3 {
        let v = TwoSpinBasis::theta(k);
        assert!((apply(&p, &v) - v.as_vector()).norm() < 1e-15);
    }
    let singlet = TwoSpinBasis::theta(4);
    assert!((apply(&p, &singlet) + singlet.as_vector()).norm() < 1e-15);
    let ops = couple_two_spins(HBAR).unwrap();
    assert!(frobenius_norm(&crate::linalg::commutator(&p, &ops.s_squared).unwrap()) < 1e-14);
    for d in [2usize, 3, 4] {
        let p = exchange_operator(d);
        assert_eq!(&p * &p, identity(d * d));
        assert!(is_hermitian(&p, 0.0));
        let spec = spectral_decompose(&p).unwrap();
        // antisymmetric and symmetric sector dimensions
        assert_eq!(spec.groups[0].len(), d * (d - 1) / 2);
        assert_eq!(spec.groups[1].len(), d * (d + 1) / 2);
    }
}

#[test]
fn pauli_projection_examples() {
    let singlet = TwoSpinBasis::theta(4);
    match pauli_project(&singlet, ParticleKind::Fermion).unwrap() {
        PauliOutcome::Accepted(s) => assert!(vec_diff(&s, &singlet) < 1e-15),
        PauliOutcome::Rejected => panic!("singlet is antisymmetric"),
    }
    let upup = TwoSpinBasis::product(true, true);
    assert_eq!(
        pauli_project(&upup, ParticleKind::Fermion).unwrap(),
        PauliOutcome::Rejected
    );
    match pauli_project(&TwoSpinBasis::product(true, false), ParticleKind::Boson).unwrap() {
        PauliOutcome::Accepted(s) => assert!(vec_diff(&s, &TwoSpinBasis::theta(3)) < 1e-15),
        PauliOutcome::Rejected => panic!("+- has a symmetric part"),
    }
    assert!(matches!(
        pauli_project(&StateVector::basis(3, 0), ParticleKind::Boson),
        Err(Error::DimMismatch { .. })
    ));
}

#[test]
fn entanglement_examples() {
    assert!(is_entangled(&TwoSpinBasis::theta(4)).unwrap());
    assert!(!is_entangled(&TwoSpinBasis::product(true, true)).unwrap());
    let bell =
        StateVector::new(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]).unwrap();
    assert!(is_entangled(&bell).unwrap());
    let sv = schmidt_coefficients(&TwoSpinBasis::theta(4)).unwrap();
    assert!((sv[0] - FRAC_1_SQRT_2).abs() < 1e-15 && (sv[1] - FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn anticorrelated_state_never_gives_equal_spins() {
    let (alpha, beta) = (0.6, 0.8);
    let psi = StateVector::new(&[
        c64(0.0, 0.0),
        c64(alpha, 0.0),
        c64(0.0, beta),
        c64(0.0, 0.0),
    ])
    .unwrap();
    let sampler = EprSampler::new(&psi, HBAR).unwrap();
    let n = 100_000u64;
    let counts = sampler.tally(0..n);
    assert_eq!(counts[0][0], 0);
    assert_eq!(counts[1][1], 0);
    let p = alpha * alpha;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    assert!((counts[0][1] as f64 - n as f64 * p).abs() < 3.0 * sigma);
    let (s1, s2) = epr_joint_sample(&psi, 7, HBAR).unwrap();
    assert_eq!(s1, -s2);
    assert_eq!(s1.abs(), 0.5 * HBAR);
}

#[test]
fn product_state_always_up_up() {
    let sampler = EprSampler::new(&TwoSpinBasis::product(true, true), 2.0).unwrap();
    for seed in 0..200 {
        assert_eq!(sampler.sample(seed), (1.0, 1.0));
    }
}

#[test]
fn joint_frequencies_follow_born_rule() {
    let psi =
        StateVector::new(&[c64(0.3, 0.1), c64(-0.5, 0.2), c64(0.1, -0.6), c64(0.4, 0.0)]).unwrap();
    let n = 40_000u64;
    let counts = EprSampler::new(&psi, HBAR).unwrap().tally(1_000..1_000 + n);
    for (i1, row) in counts.iter().enumerate() {
        for (i2, &count) in row.iter().enumerate() {
            let p = psi.amplitudes()[2 * i1 + i2].norm_sqr();
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((count as f64 - n as f64 * p).abs() < 4.0 * sigma);
        }
    }
}

/// Spectral derivative matrix built column by column with an FFT.
fn ring_operator_via_fft(n: usize, hbar: f64) -> CMatrix {
    let mut planner = rustfft::FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut m = CMatrix::zeros(n, n);
    for col in 0..n {
        let mut buf = std::vec![c64(0.0, 0.0); n];
        buf[col] = c64(1.0, 0.0);
        fwd.process(&mut buf);
        for (k, v) in buf.iter_mut().enumerate() {
            let s = crate::fft::signed_bin(k, n);
            let m_k = if 2 * s.unsigned_abs() as usize == n {
                0.0
            } else {
                s as f64
            };
            // -i hbar d/dphi acts as multiplication by hbar m
            *v *= hbar * m_k / n as f64;
        }
        inv.process(&mut buf);
        for r in 0..n {
            m[(r, col)] = buf[r];
        }
    }
    m
}

#[test]
fn ring_operator_matches_fft_construction() {
    for n in [16usize, 18, 64] {
        let ours = ring_momentum_operator(n, 1.3).unwrap();
        assert!(max_diff(&ours, &ring_operator_via_fft(n, 1.3)) < 1e-12);
    }
}

#[test]
fn ring_spectrum_is_integer() {
    let n = 16;
    let ev = orbital_ring_spectrum(n, HBAR).unwrap();
    let mut expected: Vec<f64> = (-7..=7).map(f64::from).collect();
    expected.push(0.0);
    expected.sort_by(f64::total_cmp);
    for (a, b) in ev.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-9, "{ev:?}");
    }
    for (a, b) in ev.iter().zip(ev.iter().rev()) {
        assert!((a + b).abs() < 1e-9);
    }
}

#[test]
fn ring_spectrum_avoids_half_integers() {
    for n in [16usize, 32, 50] {
        for e in orbital_ring_spectrum(n, 2.0).unwrap() {
            let m = e / 2.0;
            assert!((m - m.round()).abs() < 1e-9);
            assert!(((m - 0.5) - (m - 0.5).round()).abs() > 0.1);
        }
    }
}

#[test]
fn ring_eigenfunction_for_m_one() {
    let n = 32;
    let l = ring_momentum_operator(n, HBAR).unwrap();
    let obs = Observable::new(l).unwrap();
    let spec = obs.spectrum();
    let idx = spec
        .eigenvalues
        .iter()
        .position(|e| (e - 1.0).abs() < 1e-9)
        .unwrap();
    let v = spec.eigenvectors.column(idx);
    let phase = v[0] / v[0].norm();
    for j in 0..n {
        let expected =
            Complex64::from_polar(1.0 / (n as f64).sqrt(), TAU * j as f64 / n as f64) * phase;
        assert!((v[j] - expected).norm() < 1e-10);
    }
    assert!(ring_momentum_operator(15, HBAR).is_err());
}

fn unit_pair() -> impl Strategy<Value = (Complex64, Complex64)> {
    (0.0..PI / 2.0, 0.0..TAU, 0.0..TAU).prop_map(|(theta, pa, pb)| {
        (
            Complex64::from_polar(theta.cos(), pa),
            Complex64::from_polar(theta.sin(), pb),
        )
    })
}

proptest! {
    #[test]
    fn larmor_matches_spectral_evolution(
        (a, b) in unit_pair(),
        w in -5.0..5.0f64,
        t in -10.0..10.0f64,
        hbar in 0.2..3.0f64,
    ) {
        let s = spin_matrices(1, hbar).unwrap();
        let h = Observable::new(&s.jz * c64(w, 0.0)).unwrap();
        let psi0 = StateVector::new(&[a, b]).unwrap();
        let spectral = evolve_isolated(&h, &psi0, t, hbar).unwrap();
        let closed = larmor_evolve(a, b, w, t).unwrap();
        prop_assert!(vec_diff(&spectral, &closed) < 1e-12);
    }

    #[test]
    fn moment_routes_agree(
        (a, b) in unit_pair(),
        w in -5.0..5.0f64,
        gamma in -3.0..3.0f64,
        t in -10.0..10.0f64,
    ) {
        let expect = magnetic_moment_means(a, b, w, gamma, t, 1.3).unwrap();
        let closed = magnetic_moment_closed_form(a, b, w, gamma, t, 1.3).unwrap();
        for k in 0..3 {
            prop_assert!((expect[k] - closed[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_coefficients_match_svd(re in prop::array::uniform4(-1.0..1.0f64), im in prop::array::uniform4(-1.0..1.0f64)) {
        let amps: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| c64(r, i)).collect();
        prop_assume!(amps.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3);
        let psi = StateVector::new(&amps).unwrap();
        let a = psi.amplitudes();
        let m = nalgebra::Matrix2::new(a[0], a[1], a[2], a[3]);
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        let ours = schmidt_coefficients(&psi).unwrap();
        prop_assert!((ours[0] - sv[0]).abs() < 1e-12 && (ours[1] - sv[1]).abs() < 1e-12);
    }

    #[test]
    fn products_are_never_entangled((a, b) in unit_pair(), (c, d) in unit_pair()) {
        let psi = crate::hilbert::tensor_state(
            &StateVector::new(&[a, b]).unwrap(),
            &StateVector::new(&[c, d]).unwrap(),
        );
        prop_assert!(!is_entangled(&psi).unwrap());
    }
}
