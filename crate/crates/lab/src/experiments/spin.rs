use std::f64::consts::TAU;

use quantalab_core::hilbert::{evolve_isolated, Observable, StateVector};
use quantalab_core::linalg::{from_rows, CMatrix};
use quantalab_core::spin::{
    check_su2, couple_two_spins, exchange_operator, larmor_evolve, magnetic_moment_closed_form,
    magnetic_moment_means, orbital_ring_spectrum, spin_matrices, TwoSpinBasis, MAX_TWO_J,
};
use quantalab_core::Complex64;

use super::{Outcome, Relation};
use crate::config::Params;
use crate::{row, LabError, Table};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_diff(a.as_slice(), b.as_slice())
}

pub(super) fn larmor(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let hbar = p.get("hbar");
    let (theta, phi) = (p.get("theta"), p.get("phi"));
    let (omega0, gamma) = (p.get("omega0"), p.get("gamma"));
    let alpha = c((0.5 * theta).cos(), 0.0);
    let beta = Complex64::from_polar((0.5 * theta).sin(), phi);
    let s = spin_matrices(1, hbar)?;
    let h = Observable::new(&s.jz * c(omega0, 0.0))?;
    let psi0 = StateVector::new(&[alpha, beta])?;
    let period = TAU / omega0;
    let samples = p.count("samples").max(2);
    let span = p.get("periods") * period;

    let mut table = Table::new("larmor", &["t", "mu_x", "mu_y", "mu_z"]);
    let (mut state_err, mut moment_err, mut flip_err, mut mu_z_drift): (f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0);
    let mut mu_z0 = None;
    for i in 0..samples {
        let t = span * i as f64 / (samples - 1) as f64;
        let closed = larmor_evolve(alpha, beta, omega0, t)?;
        let spectral = evolve_isolated(&h, &psi0, t, hbar)?;
        state_err = state_err.max(max_diff(closed.amplitudes(), spectral.amplitudes()));

        let later = evolve_isolated(&h, &psi0, t + period, hbar)?;
        let negated: Vec<Complex64> = spectral.amplitudes().iter().map(|a| -a).collect();
        flip_err = flip_err.max(max_diff(later.amplitudes(), &negated));

        let mu = magnetic_moment_means(alpha, beta, omega0, gamma, t, hbar)?;
        let formula = magnetic_moment_closed_form(alpha, beta, omega0, gamma, t, hbar)?;
        for k in 0..3 {
            moment_err = moment_err.max((mu[k] - formula[k]).abs());
        }
        let z0 = *mu_z0.get_or_insert(mu[2]);
        mu_z_drift = mu_z_drift.max((mu[2] - z0).abs());
        table.push(row![t, mu[0], mu[1], mu[2]]);
    }
    let mut out = Outcome::default();
    out.check(
        9,
        "closed-form state vs spectral evolution",
        state_err,
        Relation::AtMost,
        1e-12,
    );
    out.check(
        9,
        "moment closed form vs expectation values",
        moment_err,
        Relation::AtMost,
        1e-12,
    );
    out.check(
        9,
        "psi(t + 2 pi / w0) + psi(t)",
        flip_err,
        Relation::AtMost,
        1e-12,
    );
    out.check(9, "<mu_z> drift", mu_z_drift, Relation::AtMost, 1e-12);
    out.tables.push(table);
    Ok(out)
}

pub(super) fn validate_spectrum(p: &Params) -> Result<(), LabError> {
    if p.count("max_two_j") > MAX_TWO_J as usize {
        return Err(LabError::config(
            "max_two_j",
            format!("must be at most {MAX_TWO_J}"),
        ));
    }
    let n = p.count("ring_n");
    if n < 16 || !n.is_multiple_of(2) {
        return Err(LabError::config("ring_n", "must be even and at least 16"));
    }
    Ok(())
}

pub(super) fn spectrum(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let hbar = p.get("hbar");
    let mut table = Table::new("su2", &["two_j", "commutator_residual", "ladder_error"]);
    let (mut worst_comm, mut worst_ladder): (f64, f64) = (0.0, 0.0);
    for two_j in 1..=p.count("max_two_j") as u32 {
        let s = spin_matrices(two_j, hbar)?;
        let residual = check_su2(&s);
        let j = s.j();
        let mut ladder: f64 = 0.0;
        for i in 0..s.dim() {
            let m = s.m(i);
            let up = hbar * (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
            let down = hbar * (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt();
            ladder = ladder
                .max((s.jplus.column(i).norm() - up).abs())
                .max((s.jminus.column(i).norm() - down).abs());
        }
        worst_comm = worst_comm.max(residual);
        worst_ladder = worst_ladder.max(ladder);
        table.push(row![two_j as i64, residual, ladder]);
    }
    let mut out = Outcome::default();
    out.check(
        7,
        "commutator residual, all 2j",
        worst_comm,
        Relation::AtMost,
        1e-12,
    );

    let half = spin_matrices(1, hbar)?;
    let h2 = 0.5 * hbar;
    let z = c(0.0, 0.0);
    let pauli = [
        from_rows(2, 2, &[z, c(h2, 0.0), c(h2, 0.0), z]),
        from_rows(2, 2, &[z, c(0.0, -h2), c(0.0, h2), z]),
        from_rows(2, 2, &[c(h2, 0.0), z, z, c(-h2, 0.0)]),
    ];
    let exact = (0..3)
        .map(|k| max_entry_diff(half.component(k), &pauli[k]))
        .fold(0.0, f64::max);
    out.check(
        7,
        "j = 1/2 matrices vs (hbar/2) Pauli",
        exact,
        Relation::AtMost,
        0.0,
    );
    out.check(
        7,
        "ladder factor error",
        worst_ladder,
        Relation::AtMost,
        1e-12,
    );
    out.tables.push(table);

    let eig = orbital_ring_spectrum(p.count("ring_n"), hbar)?;
    let mut table = Table::new("ring", &["index", "eigenvalue_over_hbar"]);
    let (mut to_int, mut to_half): (f64, f64) = (0.0, f64::INFINITY);
    for (i, l) in eig.iter().enumerate() {
        let x = l / hbar;
        to_int = to_int.max((x - x.round()).abs());
        to_half = to_half.min((x - (x.floor() + 0.5)).abs());
        table.push(row![i, x]);
    }
    out.check(
        8,
        "ring eigenvalues: distance to integer multiples of hbar",
        to_int,
        Relation::AtMost,
        1e-9,
    );
    out.check(
        8,
        "ring eigenvalues: distance to half-integers",
        to_half,
        Relation::AtLeast,
        0.1,
    );
    out.tables.push(table);
    Ok(out)
}

pub(super) fn two_spin(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let hbar = p.get("hbar");
    let ops = couple_two_spins(hbar)?;
    let swap = exchange_operator(2);
    let h2 = hbar * hbar;
    let mut out = Outcome::default();

    let eig = Observable::new(ops.s_squared.clone())?
        .spectrum()
        .eigenvalues
        .clone();
    let expected = [0.0, 2.0 * h2, 2.0 * h2, 2.0 * h2];
    let err = eig
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.check(
        10,
        "S^2 eigenvalues vs {0, 2 hbar^2 (x3)}, over hbar^2",
        err / h2,
        Relation::AtMost,
        1e-12,
    );

    let eig = Observable::new(swap.clone())?
        .spectrum()
        .eigenvalues
        .clone();
    let err = eig
        .iter()
        .zip([-1.0, 1.0, 1.0, 1.0])
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.check(
        10,
        "exchange eigenvalues vs {-1, 1 (x3)}",
        err,
        Relation::AtMost,
        1e-12,
    );

    let mut table = Table::new(
        "coupled_basis",
        &["k", "s_squared_over_hbar2", "s_z_over_hbar", "exchange"],
    );
    let (mut s2_err, mut ex_err): (f64, f64) = (0.0, 0.0);
    for k in 1..=4 {
        let theta = TwoSpinBasis::theta(k);
        let v = theta.as_vector();
        let (s2_expected, ex_expected) = if k == 4 { (0.0, -1.0) } else { (2.0 * h2, 1.0) };
        s2_err = s2_err.max(((&ops.s_squared * v) - v * c(s2_expected, 0.0)).norm() / h2);
        ex_err = ex_err.max(((&swap * v) - v * c(ex_expected, 0.0)).norm());
        let rayleigh = |m: &CMatrix| v.dotc(&(m * v)).re;
        table.push(row![
            k,
            rayleigh(&ops.s_squared) / h2,
            rayleigh(&ops.sz) / hbar,
            rayleigh(&swap)
        ]);
    }
    out.check(
        10,
        "coupled basis: |S^2 Theta_k - s_k Theta_k| / hbar^2",
        s2_err,
        Relation::AtMost,
        1e-12,
    );
    out.check(
        10,
        "coupled basis: |P Theta_k - eps_k Theta_k|",
        ex_err,
        Relation::AtMost,
        1e-12,
    );
    out.tables.push(table);
    Ok(out)
}
