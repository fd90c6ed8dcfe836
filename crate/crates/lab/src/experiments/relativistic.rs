use std::f64::consts::TAU;

use quantalab_core::dynamics::free_evolve_exact;
use quantalab_core::grid::{gaussian_packet, Grid1D, GridWavefunction, Particle};
use quantalab_core::linalg::{identity, CMatrix};
use quantalab_core::relativistic::{
    build_gammas, dirac_free_evolve, dirac_hamiltonian, dirac_mode, dirac_square_check, kg_charge,
    kg_density as density_of, kg_evolve, DiracField, FrequencyBranch, GammaSet, KgPropagator,
    KgState,
};
use quantalab_core::rng::SeededRng;
use quantalab_core::Complex64;

use super::{Outcome, Relation};
use crate::config::Params;
use crate::{row, LabError, Table};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(super) fn kg_density(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let particle = Particle::new(p.get("mass"), p.get("hbar"))?;
    let grid = Grid1D::centered(p.count("n"), p.get("dx"))?;
    let sigma = p.get("sigma");
    let half = 0.5 * p.get("separation");

    let moving = gaussian_packet(&grid, 0.0, p.get("p0"), sigma, particle)?;
    let mut positive = KgState::packet(&moving, FrequencyBranch::Positive)?;
    let plus = KgState::packet(
        &gaussian_packet(&grid, -half, 0.0, sigma, particle)?,
        FrequencyBranch::Positive,
    )?;
    let minus = KgState::packet(
        &gaussian_packet(&grid, half, 0.0, sigma, particle)?,
        FrequencyBranch::Negative,
    )?;
    let add = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    };
    let mut mixed = KgState::from_components(
        grid,
        add(plus.phi1(), minus.phi1()),
        add(plus.phi2(), minus.phi2()),
        particle.mass,
        particle.hbar,
    )?;

    let dt = p.get("dt");
    let steps = p.count("steps");
    let mut prop = KgPropagator::new(&grid, particle.mass, particle.hbar, dt);
    let (q_pos0, q_mix0) = (kg_charge(&positive), kg_charge(&mixed));
    let (pos_start, mix_start) = (density_of(&positive), density_of(&mixed));
    let (mut min_pos, mut min_mix) = (min_of(&pos_start), min_of(&mix_start));
    let (mut drift_pos, mut drift_mix): (f64, f64) = (0.0, 0.0);
    let mut charges = Table::new("charge", &["t", "positive", "mixed"]);
    charges.push(row![0.0, q_pos0, q_mix0]);
    for step in 1..=steps {
        prop.advance(&mut positive, 1);
        prop.advance(&mut mixed, 1);
        let (qp, qm) = (kg_charge(&positive), kg_charge(&mixed));
        drift_pos = drift_pos.max((qp - q_pos0).abs());
        drift_mix = drift_mix.max((qm - q_mix0).abs());
        min_pos = min_pos.min(min_of(&density_of(&positive)));
        min_mix = min_mix.min(min_of(&density_of(&mixed)));
        if step % 10 == 0 || step == steps {
            charges.push(row![step as f64 * dt, qp, qm]);
        }
    }
    let mut out = Outcome::default();
    out.check(
        13,
        "mixed-frequency state: min density",
        min_mix,
        Relation::Below,
        -0.01,
    );
    out.check(
        13,
        "mixed-frequency state: charge drift",
        drift_mix,
        Relation::AtMost,
        1e-10,
    );
    out.check(
        13,
        "positive-frequency state: charge drift",
        drift_pos,
        Relation::AtMost,
        1e-10,
    );
    out.check(
        13,
        "positive-frequency state: min density",
        min_pos,
        Relation::AtLeast,
        -1e-12,
    );

    let (pos_end, mix_end) = (density_of(&positive), density_of(&mixed));
    let mut density = Table::new(
        "density",
        &[
            "x",
            "positive_t0",
            "positive_final",
            "mixed_t0",
            "mixed_final",
        ],
    );
    for (j, x) in grid.xs().enumerate() {
        density.push(row![x, pos_start[j], pos_end[j], mix_start[j], mix_end[j]]);
    }
    out.tables.push(density);
    out.tables.push(charges);
    Ok(out)
}

pub(super) fn validate_spectrum(p: &Params) -> Result<(), LabError> {
    let n = p.count("square_grid");
    if n < 8 || !n.is_power_of_two() {
        return Err(LabError::config(
            "square_grid",
            "must be a power of two, at least 8",
        ));
    }
    Ok(())
}

pub(super) fn dirac_spectrum(p: &Params, seed: u64) -> Result<Outcome, LabError> {
    let m = p.get("mass");
    let mut out = Outcome::default();

    let g = build_gammas();
    let mut clifford: f64 = 0.0;
    for i in 1..=4 {
        for j in 1..=4 {
            let ac = g.get(i) * g.get(j) + g.get(j) * g.get(i);
            clifford = clifford.max(max_entry(
                &(ac + identity(4) * c(2.0 * GammaSet::eta(i, j), 0.0)),
            ));
        }
    }
    out.check(
        15,
        "max |g_i g_j + g_j g_i + 2 eta_ij I|",
        clifford,
        Relation::AtMost,
        0.0,
    );

    let mut rng = SeededRng::new(seed);
    let p_max = p.get("p_max");
    let mut square: f64 = 0.0;
    for _ in 0..p.count("random_momenta") {
        let mom = [0; 3].map(|_| rng.uniform_in(-p_max, p_max));
        let e2 = mom.iter().map(|x| x * x).sum::<f64>() + m * m;
        let h = dirac_hamiltonian(mom, m);
        square = square.max(max_entry(&(&h * &h - identity(4) * c(e2, 0.0))));
    }
    out.check(
        15,
        "max |H^2 - (p^2 + m^2) I|",
        square,
        Relation::AtMost,
        1e-12,
    );

    let samples = p.count("p_samples").max(2);
    let mut table = Table::new(
        "dirac_spectrum",
        &[
            "p",
            "e_minus",
            "e_plus",
            "small_component",
            "swapped_energy",
        ],
    );
    let (mut spectrum_err, mut swapped_max): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for i in 0..samples {
        let pv = p_max * i as f64 / (samples - 1) as f64;
        let mode = dirac_mode(pv, m)?;
        let e = (pv * pv + m * m).sqrt();
        for (got, want) in mode.energies.iter().zip([-e, -e, e, e]) {
            spectrum_err = spectrum_err.max((got - want).abs());
        }
        let idx = mode.positive_indices()[0];
        let swapped = mode.swapped_energy(idx);
        if pv < m {
            for k in mode.positive_indices() {
                swapped_max = swapped_max.max(mode.swapped_energy(k));
            }
        }
        table.push(row![
            pv,
            mode.energies[0],
            mode.energies[3],
            mode.small_component_norm(idx),
            swapped
        ]);
    }
    out.check(
        15,
        "spectrum vs (-E, -E, E, E)",
        spectrum_err,
        Relation::AtMost,
        1e-12,
    );
    out.check(
        15,
        "max swapped-component energy for p < m",
        swapped_max,
        Relation::Below,
        0.0,
    );
    out.check(
        15,
        "squared Dirac operator residual on random fields",
        dirac_square_check(p.count("square_grid"), seed)?,
        Relation::Below,
        1e-9,
    );
    out.tables.push(table);
    Ok(out)
}

fn rel_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Relative L2 distance between the rest-phase-shifted upper KG component
/// and free Schrodinger evolution of the same initial profile.
fn kg_limit_error(p: &Params, p0: f64) -> Result<f64, LabError> {
    let particle = Particle::new(p.get("mass"), p.get("hbar"))?;
    let grid = Grid1D::centered(p.count("n"), p.get("dx"))?;
    let psi = gaussian_packet(&grid, p.get("x0"), p0, p.get("sigma"), particle)?;
    let state = KgState::packet(&psi, FrequencyBranch::Positive)?;
    let dt = p.get("dt");
    let steps = (p.get("time") / dt).round() as usize;
    let t = steps as f64 * dt;
    let evolved = kg_evolve(&state, dt, steps);
    let rest = Complex64::from_polar(1.0, particle.mass * t / particle.hbar);
    let shifted: Vec<Complex64> = evolved.phi1().iter().map(|v| v * rest).collect();
    let start = GridWavefunction::new(grid, state.phi1().to_vec(), particle)?;
    let scale = start.norm_sqr().sqrt();
    let reference: Vec<Complex64> = free_evolve_exact(&start.normalized()?, t)?
        .amplitudes()
        .iter()
        .map(|v| v * scale)
        .collect();
    Ok(rel_l2(&shifted, &reference))
}

/// Phase error of a positive-energy Dirac plane wave after one period of
/// the Schrodinger phase `p^2 t / 2m hbar`, rest phase removed, as a
/// fraction of a full turn.
fn dirac_phase_error(m: f64, hbar: f64, p0: f64) -> Result<f64, LabError> {
    let n = 64;
    let grid = Grid1D::new(0.0, TAU * hbar / (n as f64 * p0), n)?;
    let mode = dirac_mode(p0, m)?;
    let spinor = mode.spinor(mode.positive_indices()[0]);
    let u = [spinor[0], spinor[1], spinor[2], spinor[3]];
    let wave: Vec<Complex64> = grid
        .xs()
        .map(|x| Complex64::from_polar(1.0, p0 * x / hbar))
        .collect();
    let field = DiracField::from_profile(grid, &wave, u);
    let kinetic = p0 * p0 / (2.0 * m);
    let period = TAU * hbar / kinetic;
    let later = dirac_free_evolve(&field, m, hbar, period);
    let overlap: Complex64 = field
        .components
        .iter()
        .zip(&later.components)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.conj() * y))
        .sum();
    let residual = overlap * Complex64::from_polar(1.0, (m + kinetic) * period / hbar);
    Ok(residual.arg().abs() / TAU)
}

pub(super) fn dirac_limit(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let (m, hbar) = (p.get("mass"), p.get("hbar"));
    let ratios = p.count("ratios");
    let mut table = Table::new(
        "limit",
        &["p_over_m", "kg_relative_error", "dirac_phase_error"],
    );
    let (mut kg_worst, mut dirac_worst): (f64, f64) = (0.0, 0.0);
    for i in 1..=ratios {
        let ratio = p.get("max_ratio") * i as f64 / ratios as f64;
        let p0 = ratio * m;
        let kg = kg_limit_error(p, p0)?;
        let dirac = dirac_phase_error(m, hbar, p0)?;
        kg_worst = kg_worst.max(kg);
        dirac_worst = dirac_worst.max(dirac);
        table.push(row![ratio, kg, dirac]);
    }
    let mut out = Outcome::default();
    out.check(
        14,
        "KG upper component vs Schrodinger (relative L2)",
        kg_worst,
        Relation::AtMost,
        1e-3,
    );
    out.check(
        14,
        "Dirac positive branch vs Schrodinger phase (fraction of a turn)",
        dirac_worst,
        Relation::AtMost,
        1e-3,
    );
    out.tables.push(table);
    Ok(out)
}
