use std::time::Instant;

use quantalab_core::dynamics::{
    double_slit_run_with, ehrenfest_residual, linear_fit, split_step_evolve,
    split_step_evolve_logged, Potential, SlitMode, SlitScreenConfig, TrajectoryLog,
};
use quantalab_core::grid::{
    gaussian_packet, hermite_basis, to_momentum, uncertainties, Grid1D, GridWavefunction, Particle,
};
use quantalab_core::rng::SeededRng;
use quantalab_core::Complex64;

use super::{Outcome, Relation};
use crate::config::Params;
use crate::fft::RustFftPlanner;
use crate::{row, LabError, Table};

fn particle(p: &Params) -> Result<Particle, LabError> {
    Ok(Particle::new(p.get("mass"), p.get("hbar"))?)
}

fn trajectory_table(name: &str, log: &TrajectoryLog) -> Table {
    let mut t = Table::new(
        name,
        &["t", "mean_x", "mean_p", "norm", "energy", "mean_force"],
    );
    for i in 0..log.len() {
        t.push(row![
            log.times[i],
            log.mean_x[i],
            log.mean_p[i],
            log.norm[i],
            log.energy[i],
            log.mean_force[i]
        ]);
    }
    t
}

pub(super) fn free_packet(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let particle = particle(p)?;
    let mut out = Outcome::default();

    let start = Instant::now();
    let grid = Grid1D::centered(p.count("n"), p.get("dx"))?;
    let psi = gaussian_packet(&grid, p.get("x0"), p.get("p0"), p.get("sigma"), particle)?;
    let velocity = p.get("p0") / particle.mass;
    if velocity == 0.0 {
        return Err(LabError::config("p0", "must be non-zero"));
    }
    let dt = p.get("dt");
    let span = p.get("widths") * p.get("sigma") / velocity.abs();
    let steps = (span / dt).ceil() as usize;
    let (_, log) = split_step_evolve_logged(
        &psi,
        &Potential::free(&grid),
        dt,
        steps,
        (steps / 100).max(1),
    )?;
    let elapsed = start.elapsed().as_secs_f64();
    let (slope, _) = linear_fit(&log.times, &log.mean_x);
    let expected = log.mean_p[0] / particle.mass;
    out.check(
        1,
        "free <x> slope vs <p>/m (relative)",
        ((slope - expected) / expected).abs(),
        Relation::AtMost,
        1e-6,
    );
    let p_drift = log
        .mean_p
        .iter()
        .map(|q| (q - log.mean_p[0]).abs())
        .fold(0.0, f64::max);
    out.check(1, "free <p> drift", p_drift, Relation::AtMost, 1e-10);
    out.check(1, "free packet runtime (s)", elapsed, Relation::Below, 2.0);
    out.tables.push(trajectory_table("free", &log));

    let well = Grid1D::centered(p.count("well_n"), p.get("well_dx"))?;
    let omega = p.get("omega");
    let v = Potential::harmonic(&well, particle.mass, omega, 0.0);
    let coherent = hermite_basis(&well, particle, 0, p.get("shift"), omega)?;
    let (_, log) =
        split_step_evolve_logged(&coherent, &v, p.get("well_dt"), p.count("well_steps"), 50)?;
    out.check(
        4,
        "harmonic norm drift",
        log.max_norm_drift(),
        Relation::AtMost,
        1e-8,
    );
    out.check(
        4,
        "harmonic relative energy drift",
        log.max_relative_energy_drift(),
        Relation::AtMost,
        1e-8,
    );
    out.tables.push(trajectory_table("harmonic", &log));

    let (_, log) = split_step_evolve(
        &coherent,
        &v,
        p.get("ehrenfest_dt"),
        p.count("ehrenfest_steps"),
    )?;
    let sigma_x = (particle.hbar / (2.0 * particle.mass * omega)).sqrt();
    let scale = particle.mass * omega * omega * sigma_x;
    out.check(
        5,
        "harmonic Ehrenfest residual / (m w^2 sigma_x)",
        ehrenfest_residual(&log)? / scale,
        Relation::AtMost,
        1e-4,
    );

    let force = p.get("force");
    let ground = hermite_basis(&well, particle, 0, 0.0, omega)?;
    let (_, log) = split_step_evolve(
        &ground,
        &Potential::linear(&well, force),
        p.get("ehrenfest_dt"),
        p.count("linear_steps"),
    )?;
    let (slope, _) = linear_fit(&log.times, &log.mean_p);
    out.check(
        5,
        "linear potential |d<p>/dt + F|",
        (slope + force).abs(),
        Relation::AtMost,
        1e-6,
    );
    let mut t = Table::new("linear", &["t", "mean_p"]);
    for (i, (time, mp)) in log.times.iter().zip(&log.mean_p).enumerate() {
        if i % 10 == 0 || i + 1 == log.len() {
            t.push(row![*time, *mp]);
        }
    }
    out.tables.push(t);
    Ok(out)
}

/// Normalized sum of four random Gaussian packets within `|x| <= 4`.
fn random_admissible(
    grid: &Grid1D,
    particle: Particle,
    rng: &mut SeededRng,
) -> Result<GridWavefunction, LabError> {
    let terms: Vec<(f64, f64, f64, Complex64)> = (0..4)
        .map(|_| {
            (
                rng.uniform_in(-4.0, 4.0),
                rng.uniform_in(-3.0, 3.0),
                rng.uniform_in(0.5, 1.5),
                Complex64::new(rng.normal(), rng.normal()),
            )
        })
        .collect();
    let hbar = particle.hbar;
    let psi = GridWavefunction::from_fn(*grid, particle, |x| {
        terms
            .iter()
            .map(|&(x0, p0, s, c)| {
                c * Complex64::from_polar((-(x - x0).powi(2) / (4.0 * s * s)).exp(), p0 * x / hbar)
            })
            .sum()
    });
    Ok(psi.normalized()?)
}

pub(super) fn uncertainty(p: &Params, seed: u64) -> Result<Outcome, LabError> {
    let hbar = p.get("hbar");
    let particle = Particle::new(1.0, hbar)?;
    let grid = Grid1D::centered(p.count("n"), p.get("dx"))?;
    let mut rng = SeededRng::new(seed);
    let mut out = Outcome::default();

    let mut table = Table::new("uncertainty", &["state", "delta_x", "delta_p", "product"]);
    let mut worst = f64::INFINITY;
    for i in 0..p.count("states") {
        let psi = random_admissible(&grid, particle, &mut rng)?;
        let (dx, dp) = uncertainties(&psi)?;
        worst = worst.min(dx * dp - 0.5 * hbar);
        table.push(row![i, dx, dp, dx * dp]);
    }
    out.check(
        2,
        "min (dx dp - hbar/2) over random states",
        worst,
        Relation::AtLeast,
        -1e-9,
    );
    out.tables.push(table);

    let mut table = Table::new("gaussian", &["sigma", "p0", "product_over_half_hbar"]);
    let mut worst: f64 = 0.0;
    for sigma in [0.5, 0.75, 1.0, 1.5, 2.0] {
        let p0 = rng.uniform_in(-3.0, 3.0) * hbar;
        let psi = gaussian_packet(&grid, 0.0, p0, sigma, particle)?;
        let (dx, dp) = uncertainties(&psi)?;
        let ratio = dx * dp / (0.5 * hbar);
        worst = worst.max((ratio - 1.0).abs());
        table.push(row![sigma, p0, ratio]);
    }
    out.check(
        2,
        "Gaussian saturation |dx dp / (hbar/2) - 1|",
        worst,
        Relation::AtMost,
        1e-6,
    );
    out.tables.push(table);

    let mut table = Table::new("plancherel", &["state", "norm_x", "norm_p"]);
    let mut worst: f64 = 0.0;
    for i in 0..p.count("plancherel_states") {
        let amp: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.normal(), rng.normal()))
            .collect();
        let psi = GridWavefunction::new(grid, amp, particle)?.normalized()?;
        let (nx, np) = (psi.norm_sqr(), to_momentum(&psi).norm_sqr());
        worst = worst.max((nx - np).abs());
        table.push(row![i, nx, np]);
    }
    out.check(
        3,
        "Plancherel | |psi|^2 - |phi|^2 |",
        worst,
        Relation::AtMost,
        1e-12,
    );
    out.tables.push(table);
    Ok(out)
}

fn slit_config(p: &Params) -> Result<SlitScreenConfig, LabError> {
    let half = 0.5 * p.get("slit_separation");
    Ok(SlitScreenConfig {
        nx: p.count("nx"),
        ny: p.count("ny"),
        h: p.get("dy"),
        particle: particle(p)?,
        barrier_x: p.get("barrier_x"),
        barrier_thickness: p.get("barrier_thickness"),
        slit_centers: [-half, half],
        slit_width: p.get("slit_width"),
        screen_x: p.get("screen_x"),
        packet_x0: p.get("packet_x0"),
        packet_sigma_x: p.get("sigma_x"),
        packet_sigma_y: p.get("sigma_y"),
        p0: p.get("p0"),
        absorber_strength: p.get("absorber_strength"),
        absorber_fraction: p.get("absorber_fraction"),
        dt: p.get("dt"),
        max_steps: p.count("max_steps"),
    })
}

pub(super) fn validate_double_slit(p: &Params) -> Result<(), LabError> {
    let (w, dy) = (p.get("slit_width"), p.get("dy"));
    if w < 4.0 * dy {
        return Err(LabError::config(
            "slit_width",
            format!("{w} is below 4 dy = {}", 4.0 * dy),
        ));
    }
    slit_config(p)?
        .validate()
        .map_err(|e| LabError::config("params", e.to_string()))
}

pub(super) fn double_slit(p: &Params, _seed: u64) -> Result<Outcome, LabError> {
    let cfg = slit_config(p)?;
    let mut planner = RustFftPlanner::default();
    let start = Instant::now();
    let both = double_slit_run_with(&cfg, SlitMode::Both, &mut planner)?;
    let elapsed = start.elapsed().as_secs_f64();
    let one = double_slit_run_with(&cfg, SlitMode::Slit1, &mut planner)?;
    let two = double_slit_run_with(&cfg, SlitMode::Slit2, &mut planner)?;
    let incoherent = one.sum(&two);

    let mut out = Outcome::default();
    let maxima = both.maxima(0.01);
    out.check(
        6,
        "interior maxima",
        maxima.len() as f64,
        Relation::AtLeast,
        3.0,
    );
    let expected = cfg.fraunhofer_spacing();
    let spacing_error = both
        .fringe_spacing(0.01)
        .map_or(f64::INFINITY, |s| ((s - expected) / expected).abs());
    out.check(
        6,
        "fringe spacing vs 2 pi hbar L / (p0 d) (relative)",
        spacing_error,
        Relation::AtMost,
        0.1,
    );
    out.check(
        6,
        "L1 distance between I_both and I1 + I2",
        both.relative_l1_distance(&incoherent),
        Relation::Above,
        0.2,
    );
    out.check(6, "two-slit run time (s)", elapsed, Relation::Below, 30.0);

    let mut t = Table::new("screen", &["y", "both", "slit1", "slit2", "incoherent_sum"]);
    for (j, &y) in both.y.iter().enumerate() {
        t.push(row![
            y,
            both.intensity[j],
            one.intensity[j],
            two.intensity[j],
            incoherent[j]
        ]);
    }
    out.tables.push(t);
    Ok(out)
}
