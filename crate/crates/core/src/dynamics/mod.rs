//! Time evolution of grid wave functions under `i hbar d_t psi = H psi`
//! with `H = p^2 / 2m + V(x)`.
//!
//! [`split_step_evolve`] uses Strang splitting (half potential kick, exact
//! kinetic drift in momentum space, half potential kick). The free particle
//! is also available exactly through [`free_evolve_exact`], which multiplies
//! the momentum amplitudes by `exp(-i p^2 t / 2 m hbar)`.

mod double_slit;

pub use double_slit::{
    double_slit_run, double_slit_run_with, ScreenPattern, SlitMode, SlitScreenConfig,
};

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::{Grid1D, GridWavefunction, Particle, Spectral};
use crate::{Error, Result};

/// Bound on `dt * E / hbar` for both the potential and kinetic energy scales.
pub const STABILITY_LIMIT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialShape {
    Free,
    /// `m omega^2 (x - center)^2 / 2`
    Harmonic {
        omega: f64,
        center: f64,
    },
    /// `force * x`
    Linear {
        force: f64,
    },
    Sampled,
}

/// Time-independent potential sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    samples: Vec<f64>,
    gradient: Vec<f64>,
    shape: PotentialShape,
}

impl Potential {
    pub fn free(grid: &Grid1D) -> Self {
        Self {
            samples: alloc::vec![0.0; grid.len()],
            gradient: alloc::vec![0.0; grid.len()],
            shape: PotentialShape::Free,
        }
    }

    pub fn harmonic(grid: &Grid1D, mass: f64, omega: f64, center: f64) -> Self {
        let k = mass * omega * omega;
        Self {
            samples: grid.xs().map(|x| 0.5 * k * (x - center).powi(2)).collect(),
            gradient: grid.xs().map(|x| k * (x - center)).collect(),
            shape: PotentialShape::Harmonic { omega, center },
        }
    }

    pub fn linear(grid: &Grid1D, force: f64) -> Self {
        Self {
            samples: grid.xs().map(|x| force * x).collect(),
            gradient: alloc::vec![force; grid.len()],
            shape: PotentialShape::Linear { force },
        }
    }

    /// Arbitrary samples; the gradient is taken by periodic central
    /// differences.
    pub fn sampled(grid: &Grid1D, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::DimMismatch {
                left: samples.len(),
                right: grid.len(),
            });
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("potential must be finite".into()));
        }
        let n = samples.len();
        let gradient = (0..n)
            .map(|j| (samples[(j + 1) % n] - samples[(j + n - 1) % n]) / (2.0 * grid.dx()))
            .collect();
        Ok(Self {
            samples,
            gradient,
            shape: PotentialShape::Sampled,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `dV/dx` on the grid.
    pub fn gradient(&self) -> &[f64] {
        &self.gradient
    }

    pub fn shape(&self) -> PotentialShape {
        self.shape
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Diagnostics recorded along a trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryLog {
    pub times: Vec<f64>,
    pub mean_x: Vec<f64>,
    pub mean_p: Vec<f64>,
    pub norm: Vec<f64>,
    pub energy: Vec<f64>,
    /// `<dV/dx>`
    pub mean_force: Vec<f64>,
}

impl TrajectoryLog {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |norm(t) - 1|`.
    pub fn max_norm_drift(&self) -> f64 {
        self.norm.iter().fold(0.0, |m, n| m.max((n - 1.0).abs()))
    }

    /// `max_t |E(t) - E(0)| / |E(0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let Some(&e0) = self.energy.first() else {
            return 0.0;
        };
        self.energy
            .iter()
            .fold(0.0, |m, e| m.max((e - e0).abs() / e0.abs()))
    }
}

/// Least-squares line through `(xs, ys)`: returns `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (sxy, sxx) = xs.iter().zip(ys).fold((0.0, 0.0), |(sxy, sxx), (x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

struct Snapshot {
    mean_x: f64,
    mean_p: f64,
    norm: f64,
    energy: f64,
    mean_force: f64,
}

fn snapshot(
    spectral: &mut Spectral,
    psi: &[Complex64],
    grid: &Grid1D,
    particle: Particle,
    v: &Potential,
) -> Snapshot {
    let dx = grid.dx();
    let dp = grid.dp(particle.hbar);
    let mut norm = 0.0;
    let mut mean_x = 0.0;
    let mut potential = 0.0;
    let mut mean_force = 0.0;
    for (j, a) in psi.iter().enumerate() {
        let w = a.norm_sqr() * dx;
        norm += w;
        mean_x += grid.x(j) * w;
        potential += v.samples[j] * w;
        mean_force += v.gradient[j] * w;
    }
    let phi = spectral.analyze(psi);
    let mut mean_p = 0.0;
    let mut kinetic = 0.0;
    for (k, a) in phi.iter().enumerate() {
        let p = spectral.p(k);
        let w = a.norm_sqr() * dp;
        mean_p += p * w;
        kinetic += p * p / (2.0 * particle.mass) * w;
    }
    Snapshot {
        mean_x: mean_x / norm,
        mean_p: mean_p / norm,
        norm,
        energy: (kinetic + potential) / norm,
        mean_force: mean_force / norm,
    }
}

/// Checks `dt max|V| / hbar` and `dt E_kin,max / hbar` against
/// [`STABILITY_LIMIT`].
pub fn check_stability(grid: &Grid1D, particle: Particle, v: &Potential, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let hbar = particle.hbar;
    let pot = dt * v.max_abs() / hbar;
    let p_max = grid.p_max(hbar);
    let kin = dt * p_max * p_max / (2.0 * particle.mass) / hbar;
    if pot >= STABILITY_LIMIT || kin >= STABILITY_LIMIT {
        return Err(Error::StabilityViolation(format!(
            "dt max|V|/hbar = {pot:.3e}, dt E_kin,max/hbar = {kin:.3e} (limit {STABILITY_LIMIT})"
        )));
    }
    Ok(())
}

/// Strang-split propagator for a fixed grid, potential and time step.
pub struct SplitStep {
    spectral: Spectral,
    half_kick: Vec<Complex64>,
    drift: Vec<Complex64>,
    dt: f64,
}

impl SplitStep {
    pub fn new(grid: &Grid1D, particle: Particle, v: &Potential, dt: f64) -> Result<Self> {
        check_stability(grid, particle, v, dt)?;
        if v.samples.len() != grid.len() {
            return Err(Error::DimMismatch {
                left: v.samples.len(),
                right: grid.len(),
            });
        }
        let hbar = particle.hbar;
        let spectral = Spectral::new(*grid, hbar);
        let half_kick = v
            .samples
            .iter()
            .map(|&vx| Complex64::from_polar(1.0, -vx * dt / (2.0 * hbar)))
            .collect();
        let inv_n = 1.0 / grid.len() as f64;
        let drift = (0..grid.len())
            .map(|k| {
                let p = spectral.p(k);
                Complex64::from_polar(inv_n, -p * p * dt / (2.0 * particle.mass * hbar))
            })
            .collect();
        Ok(Self {
            spectral,
            half_kick,
            drift,
            dt,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One Strang step in place.
    pub fn step(&mut self, psi: &mut [Complex64]) {
        for (a, k) in psi.iter_mut().zip(&self.half_kick) {
            *a *= k;
        }
        let drift = &self.drift;
        self.spectral.apply_fft_multiplier(psi, drift);
        for (a, k) in psi.iter_mut().zip(&self.half_kick) {
            *a *= k;
        }
    }
}

/// Split-step evolution recording diagnostics every `record_every` steps
/// (and always at `t = 0` and at the final step).
pub fn split_step_evolve_logged(
    psi: &GridWavefunction,
    v: &Potential,
    dt: f64,
    steps: usize,
    record_every: usize,
) -> Result<(GridWavefunction, TrajectoryLog)> {
    let grid = *psi.grid();
    let particle = psi.particle();
    let mut propagator = SplitStep::new(&grid, particle, v, dt)?;
    if !psi.support_margin_ok() {
        return Err(Error::PacketNearBoundary);
    }
    let mut diag = Spectral::new(grid, particle.hbar);
    let mut amp = psi.amplitudes().to_vec();
    let mut log = TrajectoryLog::default();
    let mut record = |log: &mut TrajectoryLog, amp: &[Complex64], step: usize| {
        let s = snapshot(&mut diag, amp, &grid, particle, v);
        log.times.push(step as f64 * dt);
        log.mean_x.push(s.mean_x);
        log.mean_p.push(s.mean_p);
        log.norm.push(s.norm);
        log.energy.push(s.energy);
        log.mean_force.push(s.mean_force);
    };
    let every = record_every.max(1);
    record(&mut log, &amp, 0);
    for step in 1..=steps {
        propagator.step(&mut amp);
        if step % every == 0 || step == steps {
            record(&mut log, &amp, step);
        }
    }
    let out = GridWavefunction::new(grid, amp, particle)?;
    if !out.support_margin_ok() {
        return Err(Error::PacketNearBoundary);
    }
    Ok((out, log))
}

/// Split-step evolution with diagnostics after every step.
pub fn split_step_evolve(
    psi: &GridWavefunction,
    v: &Potential,
    dt: f64,
    steps: usize,
) -> Result<(GridWavefunction, TrajectoryLog)> {
    split_step_evolve_logged(psi, v, dt, steps, 1)
}

/// Exact free-particle evolution to time `t`.
pub fn free_evolve_exact(psi: &GridWavefunction, t: f64) -> Result<GridWavefunction> {
    psi.check_normalized()?;
    let grid = *psi.grid();
    let particle = psi.particle();
    let mut spectral = Spectral::new(grid, particle.hbar);
    let inv_n = 1.0 / grid.len() as f64;
    let phases: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let p = spectral.p(k);
            Complex64::from_polar(inv_n, -p * p * t / (2.0 * particle.mass * particle.hbar))
        })
        .collect();
    let mut amp = psi.amplitudes().to_vec();
    spectral.apply_fft_multiplier(&mut amp, &phases);
    GridWavefunction::new(grid, amp, particle)
}

/// `<psi, (p^2 / 2m + V) psi>` with the kinetic term evaluated in momentum
/// space.
pub fn energy(psi: &GridWavefunction, v: &Potential) -> Result<f64> {
    psi.check_normalized()?;
    let grid = *psi.grid();
    let particle = psi.particle();
    let mut spectral = Spectral::new(grid, particle.hbar);
    Ok(snapshot(&mut spectral, psi.amplitudes(), &grid, particle, v).energy)
}

/// `max_t |d<p>/dt + <dV/dx>|` using centered differences over the interior
/// samples of a uniformly sampled log.
pub fn ehrenfest_residual(log: &TrajectoryLog) -> Result<f64> {
    const MIN_SAMPLES: usize = 5;
    if log.len() < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_SAMPLES,
            got: log.len(),
        });
    }
    let mut worst: f64 = 0.0;
    for i in 1..log.len() - 1 {
        let dpdt = (log.mean_p[i + 1] - log.mean_p[i - 1]) / (log.times[i + 1] - log.times[i - 1]);
        worst = worst.max((dpdt + log.mean_force[i]).abs());
    }
    Ok(worst)
}
