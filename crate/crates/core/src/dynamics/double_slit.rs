//! Two-slit scattering of a 2D packet on an `nx x ny` periodic grid.
//!
//! The opaque plate is a hard mask (`psi = 0` on plate cells after every
//! kinetic step) and the domain edges carry a quadratic sponge that damps
//! outgoing waves. The screen records the time-integrated probability flux
//! `J_x = (hbar/m) Im(conj(psi) d_x psi)` through one grid column, with the
//! `x` derivative taken spectrally.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::dynamics::STABILITY_LIMIT;
use crate::fft::{signed_bin, Fft2d, FftPlanner, Radix2Planner};
use crate::grid::Particle;
use crate::{Error, Result};

/// Stop once the probability between plate and screen falls below this
/// fraction of its peak.
const TRANSIT_CUTOFF: f64 = 1e-3;
const MIN_TRANSMITTED: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitMode {
    Both,
    /// Only the slit at `slit_centers[0]` is open.
    Slit1,
    /// Only the slit at `slit_centers[1]` is open.
    Slit2,
}

/// Geometry, packet and numerics of a two-slit run. Cell centres sit at
/// `x_i = i h` and `y_j = (j - ny/2 + 1/2) h`, so the `y` grid is symmetric
/// about zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitScreenConfig {
    pub nx: usize,
    pub ny: usize,
    /// Grid spacing, equal in x and y.
    pub h: f64,
    pub particle: Particle,
    /// Left face of the plate.
    pub barrier_x: f64,
    pub barrier_thickness: f64,
    pub slit_centers: [f64; 2],
    pub slit_width: f64,
    pub screen_x: f64,
    pub packet_x0: f64,
    pub packet_sigma_x: f64,
    pub packet_sigma_y: f64,
    pub p0: f64,
    /// Peak damping rate of the sponge (1/time).
    pub absorber_strength: f64,
    /// Sponge width as a fraction of the grid on each edge.
    pub absorber_fraction: f64,
    pub dt: f64,
    pub max_steps: usize,
}

impl Default for SlitScreenConfig {
    /// 512 x 256 cells, wavelength 3 cells, slits 16 apart and 4 wide,
    /// screen 100 cells past the plate. The plate is 10 cells thick: the
    /// spectral kinetic operator couples cells with weight falling off only
    /// as `1/distance^2`, so a thin masked plate leaks.
    fn default() -> Self {
        Self {
            nx: 512,
            ny: 256,
            h: 1.0,
            particle: Particle::natural(),
            barrier_x: 130.0,
            barrier_thickness: 10.0,
            slit_centers: [-8.0, 8.0],
            slit_width: 4.0,
            screen_x: 240.0,
            packet_x0: 90.0,
            packet_sigma_x: 8.0,
            packet_sigma_y: 20.0,
            p0: TAU / 3.0,
            absorber_strength: 1.0,
            absorber_fraction: 0.08,
            dt: 0.05,
            max_steps: 6000,
        }
    }
}

impl SlitScreenConfig {
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - self.ny as f64 / 2.0 + 0.5) * self.h
    }

    /// Slit separation `d`.
    pub fn slit_separation(&self) -> f64 {
        (self.slit_centers[1] - self.slit_centers[0]).abs()
    }

    /// Distance from the exit face of the plate to the screen. The slits
    /// are short channels, so the outgoing waves start at the exit face.
    pub fn screen_distance(&self) -> f64 {
        self.screen_x - (self.barrier_x + self.barrier_thickness)
    }

    /// Far-field two-source fringe spacing `2 pi hbar L / (p0 d)`.
    pub fn fraunhofer_spacing(&self) -> f64 {
        TAU * self.particle.hbar * self.screen_distance() / (self.p0 * self.slit_separation())
    }

    fn sponge_cells(&self, n: usize) -> f64 {
        (self.absorber_fraction * n as f64).round()
    }

    /// Largest kinetic energy representable on the grid.
    pub fn max_kinetic_energy(&self) -> f64 {
        let p = self.particle.hbar * core::f64::consts::PI / self.h;
        2.0 * p * p / (2.0 * self.particle.mass)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidParameter(msg));
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if !n.is_power_of_two() || n < 8 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be a power of two >= 8"
                )));
            }
        }
        if !(self.h > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {}",
                self.h
            )));
        }
        if !(self.slit_width >= 4.0 * self.h) {
            return bad(format!(
                "slit width {} is below 4 grid cells ({})",
                self.slit_width,
                4.0 * self.h
            ));
        }
        if self.slit_separation() <= self.slit_width {
            return bad("slits overlap".into());
        }
        if !(self.barrier_thickness > 0.0) {
            return bad("barrier thickness must be positive".into());
        }
        if !(self.screen_x > self.barrier_x + self.barrier_thickness) {
            return bad("screen must lie beyond the barrier".into());
        }
        if !(self.p0 > 0.0) {
            return bad("incident momentum must point towards the barrier".into());
        }
        if !(self.absorber_strength >= 0.0) || !(0.0..0.5).contains(&self.absorber_fraction) {
            return bad("absorber strength must be >= 0 and width below half the grid".into());
        }
        let sx = self.sponge_cells(self.nx) * self.h;
        let x_hi = self.nx as f64 * self.h - sx;
        let y_hi = self.y(self.ny - 1) - self.sponge_cells(self.ny) * self.h;
        if self.packet_x0 + 3.0 * self.packet_sigma_x > self.barrier_x {
            return bad("packet overlaps the barrier".into());
        }
        if self.packet_x0 - 3.0 * self.packet_sigma_x < sx {
            return bad("packet starts inside the absorber".into());
        }
        if self.screen_x >= x_hi {
            return bad("screen lies inside the absorber".into());
        }
        let outer =
            self.slit_centers[0].abs().max(self.slit_centers[1].abs()) + self.slit_width / 2.0;
        if outer >= y_hi {
            return bad("slits reach into the absorber".into());
        }
        if self.packet_sigma_x < 4.0 * self.h || self.packet_sigma_y < 4.0 * self.h {
            return Err(Error::PacketTooNarrow {
                sigma: self.packet_sigma_x.min(self.packet_sigma_y),
                dx: self.h,
            });
        }
        let kin = self.dt * self.max_kinetic_energy() / self.particle.hbar;
        if !(self.dt > 0.0) || kin >= STABILITY_LIMIT {
            return Err(Error::StabilityViolation(format!(
                "dt E_kin,max/hbar = {kin:.3e} (limit {STABILITY_LIMIT})"
            )));
        }
        Ok(())
    }

    fn is_plate(&self, x: f64, y: f64, mode: SlitMode) -> bool {
        if x < self.barrier_x || x >= self.barrier_x + self.barrier_thickness {
            return false;
        }
        let open = |c: f64| (y - c).abs() < self.slit_width / 2.0;
        let in_slit = match mode {
            SlitMode::Both => open(self.slit_centers[0]) || open(self.slit_centers[1]),
            SlitMode::Slit1 => open(self.slit_centers[0]),
            SlitMode::Slit2 => open(self.slit_centers[1]),
        };
        !in_slit
    }

    fn sponge_rate(&self, i: usize, j: usize) -> f64 {
        let edge = |k: usize, n: usize| {
            let w = self.sponge_cells(n);
            if w == 0.0 {
                return 0.0;
            }
            let d = (k as f64 + 0.5).min(n as f64 - k as f64 - 0.5);
            let depth = ((w - d) / w).max(0.0);
            depth * depth
        };
        self.absorber_strength * edge(i, self.nx).max(edge(j, self.ny))
    }
}

/// Time-integrated flux through the screen column.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenPattern {
    pub y: Vec<f64>,
    /// Probability per unit length of crossing the screen at `y`, for a unit
    /// incident norm.
    pub intensity: Vec<f64>,
    pub steps: usize,
    pub elapsed: f64,
    /// Rows outside the sponge.
    pub interior: core::ops::Range<usize>,
}

impl ScreenPattern {
    fn dy(&self) -> f64 {
        self.y[1] - self.y[0]
    }

    /// `integral I(y) dy`.
    pub fn transmitted(&self) -> f64 {
        self.intensity.iter().sum::<f64>() * self.dy()
    }

    /// Pointwise sum, for comparing against single-slit runs.
    pub fn sum(&self, other: &Self) -> Vec<f64> {
        self.intensity
            .iter()
            .zip(&other.intensity)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `sum |I - ref| / sum |ref|`.
    pub fn relative_l1_distance(&self, reference: &[f64]) -> f64 {
        let num: f64 = self
            .intensity
            .iter()
            .zip(reference)
            .map(|(a, b)| (a - b).abs())
            .sum();
        num / reference.iter().map(|v| v.abs()).sum::<f64>()
    }

    /// `max_j |I(y_j) - I(-y_j)| / max I`.
    pub fn mirror_asymmetry(&self) -> f64 {
        let n = self.intensity.len();
        let peak = self.intensity.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        (0..n)
            .map(|j| (self.intensity[j] - self.intensity[n - 1 - j]).abs())
            .fold(0.0, f64::max)
            / peak
    }

    /// Interior local maxima above `min_rel * max I`, located to sub-cell
    /// accuracy by a parabola through the three samples around each peak.
    pub fn maxima(&self, min_rel: f64) -> Vec<f64> {
        self.extrema(min_rel, true)
    }

    pub fn minima(&self) -> Vec<f64> {
        self.extrema(0.0, false)
    }

    fn extrema(&self, min_rel: f64, maxima: bool) -> Vec<f64> {
        let v = &self.intensity;
        let peak = v[self.interior.clone()]
            .iter()
            .fold(0.0_f64, |m, x| m.max(*x));
        let lo = self.interior.start.max(1);
        let hi = self.interior.end.min(v.len() - 1);
        let sign = if maxima { 1.0 } else { -1.0 };
        (lo..hi)
            .filter(|&j| {
                let (a, b, c) = (sign * v[j - 1], sign * v[j], sign * v[j + 1]);
                b > a && b >= c && (!maxima || v[j] >= min_rel * peak)
            })
            .map(|j| {
                let (a, b, c) = (v[j - 1], v[j], v[j + 1]);
                let curv = a - 2.0 * b + c;
                let shift = if curv != 0.0 {
                    0.5 * (a - c) / curv
                } else {
                    0.0
                };
                self.y[j] + shift * self.dy()
            })
            .collect()
    }

    /// Half the distance between the two maxima flanking the central one.
    pub fn fringe_spacing(&self, min_rel: f64) -> Option<f64> {
        let peaks = self.maxima(min_rel);
        let c = central_index(&peaks)?;
        if c == 0 || c + 1 >= peaks.len() {
            return None;
        }
        Some(0.5 * (peaks[c + 1] - peaks[c - 1]))
    }

    /// `(I_max - I_min) / (I_max + I_min)` from the central maximum and the
    /// mean of its two neighbouring minima.
    pub fn central_visibility(&self) -> Option<f64> {
        let at = |y: f64| {
            let j = ((y / self.dy()) + self.y.len() as f64 / 2.0 - 0.5).round() as usize;
            self.intensity[j.min(self.y.len() - 1)]
        };
        let peaks = self.maxima(0.0);
        let y_max = peaks[central_index(&peaks)?];
        let mins = self.minima();
        let below = mins
            .iter()
            .filter(|&&y| y < y_max)
            .copied()
            .fold(f64::NAN, f64::max);
        let above = mins
            .iter()
            .filter(|&&y| y > y_max)
            .copied()
            .fold(f64::NAN, f64::min);
        if below.is_nan() || above.is_nan() {
            return None;
        }
        let i_max = at(y_max);
        let i_min = 0.5 * (at(below) + at(above));
        Some((i_max - i_min) / (i_max + i_min))
    }
}

fn central_index(ys: &[f64]) -> Option<usize> {
    ys.iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
}

/// Two-slit run with the built-in FFT.
pub fn double_slit_run(cfg: &SlitScreenConfig, mode: SlitMode) -> Result<ScreenPattern> {
    double_slit_run_with(cfg, mode, &mut Radix2Planner)
}

/// Two-slit run with a caller-supplied FFT backend.
pub fn double_slit_run_with<P: FftPlanner>(
    cfg: &SlitScreenConfig,
    mode: SlitMode,
    planner: &mut P,
) -> Result<ScreenPattern> {
    cfg.validate()?;
    let (nx, ny, h) = (cfg.nx, cfg.ny, cfg.h);
    let Particle { mass, hbar } = cfg.particle;
    let dt = cfg.dt;
    let mut fft = Fft2d::new(planner, nx, ny);

    let mut psi: Vec<Complex64> = (0..nx * ny)
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let (x, y) = (cfg.x(i), cfg.y(j));
            let u = x - cfg.packet_x0;
            let env = -u * u / (4.0 * cfg.packet_sigma_x.powi(2))
                - y * y / (4.0 * cfg.packet_sigma_y.powi(2));
            Complex64::from_polar(env.exp(), cfg.p0 * x / hbar)
        })
        .collect();
    let norm = (psi.iter().map(|a| a.norm_sqr()).sum::<f64>() * h * h).sqrt();
    for a in psi.iter_mut() {
        *a /= norm;
    }

    let kx = |k: usize| TAU * hbar * signed_bin(k, nx) as f64 / (nx as f64 * h);
    let ky = |k: usize| TAU * hbar * signed_bin(k, ny) as f64 / (ny as f64 * h);
    let inv_n = 1.0 / (nx * ny) as f64;
    let drift: Vec<Complex64> = (0..nx * ny)
        .map(|idx| {
            let (px, py) = (kx(idx % nx), ky(idx / nx));
            Complex64::from_polar(inv_n, -(px * px + py * py) * dt / (2.0 * mass * hbar))
        })
        .collect();
    // Real factor per cell: 0 on the plate, exp(-sigma dt) in the sponge.
    let position: Vec<f64> = (0..nx * ny)
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            if cfg.is_plate(cfg.x(i), cfg.y(j), mode) {
                0.0
            } else {
                (-cfg.sponge_rate(i, j) * dt).exp()
            }
        })
        .collect();

    let screen = (cfg.screen_x / h).round() as usize;
    let weights = derivative_row(nx, h);
    let transit_lo = ((cfg.barrier_x + cfg.barrier_thickness) / h).ceil() as usize;

    let mut intensity = vec![0.0; ny];
    let mut peak_transit: f64 = 0.0;
    let mut steps = 0;
    while steps < cfg.max_steps {
        fft.forward(&mut psi);
        for (a, d) in psi.iter_mut().zip(&drift) {
            *a *= d;
        }
        fft.inverse(&mut psi);
        for (a, m) in psi.iter_mut().zip(&position) {
            *a *= m;
        }
        steps += 1;

        let mut transit = 0.0;
        for (j, row) in psi.chunks_exact(nx).enumerate() {
            let mut deriv = Complex64::new(0.0, 0.0);
            for (i, a) in row.iter().enumerate() {
                deriv += weights[(screen + nx - i) % nx] * a;
            }
            intensity[j] += hbar / mass * (row[screen].conj() * deriv).im * dt;
            transit += row[transit_lo..=screen]
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>();
        }
        transit *= h * h;
        peak_transit = peak_transit.max(transit);
        if peak_transit > MIN_TRANSMITTED && transit < TRANSIT_CUTOFF * peak_transit {
            break;
        }
    }

    let sponge_y = cfg.sponge_cells(ny) as usize;
    let pattern = ScreenPattern {
        y: (0..ny).map(|j| cfg.y(j)).collect(),
        intensity,
        steps,
        elapsed: steps as f64 * dt,
        interior: sponge_y..ny - sponge_y,
    };
    let transmitted = pattern.transmitted();
    if !(transmitted >= MIN_TRANSMITTED) {
        return Err(Error::NoTransmission { transmitted });
    }
    Ok(pattern)
}

/// Spectral differentiation weights on a periodic grid:
/// `f'(x_s) = sum_i w[(s - i) mod n] f(x_i)`, with the Nyquist mode dropped.
fn derivative_row(n: usize, h: f64) -> Vec<Complex64> {
    (0..n)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let s = signed_bin(k, n);
                if 2 * s.unsigned_abs() as usize == n {
                    continue;
                }
                let kappa = TAU * s as f64 / (n as f64 * h);
                let theta = TAU * (s * m as i64).rem_euclid(n as i64) as f64 / n as f64;
                acc += Complex64::new(0.0, kappa) * Complex64::from_polar(1.0, theta);
            }
            acc / n as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SlitScreenConfig {
        SlitScreenConfig {
            nx: 256,
            ny: 128,
            barrier_x: 70.0,
            screen_x: 120.0,
            packet_x0: 40.0,
            packet_sigma_x: 6.0,
            packet_sigma_y: 12.0,
            slit_centers: [-6.0, 6.0],
            ..SlitScreenConfig::default()
        }
    }

    #[test]
    fn default_config_is_valid() {
        SlitScreenConfig::default().validate().unwrap();
        small().validate().unwrap();
    }

    #[test]
    fn narrow_slits_are_rejected() {
        let cfg = SlitScreenConfig {
            slit_width: 3.0,
            ..SlitScreenConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn overlapping_slits_and_misplaced_screen_are_rejected() {
        let overlap = SlitScreenConfig {
            slit_centers: [-1.0, 1.0],
            ..SlitScreenConfig::default()
        };
        assert!(overlap.validate().is_err());
        let behind = SlitScreenConfig {
            screen_x: 100.0,
            ..SlitScreenConfig::default()
        };
        assert!(behind.validate().is_err());
    }

    #[test]
    fn large_time_step_is_rejected() {
        let cfg = SlitScreenConfig {
            dt: 0.06,
            ..SlitScreenConfig::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::StabilityViolation(_))));
    }

    #[test]
    fn derivative_weights_differentiate_a_sine() {
        let (n, h) = (64, 0.5);
        let w = derivative_row(n, h);
        let kappa = TAU * 3.0 / (n as f64 * h);
        let f: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((kappa * i as f64 * h).sin(), 0.0))
            .collect();
        for s in [0usize, 7, 63] {
            let d: Complex64 = (0..n).map(|i| w[(s + n - i) % n] * f[i]).sum();
            let exact = kappa * (kappa * s as f64 * h).cos();
            assert!((d.re - exact).abs() < 1e-12 && d.im.abs() < 1e-12);
        }
    }

    #[test]
    fn one_slit_transmits_about_half() {
        let one = double_slit_run(&small(), SlitMode::Slit1).unwrap();
        let both = double_slit_run(&small(), SlitMode::Both).unwrap();
        let ratio = one.transmitted() / both.transmitted();
        assert!((0.3..0.7).contains(&ratio), "{ratio}");
    }

    #[test]
    fn symmetric_setup_gives_symmetric_pattern() {
        let both = double_slit_run(&small(), SlitMode::Both).unwrap();
        assert!(
            both.mirror_asymmetry() < 1e-6,
            "{}",
            both.mirror_asymmetry()
        );
        let s1 = double_slit_run(&small(), SlitMode::Slit1).unwrap();
        let s2 = double_slit_run(&small(), SlitMode::Slit2).unwrap();
        let n = s1.intensity.len();
        let peak = s1.intensity.iter().fold(0.0_f64, |m, v| m.max(*v));
        for j in 0..n {
            assert!((s1.intensity[j] - s2.intensity[n - 1 - j]).abs() < 1e-6 * peak);
        }
    }
}
