//! Wave functions sampled on uniform periodic grids.
//!
//! The momentum representation uses the analysis kernel
//! `exp(-i p x / hbar) / sqrt(2 pi hbar)`, discretized by an FFT with a phase
//! correction for the grid origin. With momentum spacing
//! `dp = 2 pi hbar / (n dx)` the discrete transform is exactly unitary
//! between `sum |psi|^2 dx` and `sum |phi|^2 dp`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fft::{signed_bin, Fft1d, Radix2};
use crate::{Error, Result};

/// Tolerance on `sum |psi|^2 dx - 1` for operations that need a normalized state.
pub const NORMALIZATION_TOL: f64 = 1e-8;
/// Amplitude bound in the outer support margin.
pub const SUPPORT_MARGIN_AMPLITUDE: f64 = 1e-10;
/// Fraction of the grid on each side that forms the support margin.
pub const SUPPORT_MARGIN_FRACTION: f64 = 0.1;
/// Largest Hermite function index supported by [`hermite_basis`].
pub const MAX_HERMITE_INDEX: usize = 20;

/// Mass and ħ of the particle a wave function describes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub mass: f64,
    pub hbar: f64,
}

impl Particle {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && hbar > 0.0 && mass.is_finite() && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mass and hbar must be positive (mass = {mass}, hbar = {hbar})"
            )));
        }
        Ok(Self { mass, hbar })
    }

    /// Unit mass in natural units.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

/// Uniform periodic 1D grid `x_j = x_min + j dx`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    dx: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, dx: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::InvalidGrid(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !(dx > 0.0 && dx.is_finite() && x_min.is_finite()) {
            return Err(Error::InvalidGrid(format!("dx must be positive, got {dx}")));
        }
        Ok(Self { x_min, dx, n })
    }

    /// Grid of `n` points spanning `[-n dx / 2, n dx / 2)`.
    pub fn centered(n: usize, dx: f64) -> Result<Self> {
        Self::new(-0.5 * n as f64 * dx, dx, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Periodic length `n dx`.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.dx
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }

    /// Momentum spacing of the dual grid.
    pub fn dp(&self, hbar: f64) -> f64 {
        TAU * hbar / (self.n as f64 * self.dx)
    }

    /// Momentum of FFT bin `k` (FFT ordering).
    pub fn p_of_bin(&self, k: usize, hbar: f64) -> f64 {
        signed_bin(k, self.n) as f64 * self.dp(hbar)
    }

    /// Largest |p| on the dual grid.
    pub fn p_max(&self, hbar: f64) -> f64 {
        PI * hbar / self.dx
    }
}

/// `psi(x)` sampled on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    grid: Grid1D,
    amp: Vec<Complex64>,
    particle: Particle,
}

impl GridWavefunction {
    pub fn new(grid: Grid1D, amp: Vec<Complex64>, particle: Particle) -> Result<Self> {
        if amp.len() != grid.len() {
            return Err(Error::DimMismatch {
                left: amp.len(),
                right: grid.len(),
            });
        }
        Ok(Self {
            grid,
            amp,
            particle,
        })
    }

    /// Samples `f` on the grid.
    pub fn from_fn(grid: Grid1D, particle: Particle, f: impl Fn(f64) -> Complex64) -> Self {
        let amp = grid.xs().map(f).collect();
        Self {
            grid,
            amp,
            particle,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amp
    }

    /// `sum |psi|^2 dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.dx
    }

    /// Copy rescaled so that `sum |psi|^2 dx = 1`.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !(norm > 1e-300) {
            return Err(Error::ZeroVector);
        }
        let mut out = self.clone();
        out.amp.iter_mut().for_each(|a| *a /= norm);
        Ok(out)
    }

    pub fn density(&self) -> Vec<f64> {
        self.amp.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `sum conj(self) other dx`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::DimMismatch {
                left: self.grid.len(),
                right: other.grid.len(),
            });
        }
        let s: Complex64 = self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.dx)
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(())
    }

    /// Largest amplitude within the outer [`SUPPORT_MARGIN_FRACTION`] of the
    /// grid on either side.
    pub fn margin_amplitude(&self) -> f64 {
        let m = ((self.grid.len() as f64) * SUPPORT_MARGIN_FRACTION).ceil() as usize;
        let n = self.amp.len();
        self.amp[..m]
            .iter()
            .chain(&self.amp[n - m..])
            .map(|a| a.norm())
            .fold(0.0, f64::max)
    }

    /// `true` when the outer margin carries amplitudes below
    /// [`SUPPORT_MARGIN_AMPLITUDE`], i.e. moments can be trusted on the
    /// periodic grid.
    pub fn support_margin_ok(&self) -> bool {
        self.margin_amplitude() < SUPPORT_MARGIN_AMPLITUDE
    }
}

/// `phi(p)` on the dual momentum grid, stored in ascending `p`
/// (`p_j = (j - n/2) dp`).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavefunction {
    grid: Grid1D,
    particle: Particle,
    amp: Vec<Complex64>,
}

impl MomentumWavefunction {
    pub fn dp(&self) -> f64 {
        self.grid.dp(self.particle.hbar)
    }

    pub fn p(&self, j: usize) -> f64 {
        (j as f64 - (self.grid.len() / 2) as f64) * self.dp()
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.amp.len()).map(|j| self.p(j))
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    /// Position grid this representation is dual to.
    pub fn position_grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn particle(&self) -> Particle {
        self.particle
    }

    /// `sum |phi|^2 dp`.
    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dp()
    }
}

/// Reusable FFT plan plus the phase and scale factors that turn the raw DFT
/// into the continuous-kernel transform on one grid.
pub(crate) struct Spectral {
    grid: Grid1D,
    hbar: f64,
    plan: Radix2,
}

impl Spectral {
    pub(crate) fn new(grid: Grid1D, hbar: f64) -> Self {
        Self {
            grid,
            hbar,
            plan: Radix2::new(grid.len()),
        }
    }

    pub(crate) fn p(&self, k: usize) -> f64 {
        self.grid.p_of_bin(k, self.hbar)
    }

    /// Momentum amplitudes in FFT order.
    pub(crate) fn analyze(&mut self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut buf = psi.to_vec();
        self.plan.forward(&mut buf);
        let scale = self.grid.dx() / (TAU * self.hbar).sqrt();
        let x0 = self.grid.x_min();
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::from_polar(scale, -self.p(k) * x0 / self.hbar);
        }
        buf
    }

    /// Inverse of [`Spectral::analyze`].
    pub(crate) fn synthesize(&mut self, phi: &[Complex64]) -> Vec<Complex64> {
        let scale = self.grid.dp(self.hbar) / (TAU * self.hbar).sqrt();
        let x0 = self.grid.x_min();
        let mut buf: Vec<Complex64> = phi
            .iter()
            .enumerate()
            .map(|(k, &v)| v * Complex64::from_polar(scale, self.p(k) * x0 / self.hbar))
            .collect();
        self.plan.inverse(&mut buf);
        buf
    }

    /// Applies the Fourier multiplier `symbol(p)` in place (no origin phase
    /// is needed since it cancels between the two transforms).
    pub(crate) fn apply_multiplier(
        &mut self,
        buf: &mut [Complex64],
        symbol: impl Fn(f64) -> Complex64,
    ) {
        self.plan.forward(buf);
        let inv_n = 1.0 / self.grid.len() as f64;
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= symbol(self.p(k)) * inv_n;
        }
        self.plan.inverse(buf);
    }

    /// Like [`Spectral::apply_multiplier`] with per-bin factors precomputed in
    /// FFT order; the factors must already carry the `1/n` normalization.
    pub(crate) fn apply_fft_multiplier(&mut self, buf: &mut [Complex64], factors: &[Complex64]) {
        self.plan.forward(buf);
        for (v, f) in buf.iter_mut().zip(factors) {
            *v *= f;
        }
        self.plan.inverse(buf);
    }
}

fn fft_to_ascending<T: Copy>(v: &[T]) -> Vec<T> {
    let h = v.len() / 2;
    v[h..].iter().chain(&v[..h]).copied().collect()
}

fn ascending_to_fft<T: Copy>(v: &[T]) -> Vec<T> {
    let h = v.len() / 2;
    v[h..].iter().chain(&v[..h]).copied().collect()
}

/// Position to momentum representation.
pub fn to_momentum(psi: &GridWavefunction) -> MomentumWavefunction {
    let mut spectral = Spectral::new(psi.grid, psi.particle.hbar);
    let phi = spectral.analyze(&psi.amp);
    MomentumWavefunction {
        grid: psi.grid,
        particle: psi.particle,
        amp: fft_to_ascending(&phi),
    }
}

/// Momentum to position representation; inverse of [`to_momentum`].
pub fn from_momentum(phi: &MomentumWavefunction) -> GridWavefunction {
    let mut spectral = Spectral::new(phi.grid, phi.particle.hbar);
    let amp = spectral.synthesize(&ascending_to_fft(&phi.amp));
    GridWavefunction {
        grid: phi.grid,
        amp,
        particle: phi.particle,
    }
}

/// `d psi / dx` by spectral differentiation.
pub fn spectral_derivative(psi: &GridWavefunction) -> Vec<Complex64> {
    let hbar = psi.particle.hbar;
    let mut buf = psi.amp.clone();
    Spectral::new(psi.grid, hbar).apply_multiplier(&mut buf, |p| Complex64::new(0.0, p / hbar));
    buf
}

/// `p psi = -i hbar d psi / dx`.
pub fn apply_momentum(psi: &GridWavefunction) -> Vec<Complex64> {
    let hbar = psi.particle.hbar;
    spectral_derivative(psi)
        .into_iter()
        .map(|d| d * Complex64::new(0.0, -hbar))
        .collect()
}

fn position_moments(psi: &GridWavefunction) -> (f64, f64) {
    let dx = psi.grid.dx();
    psi.grid
        .xs()
        .zip(&psi.amp)
        .fold((0.0, 0.0), |(m1, m2), (x, a)| {
            let w = a.norm_sqr() * dx;
            (m1 + x * w, m2 + x * x * w)
        })
}

fn momentum_moments(phi: &MomentumWavefunction) -> (f64, f64) {
    let dp = phi.dp();
    phi.momenta()
        .zip(&phi.amp)
        .fold((0.0, 0.0), |(m1, m2), (p, a)| {
            let w = a.norm_sqr() * dp;
            (m1 + p * w, m2 + p * p * w)
        })
}

/// `<x> = sum x |psi|^2 dx`.
pub fn expectation_x(psi: &GridWavefunction) -> Result<f64> {
    psi.check_normalized()?;
    Ok(position_moments(psi).0)
}

/// `<p> = sum p |phi(p)|^2 dp` from the momentum density.
pub fn expectation_p(psi: &GridWavefunction) -> Result<f64> {
    psi.check_normalized()?;
    Ok(momentum_moments(&to_momentum(psi)).0)
}

/// `<p> = -i hbar sum conj(psi) psi' dx` with a spectral derivative.
pub fn expectation_p_position(psi: &GridWavefunction) -> Result<f64> {
    psi.check_normalized()?;
    let p_psi = apply_momentum(psi);
    let s: Complex64 = psi.amp.iter().zip(&p_psi).map(|(a, b)| a.conj() * b).sum();
    Ok(s.re * psi.grid.dx())
}

/// Standard deviations `(Delta x, Delta p)` of the position and momentum
/// densities.
pub fn uncertainties(psi: &GridWavefunction) -> Result<(f64, f64)> {
    psi.check_normalized()?;
    let (x1, x2) = position_moments(psi);
    let (p1, p2) = momentum_moments(&to_momentum(psi));
    Ok((
        (x2 - x1 * x1).max(0.0).sqrt(),
        (p2 - p1 * p1).max(0.0).sqrt(),
    ))
}

/// Normalized Gaussian packet
/// `psi(x) ∝ exp(-(x - x0)^2 / (4 sigma_x^2)) exp(i p0 x / hbar)`.
pub fn gaussian_packet(
    grid: &Grid1D,
    x0: f64,
    p0: f64,
    sigma_x: f64,
    particle: Particle,
) -> Result<GridWavefunction> {
    if !(sigma_x >= 4.0 * grid.dx()) {
        return Err(Error::PacketTooNarrow {
            sigma: sigma_x,
            dx: grid.dx(),
        });
    }
    let slack = 1e-9 * grid.extent();
    let lo = grid.x_min();
    let hi = grid.x_min() + grid.extent();
    if grid.extent() < 12.0 * sigma_x - slack
        || x0 - 6.0 * sigma_x < lo - slack
        || x0 + 6.0 * sigma_x > hi + slack
    {
        return Err(Error::PacketNearBoundary);
    }
    let hbar = particle.hbar;
    let psi = GridWavefunction::from_fn(*grid, particle, |x| {
        let u = x - x0;
        Complex64::from_polar((-u * u / (4.0 * sigma_x * sigma_x)).exp(), p0 * x / hbar)
    });
    psi.normalized()
}

/// Normalized harmonic-oscillator eigenfunction of index `k`, centered at
/// `center`, for angular frequency `omega` (length scale
/// `sqrt(hbar / (m omega))`), built by the stable three-term recurrence of
/// normalized Hermite functions.
pub fn hermite_basis(
    grid: &Grid1D,
    particle: Particle,
    k: usize,
    center: f64,
    omega: f64,
) -> Result<GridWavefunction> {
    if k > MAX_HERMITE_INDEX {
        return Err(Error::InvalidParameter(format!(
            "Hermite index {k} exceeds {MAX_HERMITE_INDEX}"
        )));
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let length = (particle.hbar / (particle.mass * omega)).sqrt();
    let norm0 = PI.powf(-0.25) / length.sqrt();
    let amp: Vec<Complex64> = grid
        .xs()
        .map(|x| {
            let xi = (x - center) / length;
            let mut prev = 0.0;
            let mut cur = norm0 * (-0.5 * xi * xi).exp();
            for j in 0..k {
                let next = (2.0 / (j as f64 + 1.0)).sqrt() * xi * cur
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
            }
            Complex64::new(cur, 0.0)
        })
        .collect();
    let boundary = amp[0].norm().max(amp[amp.len() - 1].norm());
    if boundary >= 1e-12 {
        return Err(Error::GridTooNarrow {
            k,
            amplitude: boundary,
        });
    }
    GridWavefunction::new(*grid, amp, particle)
}
