//! Klein-Gordon and free Dirac dynamics in units with `c = 1`.
//!
//! Klein-Gordon fields are carried in the two-component form
//! `phi1 = psi + (i hbar/m) d_t psi`, `phi2 = psi - (i hbar/m) d_t psi`,
//! which turns `d_tt psi = d_xx psi - (m/hbar)^2 psi` into a first-order
//! system. Each Fourier mode evolves under the constant block
//!
//! ```text
//! d_t (phi1, phi2) = -i [[a + b, a], [-a, -(a + b)]] (phi1, phi2),
//! a = hbar k^2 / 2m,  b = m / hbar,
//! ```
//!
//! whose square is `-omega^2 I` with `omega^2 = k^2 + b^2`, so
//! `exp(M t) = cos(omega t) I + sin(omega t) M / omega` exactly.

mod dirac;

pub use dirac::{
    build_gammas, dirac_free_evolve, dirac_hamiltonian, dirac_mode, dirac_square_check, DiracField,
    DiracMode, GammaSet,
};

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fft::{Fft1d, Radix2};
use crate::grid::{Grid1D, GridWavefunction};
use crate::{c64, Error, Result};

/// `omega(k) = sqrt(k^2 + (m/hbar)^2)`.
pub fn kg_dispersion(k: f64, mass: f64, hbar: f64) -> f64 {
    let b = mass / hbar;
    (k * k + b * b).sqrt()
}

/// Klein-Gordon field in the `(phi1, phi2)` representation.
#[derive(Debug, Clone, PartialEq)]
pub struct KgState {
    grid: Grid1D,
    phi1: Vec<Complex64>,
    phi2: Vec<Complex64>,
    mass: f64,
    hbar: f64,
}

/// Which sign of frequency each mode of a packet carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyBranch {
    /// Time dependence `exp(-i omega t)`.
    Positive,
    /// Time dependence `exp(+i omega t)`.
    Negative,
}

impl KgState {
    pub fn from_components(
        grid: Grid1D,
        phi1: Vec<Complex64>,
        phi2: Vec<Complex64>,
        mass: f64,
        hbar: f64,
    ) -> Result<Self> {
        for len in [phi1.len(), phi2.len()] {
            if len != grid.len() {
                return Err(Error::DimMismatch {
                    left: len,
                    right: grid.len(),
                });
            }
        }
        if !(mass > 0.0 && hbar > 0.0) {
            return Err(Error::InvalidParameter(
                "Klein-Gordon mass and hbar must be positive".into(),
            ));
        }
        Ok(Self {
            grid,
            phi1,
            phi2,
            mass,
            hbar,
        })
    }

    /// Builds `(phi1, phi2)` from `psi` and `d_t psi`.
    pub fn from_fields(
        grid: Grid1D,
        psi: &[Complex64],
        dpsi_dt: &[Complex64],
        mass: f64,
        hbar: f64,
    ) -> Result<Self> {
        let c = c64(0.0, hbar / mass);
        let phi1 = psi.iter().zip(dpsi_dt).map(|(p, d)| p + c * d).collect();
        let phi2 = psi.iter().zip(dpsi_dt).map(|(p, d)| p - c * d).collect();
        Self::from_components(grid, phi1, phi2, mass, hbar)
    }

    /// Packet whose spatial profile at `t = 0` is `profile`, with every mode
    /// on one frequency branch, scaled so its charge is `+1` (positive
    /// branch) or `-1` (negative branch). Mass and hbar come from the
    /// profile's particle.
    pub fn packet(profile: &GridWavefunction, branch: FrequencyBranch) -> Result<Self> {
        let grid = *profile.grid();
        let particle = profile.particle();
        let (mass, hbar) = (particle.mass, particle.hbar);
        let mut plan = Radix2::new(grid.len());
        let mut psi = profile.amplitudes().to_vec();
        plan.forward(&mut psi);
        let sign = match branch {
            FrequencyBranch::Positive => 1.0,
            FrequencyBranch::Negative => -1.0,
        };
        let mut hat1 = Vec::with_capacity(grid.len());
        let mut hat2 = Vec::with_capacity(grid.len());
        for (j, a) in psi.iter().enumerate() {
            let k = grid.p_of_bin(j, 1.0);
            let r = sign * hbar * kg_dispersion(k, mass, hbar) / mass;
            hat1.push(a * (1.0 + r));
            hat2.push(a * (1.0 - r));
        }
        let n = grid.len() as f64;
        plan.inverse(&mut hat1);
        plan.inverse(&mut hat2);
        let mut state = Self::from_components(
            grid,
            hat1.into_iter().map(|v| v / n).collect(),
            hat2.into_iter().map(|v| v / n).collect(),
            mass,
            hbar,
        )?;
        let q = kg_charge(&state);
        let scale = 1.0 / q.abs().sqrt();
        for v in state.phi1.iter_mut().chain(state.phi2.iter_mut()) {
            *v *= scale;
        }
        Ok(state)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn phi1(&self) -> &[Complex64] {
        &self.phi1
    }

    pub fn phi2(&self) -> &[Complex64] {
        &self.phi2
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `psi = (phi1 + phi2) / 2`.
    pub fn psi(&self) -> Vec<Complex64> {
        self.phi1
            .iter()
            .zip(&self.phi2)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    /// `d_t psi = (m / i hbar) (phi1 - phi2) / 2`.
    pub fn dpsi_dt(&self) -> Vec<Complex64> {
        let c = c64(0.0, -0.5 * self.mass / self.hbar);
        self.phi1
            .iter()
            .zip(&self.phi2)
            .map(|(a, b)| c * (a - b))
            .collect()
    }

    pub fn norm_phi1(&self) -> f64 {
        (self.phi1.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    pub fn norm_phi2(&self) -> f64 {
        (self.phi2.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }
}

/// Per-mode propagator for a fixed time step.
pub struct KgPropagator {
    plan: Radix2,
    /// Row-major 2x2 blocks, one per FFT bin.
    blocks: Vec<[Complex64; 4]>,
}

impl KgPropagator {
    pub fn new(grid: &Grid1D, mass: f64, hbar: f64, dt: f64) -> Self {
        let b = mass / hbar;
        let blocks = (0..grid.len())
            .map(|j| {
                let k = grid.p_of_bin(j, 1.0);
                let a = hbar * k * k / (2.0 * mass);
                let w = kg_dispersion(k, mass, hbar);
                let (c, s) = ((w * dt).cos(), (w * dt).sin() / w);
                // exp(M dt) with M = -i [[a+b, a], [-a, -(a+b)]]
                [
                    c64(c, -s * (a + b)),
                    c64(0.0, -s * a),
                    c64(0.0, s * a),
                    c64(c, s * (a + b)),
                ]
            })
            .collect();
        Self {
            plan: Radix2::new(grid.len()),
            blocks,
        }
    }

    /// Applies `steps` time steps in place.
    pub fn advance(&mut self, state: &mut KgState, steps: usize) {
        let n = state.grid.len() as f64;
        self.plan.forward(&mut state.phi1);
        self.plan.forward(&mut state.phi2);
        for _ in 0..steps {
            for ((u, v), m) in state
                .phi1
                .iter_mut()
                .zip(state.phi2.iter_mut())
                .zip(&self.blocks)
            {
                let (a, b) = (*u, *v);
                *u = m[0] * a + m[1] * b;
                *v = m[2] * a + m[3] * b;
            }
        }
        self.plan.inverse(&mut state.phi1);
        self.plan.inverse(&mut state.phi2);
        for v in state.phi1.iter_mut().chain(state.phi2.iter_mut()) {
            *v /= n;
        }
    }
}

/// Exact per-mode evolution by `steps` steps of length `dt`.
pub fn kg_evolve(state: &KgState, dt: f64, steps: usize) -> KgState {
    let mut out = state.clone();
    KgPropagator::new(&state.grid, state.mass, state.hbar, dt).advance(&mut out, steps);
    out
}

/// Conserved density `(i hbar / 2m)(conj(psi) d_t psi - psi d_t conj(psi))`,
/// which in the two-component form is `(|phi1|^2 - |phi2|^2) / 4`.
pub fn kg_density(state: &KgState) -> Vec<f64> {
    state
        .phi1
        .iter()
        .zip(&state.phi2)
        .map(|(a, b)| 0.25 * (a.norm_sqr() - b.norm_sqr()))
        .collect()
}

/// `integral P dx`.
pub fn kg_charge(state: &KgState) -> f64 {
    kg_density(state).iter().sum::<f64>() * state.grid.dx()
}

/// Per-mode energy `|d_t psi_k|^2 + (k^2 + (m/hbar)^2) |psi_k|^2` in FFT
/// order (unnormalized DFT amplitudes).
pub fn kg_mode_energies(state: &KgState) -> Vec<f64> {
    let mut plan = Radix2::new(state.grid.len());
    let mut psi = state.psi();
    let mut dpsi = state.dpsi_dt();
    plan.forward(&mut psi);
    plan.forward(&mut dpsi);
    (0..psi.len())
        .map(|j| {
            let k = state.grid.p_of_bin(j, 1.0);
            let w = kg_dispersion(k, state.mass, state.hbar);
            dpsi[j].norm_sqr() + w * w * psi[j].norm_sqr()
        })
        .collect()
}
