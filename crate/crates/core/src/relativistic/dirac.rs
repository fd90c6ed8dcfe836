//! Gamma matrices in the standard (Dirac) representation and the free Dirac
//! Hamiltonian `H = sum_j alpha_j p_j + m beta` with `alpha_j = g4 g_j` and
//! `beta = g4`. Spinor index order puts the two `beta = +1` ("large")
//! components first.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fft::{signed_bin, Fft1d, Fft2d, Radix2, Radix2Planner};
use crate::grid::Grid1D;
use crate::hilbert::StateVector;
use crate::linalg::{self, CMatrix, CVector};
use crate::rng::SeededRng;
use crate::{c64, Error, Result};

/// `g1..g3` square to `-I`, `g4` to `+I`, distinct ones anticommute.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    pub g: [CMatrix; 4],
}

impl GammaSet {
    /// `g_{i}` for `i` in `1..=4`.
    pub fn get(&self, i: usize) -> &CMatrix {
        &self.g[i - 1]
    }

    /// `alpha_j = g4 g_j`, `j` in `1..=3`.
    pub fn alpha(&self, j: usize) -> CMatrix {
        self.get(4) * self.get(j)
    }

    pub fn beta(&self) -> &CMatrix {
        self.get(4)
    }

    /// `eta = diag(1, 1, 1, -1)`, so that
    /// `g_i g_j + g_j g_i = -2 eta_ij I`.
    pub fn eta(i: usize, j: usize) -> f64 {
        match (i == j, i) {
            (false, _) => 0.0,
            (true, 4) => -1.0,
            (true, _) => 1.0,
        }
    }
}

fn block(tl: &CMatrix, tr: &CMatrix, bl: &CMatrix, br: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(tl);
    m.view_mut((0, 2), (2, 2)).copy_from(tr);
    m.view_mut((2, 0), (2, 2)).copy_from(bl);
    m.view_mut((2, 2), (2, 2)).copy_from(br);
    m
}

fn pauli() -> [CMatrix; 3] {
    let (o, one, i) = (c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0));
    [
        linalg::from_rows(2, 2, &[o, one, one, o]),
        linalg::from_rows(2, 2, &[o, -i, i, o]),
        linalg::from_rows(2, 2, &[one, o, o, -one]),
    ]
}

/// `g4 = diag(I, -I)`, `g_j = [[0, sigma_j], [-sigma_j, 0]]`.
pub fn build_gammas() -> GammaSet {
    let id = linalg::identity(2);
    let zero = CMatrix::zeros(2, 2);
    let [s1, s2, s3] = pauli();
    let space = |s: &CMatrix| block(&zero, s, &(-s), &zero);
    GammaSet {
        g: [
            space(&s1),
            space(&s2),
            space(&s3),
            block(&id, &zero, &zero, &(-&id)),
        ],
    }
}

/// `sum_j alpha_j p_j + m beta`.
pub fn dirac_hamiltonian(p: [f64; 3], mass: f64) -> CMatrix {
    let g = build_gammas();
    let mut h = g.beta() * c64(mass, 0.0);
    for (j, pj) in p.iter().enumerate() {
        h += g.alpha(j + 1) * c64(*pj, 0.0);
    }
    h
}

/// Eigensystem of the Dirac Hamiltonian for momentum `p` along x.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracMode {
    pub p: f64,
    pub mass: f64,
    /// Ascending: `-E, -E, +E, +E`.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `energies`.
    pub spinors: CMatrix,
}

impl DiracMode {
    /// `E(p) = sqrt(p^2 + m^2)`.
    pub fn energy(&self) -> f64 {
        (self.p * self.p + self.mass * self.mass).sqrt()
    }

    /// Column indices of the positive-energy spinors.
    pub fn positive_indices(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.energies[i] > 0.0).collect()
    }

    pub fn spinor(&self, i: usize) -> CVector {
        self.spinors.column(i).into_owned()
    }

    /// Norm of the `beta = -1` (lower) components of spinor `i`.
    pub fn small_component_norm(&self, i: usize) -> f64 {
        self.spinors.view((2, i), (2, 1)).norm()
    }

    /// Spinor `i` with its upper and lower halves exchanged.
    pub fn swapped(&self, i: usize) -> StateVector {
        let v = self.spinor(i);
        let w = CVector::from_iterator(4, [v[2], v[3], v[0], v[1]]);
        StateVector::from_vector(w).expect("eigenvectors have unit norm")
    }

    /// `<psi, H psi>` for the swapped spinor.
    pub fn swapped_energy(&self, i: usize) -> f64 {
        let h = dirac_hamiltonian([self.p, 0.0, 0.0], self.mass);
        let w = self.swapped(i);
        let v = w.as_vector();
        v.dotc(&(h * v)).re
    }
}

pub fn dirac_mode(p: f64, mass: f64) -> Result<DiracMode> {
    let h = dirac_hamiltonian([p, 0.0, 0.0], mass);
    let (energies, spinors) = linalg::hermitian_eigen(&h)?;
    Ok(DiracMode {
        p,
        mass,
        energies,
        spinors,
    })
}

/// Four-component spinor field on a 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracField {
    pub grid: Grid1D,
    pub components: [Vec<Complex64>; 4],
}

impl DiracField {
    /// `f(x) u` for a fixed spinor `u`.
    pub fn from_profile(grid: Grid1D, profile: &[Complex64], u: [Complex64; 4]) -> Self {
        let components = u.map(|c| profile.iter().map(|f| f * c).collect());
        Self { grid, components }
    }

    /// `sum_a integral |psi_a|^2 dx`.
    pub fn norm_sqr(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * self.grid.dx()
    }
}

/// Free evolution along x by time `t`, exact per mode:
/// `exp(-i H t / hbar) = cos(E t / hbar) I - i sin(E t / hbar) H / E`.
pub fn dirac_free_evolve(field: &DiracField, mass: f64, hbar: f64, t: f64) -> DiracField {
    let n = field.grid.len();
    let mut plan = Radix2::new(n);
    let mut hat = field.components.clone();
    for c in hat.iter_mut() {
        plan.forward(c);
    }
    for j in 0..n {
        let p = field.grid.p_of_bin(j, hbar);
        let e = (p * p + mass * mass).sqrt();
        let h = dirac_hamiltonian([p, 0.0, 0.0], mass);
        let u = if e > 0.0 {
            let (c, s) = ((e * t / hbar).cos(), (e * t / hbar).sin());
            linalg::identity(4) * c64(c, 0.0) + h * c64(0.0, -s / e)
        } else {
            linalg::identity(4)
        };
        let v = CVector::from_iterator(4, hat.iter().map(|c| c[j]));
        let w = u * v;
        for (a, c) in hat.iter_mut().enumerate() {
            c[j] = w[a] / n as f64;
        }
    }
    for c in hat.iter_mut() {
        plan.inverse(c);
    }
    DiracField {
        grid: field.grid,
        components: hat,
    }
}

/// Checks `D^2 = d_tt - d_xx` for `D = g1 d_x + g4 d_t` on an `n x n`
/// periodic `(x, t)` grid of side `2 pi`, with spectral derivatives. Returns
/// the largest `||D^2 psi - (d_tt - d_xx) psi|| / ||psi||` over 20 random
/// spinor fields band-limited to `|k| <= n/4`.
pub fn dirac_square_check(n_grid: usize, seed: u64) -> Result<f64> {
    if !n_grid.is_power_of_two() || n_grid < 8 {
        return Err(Error::InvalidGrid(format!(
            "Dirac check grid must be a power of two >= 8, got {n_grid}"
        )));
    }
    let n = n_grid;
    let mut rng = SeededRng::new(seed);
    let mut fft = Fft2d::new(&mut Radix2Planner, n, n);
    let cutoff = (n / 4) as i64;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let field: [Vec<Complex64>; 4] = core::array::from_fn(|_| {
            let mut hat: Vec<Complex64> = (0..n * n)
                .map(|idx| {
                    let (kx, kt) = (signed_bin(idx % n, n), signed_bin(idx / n, n));
                    if kx.abs() <= cutoff && kt.abs() <= cutoff {
                        c64(rng.normal(), rng.normal())
                    } else {
                        c64(0.0, 0.0)
                    }
                })
                .collect();
            fft.inverse(&mut hat);
            hat
        });
        let residual = square_residual(&mut fft, &field, n);
        worst = worst.max(residual);
    }
    Ok(worst)
}

/// Rows are t, columns x.
pub(crate) fn square_residual<P: Fft1d>(
    fft: &mut Fft2d<P>,
    field: &[Vec<Complex64>; 4],
    n: usize,
) -> f64 {
    let g = build_gammas();
    let d1 = apply_dirac_operator(fft, &g, field, n);
    let d2 = apply_dirac_operator(fft, &g, &d1, n);
    let mut wave = field.clone();
    for c in wave.iter_mut() {
        spectral_multiply(fft, c, n, |kx, kt| c64(kx * kx - kt * kt, 0.0));
    }
    let diff: f64 = d2
        .iter()
        .zip(&wave)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()))
        .sum();
    let norm: f64 = field
        .iter()
        .flat_map(|c| c.iter())
        .map(|v| v.norm_sqr())
        .sum();
    (diff / norm).sqrt()
}

fn spectral_multiply<P: Fft1d>(
    fft: &mut Fft2d<P>,
    data: &mut [Complex64],
    n: usize,
    symbol: impl Fn(f64, f64) -> Complex64,
) {
    fft.forward(data);
    let inv = 1.0 / (n * n) as f64;
    for (idx, v) in data.iter_mut().enumerate() {
        let (kx, kt) = (signed_bin(idx % n, n), signed_bin(idx / n, n));
        // the Nyquist row/column has no well-defined derivative
        let nyq = |k: i64| 2 * k.unsigned_abs() as usize == n;
        if nyq(kx) || nyq(kt) {
            *v = c64(0.0, 0.0);
        } else {
            *v *= symbol(kx as f64, kt as f64) * inv;
        }
    }
    fft.inverse(data);
}

fn apply_dirac_operator<P: Fft1d>(
    fft: &mut Fft2d<P>,
    g: &GammaSet,
    field: &[Vec<Complex64>; 4],
    n: usize,
) -> [Vec<Complex64>; 4] {
    let deriv = |fft: &mut Fft2d<P>, along_x: bool| -> [Vec<Complex64>; 4] {
        let mut out = field.clone();
        for c in out.iter_mut() {
            spectral_multiply(fft, c, n, |kx, kt| c64(0.0, if along_x { kx } else { kt }));
        }
        out
    };
    let dx = deriv(fft, true);
    let dt = deriv(fft, false);
    let (g1, g4) = (g.get(1), g.get(4));
    core::array::from_fn(|a| {
        (0..n * n)
            .map(|idx| {
                (0..4)
                    .map(|b| g1[(a, b)] * dx[b][idx] + g4[(a, b)] * dt[b][idx])
                    .sum()
            })
            .collect()
    })
}
