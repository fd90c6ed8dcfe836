//! Angular momentum matrices, spin-1/2 precession, two-spin coupling and
//! exchange symmetry.
//!
//! Spin bases are ordered by descending `m` (`m = j, j-1, ..., -j`), so for
//! spin 1/2 index 0 is "up". Two-spin product states use index
//! `2 * i1 + i2`, giving the order `++, +-, -+, --`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::hilbert::{BornSampler, Observable, StateVector};
use crate::linalg::{self, CMatrix, CVector};
use crate::rng::SeededRng;
use crate::{c64, Error, Result};

/// Largest supported `2j`.
pub const MAX_TWO_J: u32 = 40;
/// Second singular value above which a two-qubit state counts as entangled.
pub const ENTANGLEMENT_TOL: f64 = 1e-10;
/// Projected norm below which a state has no component in the requested
/// exchange sector.
pub const PAULI_REJECT_TOL: f64 = 1e-12;
const NORMALIZATION_TOL: f64 = 1e-10;

/// Angular momentum matrices for one value of `j` in the `|j, m>` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    pub two_j: u32,
    pub hbar: f64,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub jplus: CMatrix,
    pub jminus: CMatrix,
}

impl SpinSystem {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// `m` of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        self.j() - i as f64
    }

    /// `Jx^2 + Jy^2 + Jz^2`.
    pub fn j_squared(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }

    /// Component `k` (0, 1, 2 for x, y, z).
    pub fn component(&self, k: usize) -> &CMatrix {
        [&self.jx, &self.jy, &self.jz][k]
    }
}

/// Ladder construction with Condon-Shortley phases:
/// `<j, m+1| J+ |j, m> = hbar sqrt(j(j+1) - m(m+1))`.
pub fn spin_matrices(two_j: u32, hbar: f64) -> Result<SpinSystem> {
    if two_j == 0 || two_j > MAX_TWO_J {
        return Err(Error::InvalidJ(two_j));
    }
    let dim = two_j as usize + 1;
    let j = two_j as f64 / 2.0;
    let m = |i: usize| j - i as f64;
    let jz = CMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            c64(m(r) * hbar, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let jplus = CMatrix::from_fn(dim, dim, |r, c| {
        if r + 1 == c {
            let mc = m(c);
            c64(hbar * (j * (j + 1.0) - mc * (mc + 1.0)).sqrt(), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus) * c64(0.5, 0.0);
    let jy = (&jplus - &jminus) * c64(0.0, -0.5);
    Ok(SpinSystem {
        two_j,
        hbar,
        jx,
        jy,
        jz,
        jplus,
        jminus,
    })
}

/// Largest Frobenius residual of `[Jx,Jy] = i hbar Jz` and its cyclic
/// permutations.
pub fn check_su2(s: &SpinSystem) -> f64 {
    let ih = c64(0.0, s.hbar);
    (0..3)
        .map(|k| {
            let (a, b, c) = (
                s.component(k),
                s.component((k + 1) % 3),
                s.component((k + 2) % 3),
            );
            linalg::frobenius_norm(&(a * b - b * a - c * ih))
        })
        .fold(0.0, f64::max)
}

fn check_pair(alpha: Complex64, beta: Complex64) -> Result<()> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(())
}

/// Spin 1/2 in a field along z with `H = omega0 Sz`:
/// `(alpha e^{-i omega0 t/2}, beta e^{+i omega0 t/2})`.
pub fn larmor_evolve(
    alpha: Complex64,
    beta: Complex64,
    omega0: f64,
    t: f64,
) -> Result<StateVector> {
    check_pair(alpha, beta)?;
    let half = 0.5 * omega0 * t;
    Ok(StateVector::from_unit(CVector::from_column_slice(&[
        alpha * Complex64::from_polar(1.0, -half),
        beta * Complex64::from_polar(1.0, half),
    ])))
}

/// Mean magnetic moment `<gamma S>` along x, y, z at time `t`, evaluated as
/// expectations in the evolved state.
pub fn magnetic_moment_means(
    alpha: Complex64,
    beta: Complex64,
    omega0: f64,
    gamma_ratio: f64,
    t: f64,
    hbar: f64,
) -> Result<[f64; 3]> {
    let psi = larmor_evolve(alpha, beta, omega0, t)?;
    let s = spin_matrices(1, hbar)?;
    let v = psi.as_vector();
    let mean = |m: &CMatrix| v.dotc(&(m * v)).re * gamma_ratio;
    Ok([mean(&s.jx), mean(&s.jy), mean(&s.jz)])
}

/// Closed form of [`magnetic_moment_means`]: with
/// `gamma hbar conj(alpha) beta = C e^{i phi}`,
/// `mu_x = C cos(omega0 t + phi)`, `mu_y = C sin(omega0 t + phi)` and
/// `mu_z = gamma hbar (|alpha|^2 - |beta|^2) / 2`.
pub fn magnetic_moment_closed_form(
    alpha: Complex64,
    beta: Complex64,
    omega0: f64,
    gamma_ratio: f64,
    t: f64,
    hbar: f64,
) -> Result<[f64; 3]> {
    check_pair(alpha, beta)?;
    let w = alpha.conj() * beta * gamma_ratio * hbar;
    let (c, phi) = (w.norm(), w.arg());
    Ok([
        c * (omega0 * t + phi).cos(),
        c * (omega0 * t + phi).sin(),
        0.5 * gamma_ratio * hbar * (alpha.norm_sqr() - beta.norm_sqr()),
    ])
}

/// Index conventions and the coupled basis of two spin-1/2 particles.
pub struct TwoSpinBasis;

impl TwoSpinBasis {
    pub const UP_UP: usize = 0;
    pub const UP_DOWN: usize = 1;
    pub const DOWN_UP: usize = 2;
    pub const DOWN_DOWN: usize = 3;

    /// Product state `sigma_{s1, s2}` (`true` = up).
    pub fn product(s1_up: bool, s2_up: bool) -> StateVector {
        StateVector::basis(4, 2 * usize::from(!s1_up) + usize::from(!s2_up))
    }

    /// `Theta_1 = ++`, `Theta_2 = --`, `Theta_3 = (+- + -+)/sqrt 2` (the
    /// triplet) and `Theta_4 = (+- - -+)/sqrt 2` (the singlet), for
    /// `k = 1..=4`.
    pub fn theta(k: usize) -> StateVector {
        let r = FRAC_1_SQRT_2;
        let amps: [f64; 4] = match k {
            1 => [1.0, 0.0, 0.0, 0.0],
            2 => [0.0, 0.0, 0.0, 1.0],
            3 => [0.0, r, r, 0.0],
            4 => [0.0, r, -r, 0.0],
            _ => panic!("coupled basis index {k} is outside 1..=4"),
        };
        StateVector::from_unit(CVector::from_iterator(4, amps.iter().map(|&a| c64(a, 0.0))))
    }
}

/// Total spin of two spin-1/2 particles, `S = S1 ⊗ I + I ⊗ S2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinOperators {
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    pub s_squared: CMatrix,
}

pub fn couple_two_spins(hbar: f64) -> Result<TwoSpinOperators> {
    let s = spin_matrices(1, hbar)?;
    let id = linalg::identity(2);
    let total = |m: &CMatrix| linalg::kron(m, &id) + linalg::kron(&id, m);
    let (sx, sy, sz) = (total(&s.jx), total(&s.jy), total(&s.jz));
    let s_squared = &sx * &sx + &sy * &sy + &sz * &sz;
    Ok(TwoSpinOperators {
        sx,
        sy,
        sz,
        s_squared,
    })
}

/// Swap operator on `C^d ⊗ C^d`: `P (u ⊗ v) = v ⊗ u`.
pub fn exchange_operator(dim_single: usize) -> CMatrix {
    let d = dim_single;
    CMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParticleKind {
    Boson,
    Fermion,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PauliOutcome {
    Accepted(StateVector),
    /// The state has no component in the allowed exchange sector.
    Rejected,
}

/// Projects onto the symmetric (bosons) or antisymmetric (fermions) sector
/// with `(I ± P)/2` and renormalizes.
pub fn pauli_project(psi: &StateVector, kind: ParticleKind) -> Result<PauliOutcome> {
    let n = psi.dim();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::DimMismatch {
            left: n,
            right: d * d,
        });
    }
    let v = psi.as_vector();
    let swapped = CVector::from_fn(n, |r, _| v[(r % d) * d + r / d]);
    let projected = match kind {
        ParticleKind::Boson => (v + swapped) * c64(0.5, 0.0),
        ParticleKind::Fermion => (v - swapped) * c64(0.5, 0.0),
    };
    if projected.norm() < PAULI_REJECT_TOL {
        return Ok(PauliOutcome::Rejected);
    }
    Ok(PauliOutcome::Accepted(StateVector::from_vector(projected)?))
}

/// Second singular value of the 2x2 coefficient matrix exceeds
/// [`ENTANGLEMENT_TOL`].
pub fn is_entangled(psi: &StateVector) -> Result<bool> {
    Ok(schmidt_coefficients(psi)?[1] > ENTANGLEMENT_TOL)
}

/// Singular values of the 2x2 coefficient matrix `c[i1][i2]`, largest first.
pub fn schmidt_coefficients(psi: &StateVector) -> Result<[f64; 2]> {
    if psi.dim() != 4 {
        return Err(Error::DimMismatch {
            left: psi.dim(),
            right: 4,
        });
    }
    let a = psi.amplitudes();
    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let det = (a[0] * a[3] - a[1] * a[2]).norm();
    let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
    let s1 = (0.5 * (frob + disc)).sqrt();
    // s1 s2 = |det| avoids the cancellation in (frob - disc).
    let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
    Ok([s1, s2])
}

/// Sequential measurement of `Sz ⊗ I` then `I ⊗ Sz` on a two-spin state,
/// with all Born distributions precomputed.
#[derive(Debug, Clone)]
pub struct EprSampler {
    hbar: f64,
    first: BornSampler,
    /// Second-stage samplers indexed like the first stage's records.
    second: Vec<Option<BornSampler>>,
}

impl EprSampler {
    pub fn new(psi: &StateVector, hbar: f64) -> Result<Self> {
        if psi.dim() != 4 {
            return Err(Error::DimMismatch {
                left: psi.dim(),
                right: 4,
            });
        }
        if (psi.norm() - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized {
                norm_sqr: psi.norm() * psi.norm(),
            });
        }
        let s = spin_matrices(1, hbar)?;
        let id = linalg::identity(2);
        let sz1 = Observable::new(linalg::kron(&s.jz, &id))?;
        let sz2 = Observable::new(linalg::kron(&id, &s.jz))?;
        let first = BornSampler::new(psi, &sz1)?;
        let second = first
            .records()
            .iter()
            .map(|r| {
                r.post_state
                    .as_ref()
                    .map(|post| BornSampler::new(post, &sz2))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            hbar,
            first,
            second,
        })
    }

    /// `(s1, s2)`, each `±hbar/2`.
    pub fn sample_with(&self, rng: &mut SeededRng) -> (f64, f64) {
        let i = self.first.select(rng.uniform());
        let s1 = self.first.records()[i].outcome;
        let second = self.second[i]
            .as_ref()
            .expect("selected outcome has a collapsed state");
        let s2 = second.sample_with(rng).outcome;
        (s1, s2)
    }

    pub fn sample(&self, seed: u64) -> (f64, f64) {
        self.sample_with(&mut SeededRng::new(seed))
    }

    /// Joint outcome counts over `seeds`, indexed `[i1][i2]` with 0 = up.
    pub fn tally(&self, seeds: core::ops::Range<u64>) -> [[u64; 2]; 2] {
        let mut counts = [[0u64; 2]; 2];
        for seed in seeds {
            let (s1, s2) = self.sample(seed);
            counts[usize::from(s1 < 0.0)][usize::from(s2 < 0.0)] += 1;
        }
        counts
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }
}

/// One seeded sequential measurement of both z spins.
pub fn epr_joint_sample(psi: &StateVector, seed: u64, hbar: f64) -> Result<(f64, f64)> {
    Ok(EprSampler::new(psi, hbar)?.sample(seed))
}

/// `-i hbar d/dphi` on `n` equally spaced points of the circle, with the
/// derivative taken spectrally (Nyquist mode dropped). Entries follow the
/// periodic differentiation matrix
/// `D[j,k] = (-1)^(j-k) cot((j-k) pi / n) / 2` for `j != k`.
pub fn ring_momentum_operator(n_grid: usize, hbar: f64) -> Result<CMatrix> {
    if n_grid < 16 || !n_grid.is_multiple_of(2) {
        return Err(Error::InvalidParameter(alloc::format!(
            "ring grid needs an even number of points >= 16, got {n_grid}"
        )));
    }
    let n = n_grid;
    Ok(CMatrix::from_fn(n, n, |j, k| {
        if j == k {
            return c64(0.0, 0.0);
        }
        let diff = j as i64 - k as i64;
        let sign = if diff.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let d = 0.5 * sign / (diff as f64 * PI / n as f64).tan();
        c64(0.0, -hbar * d)
    }))
}

/// Eigenvalues (ascending) of [`ring_momentum_operator`].
pub fn orbital_ring_spectrum(n_grid: usize, hbar: f64) -> Result<Vec<f64>> {
    let l = ring_momentum_operator(n_grid, hbar)?;
    Ok(Observable::new(l)?.spectrum().eigenvalues.clone())
}

#[cfg(test)]
mod tests;
