//! Finite-dimensional Hilbert spaces: states, observables, spectra and the
//! measurement postulates.
//!
//! A [`StateVector`] is always unit norm. An [`Observable`] is a Hermitian
//! matrix whose spectral decomposition is computed once at construction;
//! eigenvalues closer than the degeneracy tolerance are grouped into a single
//! measurement outcome whose eigenspace projector drives the Born rule and
//! the post-measurement collapse.

use alloc::vec::Vec;
use core::ops::Range;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{self, CMatrix, CVector};
use crate::rng::SeededRng;
use crate::{Error, Result};

/// Relative Hermiticity tolerance accepted by [`Observable::new`].
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Degeneracy grouping tolerance, relative to the spectral range.
pub const DEGENERACY_REL_TOL: f64 = 1e-8;
/// Absolute floor of the degeneracy tolerance.
pub const DEGENERACY_ABS_FLOOR: f64 = 1e-12;
/// Records whose probability falls below this carry no post-measurement state.
pub const NULL_PROBABILITY: f64 = 1e-14;

const ZERO_NORM: f64 = 1e-300;

/// Unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amp: CVector,
}

impl StateVector {
    /// Normalizes `amplitudes` by their 2-norm.
    pub fn new(amplitudes: &[Complex64]) -> Result<Self> {
        Self::from_vector(CVector::from_column_slice(amplitudes))
    }

    pub fn from_vector(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if v.is_empty() || !(norm >= ZERO_NORM) || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amp: v.unscale(norm),
        })
    }

    /// Canonical basis vector `e_index` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amp = CVector::zeros(dim);
        amp[index] = Complex64::new(1.0, 0.0);
        Self { amp }
    }

    /// Wraps a vector that is already unit norm up to rounding.
    pub(crate) fn from_unit(amp: CVector) -> Self {
        debug_assert!((amp.norm() - 1.0).abs() < 1e-9);
        Self { amp }
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        self.amp.as_slice()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.amp
    }

    pub fn norm(&self) -> f64 {
        self.amp.norm()
    }

    /// `e^{i phase} psi`.
    pub fn with_phase(&self, phase: f64) -> Self {
        Self {
            amp: &self.amp * Complex64::from_polar(1.0, phase),
        }
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimMismatch { left, right });
    }
    Ok(())
}

/// Hermitian inner product, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.amp.dotc(&b.amp))
}

pub use crate::linalg::{commutator, is_hermitian};

/// Eigenvalues, eigenvectors and degenerate groups of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: CMatrix,
    /// Contiguous index ranges of numerically degenerate eigenvalues.
    pub groups: Vec<Range<usize>>,
}

impl SpectralDecomposition {
    /// Representative eigenvalue (mean) of group `g`.
    pub fn group_value(&self, g: usize) -> f64 {
        let r = self.groups[g].clone();
        let len = r.len() as f64;
        self.eigenvalues[r].iter().sum::<f64>() / len
    }

    pub fn group_basis(&self, g: usize) -> CMatrix {
        let r = self.groups[g].clone();
        self.eigenvectors.columns(r.start, r.len()).into_owned()
    }

    /// Orthogonal projector onto the eigenspace of group `g`.
    pub fn projector(&self, g: usize) -> CMatrix {
        let u = self.group_basis(g);
        &u * u.adjoint()
    }

    /// `U diag(lambda) U^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for c in 0..n {
            scaled.column_mut(c).scale_mut(self.eigenvalues[c]);
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// Degeneracy tolerance used for a spectrum spanning `[lo, hi]`.
    pub fn degeneracy_tol(lo: f64, hi: f64) -> f64 {
        (DEGENERACY_REL_TOL * (hi - lo)).max(DEGENERACY_ABS_FLOOR)
    }
}

/// Spectral decomposition of a Hermitian matrix.
pub fn spectral_decompose(a: &CMatrix) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::DimMismatch {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    if !is_hermitian(a, HERMITICITY_TOL) {
        return Err(Error::NotHermitian {
            deviation: linalg::hermiticity_deviation(a),
        });
    }
    let (eigenvalues, eigenvectors) = linalg::hermitian_eigen(a)?;
    let groups = group_degenerate(&eigenvalues);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        groups,
    })
}

fn group_degenerate(sorted: &[f64]) -> Vec<Range<usize>> {
    let Some((&lo, &hi)) = sorted.first().zip(sorted.last()) else {
        return Vec::new();
    };
    let tol = SpectralDecomposition::degeneracy_tol(lo, hi);
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..sorted.len() {
        if sorted[i] - sorted[i - 1] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups.push(start..sorted.len());
    groups
}

/// Hermitian operator together with its spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    mat: CMatrix,
    spectrum: SpectralDecomposition,
}

impl Observable {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let spectrum = spectral_decompose(&mat)?;
        Ok(Self { mat, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }
}

/// Joint eigenbasis of two commuting observables.
#[derive(Debug, Clone)]
pub struct JointEigenbasis {
    /// Unitary matrix whose columns are common eigenvectors.
    pub vectors: CMatrix,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
}

/// Diagonalizes `A` and then `B` restricted to each eigenspace of `A`.
pub fn simultaneous_diagonalize(a: &Observable, b: &Observable) -> Result<JointEigenbasis> {
    check_dims(a.dim(), b.dim())?;
    let comm = linalg::frobenius_norm(&commutator(a.matrix(), b.matrix())?);
    let tol = 1e-9 * linalg::frobenius_norm(a.matrix()) * linalg::frobenius_norm(b.matrix());
    if comm > tol.max(f64::MIN_POSITIVE) {
        return Err(Error::DoNotCommute { norm: comm, tol });
    }
    let n = a.dim();
    let spec = a.spectrum();
    let mut vectors = CMatrix::zeros(n, n);
    let mut a_values = Vec::with_capacity(n);
    let mut b_values = Vec::with_capacity(n);
    let mut col = 0;
    for g in 0..spec.groups.len() {
        let u = spec.group_basis(g);
        let restricted = u.adjoint() * b.matrix() * &u;
        let (vals, w) = linalg::hermitian_eigen(&restricted)?;
        let block = &u * w;
        for (k, &bv) in vals.iter().enumerate() {
            vectors.set_column(col, &block.column(k));
            a_values.push(spec.group_value(g));
            b_values.push(bv);
            col += 1;
        }
    }
    Ok(JointEigenbasis {
        vectors,
        a_values,
        b_values,
    })
}

/// `(psi, A psi)`.
pub fn expectation(psi: &StateVector, a: &Observable) -> Result<f64> {
    check_dims(psi.dim(), a.dim())?;
    let value = psi.amp.dotc(&(a.matrix() * &psi.amp));
    debug_assert!(value.im.abs() <= 1e-10 * (1.0 + value.re.abs()));
    Ok(value.re)
}

/// `sqrt(<A^2> - <A>^2)`, clamped at zero.
pub fn uncertainty(psi: &StateVector, a: &Observable) -> Result<f64> {
    check_dims(psi.dim(), a.dim())?;
    let a_psi = a.matrix() * &psi.amp;
    let mean = psi.amp.dotc(&a_psi).re;
    let mean_sq = a_psi.norm_squared();
    let var = mean_sq - mean * mean;
    Ok(if var > 0.0 { var.sqrt() } else { 0.0 })
}

/// Outcome of measuring one degenerate eigenvalue group.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub outcome: f64,
    pub probability: f64,
    /// Normalized projection onto the outcome's eigenspace; `None` when the
    /// probability is below [`NULL_PROBABILITY`].
    pub post_state: Option<StateVector>,
}

/// Born probabilities and collapsed states, one record per eigenvalue group
/// in ascending order of outcome.
pub fn measure_probabilities(psi: &StateVector, a: &Observable) -> Result<Vec<MeasurementRecord>> {
    check_dims(psi.dim(), a.dim())?;
    let spec = a.spectrum();
    let records = (0..spec.groups.len())
        .map(|g| {
            let u = spec.group_basis(g);
            // P psi = U (U^H psi) keeps the projection cheap for large groups.
            let coeffs = u.adjoint() * &psi.amp;
            let probability = coeffs.norm_squared();
            let post_state = (probability >= NULL_PROBABILITY)
                .then(|| StateVector::from_unit((&u * coeffs).unscale(probability.sqrt())));
            MeasurementRecord {
                outcome: spec.group_value(g),
                probability,
                post_state,
            }
        })
        .collect();
    Ok(records)
}

/// Precomputed Born distribution for repeated seeded sampling.
#[derive(Debug, Clone)]
pub struct BornSampler {
    records: Vec<MeasurementRecord>,
    cumulative: Vec<(usize, f64)>,
}

impl BornSampler {
    pub fn new(psi: &StateVector, a: &Observable) -> Result<Self> {
        let records = measure_probabilities(psi, a)?;
        let mut acc = 0.0;
        let cumulative: Vec<(usize, f64)> = records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.post_state.is_some())
            .map(|(i, r)| {
                acc += r.probability;
                (i, acc)
            })
            .collect();
        Ok(Self {
            records,
            cumulative,
        })
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    /// Index of the record selected by the uniform draw `u` in `[0, 1)`.
    pub fn select(&self, u: f64) -> usize {
        let total = self.cumulative.last().map_or(1.0, |&(_, c)| c);
        let target = u * total;
        self.cumulative
            .iter()
            .find(|&&(_, c)| target < c)
            .or(self.cumulative.last())
            .map(|&(i, _)| i)
            .expect("a unit state has at least one non-null outcome")
    }

    pub fn sample_with(&self, rng: &mut SeededRng) -> &MeasurementRecord {
        &self.records[self.select(rng.uniform())]
    }

    pub fn sample(&self, seed: u64) -> &MeasurementRecord {
        self.sample_with(&mut SeededRng::new(seed))
    }
}

/// One seeded projective measurement: draws an outcome with its Born
/// probability and returns that group's record (collapsed state included).
pub fn sample_measurement(
    psi: &StateVector,
    a: &Observable,
    seed: u64,
) -> Result<MeasurementRecord> {
    Ok(BornSampler::new(psi, a)?.sample(seed).clone())
}

/// `a ⊗ b`; component `(i, j)` sits at index `i * dim(b) + j`.
pub fn tensor_state(a: &StateVector, b: &StateVector) -> StateVector {
    StateVector::from_unit(a.amp.kronecker(&b.amp))
}

/// Kronecker product `A ⊗ B`.
pub fn tensor_op(a: &CMatrix, b: &CMatrix) -> CMatrix {
    linalg::kron(a, b)
}

/// Evolution of an isolated system with time-independent Hamiltonian `h`:
/// `psi(t) = sum_a exp(-i E_a t / hbar) P_a psi0`.
pub fn evolve_isolated(
    h: &Observable,
    psi0: &StateVector,
    t: f64,
    hbar: f64,
) -> Result<StateVector> {
    check_dims(h.dim(), psi0.dim())?;
    let spec = h.spectrum();
    let mut coeffs = spec.eigenvectors.adjoint() * &psi0.amp;
    for (c, &e) in coeffs.iter_mut().zip(&spec.eigenvalues) {
        *c *= Complex64::from_polar(1.0, -e * t / hbar);
    }
    Ok(StateVector {
        amp: &spec.eigenvectors * coeffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::linalg::{from_real_rows, from_rows};
    use core::f64::consts::FRAC_1_SQRT_2;

    const HBAR: f64 = 1.0;

    fn sz_half() -> CMatrix {
        from_real_rows(2, 2, &[0.5 * HBAR, 0.0, 0.0, -0.5 * HBAR])
    }

    fn sx_half() -> CMatrix {
        from_real_rows(2, 2, &[0.0, 0.5 * HBAR, 0.5 * HBAR, 0.0])
    }

    fn sigma_z() -> Observable {
        Observable::new(from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0])).unwrap()
    }

    fn real_state(v: &[f64]) -> StateVector {
        let amps: Vec<_> = v.iter().map(|&x| c64(x, 0.0)).collect();
        StateVector::new(&amps).unwrap()
    }

    #[test]
    fn make_state_examples() {
        assert_eq!(
            real_state(&[1.0, 0.0]).amplitudes(),
            &[c64(1.0, 0.0), c64(0.0, 0.0)]
        );
        let s = real_state(&[1.0, 1.0]);
        for a in s.amplitudes() {
            assert!((a - c64(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        }
        // ||(3i, 4)|| = 5 by hand.
        let s = StateVector::new(&[c64(0.0, 3.0), c64(4.0, 0.0)]).unwrap();
        assert!((s.amplitudes()[0] - c64(0.0, 0.6)).norm() < 1e-15);
        assert!((s.amplitudes()[1] - c64(0.8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn make_state_rejects_zero() {
        assert_eq!(real_state_err(&[0.0, 0.0]), Error::ZeroVector);
        assert_eq!(StateVector::new(&[]).unwrap_err(), Error::ZeroVector);
    }

    fn real_state_err(v: &[f64]) -> Error {
        let amps: Vec<_> = v.iter().map(|&x| c64(x, 0.0)).collect();
        StateVector::new(&amps).unwrap_err()
    }

    #[test]
    fn inner_examples() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        assert_eq!(inner(&e1, &e1).unwrap(), c64(1.0, 0.0));
        assert_eq!(inner(&e1, &e2).unwrap(), c64(0.0, 0.0));
        let a = StateVector::new(&[c64(0.0, 1.0), c64(0.0, 0.0)]).unwrap();
        // conj(i) * 1 = -i
        assert_eq!(inner(&a, &e1).unwrap(), c64(0.0, -1.0));
        assert!(matches!(
            inner(&e1, &StateVector::basis(3, 0)),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn spin_half_sz_spectrum() {
        let spec = spectral_decompose(&sz_half()).unwrap();
        assert_eq!(spec.eigenvalues, [-0.5, 0.5]);
        assert_eq!(spec.groups.len(), 2);
    }

    #[test]
    fn identity_is_one_degenerate_group() {
        let spec = spectral_decompose(&linalg::identity(4)).unwrap();
        assert_eq!(spec.groups, alloc::vec![0..4]);
        assert!((spec.group_value(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(
            spectral_decompose(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn sigma_z_and_sigma_x_do_not_commute() {
        let sx = Observable::new(sx_half() * c64(2.0, 0.0)).unwrap();
        let err = simultaneous_diagonalize(&sigma_z(), &sx).unwrap_err();
        assert!(matches!(err, Error::DoNotCommute { .. }));
    }

    #[test]
    fn identity_with_b_gives_eigenbasis_of_b() {
        let b = Observable::new(sx_half()).unwrap();
        let id = Observable::new(linalg::identity(2)).unwrap();
        let joint = simultaneous_diagonalize(&id, &b).unwrap();
        for k in 0..2 {
            let v = joint.vectors.column(k).into_owned();
            let resid = (b.matrix() * &v - &v * c64(joint.b_values[k], 0.0)).norm();
            assert!(resid < 1e-12);
        }
        assert!((joint.b_values[0] + 0.5).abs() < 1e-14);
        assert!((joint.b_values[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn expectation_examples() {
        let sz = Observable::new(sz_half()).unwrap();
        assert_eq!(expectation(&real_state(&[1.0, 0.0]), &sz).unwrap(), 0.5);
        assert!(expectation(&real_state(&[1.0, 1.0]), &sz).unwrap().abs() < 1e-15);
        // (0.36 - 0.64) / 2 = -0.14
        let e = expectation(&real_state(&[0.6, 0.8]), &sz).unwrap();
        assert!((e + 0.14).abs() < 1e-15);
    }

    #[test]
    fn uncertainty_examples() {
        let sz = Observable::new(sz_half()).unwrap();
        let sx = Observable::new(sx_half()).unwrap();
        assert_eq!(uncertainty(&real_state(&[1.0, 0.0]), &sz).unwrap(), 0.0);
        assert!((uncertainty(&real_state(&[1.0, 1.0]), &sz).unwrap() - 0.5).abs() < 1e-15);
        assert!((uncertainty(&real_state(&[1.0, 0.0]), &sx).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn born_probabilities_examples() {
        let recs = measure_probabilities(&real_state(&[1.0, 0.0]), &sigma_z()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!((recs[0].outcome, recs[0].probability), (-1.0, 0.0));
        assert!(recs[0].post_state.is_none());
        assert_eq!(recs[1].outcome, 1.0);
        assert!((recs[1].probability - 1.0).abs() < 1e-15);

        let recs = measure_probabilities(&real_state(&[1.0, 1.0]), &sigma_z()).unwrap();
        for r in &recs {
            assert!((r.probability - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn eigenstate_measurement_is_certain() {
        let psi = real_state(&[0.0, 1.0]);
        for seed in 0..50 {
            let rec = sample_measurement(&psi, &sigma_z(), seed).unwrap();
            assert_eq!(rec.outcome, -1.0);
        }
    }

    #[test]
    fn repeated_measurement_repeats_outcome() {
        let psi = real_state(&[1.0, 1.0]);
        for seed in 0..200 {
            let first = sample_measurement(&psi, &sigma_z(), seed).unwrap();
            let post = first.post_state.clone().unwrap();
            let second = sample_measurement(&post, &sigma_z(), seed.wrapping_mul(31) + 7).unwrap();
            assert_eq!(first.outcome, second.outcome);
        }
    }

    #[test]
    fn sampling_frequency_matches_binomial_oracle() {
        let psi = real_state(&[1.0, 1.0]);
        let sampler = BornSampler::new(&psi, &sigma_z()).unwrap();
        let n = 100_000u64;
        let ups = (0..n).filter(|&s| sampler.sample(s).outcome > 0.0).count() as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((ups / n as f64 - 0.5).abs() <= 3.0 * sigma);
    }

    #[test]
    fn tensor_conventions() {
        let e1 = StateVector::basis(2, 0);
        let e2 = StateVector::basis(2, 1);
        assert_eq!(tensor_state(&e1, &e2), StateVector::basis(4, 1));

        let u = real_state(&[0.6, 0.8]);
        let v = StateVector::new(&[c64(0.0, 1.0), c64(1.0, 1.0)]).unwrap();
        let sz = from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let lhs = tensor_op(&linalg::identity(2), &sz) * tensor_state(&u, &v).as_vector();
        let rhs = tensor_state(&u, &StateVector::from_vector(&sz * v.as_vector()).unwrap());
        assert!((lhs - rhs.as_vector()).norm() < 1e-15);
    }

    #[test]
    fn larmor_closed_form_matches_spectral_evolution() {
        let omega0 = 1.7;
        let h = Observable::new(sz_half() * c64(omega0, 0.0)).unwrap();
        let (alpha, beta) = (c64(0.6, 0.0), c64(0.0, 0.8));
        let psi0 = StateVector::new(&[alpha, beta]).unwrap();
        for &t in &[0.0, 0.3, 2.0, 11.0] {
            let psi = evolve_isolated(&h, &psi0, t, HBAR).unwrap();
            let expected = [
                alpha * Complex64::from_polar(1.0, -omega0 * t / 2.0),
                beta * Complex64::from_polar(1.0, omega0 * t / 2.0),
            ];
            for (a, b) in psi.amplitudes().iter().zip(expected) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigenstate_evolution_is_a_phase() {
        let h = Observable::new(from_rows(
            2,
            2,
            &[c64(1.0, 0.0), c64(0.0, -0.5), c64(0.0, 0.5), c64(-1.0, 0.0)],
        ))
        .unwrap();
        let spec = h.spectrum();
        let psi0 = StateVector::from_vector(spec.eigenvectors.column(1).into_owned()).unwrap();
        let e = spec.eigenvalues[1];
        let t = 2.5;
        let psi = evolve_isolated(&h, &psi0, t, HBAR).unwrap();
        let expected = psi0.with_phase(-e * t / HBAR);
        assert!((psi.as_vector() - expected.as_vector()).norm() < 1e-12);
        let sx = Observable::new(sx_half()).unwrap();
        assert!((expectation(&psi, &sx).unwrap() - expectation(&psi0, &sx).unwrap()).abs() < 1e-12);
    }
}
