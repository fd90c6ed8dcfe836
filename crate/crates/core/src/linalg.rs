//! Dense complex matrix helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Maximum number of QR sweeps granted to the Hermitian eigensolver.
const EIGEN_MAX_ITER: usize = 10_000;

/// Builds a matrix from row-major entries.
pub fn from_rows(n_rows: usize, n_cols: usize, entries: &[Complex64]) -> CMatrix {
    CMatrix::from_row_slice(n_rows, n_cols, entries)
}

/// Builds a real matrix (promoted to complex) from row-major entries.
pub fn from_real_rows(n_rows: usize, n_cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_iterator(
        n_rows,
        n_cols,
        (0..n_rows * n_cols).map(|idx| {
            let (c, r) = (idx / n_rows, idx % n_rows);
            Complex64::new(entries[r * n_cols + c], 0.0)
        }),
    )
}

fn check_same_shape(a: &CMatrix, b: &CMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    if a.nrows() != a.ncols() {
        return Err(Error::DimMismatch {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    Ok(())
}

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same_shape(a, b)?;
    Ok(a * b - b * a)
}

/// `AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_same_shape(a, b)?;
    Ok(a * b + b * a)
}

/// Kronecker product with the left factor as the slow index:
/// entry `(i*rows(B) + k, j*cols(B) + l)` is `A[i,j] * B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Max absolute row sum.
pub fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation `max |A - A^H|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `true` iff `A` is square and `max |A - A^H| <= tol * max(1, ||A||_inf)`.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && hermiticity_deviation(m) <= tol * inf_norm(m).max(1.0)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The matrix is symmetrized as `(A + A^H)/2` first so that rounding-level
/// anti-Hermitian noise cannot leak into the eigenvalues.
pub(crate) fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = m.nrows();
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(Error::EigensolveFailure)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    fn pauli() -> [CMatrix; 3] {
        let o = c64(0.0, 0.0);
        let one = c64(1.0, 0.0);
        let i = c64(0.0, 1.0);
        [
            from_rows(2, 2, &[o, one, one, o]),
            from_rows(2, 2, &[o, -i, i, o]),
            from_rows(2, 2, &[one, o, o, -one]),
        ]
    }

    #[test]
    fn pauli_x_is_hermitian() {
        assert!(is_hermitian(&pauli()[0], 1e-12));
    }

    #[test]
    fn strictly_upper_triangular_is_not_hermitian() {
        let m = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(!is_hermitian(&m, 1e-10));
    }

    #[test]
    fn i_sigma_y_is_anti_hermitian() {
        let m = pauli()[1].clone() * c64(0.0, 1.0);
        assert!(!is_hermitian(&m, 1e-10));
    }

    #[test]
    fn sigma_z_sigma_x_commutator_is_two_i_sigma_y() {
        let [sx, sy, sz] = pauli();
        let c = commutator(&sz, &sx).unwrap();
        assert_eq!(c, sy * c64(0.0, 2.0));
    }

    #[test]
    fn self_commutator_vanishes() {
        let [sx, ..] = pauli();
        assert_eq!(frobenius_norm(&commutator(&sx, &sx).unwrap()), 0.0);
    }

    #[test]
    fn commutator_rejects_mismatched_dims() {
        let err = commutator(&identity(2), &identity(3)).unwrap_err();
        assert!(matches!(err, Error::DimMismatch { .. }));
    }

    #[test]
    fn kron_is_left_slow() {
        let a = from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let k = kron(&a, &b);
        // (i=1,k=0) x (j=0,l=1) -> row 2, col 1 -> a[1,0]*b[0,1] = 3
        assert_eq!(k[(2, 1)], c64(3.0, 0.0));
        assert_eq!(k[(0, 3)], c64(2.0, 0.0));
    }

    #[test]
    fn real_rows_are_row_major() {
        let m = from_real_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(m[(0, 2)], c64(3.0, 0.0));
        assert_eq!(m[(1, 0)], c64(4.0, 0.0));
    }

    #[test]
    fn eigenvalues_come_out_ascending() {
        let m = from_real_rows(3, 3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]);
        let (vals, _) = hermitian_eigen(&m).unwrap();
        assert_eq!(vals.len(), 3);
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
        assert!((vals[2] - 3.0).abs() < 1e-14);
    }
}
