//! Discrete Fourier transforms on power-of-two lengths.
//!
//! Both directions are unnormalized: `forward` computes
//! `X[k] = sum_j x[j] exp(-2 pi i jk/n)` and `inverse` the same sum with
//! `exp(+2 pi i jk/n)`, so `inverse(forward(x)) = n x`.
//!
//! [`Radix2`] is the built-in implementation. Anything implementing
//! [`FftPlanner`] can be swapped in where throughput matters.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

#[allow(clippy::len_without_is_empty)]
pub trait Fft1d {
    fn len(&self) -> usize;
    fn forward(&mut self, buf: &mut [Complex64]);
    fn inverse(&mut self, buf: &mut [Complex64]);
}

pub trait FftPlanner {
    type Plan: Fft1d;
    fn plan(&mut self, n: usize) -> Self::Plan;
}

/// Iterative radix-2 decimation-in-time transform with precomputed tables.
#[derive(Debug, Clone)]
pub struct Radix2 {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2 {
    /// Panics unless `n` is a power of two.
    pub fn new(n: usize) -> Self {
        assert!(
            n.is_power_of_two(),
            "radix-2 FFT needs a power-of-two length, got {n}"
        );
        let twiddles = (0..n / 2)
            .map(|k| {
                let theta = -TAU * k as f64 / n as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        Self {
            n,
            twiddles,
            bitrev,
        }
    }

    fn run(&self, buf: &mut [Complex64], conj: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match the plan");
        for (i, &r) in self.bitrev.iter().enumerate() {
            let r = r as usize;
            if i < r {
                buf.swap(i, r);
            }
        }
        let n = self.n;
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for block in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if conj { w.conj() } else { w };
                    let t = w * *b;
                    *b = *a - t;
                    *a += t;
                }
            }
            half *= 2;
        }
    }
}

impl Fft1d for Radix2 {
    fn len(&self) -> usize {
        self.n
    }

    fn forward(&mut self, buf: &mut [Complex64]) {
        self.run(buf, false);
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        self.run(buf, true);
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Radix2Planner;

impl FftPlanner for Radix2Planner {
    type Plan = Radix2;

    fn plan(&mut self, n: usize) -> Radix2 {
        Radix2::new(n)
    }
}

/// Signed integer frequency of FFT bin `k` for length `n`
/// (`0..n/2` then `-n/2..0`; the Nyquist bin maps to `-n/2`).
#[inline]
pub fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Row-major 2D transform over an `ny x nx` array (x fastest).
pub struct Fft2d<P: Fft1d> {
    nx: usize,
    ny: usize,
    rows: P,
    cols: P,
    scratch: Vec<Complex64>,
}

impl<P: Fft1d> Fft2d<P> {
    pub fn new<Pl: FftPlanner<Plan = P>>(planner: &mut Pl, nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            rows: planner.plan(nx),
            cols: planner.plan(ny),
            scratch: vec![Complex64::new(0.0, 0.0); nx * ny],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.apply(data, false);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.apply(data, true);
    }

    fn apply(&mut self, data: &mut [Complex64], inverse: bool) {
        let (nx, ny) = (self.nx, self.ny);
        assert_eq!(data.len(), nx * ny);
        for row in data.chunks_exact_mut(nx) {
            if inverse {
                self.rows.inverse(row);
            } else {
                self.rows.forward(row);
            }
        }
        transpose(data, &mut self.scratch, ny, nx);
        for col in self.scratch.chunks_exact_mut(ny) {
            if inverse {
                self.cols.inverse(col);
            } else {
                self.cols.forward(col);
            }
        }
        transpose(&self.scratch, data, nx, ny);
    }
}

/// Blocked transpose of a `rows x cols` row-major array into `cols x rows`.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const BLOCK: usize = 16;
    for r0 in (0..rows).step_by(BLOCK) {
        for c0 in (0..cols).step_by(BLOCK) {
            for r in r0..(r0 + BLOCK).min(rows) {
                for c in c0..(c0 + BLOCK).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use rustfft::FftPlanner as RustFftPlanner;

    fn random_signal(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = SeededRng::new(seed);
        (0..n)
            .map(|_| Complex64::new(rng.normal(), rng.normal()))
            .collect()
    }

    fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
                        let theta = sign * TAU * ((j * k) % n) as f64 / n as f64;
                        acc + v * Complex64::new(theta.cos(), theta.sin())
                    })
            })
            .collect()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 4, 8, 32, 64] {
            let x = random_signal(n, n as u64);
            let mut y = x.clone();
            Radix2::new(n).forward(&mut y);
            assert!(max_diff(&y, &naive_dft(&x, -1.0)) < 1e-12 * n as f64);
            let mut z = x.clone();
            Radix2::new(n).inverse(&mut z);
            assert!(max_diff(&z, &naive_dft(&x, 1.0)) < 1e-12 * n as f64);
        }
    }

    #[test]
    fn matches_rustfft() {
        for n in [8usize, 256, 2048] {
            let x = random_signal(n, 99 + n as u64);
            let mut ours = x.clone();
            Radix2::new(n).forward(&mut ours);
            let mut theirs = x.clone();
            RustFftPlanner::new()
                .plan_fft_forward(n)
                .process(&mut theirs);
            assert!(max_diff(&ours, &theirs) < 1e-11 * (n as f64).sqrt());
        }
    }

    #[test]
    fn round_trip_scales_by_n() {
        let n = 128;
        let x = random_signal(n, 5);
        let mut y = x.clone();
        let mut plan = Radix2::new(n);
        plan.forward(&mut y);
        plan.inverse(&mut y);
        let y: Vec<_> = y.iter().map(|v| v / n as f64).collect();
        assert!(max_diff(&x, &y) < 1e-14);
    }

    #[test]
    #[should_panic]
    fn rejects_non_power_of_two() {
        Radix2::new(12);
    }

    #[test]
    fn two_dimensional_matches_separable_naive() {
        let (nx, ny) = (8, 4);
        let x = random_signal(nx * ny, 11);
        let mut y = x.clone();
        Fft2d::new(&mut Radix2Planner, nx, ny).forward(&mut y);
        for ky in 0..ny {
            for kx in 0..nx {
                let mut acc = Complex64::new(0.0, 0.0);
                for iy in 0..ny {
                    for ix in 0..nx {
                        let theta =
                            -TAU * ((kx * ix) as f64 / nx as f64 + (ky * iy) as f64 / ny as f64);
                        acc += x[iy * nx + ix] * Complex64::new(theta.cos(), theta.sin());
                    }
                }
                assert!((acc - y[ky * nx + kx]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn signed_bins() {
        assert_eq!(signed_bin(0, 8), 0);
        assert_eq!(signed_bin(3, 8), 3);
        assert_eq!(signed_bin(4, 8), -4);
        assert_eq!(signed_bin(7, 8), -1);
    }
}
