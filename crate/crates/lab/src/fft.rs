//! [`quantalab_core::fft`] backend on top of rustfft.

use std::sync::Arc;

use quantalab_core::fft::{Fft1d, FftPlanner};
use quantalab_core::Complex64;

/// A forward/inverse plan pair with shared scratch; unnormalized like the
/// core radix-2 transform.
pub struct RustFft {
    forward: Arc<dyn rustfft::Fft<f64>>,
    inverse: Arc<dyn rustfft::Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Fft1d for RustFft {
    fn len(&self) -> usize {
        self.forward.len()
    }

    fn forward(&mut self, buf: &mut [Complex64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
    }

    fn inverse(&mut self, buf: &mut [Complex64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
    }
}

pub struct RustFftPlanner(rustfft::FftPlanner<f64>);

impl Default for RustFftPlanner {
    fn default() -> Self {
        Self(rustfft::FftPlanner::new())
    }
}

impl FftPlanner for RustFftPlanner {
    type Plan = RustFft;

    fn plan(&mut self, n: usize) -> RustFft {
        let forward = self.0.plan_fft_forward(n);
        let inverse = self.0.plan_fft_inverse(n);
        let len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        RustFft {
            forward,
            inverse,
            scratch: vec![Complex64::new(0.0, 0.0); len],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use quantalab_core::fft::Radix2Planner;

    #[test]
    fn agrees_with_radix2() {
        let n = 64;
        let data: Vec<Complex64> = (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.3).cos()))
            .collect();
        let mut a = data.clone();
        let mut b = data.clone();
        RustFftPlanner::default().plan(n).forward(&mut a);
        Radix2Planner.plan(n).forward(&mut b);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
        let mut plan = RustFftPlanner::default().plan(n);
        plan.inverse(&mut a);
        for (x, y) in a.iter().zip(&data) {
            assert!((x / n as f64 - y).norm() < 1e-14);
        }
    }
}
