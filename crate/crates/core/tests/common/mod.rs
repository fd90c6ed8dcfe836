use std::sync::Arc;

use num_complex::Complex64;
use quantalab_core::fft::{Fft1d, FftPlanner};

/// rustfft behind the crate's FFT traits.
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
