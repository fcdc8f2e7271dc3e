//! Thin n-dimensional wrapper over rustfft for square tensor arrays.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

pub(crate) struct TensorFft {
    dim: usize,
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl TensorFft {
    pub(crate) fn new(dim: usize, len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim,
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.len.pow(self.dim as u32)
    }

    pub(crate) fn forward(&self, buf: &mut [Complex<f64>]) {
        self.run(buf, &*self.forward);
    }

    /// Unnormalized inverse; callers divide by `size()`.
    pub(crate) fn inverse(&self, buf: &mut [Complex<f64>]) {
        self.run(buf, &*self.inverse);
    }

    fn run(&self, buf: &mut [Complex<f64>], plan: &dyn Fft<f64>) {
        debug_assert_eq!(buf.len(), self.size());
        // rustfft transforms every contiguous chunk of `len`
        plan.process(buf);
        if self.dim == 2 {
            transpose(buf, self.len);
            plan.process(buf);
            transpose(buf, self.len);
        }
    }
}

fn transpose(buf: &mut [Complex<f64>], m: usize) {
    for i in 0..m {
        for j in (i + 1)..m {
            buf.swap(i * m + j, j * m + i);
        }
    }
}
