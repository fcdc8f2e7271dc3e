//! Periodic realization by Fourier multipliers on the `N^n` torus of side `2L`.

use rustfft::num_complex::Complex;

use super::fft::TensorFft;
use crate::grid::Grid;

pub(crate) struct Spectral {
    fft: TensorFft,
    /// `|k|` per flat Fourier index.
    modulus: Vec<f64>,
}

impl Spectral {
    pub(crate) fn new(grid: &Grid) -> Self {
        let n = grid.points_per_axis();
        let dk = std::f64::consts::PI / grid.half_width();
        let wave = |m: usize| {
            let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
            dk * signed
        };
        let modulus = (0..grid.len())
            .map(|i| {
                let [m0, m1] = grid.multi_index(i);
                match grid.dim() {
                    1 => wave(m0).abs(),
                    _ => wave(m0).hypot(wave(m1)),
                }
            })
            .collect();
        Self { fft: TensorFft::new(grid.dim(), n), modulus }
    }

    /// Applies the multiplier `|k|^p`, mapping the zero mode to 0.
    pub(crate) fn apply_power(&self, f: &[f64], out: &mut [f64], p: f64) {
        let mut buf: Vec<Complex<f64>> = f.iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.fft.forward(&mut buf);
        for (b, &k) in buf.iter_mut().zip(&self.modulus) {
            *b *= if k == 0.0 { 0.0 } else { k.powf(p) };
        }
        self.fft.inverse(&mut buf);
        let norm = 1.0 / self.fft.size() as f64;
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re * norm;
        }
    }
}
