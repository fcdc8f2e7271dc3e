//! Free-space realization by discrete convolution with homogeneous kernels.
//!
//! For a kernel `|x|^γ` the plain trapezoidal sum over the lattice `hZ^n`
//! misses the singular cell. The corrected rule
//!
//! ```text
//! ∫ |x|^γ g ≈ h^{n+γ} [ Σ_{j≠0} |j|^γ g_j − Z(−γ) g_0 − Σ_k Z(−γ−2k) D_k g ]
//! ```
//!
//! with `Z` the continued lattice zeta function and `D_k` finite-difference
//! approximations of `h^{2k} Δ^k g(0) / (2k)!`-type terms has error
//! `O(h^{n+γ+6})` in 1-D and `O(h^{n+γ+4})` in 2-D. The same formula, read as
//! a finite-part integral, also gives the hypersingular form of `(−Δ)^s`.
//! Values outside the box are taken as zero.

use rustfft::num_complex::Complex;

use super::fft::TensorFft;
use crate::special::{lattice_zeta, riemann_zeta};

/// How a Toeplitz kernel is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvolutionBackend {
    /// Direct summation over all offsets.
    Direct,
    /// Zero-padded circular convolution of size `(2N)^n`.
    Fft,
}

/// Largest grid (in points) applied by direct summation by default.
pub const DIRECT_LIMIT: usize = 256;

/// Symmetric Toeplitz operator on an `N^n` grid, stored by offset.
pub(crate) struct Toeplitz {
    dim: usize,
    n: usize,
    /// Offsets `−(N−1)..=(N−1)` per axis, row-major over `(2N−1)^n`.
    weights: Vec<f64>,
    fft: TensorFft,
    spectrum: Vec<Complex<f64>>,
}

impl Toeplitz {
    /// Corrected-trapezoid kernel `scale · |x|^γ`, with `γ` in lattice units.
    pub(crate) fn homogeneous(dim: usize, n: usize, gamma: f64, scale: f64) -> Self {
        let width = 2 * n - 1;
        let c = n - 1;
        let mut weights = vec![0.0; width.pow(dim as u32)];
        let idx = |j: [i64; 2]| -> usize {
            if dim == 1 {
                (j[0] + c as i64) as usize
            } else {
                (j[0] + c as i64) as usize * width + (j[1] + c as i64) as usize
            }
        };
        match dim {
            1 => {
                for j in -(c as i64)..=(c as i64) {
                    if j != 0 {
                        weights[idx([j, 0])] = (j.unsigned_abs() as f64).powf(gamma);
                    }
                }
                weights[idx([0, 0])] = -lattice_zeta(1, -gamma);
                // h^2 g'' ≈ S2 (fourth order), h^4 g'''' ≈ S4
                let z2 = riemann_zeta(-gamma - 2.0);
                let z4 = riemann_zeta(-gamma - 4.0) / 12.0;
                let s2 = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
                let s4 = [1.0, -4.0, 6.0, -4.0, 1.0];
                for k in 0..5 {
                    let j = k as i64 - 2;
                    if j.unsigned_abs() as usize <= c {
                        weights[idx([j, 0])] -= z2 * s2[k] + z4 * s4[k];
                    }
                }
            }
            _ => {
                for j0 in -(c as i64)..=(c as i64) {
                    for j1 in -(c as i64)..=(c as i64) {
                        if j0 != 0 || j1 != 0 {
                            let r2 = (j0 * j0 + j1 * j1) as f64;
                            weights[idx([j0, j1])] = r2.powf(0.5 * gamma);
                        }
                    }
                }
                let z2 = 0.25 * lattice_zeta(2, -gamma - 2.0);
                weights[idx([0, 0])] = -lattice_zeta(2, -gamma) + 4.0 * z2;
                for j in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                    weights[idx(j)] -= z2;
                }
            }
        }
        for w in &mut weights {
            *w *= scale;
        }
        Self::from_weights(dim, n, weights)
    }

    fn from_weights(dim: usize, n: usize, weights: Vec<f64>) -> Self {
        let m = 2 * n;
        let fft = TensorFft::new(dim, m);
        let width = 2 * n - 1;
        let mut spectrum = vec![Complex::new(0.0, 0.0); fft.size()];
        // offset j = k − (N−1) lands at j mod 2N; offset ±N stays zero
        let wrap = |k: usize| (k + m - (n - 1)) % m;
        match dim {
            1 => {
                for (k, w) in weights.iter().enumerate() {
                    let off = wrap(k);
                    spectrum[off] = Complex::new(*w, 0.0);
                }
            }
            _ => {
                for k0 in 0..width {
                    for k1 in 0..width {
                        let a = wrap(k0);
                        let b = wrap(k1);
                        spectrum[a * m + b] = Complex::new(weights[k0 * width + k1], 0.0);
                    }
                }
            }
        }
        fft.forward(&mut spectrum);
        Self { dim, n, weights, fft, spectrum }
    }

    /// Weight at a per-axis offset.
    pub(crate) fn weight(&self, offset: [i64; 2]) -> f64 {
        let c = (self.n - 1) as i64;
        let width = 2 * self.n - 1;
        match self.dim {
            1 => self.weights[(offset[0] + c) as usize],
            _ => self.weights[(offset[0] + c) as usize * width + (offset[1] + c) as usize],
        }
    }

    /// Matrix entry between flat grid indices `i` and `k`.
    pub(crate) fn entry(&self, i: usize, k: usize) -> f64 {
        match self.dim {
            1 => self.weight([i as i64 - k as i64, 0]),
            _ => {
                let (i0, i1) = ((i / self.n) as i64, (i % self.n) as i64);
                let (k0, k1) = ((k / self.n) as i64, (k % self.n) as i64);
                self.weight([i0 - k0, i1 - k1])
            }
        }
    }

    pub(crate) fn apply(&self, f: &[f64], out: &mut [f64], backend: ConvolutionBackend) {
        match backend {
            ConvolutionBackend::Direct => self.apply_direct(f, out),
            ConvolutionBackend::Fft => self.apply_fft(f, out),
        }
    }

    fn apply_direct(&self, f: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let n = self.n;
        let width = 2 * n - 1;
        match self.dim {
            1 => {
                for (k, &fk) in f.iter().enumerate() {
                    if fk == 0.0 {
                        continue;
                    }
                    // row i reads weight at offset i − k
                    let base = n - 1 - k;
                    for (i, o) in out.iter_mut().enumerate() {
                        *o += self.weights[base + i] * fk;
                    }
                }
            }
            _ => {
                for (k, &fk) in f.iter().enumerate() {
                    if fk == 0.0 {
                        continue;
                    }
                    let (k0, k1) = (k / n, k % n);
                    for i0 in 0..n {
                        let row = (i0 + n - 1 - k0) * width + (n - 1 - k1);
                        let w = &self.weights[row..row + n];
                        for (o, wi) in out[i0 * n..(i0 + 1) * n].iter_mut().zip(w) {
                            *o += wi * fk;
                        }
                    }
                }
            }
        }
    }

    fn apply_fft(&self, f: &[f64], out: &mut [f64]) {
        let n = self.n;
        let m = 2 * n;
        let mut buf = vec![Complex::new(0.0, 0.0); self.fft.size()];
        match self.dim {
            1 => {
                for (b, v) in buf.iter_mut().zip(f) {
                    b.re = *v;
                }
            }
            _ => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        buf[i0 * m + i1].re = f[i0 * n + i1];
                    }
                }
            }
        }
        self.fft.forward(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.spectrum) {
            *b *= k;
        }
        self.fft.inverse(&mut buf);
        let norm = 1.0 / self.fft.size() as f64;
        match self.dim {
            1 => {
                for (o, b) in out.iter_mut().zip(&buf) {
                    *o = b.re * norm;
                }
            }
            _ => {
                for i0 in 0..n {
                    for i1 in 0..n {
                        out[i0 * n + i1] = buf[i0 * m + i1].re * norm;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree() {
        for dim in [1, 2] {
            let n = 16;
            let t = Toeplitz::homogeneous(dim, n, -0.5 * dim as f64, 1.0);
            let len = n.pow(dim as u32);
            let f: Vec<f64> = (0..len).map(|i| ((i * 37 % 11) as f64).sin()).collect();
            let mut a = vec![0.0; len];
            let mut b = vec![0.0; len];
            t.apply(&f, &mut a, ConvolutionBackend::Direct);
            t.apply(&f, &mut b, ConvolutionBackend::Fft);
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-12 * scale, "dim {dim}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn matrix_is_symmetric_toeplitz() {
        let t = Toeplitz::homogeneous(2, 8, -1.0, 1.0);
        for i in [0, 5, 17, 63] {
            for k in [3, 9, 40] {
                assert_eq!(t.entry(i, k), t.entry(k, i));
            }
        }
    }

    #[test]
    fn riesz_weights_are_positive() {
        for (dim, gamma) in [(1, -0.5), (1, -0.8), (1, -0.2), (2, -1.0), (2, -1.5), (2, -0.4)] {
            let t = Toeplitz::homogeneous(dim, 12, gamma, 1.0);
            assert!(t.weights.iter().all(|&w| w > 0.0), "dim {dim} γ {gamma}");
        }
    }
}
