//! Solvers for the linear complementarity problem
//! `z ≥ 0, w = M z + q ≥ 0, z·w = 0` with a dense symmetric positive
//! definite `M`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, z: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().zip(z).map(|(a, b)| a * b).sum()).collect()
    }
}

/// `max_i |min(z_i, w_i)|` together with the sign violations.
pub fn complementarity_residual(m: &DenseMatrix, q: &[f64], z: &[f64]) -> f64 {
    let w = m.mul(z);
    w.iter().zip(q).zip(z).map(|((mw, qi), zi)| zi.min(mw + qi).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsorOptions {
    pub omega: f64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for PsorOptions {
    fn default() -> Self {
        Self { omega: 1.5, tol: 1e-9, max_sweeps: 1_000_000 }
    }
}

/// Projected SOR from `z`. Returns the number of sweeps used.
pub fn psor(m: &DenseMatrix, q: &[f64], z: &mut [f64], opts: &PsorOptions) -> Result<usize> {
    let n = m.size();
    let mut w: Vec<f64> = m.mul(z).iter().zip(q).map(|(a, b)| a + b).collect();
    let mut residual = f64::INFINITY;
    for sweep in 1..=opts.max_sweeps {
        for i in 0..n {
            let d = m.get(i, i);
            let zi = (z[i] - opts.omega * w[i] / d).max(0.0);
            let delta = zi - z[i];
            if delta != 0.0 {
                z[i] = zi;
                // M is symmetric, so column i is row i
                for (wk, mk) in w.iter_mut().zip(m.row(i)) {
                    *wk += delta * mk;
                }
            }
        }
        if sweep % 10 == 0 || sweep == opts.max_sweeps {
            // refresh to avoid drift of the incremental residual
            w = m.mul(z).iter().zip(q).map(|(a, b)| a + b).collect();
            residual = z.iter().zip(&w).map(|(a, b)| a.min(*b).abs()).fold(0.0, f64::max);
            if residual <= opts.tol {
                return Ok(sweep);
            }
        }
    }
    Err(Error::NonConvergence { iterations: opts.max_sweeps, residual })
}

/// Solves `M_AA z_A = −q_A` on the active set of `z` and updates the set
/// until signs are consistent. Returns `false` if no consistent set was found.
pub fn polish(m: &DenseMatrix, q: &[f64], z: &mut [f64], max_rounds: usize) -> bool {
    let n = m.size();
    let w: Vec<f64> = m.mul(z).iter().zip(q).map(|(a, b)| a + b).collect();
    let mut active: Vec<bool> = (0..n).map(|i| z[i] > w[i]).collect();
    for _ in 0..max_rounds {
        let idx: Vec<usize> = (0..n).filter(|&i| active[i]).collect();
        let mut trial = vec![0.0; n];
        if !idx.is_empty() {
            let a = DMatrix::from_fn(idx.len(), idx.len(), |r, c| m.get(idx[r], idx[c]));
            let b = DVector::from_iterator(idx.len(), idx.iter().map(|&i| -q[i]));
            let sol = match a.clone().cholesky() {
                Some(ch) => ch.solve(&b),
                None => match a.lu().solve(&b) {
                    Some(x) => x,
                    None => return false,
                },
            };
            for (k, &i) in idx.iter().enumerate() {
                trial[i] = sol[k];
            }
        }
        let wt: Vec<f64> = m.mul(&trial).iter().zip(q).map(|(a, b)| a + b).collect();
        let mut changed = false;
        for i in 0..n {
            if active[i] && trial[i] < 0.0 {
                active[i] = false;
                changed = true;
            } else if !active[i] && wt[i] < 0.0 {
                active[i] = true;
                changed = true;
            }
        }
        if !changed {
            z.copy_from_slice(&trial);
            return true;
        }
    }
    false
}

/// Lemke's complementary pivoting method with covering vector `e = 1`.
pub fn lemke(m: &DenseMatrix, q: &[f64], max_pivots: usize) -> Result<Vec<f64>> {
    let n = m.size();
    if q.iter().all(|&x| x >= 0.0) {
        return Ok(vec![0.0; n]);
    }
    // columns: w (0..n), z (n..2n), z0 (2n), rhs (2n+1)
    let cols = 2 * n + 2;
    let z0 = 2 * n;
    let mut t = vec![0.0; n * cols];
    for i in 0..n {
        t[i * cols + i] = 1.0;
        for j in 0..n {
            t[i * cols + n + j] = -m.get(i, j);
        }
        t[i * cols + z0] = -1.0;
        t[i * cols + cols - 1] = q[i];
    }
    let mut basis: Vec<usize> = (0..n).collect();

    let pivot = |t: &mut Vec<f64>, row: usize, col: usize| {
        let p = t[row * cols + col];
        for k in 0..cols {
            t[row * cols + k] /= p;
        }
        for i in 0..n {
            if i == row {
                continue;
            }
            let f = t[i * cols + col];
            if f != 0.0 {
                for k in 0..cols {
                    t[i * cols + k] -= f * t[row * cols + k];
                }
            }
        }
    };

    let first = (0..n).min_by(|&a, &b| q[a].total_cmp(&q[b])).unwrap();
    pivot(&mut t, first, z0);
    let mut leaving = basis[first];
    basis[first] = z0;
    for _ in 0..max_pivots {
        let entering = if leaving < n { leaving + n } else { leaving - n };
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            let a = t[i * cols + entering];
            if a > 1e-12 {
                let ratio = t[i * cols + cols - 1] / a;
                let better = match best {
                    None => true,
                    Some((bi, br)) => ratio < br - 1e-14 || (ratio <= br + 1e-14 && basis[i] == z0 && basis[bi] != z0),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = best else {
            return Err(Error::Pivoting("secondary ray encountered".into()));
        };
        pivot(&mut t, row, entering);
        leaving = basis[row];
        basis[row] = entering;
        if leaving == z0 {
            let mut z = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if (n..2 * n).contains(&b) {
                    z[b - n] = t[i * cols + cols - 1].max(0.0);
                }
            }
            return Ok(z);
        }
    }
    Err(Error::Pivoting(format!("no solution after {max_pivots} pivots")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (DenseMatrix, Vec<f64>) {
        // positive definite with positive entries, like a Riesz matrix
        let m = DenseMatrix::from_fn(12, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()).sqrt() + if i == j { 1.0 } else { 0.0 });
        let q: Vec<f64> = (0..12).map(|i| (i as f64 - 5.5).powi(2) * 0.1 - 1.0).collect();
        (m, q)
    }

    #[test]
    fn solvers_agree() {
        let (m, q) = sample();
        let zl = lemke(&m, &q, 1000).unwrap();
        assert!(complementarity_residual(&m, &q, &zl) < 1e-12);
        let mut zp = vec![0.0; 12];
        psor(&m, &q, &mut zp, &PsorOptions::default()).unwrap();
        assert!(polish(&m, &q, &mut zp, 20));
        for (a, b) in zl.iter().zip(&zp) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(zp.iter().any(|&x| x > 0.0) && zp.iter().any(|&x| x == 0.0));
    }

    #[test]
    fn nonnegative_q_gives_zero() {
        let (m, _) = sample();
        let z = lemke(&m, &[1.0; 12], 10).unwrap();
        assert!(z.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn psor_reports_nonconvergence() {
        let (m, q) = sample();
        let mut z = vec![0.0; 12];
        let opts = PsorOptions { max_sweeps: 2, tol: 1e-30, ..Default::default() };
        assert!(matches!(psor(&m, &q, &mut z, &opts), Err(Error::NonConvergence { .. })));
    }
}
