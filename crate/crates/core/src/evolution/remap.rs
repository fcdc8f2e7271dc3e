//! Conservative remap between similarity frames.
//!
//! Source cell averages are reconstructed by positivity-limited piecewise
//! quartics, and each destination average is the exact integral of the
//! reconstruction over the scaled destination cell. In 2-D the map is
//! separable and is applied one axis at a time.

use crate::error::{Error, Result};
use crate::evolution::Exponents;
use crate::grid::{Field, Grid};

/// `ū + a1 ξ + a2 (ξ² − 1/12) + a3 ξ³ + a4 (ξ⁴ − 1/80)` on `ξ ∈ [−1/2, 1/2]`,
/// matching the averages of five consecutive cells.
#[derive(Clone, Copy)]
struct Quartic {
    mean: f64,
    a: [f64; 4],
}

impl Quartic {
    fn new(u: [f64; 5]) -> Self {
        let [m2, m1, c, p1, p2] = u;
        let a = [
            17.0 / 24.0 * (p1 - m1) - 5.0 / 48.0 * (p2 - m2),
            -11.0 / 8.0 * c + 0.75 * (m1 + p1) - (m2 + p2) / 16.0,
            (m1 - p1) / 6.0 - (m2 - p2) / 12.0,
            c / 4.0 - (m1 + p1) / 6.0 + (m2 + p2) / 24.0,
        ];
        let mut q = Self { mean: c, a };
        let lo = q.min();
        if lo < 0.0 {
            // scale around the mean so the minimum is zero
            let theta = if c > 0.0 { (c / (c - lo)).min(1.0) } else { 0.0 };
            q.a.iter_mut().for_each(|x| *x *= theta);
        }
        q
    }

    fn value(&self, x: f64) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        let x2 = x * x;
        self.mean + a1 * x + a2 * (x2 - 1.0 / 12.0) + a3 * x2 * x + a4 * (x2 * x2 - 1.0 / 80.0)
    }

    fn slope(&self, x: f64) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        a1 + 2.0 * a2 * x + 3.0 * a3 * x * x + 4.0 * a4 * x * x * x
    }

    /// Minimum over the cell: endpoints and bracketed critical points.
    fn min(&self) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        let bound = self.mean - 0.5 * a1.abs() - a2.abs() / 6.0 - a3.abs() / 8.0 - a4.abs() * (1.0 / 16.0 + 1.0 / 80.0);
        if bound >= 0.0 {
            return bound;
        }
        const PARTS: usize = 16;
        let mut lo = self.value(-0.5).min(self.value(0.5));
        let mut x0 = -0.5;
        let mut d0 = self.slope(x0);
        for k in 1..=PARTS {
            let x1 = -0.5 + k as f64 / PARTS as f64;
            let d1 = self.slope(x1);
            if d0 < 0.0 && d1 >= 0.0 {
                let (mut a, mut b) = (x0, x1);
                for _ in 0..50 {
                    let mid = 0.5 * (a + b);
                    if self.slope(mid) < 0.0 {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                lo = lo.min(self.value(0.5 * (a + b)));
            }
            x0 = x1;
            d0 = d1;
        }
        lo
    }

    /// `∫_{−1/2}^{ξ} q`.
    fn integral_to(&self, xi: f64) -> f64 {
        let [a1, a2, a3, a4] = self.a;
        let t = xi + 0.5;
        let x2 = xi * xi;
        self.mean * t
            + 0.5 * a1 * (x2 - 0.25)
            + a2 * ((x2 * xi + 0.125) / 3.0 - t / 12.0)
            + 0.25 * a3 * (x2 * x2 - 0.0625)
            + a4 * ((x2 * x2 * xi + 0.03125) / 5.0 - t / 80.0)
    }
}

/// Remaps one line of averages. `dst[j] = (1/h_dst) ∫_{factor·cell_j} u`.
fn remap_line(src: &[f64], src_grid: &Grid, dst_grid: &Grid, factor: f64) -> Vec<f64> {
    let n = src.len();
    let l = src_grid.half_width();
    let h = src_grid.spacing();
    let get = |k: isize| if k < 0 || k as usize >= n { 0.0 } else { src[k as usize] };
    let pieces: Vec<Quartic> = (0..n as isize)
        .map(|k| Quartic::new([get(k - 2), get(k - 1), get(k), get(k + 1), get(k + 2)]))
        .collect();
    let mut prefix = vec![0.0; n + 1];
    for k in 0..n {
        prefix[k + 1] = prefix[k] + h * pieces[k].mean;
    }
    let cumulative = |x: f64| -> f64 {
        let r = (x + l) / h;
        if r <= 0.0 {
            return 0.0;
        }
        if r >= n as f64 {
            return prefix[n];
        }
        let k = (r.floor() as usize).min(n - 1);
        prefix[k] + h * pieces[k].integral_to(r - k as f64 - 0.5)
    };
    let hd = dst_grid.spacing();
    let ld = dst_grid.half_width();
    let nd = dst_grid.points_per_axis();
    let mut last = cumulative(factor * -ld);
    (0..nd)
        .map(|j| {
            let right = cumulative(factor * (-ld + (j + 1) as f64 * hd));
            let avg = (right - last) / hd;
            last = right;
            avg.max(0.0)
        })
        .collect()
}

/// Returns `w` on `dst` with cell averages of `factor^n · u(factor · y)`.
pub fn remap_scaled(u: &Field, dst: &Grid, factor: f64) -> Result<Field> {
    let src = u.grid();
    if src.dim() != dst.dim() {
        return Err(Error::GridMismatch);
    }
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::InvalidParameter(format!("scale factor must be positive, got {factor}")));
    }
    let values = match src.dim() {
        1 => remap_line(u.values(), src, dst, factor),
        _ => {
            let ns = src.points_per_axis();
            let nd = dst.points_per_axis();
            // axis 1 first: ns rows of nd values
            let mut tmp = vec![0.0; ns * nd];
            for i0 in 0..ns {
                let line = remap_line(&u.values()[i0 * ns..(i0 + 1) * ns], src, dst, factor);
                tmp[i0 * nd..(i0 + 1) * nd].copy_from_slice(&line);
            }
            let mut out = vec![0.0; nd * nd];
            let mut column = vec![0.0; ns];
            for j1 in 0..nd {
                for i0 in 0..ns {
                    column[i0] = tmp[i0 * nd + j1];
                }
                let line = remap_line(&column, src, dst, factor);
                for (j0, v) in line.into_iter().enumerate() {
                    out[j0 * nd + j1] = v;
                }
            }
            out
        }
    };
    Field::new(*dst, values, u.kind())
}

/// `v(y, τ) = (1+t)^α u(y (1+t)^β)` sampled on `u`'s grid; returns `(v, τ)`.
pub fn rescale_forward(u: &Field, t: f64, exp: &Exponents) -> Result<(Field, f64)> {
    rescale_forward_to(u, t, exp, u.grid())
}

pub fn rescale_forward_to(u: &Field, t: f64, exp: &Exponents, dst: &Grid) -> Result<(Field, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter(format!("time must be nonnegative, got {t}")));
    }
    if t == 0.0 && u.grid() == dst {
        return Ok((u.clone(), 0.0));
    }
    let lambda = (1.0 + t).powf(exp.beta);
    Ok((remap_scaled(u, dst, lambda)?, (1.0 + t).ln()))
}

/// Inverse of [`rescale_forward`]: `u(x, t) = (1+t)^{−α} v(x (1+t)^{−β})`.
pub fn rescale_backward(v: &Field, tau: f64, exp: &Exponents) -> Result<(Field, f64)> {
    rescale_backward_to(v, tau, exp, v.grid())
}

pub fn rescale_backward_to(v: &Field, tau: f64, exp: &Exponents, dst: &Grid) -> Result<(Field, f64)> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("rescaled time must be nonnegative, got {tau}")));
    }
    if tau == 0.0 && v.grid() == dst {
        return Ok((v.clone(), 0.0));
    }
    let t = tau.exp_m1();
    let lambda = (1.0 + t).powf(exp.beta);
    Ok((remap_scaled(v, dst, 1.0 / lambda)?, t))
}

/// Pressure in physical variables from the rescaled one:
/// `p(x, t) = (1+t)^{−σ} P(x (1+t)^{−β})`, pointwise at matching points.
pub fn pressure_scale(t: f64, exp: &Exponents) -> f64 {
    (1.0 + t).powf(-exp.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FieldKind;

    fn mixture(grid: Grid) -> Field {
        Field::from_fn(grid, FieldKind::Density, |x| {
            let r2 = |c: f64, w: f64| x.iter().enumerate().map(|(k, v)| (v - c * (k as f64 + 1.0)).powi(2)).sum::<f64>() / (w * w);
            (-r2(0.3, 0.6)).exp() + 0.5 * (-r2(-0.7, 0.4)).exp() + 0.25 * (-r2(1.1, 0.8)).exp()
        })
        .unwrap()
    }

    #[test]
    fn identity_at_time_zero() {
        let g = Grid::new(1, 4.0, 32).unwrap();
        let e = Exponents::new(1, 0.25).unwrap();
        let u = mixture(g);
        let (v, tau) = rescale_forward(&u, 0.0, &e).unwrap();
        assert_eq!(tau, 0.0);
        assert_eq!(v, u);
        // the remap itself with factor 1 reproduces averages up to round-off
        let w = remap_scaled(&u, &g, 1.0).unwrap();
        assert!(w.linf_distance(&u).unwrap() < 1e-14);
    }

    #[test]
    fn round_trip_is_accurate() {
        let e = Exponents::new(1, 0.25).unwrap();
        let g = Grid::new(1, 8.0, 512).unwrap();
        let u = mixture(g);
        let (v, tau) = rescale_forward(&u, 3.0, &e).unwrap();
        assert!((v.mass() - u.mass()).abs() < 1e-12 * u.mass());
        let (back, t) = rescale_backward(&v, tau, &e).unwrap();
        assert!((t - 3.0).abs() < 1e-12);
        let err = back.l1_distance(&u).unwrap() / u.mass();
        assert!(err < 1e-5, "round trip {err}");
    }

    #[test]
    fn two_dimensional_mass_and_sign() {
        let e = Exponents::new(2, 0.5).unwrap();
        let g = Grid::new(2, 6.0, 64).unwrap();
        let u = Field::from_fn(g, FieldKind::Density, |x| if x[0].abs() < 1.0 && x[1].abs() < 0.5 { 2.0 } else { 0.0 }).unwrap();
        let (v, _) = rescale_forward(&u, 5.0, &e).unwrap();
        assert!((v.mass() - u.mass()).abs() < 1e-12 * u.mass());
        assert!(v.min() >= 0.0);
    }

    #[test]
    fn limiter_keeps_reconstruction_nonnegative() {
        let q = Quartic::new([0.0, 0.0, 1e-3, 5.0, 0.0]);
        assert!(q.min() >= -1e-18);
        assert!((0..=100).all(|k| q.value(-0.5 + k as f64 / 100.0) >= -1e-15));
        assert!((q.integral_to(0.5) - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn reconstruction_reproduces_quartics() {
        // cell averages of x^4 on unit cells centered at -2..2
        let avg = |c: f64| ((c + 0.5).powi(5) - (c - 0.5).powi(5)) / 5.0;
        let q = Quartic::new([avg(-2.0), avg(-1.0), avg(0.0), avg(1.0), avg(2.0)]);
        for x in [-0.5, -0.1, 0.3] {
            assert!((q.value(x) - x.powi(4)).abs() < 1e-13);
        }
    }
}
