//! Independent reference values for the discrete operators: double-exponential
//! quadrature of the defining integrals, and closed forms for Gaussians.

use quadrature::double_exponential::integrate;
use statrs::function::gamma::gamma;

use crate::special::{fractional_laplacian_constant, riesz_constant};

const TARGET: f64 = 1e-14;

/// `∫_0^T t^γ g(t) dt` for `γ > −1`. The substitution `t = u^{1/(γ+1)}`
/// removes the endpoint singularity.
fn singular_piece(g: impl Fn(f64) -> f64, gamma_exp: f64, upper: f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    let q = gamma_exp + 1.0;
    let p = 1.0 / q;
    integrate(|u| g(u.max(0.0).powf(p)), 0.0, upper.powf(q), TARGET).integral / q
}

/// 1-D Riesz potential `c(1,s) ∫ |x − y|^{2s−1} f(y) dy` for `f` supported in
/// `[breaks[0], breaks[last]]` and smooth between consecutive breakpoints.
pub fn riesz_potential_1d(f: impl Fn(f64) -> f64, x: f64, s: f64, breaks: &[f64]) -> f64 {
    let gamma_exp = 2.0 * s - 1.0;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if x <= a || x >= b {
            // integrable everywhere on the piece, but keep the nearest end singular
            if x <= a {
                total += singular_piece(|t| f(x + t), gamma_exp, b - x)
                    - singular_piece(|t| f(x + t), gamma_exp, a - x);
            } else {
                total += singular_piece(|t| f(x - t), gamma_exp, x - a)
                    - singular_piece(|t| f(x - t), gamma_exp, x - b);
            }
        } else {
            total += singular_piece(|t| f(x + t), gamma_exp, b - x);
            total += singular_piece(|t| f(x - t), gamma_exp, x - a);
        }
    }
    riesz_constant(1, s) * total
}

/// 1-D `(−Δ)^s f(x) = C(1,s) ∫_0^∞ (2f(x) − f(x+t) − f(x−t)) t^{−1−2s} dt` for
/// smooth `f` vanishing beyond `|y| > reach`. `f2`, `f4` are the second and
/// fourth derivatives, used on `t < 10⁻²` where the difference cancels.
pub fn frac_laplacian_1d(
    f: impl Fn(f64) -> f64,
    f2: impl Fn(f64) -> f64,
    f4: impl Fn(f64) -> f64,
    x: f64,
    s: f64,
    reach: f64,
) -> f64 {
    let delta: f64 = 1e-2;
    let p = -1.0 - 2.0 * s;
    // Taylor: 2f − f(x+t) − f(x−t) = −f'' t² − f'''' t⁴/12 − ...
    let near = -f2(x) * delta.powf(p + 3.0) / (p + 3.0) - f4(x) / 12.0 * delta.powf(p + 5.0) / (p + 5.0);
    let upper = x.abs() + reach;
    let mid = integrate(
        |t| (2.0 * f(x) - f(x + t) - f(x - t)) * t.powf(p),
        delta,
        upper.max(2.0 * delta),
        TARGET,
    )
    .integral;
    let tail = 2.0 * f(x) * upper.max(2.0 * delta).powf(-2.0 * s) / (2.0 * s);
    fractional_laplacian_constant(1, s) * (near + mid + tail)
}

/// Kummer's function `M(a, b, −z)` for `z ≥ 0` via `e^{−z} M(b − a, b, z)`.
pub fn kummer_negative(a: f64, b: f64, z: f64) -> f64 {
    let c = b - a;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= (c + k) * z / ((b + k) * (k + 1.0));
        sum += term;
        k += 1.0;
        if term.abs() < 1e-17 * sum.abs() && k > z {
            break;
        }
        if k > 10_000.0 {
            break;
        }
    }
    (-z).exp() * sum
}

/// `K_s e^{−|x|²}` at radius `r` in dimension `dim` (requires 2s < n).
pub fn gaussian_riesz_potential(dim: usize, s: f64, r: f64) -> f64 {
    let h = 0.5 * dim as f64;
    gamma(h - s) / (4f64.powf(s) * gamma(h)) * kummer_negative(h - s, h, r * r)
}

/// `(−Δ)^s e^{−|x|²}` at radius `r`.
pub fn gaussian_frac_laplacian(dim: usize, s: f64, r: f64) -> f64 {
    let h = 0.5 * dim as f64;
    4f64.powf(s) * gamma(h + s) / gamma(h) * kummer_negative(h + s, h, r * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_form_riesz() {
        let s = 0.25;
        let g = |y: f64| (-y * y).exp();
        for x in [0.0, 0.3, 1.7, 4.0] {
            let q = riesz_potential_1d(g, x, s, &[-9.0, 9.0]);
            let exact = gaussian_riesz_potential(1, s, x);
            assert!((q - exact).abs() < 1e-11 * exact, "x = {x}: {q} vs {exact}");
        }
    }

    #[test]
    fn quadrature_matches_closed_form_laplacian() {
        for s in [0.25, 0.5, 0.75] {
            let g = |y: f64| (-y * y).exp();
            let g2 = |y: f64| (4.0 * y * y - 2.0) * (-y * y).exp();
            let g4 = |y: f64| (16.0 * y.powi(4) - 48.0 * y * y + 12.0) * (-y * y).exp();
            for x in [0.0, 0.5, 2.0, 5.0] {
                let q = frac_laplacian_1d(g, g2, g4, x, s, 9.0);
                let exact = gaussian_frac_laplacian(1, s, x);
                assert!((q - exact).abs() < 1e-9 * exact.abs().max(1e-3), "s {s} x {x}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn box_potential_has_kernel_tail() {
        let s = 0.25;
        let q = riesz_potential_1d(|_| 1.0, 10.0, s, &[-0.5, 0.5]);
        let tail = riesz_constant(1, s) * 10f64.powf(-0.5);
        assert!((q / tail - 1.0).abs() < 1e-3);
    }
}
