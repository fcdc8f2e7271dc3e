//! Special functions used to build the discrete kernels.
//!
//! The lattice sums `Σ' |j|^{-σ}` over `Z^n \ {0}` appear as the leading
//! corrections of the trapezoidal rule for `|x|^γ`-type kernels. For the
//! square lattice they reduce to the Riemann zeta function (n = 1) and to
//! `4 ζ(σ/2) β(σ/2)` (n = 2), analytically continued below the abscissa of
//! convergence.

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

/// Even Bernoulli numbers B_2, B_4, ..., B_24.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Hurwitz zeta `ζ(σ, q)` for real `σ ≥ 0`, `σ ≠ 1`, `q > 0` by Euler–Maclaurin.
pub fn hurwitz_zeta(sigma: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0);
    const HEAD: usize = 16;
    let mut sum = 0.0;
    for k in 0..HEAD {
        sum += (q + k as f64).powf(-sigma);
    }
    let x = q + HEAD as f64;
    sum += x.powf(1.0 - sigma) / (sigma - 1.0);
    sum += 0.5 * x.powf(-sigma);
    // rising factorial σ(σ+1)...(σ+2j-2) over (2j)!
    let mut rising = sigma;
    let mut factorial = 2.0;
    let mut power = x.powf(-sigma - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / factorial * rising * power;
        sum += term;
        let m = (2 * j + 2) as f64;
        rising *= (sigma + m - 1.0) * (sigma + m);
        factorial *= (m + 1.0) * (m + 2.0);
        power /= x * x;
    }
    sum
}

/// Riemann zeta on the real line (σ ≠ 1), continued to σ < 0 by reflection.
pub fn riemann_zeta(sigma: f64) -> f64 {
    if sigma < 0.0 {
        let t = 1.0 - sigma;
        2f64.powf(sigma) * PI.powf(sigma - 1.0) * (0.5 * PI * sigma).sin() * gamma(t) * riemann_zeta(t)
    } else {
        hurwitz_zeta(sigma, 1.0)
    }
}

/// Dirichlet beta `β(σ) = Σ (-1)^k (2k+1)^{-σ}` on the real line.
pub fn dirichlet_beta(sigma: f64) -> f64 {
    if sigma < 0.0 {
        let t = 1.0 - sigma;
        (0.5 * PI).powf(sigma - 1.0) * (0.5 * PI * sigma).cos() * gamma(t) * dirichlet_beta(t)
    } else if (sigma - 1.0).abs() < 1e-12 {
        0.25 * PI
    } else {
        4f64.powf(-sigma) * (hurwitz_zeta(sigma, 0.25) - hurwitz_zeta(sigma, 0.75))
    }
}

/// Continued lattice sum `Σ_{j ∈ Z^n, j ≠ 0} |j|^{-σ}` for n ∈ {1, 2}.
pub fn lattice_zeta(dim: usize, sigma: f64) -> f64 {
    match dim {
        1 => 2.0 * riemann_zeta(sigma),
        2 => 4.0 * riemann_zeta(0.5 * sigma) * dirichlet_beta(0.5 * sigma),
        _ => unreachable!("only n = 1, 2 are supported"),
    }
}

/// Riesz potential normalization `c(n,s) = Γ((n-2s)/2) / (4^s π^{n/2} Γ(s))`,
/// so that `c(n,s)|x|^{2s-n}` is the kernel of `(-Δ)^{-s}`. Requires `2s < n`.
pub fn riesz_constant(dim: usize, s: f64) -> f64 {
    let n = dim as f64;
    gamma(0.5 * (n - 2.0 * s)) / (4f64.powf(s) * PI.powf(0.5 * n) * gamma(s))
}

/// Constant of the singular-integral form of `(-Δ)^s`:
/// `C(n,s) = s 4^s Γ(n/2 + s) / (π^{n/2} Γ(1 - s))`.
pub fn fractional_laplacian_constant(dim: usize, s: f64) -> f64 {
    let n = dim as f64;
    s * 4f64.powf(s) * gamma(0.5 * n + s) / (PI.powf(0.5 * n) * gamma(1.0 - s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn zeta_reference_values() {
        assert!(close(riemann_zeta(2.0), PI * PI / 6.0, 1e-14));
        assert!(close(riemann_zeta(0.5), -1.460_354_508_809_586_8, 1e-13));
        assert!(close(riemann_zeta(0.0), -0.5, 1e-13));
        assert!(close(riemann_zeta(-1.0), -1.0 / 12.0, 1e-12));
        assert!(close(riemann_zeta(-1.5), -0.025_485_201_889_833_036, 1e-11));
        assert!(close(riemann_zeta(3.0), 1.202_056_903_159_594_2, 1e-14));
        assert!(riemann_zeta(-2.0).abs() < 1e-14);
    }

    #[test]
    fn beta_reference_values() {
        assert!(close(dirichlet_beta(1.0), PI / 4.0, 1e-14));
        assert!(close(dirichlet_beta(2.0), 0.915_965_594_177_219_0, 1e-13));
        assert!(close(dirichlet_beta(0.5), 0.667_691_457_189_609_2, 1e-12));
        assert!(close(dirichlet_beta(0.0), 0.5, 1e-13));
        assert!(dirichlet_beta(-1.0).abs() < 1e-13);
        assert!(close(dirichlet_beta(-2.0), -0.5, 1e-12));
    }

    #[test]
    fn lattice_sum_converges_to_direct_sum() {
        // σ = 3 in 2-D converges absolutely; compare against a brute-force
        // partial sum with the tail estimated by the integral 2π/R.
        let r = 400i64;
        let mut direct = 0.0;
        for i in -r..=r {
            for j in -r..=r {
                if i == 0 && j == 0 {
                    continue;
                }
                let d2 = (i * i + j * j) as f64;
                if d2 <= (r * r) as f64 {
                    direct += d2.powf(-1.5);
                }
            }
        }
        direct += 2.0 * PI / r as f64;
        assert!(close(lattice_zeta(2, 3.0), direct, 1e-4));
    }

    #[test]
    fn riesz_constant_known_cases() {
        // 1-D, s = 1/4: Γ(1/4)/(√2 √π Γ(1/4)) = 1/√(2π)
        assert!(close(riesz_constant(1, 0.25), 1.0 / (2.0 * PI).sqrt(), 1e-13));
        // 2-D, s = 1/2: 1/(2π)
        assert!(close(riesz_constant(2, 0.5), 1.0 / (2.0 * PI), 1e-13));
        // 1-D half Laplacian constant is 1/π
        assert!(close(fractional_laplacian_constant(1, 0.5), 1.0 / PI, 1e-13));
    }
}
