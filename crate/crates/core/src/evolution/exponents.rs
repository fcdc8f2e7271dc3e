use crate::error::{Error, Result};

/// Similarity exponents of the source-type solution for given `(n, s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub n: usize,
    pub s: f64,
    /// `β = 1/(n + 2 − 2s)`.
    pub beta: f64,
    /// `α = nβ`.
    pub alpha: f64,
    /// `σ = 1 − 2β`, the decay rate of the pressure.
    pub sigma: f64,
    /// `a = β/2`, the curvature of the obstacle.
    pub a: f64,
}

impl Exponents {
    pub fn new(n: usize, s: f64) -> Result<Self> {
        if n != 1 && n != 2 {
            return Err(Error::InvalidParameter(format!("dimension must be 1 or 2, got {n}")));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParameter(format!("s must lie in (0, 1), got {s}")));
        }
        let beta = 1.0 / (n as f64 + 2.0 - 2.0 * s);
        Ok(Self { n, s, beta, alpha: n as f64 * beta, sigma: 1.0 - 2.0 * beta, a: 0.5 * beta })
    }

    /// Exponent of the mass law `M = c C^{(n+2−2s)/2}`.
    pub fn mass_exponent(&self) -> f64 {
        0.5 / self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        let e = Exponents::new(1, 0.25).unwrap();
        assert!((e.beta - 0.4).abs() < 1e-15 && (e.alpha - 0.4).abs() < 1e-15);
        assert!((e.sigma - 0.2).abs() < 1e-15 && (e.a - 0.2).abs() < 1e-15);
        let e = Exponents::new(2, 0.5).unwrap();
        assert!((e.beta - 1.0 / 3.0).abs() < 1e-15 && (e.alpha - 2.0 / 3.0).abs() < 1e-15);
        let e = Exponents::new(1, 1e-12).unwrap();
        assert!((e.beta - 1.0 / 3.0).abs() < 1e-11);
        assert!(Exponents::new(3, 0.5).is_err());
        assert!(Exponents::new(1, 1.0).is_err());
    }

    #[test]
    fn exponent_identities() {
        for n in [1, 2] {
            for k in 1..20 {
                let s = k as f64 / 20.0;
                let e = Exponents::new(n, s).unwrap();
                assert!((e.alpha + (2.0 - 2.0 * s) * e.beta - 1.0).abs() < 1e-14);
                assert!((e.sigma - (e.alpha - 2.0 * s * e.beta)).abs() < 1e-14);
                let nf = n as f64;
                assert!(e.beta > 1.0 / (nf + 2.0) && e.beta < 1.0 / nf);
            }
        }
    }
}
