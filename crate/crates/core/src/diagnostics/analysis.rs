//! Checks over recorded series: power-law fits, the entropy and Boltzmann
//! production identities, and distances to a stationary profile.

use crate::error::{Error, Result};
use crate::grid::Field;

use super::{DiagnosticsRecord, DiagnosticsSeries};

/// Least-squares fit of `log y = slope · log t + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Fits `values` against `times` over `window = [t0, t1]`. Needs at least
/// ten positive samples in the window.
pub fn fit_power_law(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<PowerLawFit> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window.0 && **t <= window.1)
        .map(|(t, v)| (*t, *v))
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} samples in window [{}, {}], need at least 10",
            pts.len(),
            window.0,
            window.1
        )));
    }
    if pts.iter().any(|(t, v)| *t <= 0.0 || *v <= 0.0) {
        return Err(Error::InsufficientData("nonpositive value in power-law window".into()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    linear_fit(&xs, &ys)
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientData("need two points for a line".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::InsufficientData("degenerate abscissae".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = if n > 2 { (rss / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(PowerLawFit { slope, stderr, intercept, points: n })
}

/// Result of comparing `dE/dτ` with `−I` along a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    /// Largest `|dE/dτ + I| / max(|dE/dτ|, I)` in the window.
    pub max_relative_mismatch: f64,
    /// Largest increase `E_{k+1} − E_k` over the whole run.
    pub max_increase: f64,
    /// Trapezoidal `∫ I dτ` over the run.
    pub dissipated: f64,
    /// `E(0) − E(end)`.
    pub entropy_drop: f64,
    pub initial_entropy: f64,
}

impl EntropyReport {
    pub fn monotone(&self, rel_tol: f64) -> bool {
        self.max_increase <= rel_tol * self.initial_entropy
    }

    pub fn budget_holds(&self, rel_tol: f64) -> bool {
        self.dissipated <= self.entropy_drop + rel_tol * self.initial_entropy
    }
}

fn centered_rates(records: &[DiagnosticsRecord], value: impl Fn(&DiagnosticsRecord) -> f64) -> Vec<(usize, f64)> {
    (1..records.len().saturating_sub(1))
        .filter_map(|k| {
            let (a, b) = (&records[k - 1], &records[k + 1]);
            let dt = b.time - a.time;
            (dt > 0.0).then(|| (k, (value(b) - value(a)) / dt))
        })
        .collect()
}

/// Checks `dE/dτ = −I` by centered differences inside `window`.
pub fn entropy_dissipation_identity_check(series: &DiagnosticsSeries, window: (f64, f64)) -> Result<EntropyReport> {
    let r = &series.records;
    if r.len() < 3 {
        return Err(Error::InsufficientData("identity check needs at least 3 records".into()));
    }
    let mut worst: f64 = 0.0;
    let mut inside = 0;
    for (k, rate) in centered_rates(r, |x| x.entropy) {
        if r[k].time < window.0 || r[k].time > window.1 {
            continue;
        }
        inside += 1;
        let i = r[k].dissipation;
        let scale = rate.abs().max(i);
        if scale > 0.0 {
            worst = worst.max((rate + i).abs() / scale);
        }
    }
    if inside == 0 {
        return Err(Error::InsufficientData("no records inside the identity window".into()));
    }
    let max_increase = r.windows(2).map(|w| w[1].entropy - w[0].entropy).fold(f64::NEG_INFINITY, f64::max);
    let dissipated = r.windows(2).map(|w| 0.5 * (w[0].dissipation + w[1].dissipation) * (w[1].time - w[0].time)).sum();
    Ok(EntropyReport {
        max_relative_mismatch: worst,
        max_increase,
        dissipated,
        entropy_drop: r[0].entropy - r[r.len() - 1].entropy,
        initial_entropy: r[0].entropy,
    })
}

/// Comparison of `d/dτ ∫ v log v` with `−∫|∇Hv|² + α ∫ v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoltzmannReport {
    pub max_relative_mismatch: f64,
    /// Largest relative change of `α ∫ v` over the run.
    pub mass_term_drift: f64,
}

pub fn boltzmann_identity_check(series: &DiagnosticsSeries, alpha: f64, window: (f64, f64)) -> Result<BoltzmannReport> {
    let r = &series.records;
    if r.len() < 3 {
        return Err(Error::InsufficientData("identity check needs at least 3 records".into()));
    }
    let mut worst: f64 = 0.0;
    for (k, rate) in centered_rates(r, |x| x.boltzmann) {
        if r[k].time < window.0 || r[k].time > window.1 {
            continue;
        }
        let rhs = -r[k].grad_half_energy + alpha * r[k].mass;
        let scale = rate.abs().max(rhs.abs()).max(r[k].grad_half_energy);
        if scale > 0.0 {
            worst = worst.max((rate - rhs).abs() / scale);
        }
    }
    let m0 = r[0].mass;
    let drift = r.iter().map(|x| (x.mass - m0).abs()).fold(0.0, f64::max) / m0.max(f64::MIN_POSITIVE);
    Ok(BoltzmannReport { max_relative_mismatch: worst, mass_term_drift: drift })
}

/// Distances of snapshots to a profile plus entropy-gap quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    pub l1_distance: Vec<f64>,
    pub linf_distance: Vec<f64>,
    pub entropy_gap: Vec<f64>,
    /// `(E − E_∞)/I`, `None` where `I < 1e-14`.
    pub gap_ratio: Vec<Option<f64>>,
    /// Literal `E/I`, `None` where `I < 1e-14`.
    pub literal_ratio: Vec<Option<f64>>,
}

impl ConvergenceReport {
    /// Final distance below `first / 10`.
    pub fn decreasing_trend(&self) -> bool {
        match (self.l1_distance.first(), self.l1_distance.last()) {
            (Some(a), Some(b)) => b < &(a / 10.0),
            _ => false,
        }
    }
}

/// Dissipation below which ratios are reported as unavailable.
pub const GAP_GUARD: f64 = 1e-14;

/// Builds the report from `(time, state, record)` samples and the profile
/// with its entropy. Fails if the masses differ by more than 1%.
pub fn convergence_to_profile(
    samples: &[(f64, &Field, &DiagnosticsRecord)],
    profile: &Field,
    profile_entropy: f64,
) -> Result<ConvergenceReport> {
    let pm = profile.mass();
    let mut report = ConvergenceReport {
        times: vec![],
        l1_distance: vec![],
        linf_distance: vec![],
        entropy_gap: vec![],
        gap_ratio: vec![],
        literal_ratio: vec![],
    };
    for (t, v, rec) in samples {
        let m = v.mass();
        if (m - pm).abs() > 0.01 * pm {
            return Err(Error::InvalidParameter(format!("mass {m} differs from profile mass {pm} by more than 1%")));
        }
        report.times.push(*t);
        report.l1_distance.push(v.l1_distance(profile)?);
        report.linf_distance.push(v.linf_distance(profile)?);
        let gap = rec.entropy - profile_entropy;
        report.entropy_gap.push(gap);
        let guard = |x: f64| (rec.dissipation >= GAP_GUARD).then(|| x / rec.dissipation);
        report.gap_ratio.push(guard(gap));
        report.literal_ratio.push(guard(rec.entropy));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_recovers_slope() {
        let t: Vec<f64> = (1..=50).map(|k| k as f64 * 2.0).collect();
        let v: Vec<f64> = t.iter().map(|x| 3.0 * x.powf(-0.4)).collect();
        let fit = fit_power_law(&t, &v, (10.0, 100.0)).unwrap();
        assert!((fit.slope + 0.4).abs() < 1e-12 && fit.stderr < 1e-10);
        assert!(fit_power_law(&t, &v, (10.0, 20.0)).is_err());
        let mut bad = v.clone();
        bad[20] = 0.0;
        assert!(fit_power_law(&t, &bad, (10.0, 100.0)).is_err());
    }

    #[test]
    fn exact_exponential_entropy_satisfies_identity() {
        let records: Vec<DiagnosticsRecord> = (0..200)
            .map(|k| {
                let t = k as f64 * 0.01;
                DiagnosticsRecord { time: t, entropy: (-t).exp(), dissipation: (-t).exp(), ..Default::default() }
            })
            .collect();
        let series = DiagnosticsSeries { records, ..Default::default() };
        let rep = entropy_dissipation_identity_check(&series, (0.5, 1.5)).unwrap();
        assert!(rep.max_relative_mismatch < 1e-4);
        assert!(rep.monotone(0.0));
        assert!((rep.dissipated - rep.entropy_drop).abs() < 1e-4);
    }
}
