//! Entropies, norms, power-law fits and convergence checks.

mod analysis;
mod record;

pub use analysis::{
    boltzmann_identity_check, convergence_to_profile, entropy_dissipation_identity_check, fit_power_law, linear_fit,
    BoltzmannReport, ConvergenceReport, EntropyReport, PowerLawFit, GAP_GUARD,
};
pub use record::{record, support_radius, DiagnosticsRecord, LOG_FLOOR, SUPPORT_THRESHOLD};

pub(crate) use record::record_with_pressure;

/// Identifies the run a series belongs to.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunMeta {
    pub id: String,
    pub n: usize,
    pub s: f64,
    pub mode: String,
    pub half_width: f64,
    pub points_per_axis: usize,
}

/// Time-ordered diagnostics of one run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiagnosticsSeries {
    pub meta: RunMeta,
    pub records: Vec<DiagnosticsRecord>,
}

impl DiagnosticsSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    pub fn column(&self, f: impl Fn(&DiagnosticsRecord) -> f64) -> Vec<f64> {
        self.records.iter().map(f).collect()
    }

    pub fn last(&self) -> Option<&DiagnosticsRecord> {
        self.records.last()
    }
}
