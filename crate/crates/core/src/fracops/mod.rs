//! Discrete `(−Δ)^s`, its inverse `K_s` and the half inverse `H_s = K_{s/2}`.
//!
//! Two realizations are provided. The periodic one applies Fourier
//! multipliers on the torus `[−L, L)^n` and drops the zero mode. The
//! free-space one convolves with the Riesz kernel `c(n,s)|x|^{2s−n}` (and
//! the hypersingular kernel of `(−Δ)^s`) assuming the field vanishes outside
//! the box.

mod fft;
mod freespace;
mod gradient;
mod periodic;

pub use freespace::{ConvolutionBackend, DIRECT_LIMIT};
pub use gradient::gradient;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Field, FieldKind, Grid};
use crate::special::{fractional_laplacian_constant, riesz_constant};
use freespace::Toeplitz;
use periodic::Spectral;

/// Fractional order with the 1-D restriction `s < 1/2` enforced unless
/// explicitly overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    pub s: f64,
    pub allow_supercritical: bool,
}

impl FracParams {
    pub fn new(s: f64) -> Self {
        Self { s, allow_supercritical: false }
    }

    pub fn allow_supercritical(mut self, allow: bool) -> Self {
        self.allow_supercritical = allow;
        self
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::InvalidParameter(format!("s must lie in (0, 1), got {}", self.s)));
        }
        if dim == 1 && self.s >= 0.5 {
            if !self.allow_supercritical {
                return Err(Error::InvalidParameter(format!(
                    "s = {} violates the restriction s < 1/2 in one dimension \
                     (pass --allow-supercritical to override)",
                    self.s
                )));
            }
            log::warn!("running n = 1 with s = {} >= 1/2 outside the supported regime", self.s);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorMode {
    PeriodicSpectral,
    FreespaceKernel,
}

impl OperatorMode {
    pub fn is_periodic(self) -> bool {
        self == OperatorMode::PeriodicSpectral
    }
}

impl fmt::Display for OperatorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorMode::PeriodicSpectral => "periodic",
            OperatorMode::FreespaceKernel => "freespace",
        })
    }
}

impl FromStr for OperatorMode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "periodic" | "periodic_spectral" => Ok(OperatorMode::PeriodicSpectral),
            "freespace" | "freespace_kernel" => Ok(OperatorMode::FreespaceKernel),
            other => Err(Error::InvalidParameter(format!("unknown operator mode `{other}`"))),
        }
    }
}

enum Realization {
    Periodic(Spectral),
    Freespace { laplacian: Toeplitz, inverse: Toeplitz, half: Toeplitz },
}

/// Precomputed realization for a fixed grid and order. Immutable and `Sync`.
pub struct Operator {
    grid: Grid,
    params: FracParams,
    mode: OperatorMode,
    backend: ConvolutionBackend,
    inner: Realization,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("grid", &self.grid)
            .field("s", &self.params.s)
            .field("mode", &self.mode)
            .field("backend", &self.backend)
            .finish()
    }
}

impl Operator {
    pub fn new(grid: Grid, params: FracParams, mode: OperatorMode) -> Result<Self> {
        params.validate(grid.dim())?;
        let s = params.s;
        let dim = grid.dim();
        let n = dim as f64;
        let inner = match mode {
            OperatorMode::PeriodicSpectral => Realization::Periodic(Spectral::new(&grid)),
            OperatorMode::FreespaceKernel => {
                if 2.0 * s >= n {
                    return Err(Error::InvalidParameter(format!(
                        "the free-space Riesz kernel needs 2s < n (n = {dim}, s = {s})"
                    )));
                }
                let h = grid.spacing();
                let npts = grid.points_per_axis();
                let riesz = |order: f64| {
                    let gamma = 2.0 * order - n;
                    Toeplitz::homogeneous(dim, npts, gamma, riesz_constant(dim, order) * h.powf(2.0 * order))
                };
                let gamma = -n - 2.0 * s;
                let scale = -fractional_laplacian_constant(dim, s) * h.powf(-2.0 * s);
                Realization::Freespace {
                    laplacian: Toeplitz::homogeneous(dim, npts, gamma, scale),
                    inverse: riesz(s),
                    half: riesz(0.5 * s),
                }
            }
        };
        let backend = if grid.len() <= DIRECT_LIMIT {
            ConvolutionBackend::Direct
        } else {
            ConvolutionBackend::Fft
        };
        Ok(Self { grid, params, mode, backend, inner })
    }

    /// Overrides the free-space convolution backend (ignored in periodic mode).
    pub fn with_backend(mut self, backend: ConvolutionBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn s(&self) -> f64 {
        self.params.s
    }

    pub fn params(&self) -> FracParams {
        self.params
    }

    pub fn mode(&self) -> OperatorMode {
        self.mode
    }

    /// `(−Δ)^s f`.
    pub fn frac_laplacian(&self, f: &Field) -> Result<Field> {
        self.apply_field(f, Which::Laplacian)
    }

    /// `K_s f`; defined up to a constant in periodic mode.
    pub fn inverse(&self, f: &Field) -> Result<Field> {
        self.apply_field(f, Which::Inverse)
    }

    /// `H_s f = K_{s/2} f`.
    pub fn half_inverse(&self, f: &Field) -> Result<Field> {
        self.apply_field(f, Which::Half)
    }

    /// Gradient with the boundary treatment matching the mode.
    pub fn gradient(&self, f: &Field) -> Result<Vec<Field>> {
        f.check_grid(&self.grid)?;
        Ok(gradient(f, self.mode.is_periodic()))
    }

    pub(crate) fn inverse_into(&self, f: &[f64], out: &mut [f64]) {
        self.apply_raw(f, out, Which::Inverse);
    }

    pub(crate) fn half_into(&self, f: &[f64], out: &mut [f64]) {
        self.apply_raw(f, out, Which::Half);
    }

    /// Entry `(i, k)` of the free-space `K_s` matrix.
    pub(crate) fn inverse_entry(&self, i: usize, k: usize) -> Option<f64> {
        match &self.inner {
            Realization::Freespace { inverse, .. } => Some(inverse.entry(i, k)),
            Realization::Periodic(_) => None,
        }
    }

    fn apply_field(&self, f: &Field, which: Which) -> Result<Field> {
        f.check_grid(&self.grid)?;
        let mut out = vec![0.0; self.grid.len()];
        self.apply_raw(f.values(), &mut out, which);
        let kind = match which {
            Which::Laplacian => FieldKind::Generic,
            Which::Inverse | Which::Half => FieldKind::Pressure,
        };
        Ok(Field::from_parts(self.grid, out, kind))
    }

    fn apply_raw(&self, f: &[f64], out: &mut [f64], which: Which) {
        let s = self.params.s;
        match &self.inner {
            Realization::Periodic(spec) => {
                let power = match which {
                    Which::Laplacian => 2.0 * s,
                    Which::Inverse => -2.0 * s,
                    Which::Half => -s,
                };
                spec.apply_power(f, out, power);
            }
            Realization::Freespace { laplacian, inverse, half } => {
                let op = match which {
                    Which::Laplacian => laplacian,
                    Which::Inverse => inverse,
                    Which::Half => half,
                };
                op.apply(f, out, self.backend);
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Which {
    Laplacian,
    Inverse,
    Half,
}
