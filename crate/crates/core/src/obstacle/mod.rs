//! The obstacle problem with parabolic obstacle `Φ = C − a|y|²`: find
//! `P ≥ Φ` with `V = (−Δ)^s P ≥ 0` and `V = 0` wherever `P > Φ`.
//!
//! The discrete problem is posed on the density. With `K` the free-space
//! Riesz matrix, `V ≥ 0`, `W = K V − Φ ≥ 0` and `V·W = 0` is a linear
//! complementarity problem with a symmetric positive definite matrix, and
//! `P = K V` decays like the Riesz kernel outside the box. Unknowns are
//! restricted to `{Φ > 0}`, outside of which `V` must vanish.

mod lcp;
mod profile;

pub use lcp::{complementarity_residual, lemke, polish, psor, DenseMatrix, PsorOptions};
pub use profile::{
    box_sensitivity, calibrate_mass_constant, convexity_check, level_for_mass, mass_law, match_mass, scaling_check,
    Barenblatt, ConvexityReport, MassLawFit, ScalingReport,
};

use crate::error::{Error, Result};
use crate::evolution::Exponents;
use crate::fracops::{FracParams, Operator, OperatorMode};
use crate::grid::{Field, FieldKind, Grid};

/// Required ratio of the box half-width to the obstacle radius `sqrt(C/a)`.
pub const MARGIN: f64 = 1.5;

/// Default ratio used by [`ObstacleProblem::with_default_box`].
pub const DEFAULT_BOX_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleProblem {
    pub level: f64,
    pub a: f64,
    pub s: f64,
    pub grid: Grid,
}

impl ObstacleProblem {
    pub fn new(level: f64, exp: &Exponents, grid: Grid) -> Result<Self> {
        if grid.dim() != exp.n {
            return Err(Error::InvalidGrid("grid dimension differs from the exponents".into()));
        }
        let p = Self { level, a: exp.a, s: exp.s, grid };
        if level > 0.0 && grid.half_width() < MARGIN * p.obstacle_radius() {
            return Err(Error::InvalidGrid(format!(
                "box half-width {} must be at least {MARGIN} times sqrt(C/a) = {}",
                grid.half_width(),
                p.obstacle_radius()
            )));
        }
        Ok(p)
    }

    /// Box of half-width `3·sqrt(C/a)` with `n_points` cells per axis.
    pub fn with_default_box(level: f64, exp: &Exponents, n_points: usize) -> Result<Self> {
        let radius = if level > 0.0 { (level / exp.a).sqrt() } else { 1.0 };
        Self::new(level, exp, Grid::new(exp.n, DEFAULT_BOX_FACTOR * radius, n_points)?)
    }

    /// `sqrt(C/a)`, where the obstacle crosses zero.
    pub fn obstacle_radius(&self) -> f64 {
        (self.level.max(0.0) / self.a).sqrt()
    }

    pub fn obstacle(&self) -> Vec<f64> {
        (0..self.grid.len()).map(|i| self.level - self.a * self.grid.radius(i).powi(2)).collect()
    }

    pub fn operator(&self) -> Result<Operator> {
        Operator::new(self.grid, FracParams::new(self.s).allow_supercritical(true), OperatorMode::FreespaceKernel)
    }

    /// Unknown cells `{Φ > 0}` and the restricted Riesz matrix.
    pub fn reduced_system(&self, op: &Operator) -> (Vec<usize>, DenseMatrix, Vec<f64>) {
        let phi = self.obstacle();
        let cells: Vec<usize> = (0..self.grid.len()).filter(|&i| phi[i] > 0.0).collect();
        let m = DenseMatrix::from_fn(cells.len(), |r, c| op.inverse_entry(cells[r], cells[c]).unwrap_or(0.0));
        let q = cells.iter().map(|&i| -phi[i]).collect();
        (cells, m, q)
    }
}

/// Pointwise residuals of a discrete solution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// `max (Φ − P)₊`.
    pub obstacle: f64,
    /// `max (−V)₊`.
    pub negativity: f64,
    /// `max |min(P − Φ, V)|`.
    pub complementarity: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.obstacle.max(self.negativity).max(self.complementarity)
    }
}

#[derive(Debug, Clone)]
pub struct ObstacleSolution {
    pub problem: ObstacleProblem,
    pub pressure: Field,
    pub density: Field,
    pub contact: Vec<bool>,
    /// Outermost contact radius (± one cell).
    pub radius: f64,
    pub residuals: Residuals,
    pub sweeps: usize,
    pub polished: bool,
}

impl ObstacleSolution {
    pub fn mass(&self) -> f64 {
        self.density.mass()
    }

    /// `10⁻⁸ · max(C, ‖V‖_∞)`, the tolerance used for contact and residuals.
    pub fn tolerance(&self) -> f64 {
        1e-8 * self.problem.level.max(self.density.linf())
    }

    /// Largest gap between the inner non-contact and outer contact radii.
    pub fn radial_defect(&self) -> f64 {
        let g = &self.problem.grid;
        let outer = self.radius;
        let inner = (0..g.len()).filter(|&i| !self.contact[i]).map(|i| g.radius(i)).fold(f64::INFINITY, f64::min);
        if self.contact.iter().any(|&c| c) {
            (outer - inner).max(0.0)
        } else {
            0.0
        }
    }
}

fn assemble(
    problem: &ObstacleProblem,
    op: &Operator,
    cells: &[usize],
    z: &[f64],
    sweeps: usize,
    polished: bool,
) -> ObstacleSolution {
    let grid = problem.grid;
    let mut v = vec![0.0; grid.len()];
    for (&i, &zi) in cells.iter().zip(z) {
        v[i] = zi.max(0.0);
    }
    let density = Field::from_parts(grid, v, FieldKind::Density);
    let mut p = vec![0.0; grid.len()];
    op.inverse_into(density.values(), &mut p);
    let pressure = Field::from_parts(grid, p, FieldKind::Pressure);
    finish(*problem, pressure, density, sweeps, polished)
}

fn finish(problem: ObstacleProblem, pressure: Field, density: Field, sweeps: usize, polished: bool) -> ObstacleSolution {
    let grid = problem.grid;
    let phi = problem.obstacle();
    let tol = 1e-8 * problem.level.max(density.linf());
    let p = pressure.values();
    let v = density.values();
    let mut res = Residuals::default();
    for i in 0..grid.len() {
        res.obstacle = res.obstacle.max(phi[i] - p[i]);
        res.negativity = res.negativity.max(-v[i]);
        res.complementarity = res.complementarity.max((p[i] - phi[i]).min(v[i]).abs());
    }
    let contact: Vec<bool> = (0..grid.len()).map(|i| problem.level > 0.0 && p[i] - phi[i] <= tol).collect();
    let radius = (0..grid.len()).filter(|&i| contact[i]).map(|i| grid.radius(i)).fold(0.0, f64::max);
    ObstacleSolution { problem, pressure, density, contact, radius, residuals: res, sweeps, polished }
}

/// Solves by projected SOR followed by active-set polishing.
pub fn solve_obstacle(problem: &ObstacleProblem, opts: &PsorOptions) -> Result<ObstacleSolution> {
    let grid = problem.grid;
    if problem.level <= 0.0 {
        let zero = |kind| Field::zeros(grid, kind);
        return Ok(finish(*problem, zero(FieldKind::Pressure), zero(FieldKind::Density), 0, false));
    }
    let op = problem.operator()?;
    solve_with_operator(problem, &op, opts)
}

/// As [`solve_obstacle`], reusing a free-space operator on the same grid.
pub fn solve_with_operator(problem: &ObstacleProblem, op: &Operator, opts: &PsorOptions) -> Result<ObstacleSolution> {
    if op.grid() != &problem.grid || op.mode() != OperatorMode::FreespaceKernel {
        return Err(Error::GridMismatch);
    }
    let (cells, m, q) = problem.reduced_system(op);
    let mut z = vec![0.0; cells.len()];
    // PSOR tolerance is relative to the obstacle height
    let scaled = PsorOptions { tol: opts.tol * problem.level, ..*opts };
    let sweeps = psor(&m, &q, &mut z, &scaled)?;
    let before = z.clone();
    let polished = polish(&m, &q, &mut z, 50);
    if !polished {
        z = before;
    }
    Ok(assemble(problem, op, &cells, &z, sweeps, polished))
}

/// Reference solution by Lemke pivoting (small grids only).
pub fn solve_obstacle_pivoting(problem: &ObstacleProblem) -> Result<ObstacleSolution> {
    let grid = problem.grid;
    if problem.level <= 0.0 {
        let zero = |kind| Field::zeros(grid, kind);
        return Ok(finish(*problem, zero(FieldKind::Pressure), zero(FieldKind::Density), 0, false));
    }
    let op = problem.operator()?;
    let (cells, m, q) = problem.reduced_system(&op);
    let z = lemke(&m, &q, 50 * cells.len().max(1))?;
    Ok(assemble(problem, &op, &cells, &z, 0, false))
}

#[cfg(test)]
mod tests;
