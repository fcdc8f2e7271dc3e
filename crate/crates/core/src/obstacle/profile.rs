//! Properties of obstacle solutions: scaling in `C`, the mass law, the
//! self-similar solution built from a profile, and convexity.

use crate::error::{Error, Result};
use crate::evolution::{remap_scaled, Exponents};
use crate::fracops::Operator;
use crate::grid::{Field, Grid};

use super::{solve_obstacle, solve_with_operator, ObstacleProblem, ObstacleSolution, PsorOptions, MARGIN};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingReport {
    /// Relative L^∞ deviation of `P_C` from `C P_1(y/√C)`.
    pub pressure_deviation: f64,
    /// Relative L^∞ deviation of `V_C` from `C^{1−s} V_1(y/√C)`.
    pub density_deviation: f64,
    pub radius_ratio: f64,
    /// `√C`, the predicted radius ratio.
    pub expected_radius_ratio: f64,
    /// Cell width of the `C` grid, the uncertainty of `R(C)`.
    pub cell_width: f64,
}

fn rel_linf(a: &Field, b: &Field) -> Result<f64> {
    Ok(a.linf_distance(b)? / a.linf().max(f64::MIN_POSITIVE))
}

/// Compares `sol_c` with the rescaled unit-level solution `sol_1`.
pub fn scaling_check(sol_1: &ObstacleSolution, sol_c: &ObstacleSolution) -> Result<ScalingReport> {
    let c = sol_c.problem.level / sol_1.problem.level;
    if !(c > 0.0) {
        return Err(Error::InvalidParameter("scaling check needs positive levels".into()));
    }
    let n = sol_c.problem.grid.dim() as f64;
    let s = sol_c.problem.s;
    let grid = sol_c.problem.grid;
    let factor = 1.0 / c.sqrt();
    let scale = |f: &Field, power: f64| -> Result<Field> {
        let r = remap_scaled(f, &grid, factor)?;
        let k = c.powf(power + 0.5 * n);
        Field::new(grid, r.values().iter().map(|x| x * k).collect(), f.kind())
    };
    let p_pred = scale(&sol_1.pressure, 1.0)?;
    let v_pred = scale(&sol_1.density, 1.0 - s)?;
    Ok(ScalingReport {
        pressure_deviation: rel_linf(&sol_c.pressure, &p_pred)?,
        density_deviation: rel_linf(&sol_c.density, &v_pred)?,
        radius_ratio: sol_c.radius / sol_1.radius,
        expected_radius_ratio: c.sqrt(),
        cell_width: grid.spacing(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassLawFit {
    /// Fitted exponent of `M = c C^e`.
    pub exponent: f64,
    /// Fitted constant `c`.
    pub coefficient: f64,
    pub points: usize,
}

/// Least-squares fit of `log M` against `log C`. Needs at least four
/// positive levels spanning a factor of eight.
pub fn mass_law(solutions: &[ObstacleSolution]) -> Result<MassLawFit> {
    let pts: Vec<(f64, f64)> = solutions
        .iter()
        .filter(|s| s.problem.level > 0.0)
        .map(|s| (s.problem.level.ln(), s.mass().ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::InsufficientData("mass law needs at least 4 positive levels".into()));
    }
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    if hi - lo < 8f64.ln() - 1e-12 {
        return Err(Error::InsufficientData("levels must span a factor of at least 8".into()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let fit = crate::diagnostics::linear_fit(&xs, &ys)?;
    if !fit.slope.is_finite() {
        return Err(Error::InsufficientData("degenerate mass-law fit".into()));
    }
    Ok(MassLawFit { exponent: fit.slope, coefficient: fit.intercept.exp(), points: pts.len() })
}

/// Mass of the unit-level profile on the default box with `n_points` cells.
pub fn calibrate_mass_constant(exp: &Exponents, n_points: usize, opts: &PsorOptions) -> Result<f64> {
    let prob = ObstacleProblem::with_default_box(1.0, exp, n_points)?;
    Ok(solve_obstacle(&prob, opts)?.mass())
}

/// Level `C = (M/c)^{2/(n+2−2s)}` with calibration constant `c`.
pub fn level_for_mass(mass: f64, exp: &Exponents, calibration: f64) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    if !(calibration > 0.0) {
        return Err(Error::InvalidParameter(format!("calibration must be positive, got {calibration}")));
    }
    Ok((mass / calibration).powf(1.0 / exp.mass_exponent()))
}

/// Solves on `op`'s grid for the level whose profile has mass `mass`,
/// iterating `C ← C (M / M(C))^{1/e}`.
pub fn match_mass(mass: f64, exp: &Exponents, op: &Operator, opts: &PsorOptions) -> Result<ObstacleSolution> {
    if !(mass > 0.0) {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    let grid = *op.grid();
    let e = exp.mass_exponent();
    let mut level = exp.a * (grid.half_width() / (2.0 * MARGIN)).powi(2);
    let mut last = None;
    for _ in 0..30 {
        let prob = ObstacleProblem::new(level, exp, grid)?;
        let sol = solve_with_operator(&prob, op, opts)?;
        let m = sol.mass();
        if (m - mass).abs() <= 1e-12 * mass {
            return Ok(sol);
        }
        level *= (mass / m).powf(1.0 / e);
        last = Some(sol);
    }
    last.ok_or_else(|| Error::NonConvergence { iterations: 30, residual: f64::NAN })
}

/// Self-similar solution `U_C(x, t) = (1+t)^{−α} V_C(x (1+t)^{−β})`.
#[derive(Debug, Clone)]
pub struct Barenblatt {
    pub profile: ObstacleSolution,
    pub exponents: Exponents,
    pub mass: f64,
}

impl Barenblatt {
    pub fn new(profile: ObstacleSolution, exponents: Exponents) -> Self {
        let mass = profile.mass();
        Self { profile, exponents, mass }
    }

    /// Cell averages of `U_C(·, t)` on `grid`.
    pub fn at(&self, t: f64, grid: &Grid) -> Result<Field> {
        if !(t > -1.0) {
            return Err(Error::InvalidParameter(format!("time must exceed -1, got {t}")));
        }
        if t == 0.0 && grid == &self.profile.problem.grid {
            return Ok(self.profile.density.clone());
        }
        let lambda = (1.0 + t).powf(self.exponents.beta);
        remap_scaled(&self.profile.density, grid, 1.0 / lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    /// Smallest undivided second difference of `P + a|y|²`.
    pub min_second_difference: f64,
    /// `10 h² ‖P‖_∞`.
    pub tolerance: f64,
    /// Smallest second difference of `P + a|y|²` at cells whose stencil lies
    /// outside the contact set.
    pub min_outside_contact: f64,
    /// Smallest `D_ee P` (divided by `h²`) outside the contact set.
    pub min_dee_outside: f64,
    /// `−2a`, the lower bound for `D_ee P`.
    pub dee_bound: f64,
    /// The maximum of `P` is attained only at the cells nearest the origin.
    pub max_at_origin_only: bool,
}

impl ConvexityReport {
    pub fn convex(&self) -> bool {
        self.min_second_difference >= -self.tolerance
    }
}

pub fn convexity_check(sol: &ObstacleSolution) -> ConvexityReport {
    let grid = sol.problem.grid;
    let a = sol.problem.a;
    let h = grid.spacing();
    let n = grid.points_per_axis();
    let p = sol.pressure.values();
    let q: Vec<f64> = (0..grid.len()).map(|i| p[i] + a * grid.radius(i).powi(2)).collect();
    let mut report = ConvexityReport {
        min_second_difference: f64::INFINITY,
        tolerance: 10.0 * h * h * sol.pressure.linf(),
        min_outside_contact: f64::INFINITY,
        min_dee_outside: f64::INFINITY,
        dee_bound: -2.0 * a,
        max_at_origin_only: false,
    };
    for idx in 0..grid.len() {
        let m = grid.multi_index(idx);
        for axis in 0..grid.dim() {
            let i = m[axis];
            if i == 0 || i + 1 == n {
                continue;
            }
            let st = grid.stride(axis);
            let (l, r) = (idx - st, idx + st);
            let d2 = q[l] - 2.0 * q[idx] + q[r];
            report.min_second_difference = report.min_second_difference.min(d2);
            if !sol.contact[l] && !sol.contact[idx] && !sol.contact[r] {
                report.min_outside_contact = report.min_outside_contact.min(d2);
                report.min_dee_outside = report.min_dee_outside.min((p[l] - 2.0 * p[idx] + p[r]) / (h * h));
            }
        }
    }
    let pmax = sol.pressure.max();
    let r_min = (0..grid.len()).map(|i| grid.radius(i)).fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * pmax.abs().max(f64::MIN_POSITIVE);
    report.max_at_origin_only = pmax > 0.0
        && (0..grid.len()).all(|i| p[i] < pmax - tol || grid.radius(i) <= r_min * (1.0 + 1e-12));
    report
}

/// Largest relative change of `V` when the box is doubled at fixed spacing.
pub fn box_sensitivity(sol: &ObstacleSolution, opts: &PsorOptions) -> Result<f64> {
    let g = sol.problem.grid;
    let big = Grid::new(g.dim(), 2.0 * g.half_width(), 2 * g.points_per_axis())?;
    let exp = Exponents::new(g.dim(), sol.problem.s)?;
    let wide = solve_obstacle(&ObstacleProblem::new(sol.problem.level, &exp, big)?, opts)?;
    // the small box sits in the middle of the large one
    let off = g.points_per_axis() / 2;
    let nb = big.points_per_axis();
    let mut worst: f64 = 0.0;
    for idx in 0..g.len() {
        let m = g.multi_index(idx);
        let j = match g.dim() {
            1 => m[0] + off,
            _ => (m[0] + off) * nb + m[1] + off,
        };
        worst = worst.max((wide.density.values()[j] - sol.density.values()[idx]).abs());
    }
    Ok(worst / sol.density.linf().max(f64::MIN_POSITIVE))
}
