use crate::error::Result;
use crate::evolution::{face_velocities, upwind_dissipation, Frame};
use crate::fracops::{gradient, Operator};
use crate::grid::{Field, FieldKind};

/// Quantities recorded along a run. In the physical frame the entropy is
/// the energy `½⟨u, Ku⟩` and the dissipation is `∫ u |∇Ku|²`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub time: f64,
    pub mass: f64,
    pub linf: f64,
    pub l2: f64,
    pub l4: f64,
    pub moment2: f64,
    /// `⟨v, Kv⟩`.
    pub energy1: f64,
    /// `½(energy1 + drift · moment2)`.
    pub entropy: f64,
    /// `∫ v log v`, skipping values below `1e-30`.
    pub boltzmann: f64,
    /// `h^n Σ_faces v_upwind |∇(Kv + drift |y|²/2)|²`.
    pub dissipation: f64,
    pub support_radius: f64,
    /// Approximation of `∫ |∇Hv|²`.
    pub grad_half_energy: f64,
    pub min_value: f64,
}

/// Values below this are excluded from the `v log v` quadrature.
pub const LOG_FLOOR: f64 = 1e-30;

/// Relative support threshold (fraction of `‖v‖_∞`).
pub const SUPPORT_THRESHOLD: f64 = 1e-10;

/// Record for `v` at `time`, computing the pressure with `op`.
pub fn record(v: &Field, time: f64, frame: Frame, op: &Operator) -> Result<DiagnosticsRecord> {
    v.check_grid(op.grid())?;
    let mut p = vec![0.0; v.grid().len()];
    op.inverse_into(v.values(), &mut p);
    let wrap = op.mode().is_periodic() && frame == Frame::Physical;
    Ok(record_with_pressure(v.values(), &p, time, frame, op, wrap))
}

pub(crate) fn record_with_pressure(
    v: &[f64],
    p: &[f64],
    time: f64,
    frame: Frame,
    op: &Operator,
    wrap: bool,
) -> DiagnosticsRecord {
    let grid = *op.grid();
    let dv = grid.cell_volume();
    let field = Field::from_parts(grid, v.to_vec(), FieldKind::Generic);
    let linf = field.linf();
    let drift = frame.drift();
    let moment2 = field.second_moment();
    let energy1 = dv * v.iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
    let boltzmann = dv * v.iter().filter(|&&x| x >= LOG_FLOOR).map(|&x| x * x.ln()).sum::<f64>();
    let faces = face_velocities(&grid, p, drift, wrap);
    let dissipation = upwind_dissipation(&grid, v, &faces);
    DiagnosticsRecord {
        time,
        mass: field.mass(),
        linf,
        l2: field.lp_norm(2.0),
        l4: field.lp_norm(4.0),
        moment2,
        energy1,
        entropy: 0.5 * (energy1 + drift * moment2),
        boltzmann,
        dissipation,
        support_radius: support_radius(&field, SUPPORT_THRESHOLD * linf),
        grad_half_energy: grad_half_energy(&field, p, op, wrap),
        min_value: field.min(),
    }
}

/// `∫|∇Hv|²`. Periodic grids differentiate `Hv` directly; in free space the
/// face form `h^n Σ (Dv)(DKv)` is used, which equals it when `H` commutes
/// with differences.
fn grad_half_energy(v: &Field, p: &[f64], op: &Operator, wrap: bool) -> f64 {
    let grid = *v.grid();
    if op.mode().is_periodic() {
        let mut hv = vec![0.0; grid.len()];
        op.half_into(v.values(), &mut hv);
        let hv = Field::from_parts(grid, hv, FieldKind::Generic);
        let g = gradient(&hv, true);
        return grid.cell_volume() * g.iter().flat_map(|c| c.values()).map(|x| x * x).sum::<f64>();
    }
    // faces use the same layout as the transport scheme: −Dp and −Dv
    let dp = face_velocities(&grid, p, 0.0, wrap);
    let dvf = face_velocities(&grid, v.values(), 0.0, wrap);
    grid.cell_volume() * dp.iter().flatten().zip(dvf.iter().flatten()).map(|(a, b)| a * b).sum::<f64>()
}

/// Largest cell-center radius with `v > threshold`; 0 if there is none.
pub fn support_radius(v: &Field, threshold: f64) -> f64 {
    let g = v.grid();
    v.values()
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > threshold)
        .map(|(i, _)| g.radius(i))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{FracParams, OperatorMode};
    use crate::grid::Grid;

    #[test]
    fn zero_density_records_zeros() {
        let g = Grid::new(1, 2.0, 16).unwrap();
        let op = Operator::new(g, FracParams::new(0.25), OperatorMode::FreespaceKernel).unwrap();
        let r = record(&Field::zeros(g, FieldKind::Density), 0.0, Frame::Rescaled { beta: 0.4 }, &op).unwrap();
        assert_eq!(r, DiagnosticsRecord::default());
    }

    #[test]
    fn entropy_splits_into_energy_and_moment() {
        let g = Grid::new(1, 4.0, 64).unwrap();
        let op = Operator::new(g, FracParams::new(0.25), OperatorMode::FreespaceKernel).unwrap();
        let v = Field::from_fn(g, FieldKind::Density, |x| (1.0 - x[0] * x[0]).max(0.0)).unwrap();
        let r = record(&v, 0.0, Frame::Rescaled { beta: 0.4 }, &op).unwrap();
        let kv = op.inverse(&v).unwrap();
        let e1 = 0.5 * v.inner(&kv).unwrap();
        let e2 = 0.2 * v.second_moment();
        assert!((r.entropy - (e1 + e2)).abs() <= 1e-12 * r.entropy);
    }

    #[test]
    fn periodic_half_energy_matches_face_form() {
        let g = Grid::new(1, 4.0, 128).unwrap();
        let op = Operator::new(g, FracParams::new(0.25), OperatorMode::PeriodicSpectral).unwrap();
        let v = Field::from_fn(g, FieldKind::Density, |x| (-x[0] * x[0]).exp()).unwrap();
        let r = record(&v, 0.0, Frame::Physical, &op).unwrap();
        let mut p = vec![0.0; g.len()];
        op.inverse_into(v.values(), &mut p);
        let dp = face_velocities(&g, &p, 0.0, true);
        let dv = face_velocities(&g, v.values(), 0.0, true);
        let face: f64 = g.cell_volume() * dp[0].iter().zip(&dv[0]).map(|(a, b)| a * b).sum::<f64>();
        assert!((r.grad_half_energy / face - 1.0).abs() < 1e-2);
    }

    #[test]
    fn support_of_box() {
        let g = Grid::new(1, 3.0, 60).unwrap();
        let v = Field::from_fn(g, FieldKind::Density, |x| if x[0].abs() < 1.0 { 1.0 } else { 0.0 }).unwrap();
        let r = support_radius(&v, 1e-10);
        assert!((r - 1.0).abs() <= g.spacing());
        assert_eq!(support_radius(&Field::zeros(g, FieldKind::Density), 1e-10), 0.0);
    }
}
