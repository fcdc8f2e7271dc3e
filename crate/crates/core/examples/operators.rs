//! Applies the fractional Laplacian and the Riesz potential on both
//! realizations and compares with closed forms.

use fracpme::oracle::gaussian_riesz_potential;
use fracpme::{Field, FieldKind, FracParams, Grid, Operator, OperatorMode};

fn main() -> fracpme::Result<()> {
    let s = 0.3;

    // Periodic: Fourier modes are eigenfunctions with eigenvalue |k|^{2s}.
    let grid = Grid::new(1, std::f64::consts::PI, 64)?;
    let op = Operator::new(grid, FracParams::new(s), OperatorMode::PeriodicSpectral)?;
    let k = 3.0;
    let mode = Field::from_fn(grid, FieldKind::Generic, |x| (k * x[0]).cos())?;
    let lap = op.frac_laplacian(&mode)?;
    let err = lap.values().iter().zip(mode.values()).map(|(a, b)| (a - k.powf(2.0 * s) * b).abs()).fold(0.0, f64::max);
    println!("periodic eigenrelation, k = {k}: max error {err:.3e}");

    // Free space: Riesz potential of a Gaussian against its series form.
    for n_points in [128, 256, 512] {
        let grid = Grid::new(1, 8.0, n_points)?;
        let op = Operator::new(grid, FracParams::new(s), OperatorMode::FreespaceKernel)?;
        let g = Field::from_fn(grid, FieldKind::Density, |x| (-x[0] * x[0]).exp())?;
        let p = op.inverse(&g)?;
        let err = (0..grid.len())
            .filter(|&i| grid.radius(i) < 2.0)
            .map(|i| (p.values()[i] - gaussian_riesz_potential(1, s, grid.radius(i))).abs())
            .fold(0.0, f64::max);
        println!("freespace N = {n_points:4}: max error on |x| < 2 {err:.3e}");
    }
    Ok(())
}
