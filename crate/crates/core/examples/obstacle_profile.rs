//! Solves the obstacle problem for the stationary profile and checks its
//! shape.

use fracpme::evolution::Exponents;
use fracpme::obstacle::{convexity_check, solve_obstacle, solve_obstacle_pivoting, ObstacleProblem, PsorOptions};

fn main() -> fracpme::Result<()> {
    let exp = Exponents::new(1, 0.25)?;
    let problem = ObstacleProblem::with_default_box(1.0, &exp, 256)?;
    let sol = solve_obstacle(&problem, &PsorOptions::default())?;
    println!(
        "C = 1: radius {:.4} (obstacle radius {:.4}), mass {:.6}, residual {:.2e}, {} sweeps",
        sol.radius,
        problem.obstacle_radius(),
        sol.mass(),
        sol.residuals.max(),
        sol.sweeps
    );
    let conv = convexity_check(&sol);
    println!("pressure convex: {} (min second difference {:.2e})", conv.convex(), conv.min_second_difference);

    let small = ObstacleProblem::with_default_box(1.0, &exp, 64)?;
    let a = solve_obstacle(&small, &PsorOptions::default())?;
    let b = solve_obstacle_pivoting(&small)?;
    println!("PSOR vs pivoting on N = 64: {:.2e}", a.density.linf_distance(&b.density)?);

    let g = sol.density.grid();
    for i in (0..g.len()).step_by(16) {
        println!("{:+.4}  P = {:.6}  V = {:.6}", g.coord(i), sol.pressure.values()[i], sol.density.values()[i]);
    }
    Ok(())
}
