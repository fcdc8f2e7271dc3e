//! Profiles for several levels on one grid: mass grows like C^{(n+2-2s)/2}
//! and V_C(x) = C^{1-s} V_1(x/√C).

use fracpme::evolution::Exponents;
use fracpme::obstacle::{mass_law, scaling_check, solve_obstacle, ObstacleProblem, PsorOptions};
use fracpme::Grid;

fn main() -> fracpme::Result<()> {
    for (n, points) in [(1, 512), (2, 48)] {
        let exp = Exponents::new(n, 0.25)?;
        let grid = Grid::new(n, 1.6 * (4.0 / exp.a).sqrt(), points)?;
        let sols = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&c| solve_obstacle(&ObstacleProblem::new(c, &exp, grid)?, &PsorOptions::default()))
            .collect::<fracpme::Result<Vec<_>>>()?;
        let fit = mass_law(&sols)?;
        println!("n = {n}: mass exponent {:.4} (predicted {:.4}), coefficient {:.5}", fit.exponent, exp.mass_exponent(), fit.coefficient);
        let rep = scaling_check(&sols[1], &sols[3])?;
        println!(
            "       V_4 vs scaled V_1: {:.3e}; radius ratio {:.4} (predicted {:.4})",
            rep.density_deviation, rep.radius_ratio, rep.expected_radius_ratio
        );
    }
    Ok(())
}
