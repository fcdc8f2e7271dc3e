use super::*;
use crate::evolution::{step_rescaled, SolverConfig};

fn exp1() -> Exponents {
    Exponents::new(1, 0.25).unwrap()
}

fn solve(level: f64, n: usize) -> ObstacleSolution {
    let prob = ObstacleProblem::with_default_box(level, &exp1(), n).unwrap();
    solve_obstacle(&prob, &PsorOptions::default()).unwrap()
}

#[test]
fn nonpositive_level_is_trivial() {
    for level in [0.0, -1.0] {
        let sol = solve(level, 64);
        assert!(sol.pressure.values().iter().all(|&x| x == 0.0));
        assert!(sol.density.values().iter().all(|&x| x == 0.0));
        assert_eq!(sol.radius, 0.0);
    }
}

#[test]
fn unit_level_profile_properties() {
    let sol = solve(1.0, 256);
    let tol = sol.tolerance();
    assert!(sol.polished);
    assert!(sol.residuals.max() <= tol, "{:?}", sol.residuals);
    assert!(sol.radius > 0.0 && sol.radius < 5f64.sqrt());
    assert!(sol.radial_defect() <= sol.problem.grid.spacing());
    let g = sol.problem.grid;
    for i in 0..g.len() {
        if g.radius(i) > sol.radius + 2.0 * g.spacing() {
            assert!(sol.density.values()[i] <= tol);
        }
        assert!(sol.pressure.values()[i] > 0.0);
    }
}

#[test]
fn margin_is_enforced() {
    let g = Grid::new(1, 2.0, 64).unwrap();
    assert!(ObstacleProblem::new(1.0, &exp1(), g).is_err());
}

#[test]
fn psor_matches_pivoting() {
    let prob = ObstacleProblem::with_default_box(1.0, &exp1(), 128).unwrap();
    let a = solve_obstacle(&prob, &PsorOptions::default()).unwrap();
    let b = solve_obstacle_pivoting(&prob).unwrap();
    assert!(a.density.linf_distance(&b.density).unwrap() < 1e-6);
    assert!(a.pressure.linf_distance(&b.pressure).unwrap() < 1e-6);
}

#[test]
fn scaling_in_level() {
    let one = solve(1.0, 256);
    let four = solve(4.0, 256);
    let rep = scaling_check(&one, &four).unwrap();
    assert!(rep.pressure_deviation < 0.02 && rep.density_deviation < 0.02, "{rep:?}");
    assert!((rep.radius_ratio * one.radius - 2.0 * one.radius).abs() <= rep.cell_width);
    let same = scaling_check(&one, &one).unwrap();
    assert!(same.pressure_deviation < 1e-12 && same.density_deviation < 1e-12);
}

#[test]
fn mass_law_exponents() {
    let sols: Vec<_> = [0.5, 1.0, 2.0, 4.0, 8.0].iter().map(|&c| solve(c, 128)).collect();
    let fit = mass_law(&sols).unwrap();
    assert!((fit.exponent / 1.25 - 1.0).abs() < 0.02);
    assert!(fit.coefficient > 0.0);
    assert!(mass_law(&sols[..3]).is_err());

    let e2 = Exponents::new(2, 0.5).unwrap();
    let sols: Vec<_> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&c| solve_obstacle(&ObstacleProblem::with_default_box(c, &e2, 24).unwrap(), &PsorOptions::default()).unwrap())
        .collect();
    let fit = mass_law(&sols).unwrap();
    assert!((fit.exponent / 1.5 - 1.0).abs() < 0.02);
}

#[test]
fn level_for_mass_inverts_the_law() {
    let e = exp1();
    assert!((level_for_mass(0.7, &e, 0.7).unwrap() - 1.0).abs() < 1e-15);
    let k = 2f64.powf(e.mass_exponent());
    assert!((level_for_mass(0.7 * k, &e, 0.7).unwrap() - 2.0).abs() < 1e-13);
    assert!(level_for_mass(-1.0, &e, 0.7).is_err());
    let c = calibrate_mass_constant(&e, 256, &PsorOptions::default()).unwrap();
    let level = level_for_mass(1.3, &e, c).unwrap();
    let sol = solve(level, 256);
    assert!((sol.mass() / 1.3 - 1.0).abs() < 0.01);
}

#[test]
fn matched_mass_on_fixed_grid() {
    let g = Grid::new(1, 8.0, 256).unwrap();
    let op = Operator::new(g, crate::fracops::FracParams::new(0.25), crate::fracops::OperatorMode::FreespaceKernel).unwrap();
    let sol = match_mass(2.0, &exp1(), &op, &PsorOptions::default()).unwrap();
    assert!((sol.mass() - 2.0).abs() < 1e-10);
}

#[test]
fn barenblatt_mass_is_constant() {
    let b = Barenblatt::new(solve(1.0, 256), exp1());
    let g = Grid::new(1, 24.0, 512).unwrap();
    for t in [0.0, 1.0, 10.0] {
        let u = b.at(t, &g).unwrap();
        assert!((u.mass() - b.mass).abs() < 1e-6 * b.mass);
    }
    assert!(b.at(-1.0, &g).is_err());
    let same = b.at(0.0, &b.profile.problem.grid).unwrap();
    assert_eq!(same, b.profile.density);
}

#[test]
fn profile_is_stationary_for_rescaled_flow() {
    let sol = solve(1.0, 256);
    let op = sol.problem.operator().unwrap();
    let (next, dtau) = step_rescaled(&sol.density, &op, &exp1(), &SolverConfig::default()).unwrap();
    let change = next.l1_distance(&sol.density).unwrap() / dtau;
    assert!(change < 1e-6 * sol.mass(), "{change}");
}

#[test]
fn convexity_and_maximum() {
    let sol = solve(1.0, 256);
    let rep = convexity_check(&sol);
    assert!(rep.convex(), "{rep:?}");
    assert!(rep.min_outside_contact > 0.0);
    assert!(rep.min_dee_outside > rep.dee_bound);
    assert!(rep.max_at_origin_only);
}

#[test]
fn far_field_follows_kernel_decay() {
    let sol = solve(1.0, 512);
    let g = sol.problem.grid;
    let l = g.half_width();
    let near = |x: f64| (0..g.len()).min_by(|&a, &b| (g.coord(a) - x).abs().total_cmp(&(g.coord(b) - x).abs())).unwrap();
    let (i1, i2) = (near(0.45 * l), near(0.9 * l));
    let ratio = sol.pressure.values()[i2] / sol.pressure.values()[i1];
    let expect = (g.coord(i1) / g.coord(i2)).powf(0.5);
    assert!((ratio / expect - 1.0).abs() < 0.1, "{ratio} vs {expect}");
    // monotone decay beyond the free boundary
    let right: Vec<f64> = (0..g.len()).filter(|&i| g.coord(i) > sol.radius).map(|i| sol.pressure.values()[i]).collect();
    assert!(right.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn box_doubling_does_not_change_density() {
    let sol = solve(1.0, 128);
    assert!(box_sensitivity(&sol, &PsorOptions::default()).unwrap() < 0.01);
}

#[test]
fn minimal_among_shifted_supersolutions() {
    let g = Grid::new(1, 9.0, 256).unwrap();
    let e = exp1();
    let low = solve_obstacle(&ObstacleProblem::new(1.0, &e, g).unwrap(), &PsorOptions::default()).unwrap();
    let high = solve_obstacle(&ObstacleProblem::new(1.5, &e, g).unwrap(), &PsorOptions::default()).unwrap();
    for t in [0.0, 0.1] {
        assert!(low.pressure.values().iter().zip(high.pressure.values()).all(|(a, b)| *a <= b + t + 1e-12));
    }
}

#[test]
fn two_dimensional_contact_is_radial() {
    let e = Exponents::new(2, 0.5).unwrap();
    let prob = ObstacleProblem::with_default_box(1.0, &e, 40).unwrap();
    let sol = solve_obstacle(&prob, &PsorOptions::default()).unwrap();
    assert!(sol.residuals.max() <= sol.tolerance());
    assert!(sol.radial_defect() <= 2f64.sqrt() * prob.grid.spacing());
    assert!(sol.radius < prob.obstacle_radius());
}
