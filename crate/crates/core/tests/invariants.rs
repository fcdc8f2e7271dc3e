use proptest::prelude::*;

use fracpme::evolution::{run, Exponents, FlowMode, SolverConfig};
use fracpme::io::{read_snapshot, write_snapshot, Snapshot};
use fracpme::obstacle::{solve_obstacle, ObstacleProblem, PsorOptions};
use fracpme::{Field, FieldKind, FracParams, Grid, Operator, OperatorMode};

fn density(grid: Grid, bumps: &[(f64, f64, f64)]) -> Field {
    Field::from_fn(grid, FieldKind::Density, |x| {
        bumps.iter().map(|&(c, w, h)| if (x[0] - c).abs() < w { h } else { 0.0 }).sum()
    })
    .unwrap()
}

fn bumps() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-2.0..2.0f64, 0.2..1.0f64, 0.1..2.0f64), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flow_conserves_mass_and_positivity(b in bumps(), s in 0.1..0.45f64, rescaled: bool) {
        let grid = Grid::new(1, 6.0, 64).unwrap();
        let op = Operator::new(grid, FracParams::new(s), OperatorMode::FreespaceKernel).unwrap();
        let exp = Exponents::new(1, s).unwrap();
        let u0 = density(grid, &b);
        let cfg = SolverConfig { end_time: 0.5, max_dt: 0.01, ..Default::default() };
        let mode = if rescaled { FlowMode::Rescaled } else { FlowMode::Physical };
        let tr = run(&u0, mode, &cfg, &op, &exp).unwrap();
        let m0 = u0.mass();
        prop_assert!((tr.final_state.mass() - m0).abs() <= 1e-12 * m0);
        prop_assert!(tr.final_state.min() >= 0.0);
        let times = tr.diagnostics.times();
        prop_assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn inverse_is_self_adjoint(
        f in prop::collection::vec(-1.0..1.0f64, 48),
        g in prop::collection::vec(-1.0..1.0f64, 48),
        s in 0.1..0.45f64,
        periodic: bool,
    ) {
        let grid = Grid::new(1, 3.0, 48).unwrap();
        let mode = if periodic { OperatorMode::PeriodicSpectral } else { OperatorMode::FreespaceKernel };
        let op = Operator::new(grid, FracParams::new(s), mode).unwrap();
        let f = Field::new(grid, f, FieldKind::Generic).unwrap();
        let g = Field::new(grid, g, FieldKind::Generic).unwrap();
        let lhs = op.inverse(&f).unwrap().inner(&g).unwrap();
        let rhs = f.inner(&op.inverse(&g).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    #[test]
    fn snapshot_round_trip(values in prop::collection::vec(0.0..1e3f64, 64), t in 0.0..1e4f64) {
        let dir = tempfile::tempdir().unwrap();
        let grid = Grid::new(2, 2.5, 8).unwrap();
        let field = Field::new(grid, values, FieldKind::Density).unwrap();
        let snap = Snapshot { field, s: 0.25, time: t, mode: "physical".into() };
        let p = dir.path().join("snap.txt");
        write_snapshot(&p, &snap).unwrap();
        prop_assert_eq!(read_snapshot(&p).unwrap(), snap);
    }

    #[test]
    fn obstacle_pressure_stays_above_the_obstacle(level in 0.2..5.0f64, s in 0.1..0.45f64) {
        let exp = Exponents::new(1, s).unwrap();
        let sol = solve_obstacle(&ObstacleProblem::with_default_box(level, &exp, 96).unwrap(), &PsorOptions::default()).unwrap();
        let phi = sol.problem.obstacle();
        prop_assert!(sol.pressure.values().iter().zip(&phi).all(|(p, q)| *p >= q - 1e-8));
        let touching = sol.pressure.values().iter().zip(&phi).zip(sol.density.values());
        prop_assert!(touching.filter(|(_, v)| **v > 0.0).all(|((p, q), _)| (p - q).abs() <= 1e-8));
        prop_assert!(sol.density.min() >= 0.0);
        prop_assert!(sol.radius < (level / exp.a).sqrt());
    }
}

#[test]
fn zero_level_gives_the_trivial_profile() {
    let exp = Exponents::new(1, 0.25).unwrap();
    let grid = Grid::new(1, 2.0, 64).unwrap();
    let sol = solve_obstacle(&ObstacleProblem::new(0.0, &exp, grid).unwrap(), &PsorOptions::default()).unwrap();
    assert_eq!(sol.mass(), 0.0);
    assert!(sol.density.values().iter().all(|&x| x == 0.0));
}
