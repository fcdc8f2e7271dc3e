//! Physical flow from a box datum: the sup norm decays like t^{-α}.

use fracpme::diagnostics::fit_power_law;
use fracpme::evolution::{run, Exponents, FlowMode, SolverConfig};
use fracpme::io::Datum;
use fracpme::{FracParams, Grid, Operator, OperatorMode};

fn main() -> fracpme::Result<()> {
    let (n, s) = (1, 0.25);
    let exp = Exponents::new(n, s)?;
    let grid = Grid::new(n, 16.0, 256)?;
    let op = Operator::new(grid, FracParams::new(s), OperatorMode::FreespaceKernel)?;
    let u0 = Datum::Box { center: 0.0, width: 2.0, height: 1.0 }.sample(grid, &exp)?;
    let cfg = SolverConfig { end_time: 60.0, max_dt: 1.0, ..Default::default() };
    let tr = run(&u0, FlowMode::Physical, &cfg, &op, &exp)?;

    let d = &tr.diagnostics;
    for r in d.records.iter().step_by((d.records.len() / 8).max(1)) {
        println!("t = {:8.3}  mass = {:.12}  linf = {:.6e}", r.time, r.mass, r.linf);
    }
    let fit = fit_power_law(&d.times(), &d.column(|r| r.linf), (10.0, 60.0))?;
    println!("linf slope {:.4} (self-similar rate {:.4}), {} steps", fit.slope, -exp.alpha, tr.steps);
    Ok(())
}
