//! A compactly supported datum stays compactly supported; the support
//! radius grows like t^β.

use fracpme::diagnostics::fit_power_law;
use fracpme::evolution::{run, Exponents, FlowMode, SolverConfig};
use fracpme::io::Datum;
use fracpme::{FracParams, Grid, Operator, OperatorMode};

fn main() -> fracpme::Result<()> {
    let (n, s) = (1, 0.25);
    let exp = Exponents::new(n, s)?;
    let grid = Grid::new(n, 4.0, 512)?;
    let op = Operator::new(grid, FracParams::new(s), OperatorMode::FreespaceKernel)?;
    let u0 = Datum::ParabolaCap { a: 1.0, b: 1.0 }.sample(grid, &exp)?;
    let cfg = SolverConfig { end_time: 4.0, max_dt: 0.01, ..Default::default() };
    let tr = run(&u0, FlowMode::Physical, &cfg, &op, &exp)?;

    let d = &tr.diagnostics;
    for r in d.records.iter().step_by((d.records.len() / 10).max(1)) {
        println!("t = {:6.3}  support radius {:.4}", r.time, r.support_radius);
    }
    let fit = fit_power_law(&d.times(), &d.column(|r| r.support_radius), (1.0, 4.0))?;
    println!("radius slope on [1, 4]: {:.3} (large-time rate {:.3})", fit.slope, exp.beta);
    Ok(())
}
