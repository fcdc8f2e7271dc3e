//! Distance of a rescaled run to the stationary profile of the same mass.

use fracpme::diagnostics::convergence_to_profile;
use fracpme::evolution::{run, Exponents, FlowMode, SolverConfig};
use fracpme::io::Datum;
use fracpme::obstacle::{match_mass, PsorOptions};
use fracpme::{FracParams, Grid, Operator, OperatorMode};

fn main() -> fracpme::Result<()> {
    let (n, s) = (1, 0.25);
    let exp = Exponents::new(n, s)?;
    let grid = Grid::new(n, 6.0, 256)?;
    let op = Operator::new(grid, FracParams::new(s), OperatorMode::FreespaceKernel)?;
    let v0 = Datum::GaussianTruncated { sigma: 0.5 }.sample(grid, &exp)?;
    let cfg = SolverConfig { end_time: 8.0, max_dt: 0.01, snapshot_stride: 100, ..Default::default() };
    let tr = run(&v0, FlowMode::Rescaled, &cfg, &op, &exp)?;

    let profile = match_mass(v0.mass(), &exp, &op, &PsorOptions::default())?;
    let target = fracpme::diagnostics::record(&profile.density, 0.0, FlowMode::Rescaled.frame(&exp), &op)?;
    let records: Vec<_> = tr
        .snapshots
        .iter()
        .map(|(t, v)| fracpme::diagnostics::record(v, *t, FlowMode::Rescaled.frame(&exp), &op))
        .collect::<fracpme::Result<_>>()?;
    let samples: Vec<_> = tr.snapshots.iter().zip(&records).map(|((t, v), r)| (*t, v, r)).collect();
    let rep = convergence_to_profile(&samples, &profile.density, target.entropy)?;
    for i in 0..rep.times.len() {
        println!(
            "tau = {:6.3}  L1 {:.3e}  Linf {:.3e}  E - E_C {:.3e}",
            rep.times[i], rep.l1_distance[i], rep.linf_distance[i], rep.entropy_gap[i]
        );
    }
    Ok(())
}
