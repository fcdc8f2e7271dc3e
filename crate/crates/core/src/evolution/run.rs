use crate::diagnostics::{record_with_pressure, DiagnosticsSeries, RunMeta};
use crate::error::{Error, Result};
use crate::fracops::Operator;
use crate::grid::{Field, FieldKind};

use super::{Exponents, Frame, SolverConfig, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMode {
    /// `u_t = ∇·(u ∇K u)`.
    Physical,
    /// `v_τ = ∇·(v (∇K v + β y))`.
    Rescaled,
}

impl FlowMode {
    pub fn frame(self, exp: &Exponents) -> Frame {
        match self {
            FlowMode::Physical => Frame::Physical,
            FlowMode::Rescaled => Frame::Rescaled { beta: exp.beta },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FlowMode::Physical => "physical",
            FlowMode::Rescaled => "rescaled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Times of all accepted states, starting at 0.
    pub times: Vec<f64>,
    /// `(time, state)` every `snapshot_stride` steps and at the end.
    pub snapshots: Vec<(f64, Field)>,
    pub diagnostics: DiagnosticsSeries,
    pub final_state: Field,
    pub steps: usize,
}

impl Trajectory {
    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }
}

fn check_density(u: &Field) -> Result<()> {
    if u.values().iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidField("initial datum must be a finite nonnegative density".into()));
    }
    Ok(())
}

/// One step of the physical flow; returns the new state and the step size.
pub fn step_physical(u: &Field, op: &Operator, cfg: &SolverConfig) -> Result<(Field, f64)> {
    single_step(u, op, Frame::Physical, cfg)
}

/// One step of the rescaled flow; returns the new state and `dτ`.
pub fn step_rescaled(v: &Field, op: &Operator, exp: &Exponents, cfg: &SolverConfig) -> Result<(Field, f64)> {
    single_step(v, op, Frame::Rescaled { beta: exp.beta }, cfg)
}

fn single_step(u: &Field, op: &Operator, frame: Frame, cfg: &SolverConfig) -> Result<(Field, f64)> {
    u.check_grid(op.grid())?;
    check_density(u)?;
    let mut st = Stepper::new(op, frame, cfg.clone())?;
    let mut v = u.values().to_vec();
    st.set_state(&v)?;
    let dt = st.advance(&mut v, f64::INFINITY)?;
    Ok((Field::from_parts(*op.grid(), v, FieldKind::Density), dt))
}

/// Integrates from `u0` until `cfg.end_time`, recording diagnostics every
/// `diagnostics_stride` steps and at the final time.
pub fn run(u0: &Field, mode: FlowMode, cfg: &SolverConfig, op: &Operator, exp: &Exponents) -> Result<Trajectory> {
    u0.check_grid(op.grid())?;
    check_density(u0)?;
    let grid = *op.grid();
    let frame = mode.frame(exp);
    let mut stepper = Stepper::new(op, frame, cfg.clone())?;
    let wrap = stepper.wraps();
    let mut v = u0.values().to_vec();
    stepper.set_state(&v)?;

    let meta = RunMeta {
        id: mode.as_str().into(),
        n: grid.dim(),
        s: op.s(),
        mode: format!("{}/{}", mode.as_str(), op.mode()),
        half_width: grid.half_width(),
        points_per_axis: grid.points_per_axis(),
    };
    let mut diagnostics = DiagnosticsSeries { meta, records: Vec::new() };
    let mut snapshots = Vec::new();
    let mut times = vec![0.0];
    let m0 = u0.mass();
    let mut t = 0.0;
    let mut step = 0usize;
    let end = cfg.end_time;
    loop {
        let done = end - t <= 1e-12 * end.max(1.0);
        if step % cfg.diagnostics_stride == 0 || done {
            diagnostics.records.push(record_with_pressure(&v, stepper.pressure(), t, frame, op, wrap));
        }
        if cfg.snapshot_stride > 0 && (step % cfg.snapshot_stride == 0 || done) {
            snapshots.push((t, Field::from_parts(grid, v.clone(), FieldKind::Density)));
        }
        if done {
            break;
        }
        let dt = stepper.advance(&mut v, end - t)?;
        step += 1;
        t = if end - t - dt <= 1e-12 * end.max(1.0) { end } else { t + dt };
        times.push(t);
        if m0 > 0.0 {
            let drift = (grid.cell_volume() * v.iter().sum::<f64>() - m0).abs() / m0;
            if drift > cfg.mass_drift_limit {
                return Err(Error::MassDrift { drift, limit: cfg.mass_drift_limit, step });
            }
        }
    }
    Ok(Trajectory {
        times,
        snapshots,
        diagnostics,
        final_state: Field::from_parts(grid, v, FieldKind::Density),
        steps: step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{FracParams, OperatorMode};
    use crate::grid::Grid;

    fn setup(mode: OperatorMode) -> (Operator, Exponents) {
        let g = Grid::new(1, 6.0, 64).unwrap();
        (Operator::new(g, FracParams::new(0.25), mode).unwrap(), Exponents::new(1, 0.25).unwrap())
    }

    fn box_datum(g: Grid) -> Field {
        Field::from_fn(g, FieldKind::Density, |x| if x[0].abs() < 1.0 { 1.0 } else { 0.0 }).unwrap()
    }

    #[test]
    fn zero_datum_stays_zero() {
        let (op, e) = setup(OperatorMode::FreespaceKernel);
        let cfg = SolverConfig { end_time: 1.0, max_dt: 0.25, ..Default::default() };
        let tr = run(&Field::zeros(*op.grid(), FieldKind::Density), FlowMode::Physical, &cfg, &op, &e).unwrap();
        assert_eq!(tr.steps, 4);
        assert!(tr.final_state.values().iter().all(|&x| x == 0.0));
        assert!(tr.diagnostics.records.iter().all(|r| r.mass == 0.0 && r.entropy == 0.0));
    }

    #[test]
    fn periodic_constant_is_steady() {
        let (op, e) = setup(OperatorMode::PeriodicSpectral);
        let u = Field::from_fn(*op.grid(), FieldKind::Density, |_| 0.7).unwrap();
        let (next, _) = step_physical(&u, &op, &SolverConfig::default()).unwrap();
        assert!(next.linf_distance(&u).unwrap() < 1e-13);
        let _ = e;
    }

    #[test]
    fn box_run_conserves_and_decays() {
        let (op, e) = setup(OperatorMode::FreespaceKernel);
        let u = box_datum(*op.grid());
        let cfg = SolverConfig { end_time: 2.0, ..Default::default() };
        let tr = run(&u, FlowMode::Physical, &cfg, &op, &e).unwrap();
        let r = &tr.diagnostics.records;
        assert!((r.last().unwrap().mass - u.mass()).abs() < 1e-12 * u.mass());
        assert!(r.windows(2).all(|w| w[1].linf < w[0].linf));
        assert!(r.iter().all(|x| x.min_value >= 0.0));
        assert!(tr.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(tr.final_time(), 2.0);
    }

    #[test]
    fn rescaled_entropy_decreases() {
        let (op, e) = setup(OperatorMode::FreespaceKernel);
        let u = box_datum(*op.grid());
        let cfg = SolverConfig { end_time: 1.0, ..Default::default() };
        let tr = run(&u, FlowMode::Rescaled, &cfg, &op, &e).unwrap();
        let r = &tr.diagnostics.records;
        assert!(r.windows(2).all(|w| w[1].entropy <= w[0].entropy));
    }

    #[test]
    fn rejects_negative_datum() {
        let (op, e) = setup(OperatorMode::FreespaceKernel);
        let mut v = vec![0.0; 64];
        v[3] = -1.0;
        let u = Field::new(*op.grid(), v, FieldKind::Generic).unwrap();
        assert!(run(&u, FlowMode::Physical, &SolverConfig::default(), &op, &e).is_err());
    }
}
