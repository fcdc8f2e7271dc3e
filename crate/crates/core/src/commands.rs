//! The subcommands behind the `fracpme` binary. Each returns the process
//! exit code: 0 success, 1 failed criterion, 2 configuration error,
//! 3 numerical abort or invariant breach (see [`Error::exit_code`]).

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use crate::diagnostics::{convergence_to_profile, record, DiagnosticsRecord, DiagnosticsSeries};
use crate::error::{Error, Result};
use crate::evolution::{run, FlowMode, Trajectory};
use crate::grid::Field;
use crate::io::{write_diagnostics, write_snapshot, Mode, RunConfig, Snapshot};
use crate::obstacle::{
    mass_law, match_mass, scaling_check, solve_obstacle, solve_with_operator, ObstacleProblem, ObstacleSolution,
    PsorOptions,
};
use crate::verify::{self, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Relative per-record tolerance of the monotonicity monitors.
pub const MONITOR_TOLERANCE: f64 = 1e-8;

/// Dispatches on `cfg.mode`.
pub fn execute(cfg: &RunConfig) -> Result<i32> {
    match cfg.mode {
        Mode::Physical => cmd_evolve(cfg),
        Mode::Rescaled => cmd_rescaled(cfg),
        Mode::Obstacle => cmd_obstacle(cfg),
        Mode::Verify => cmd_verify(cfg),
        Mode::Sweep => cmd_sweep(cfg),
    }
}

fn prepare_out(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out)?;
    fs::write(cfg.out.join("config.txt"), cfg.to_text())?;
    Ok(())
}

/// First monitor breach of a run, as `(name, value, limit)`.
fn breach(series: &DiagnosticsSeries, mode: FlowMode) -> Option<(&'static str, f64, f64)> {
    let recs = &series.records;
    if let Some(r) = recs.iter().find(|r| r.min_value < 0.0) {
        return Some(("positivity", r.min_value, 0.0));
    }
    let rise = |f: fn(&DiagnosticsRecord) -> f64, scale: f64| {
        recs.windows(2).map(|w| (f(&w[1]) - f(&w[0])) / scale).fold(0.0f64, f64::max)
    };
    let first = recs.first()?;
    match mode {
        FlowMode::Physical if first.linf > 0.0 => {
            let worst = recs
                .windows(2)
                .map(|w| (w[1].linf - w[0].linf) / w[0].linf.max(f64::MIN_POSITIVE))
                .fold(0.0f64, f64::max);
            (worst > MONITOR_TOLERANCE).then_some(("linf_monotone", worst, MONITOR_TOLERANCE))
        }
        FlowMode::Rescaled if first.entropy > 0.0 => {
            let worst = rise(|r| r.entropy, first.entropy);
            (worst > MONITOR_TOLERANCE).then_some(("entropy_monotone", worst, MONITOR_TOLERANCE))
        }
        _ => None,
    }
}

fn write_run(cfg: &RunConfig, tr: &Trajectory, mode: FlowMode) -> Result<()> {
    write_diagnostics(&cfg.out.join("diagnostics.csv"), &tr.diagnostics)?;
    let label = mode.as_str().to_string();
    if !tr.snapshots.is_empty() {
        let dir = cfg.out.join("snapshots");
        fs::create_dir_all(&dir)?;
        for (k, (t, f)) in tr.snapshots.iter().enumerate() {
            let snap = Snapshot { field: f.clone(), s: cfg.s, time: *t, mode: label.clone() };
            write_snapshot(&dir.join(format!("snap_{k:05}.txt")), &snap)?;
        }
    }
    let last = Snapshot { field: tr.final_state.clone(), s: cfg.s, time: tr.final_time(), mode: label };
    write_snapshot(&cfg.out.join("final.txt"), &last)
}

fn finish(tr: &Trajectory, mode: FlowMode) -> i32 {
    let last = tr.diagnostics.last().copied().unwrap_or_default();
    println!(
        "done mode={} steps={} time={:e} mass={:e} linf={:e} entropy={:e}",
        mode.as_str(),
        tr.steps,
        last.time,
        last.mass,
        last.linf,
        last.entropy
    );
    match breach(&tr.diagnostics, mode) {
        Some((name, value, limit)) => {
            println!("FAIL monitor={name} value={value:e} limit={limit:e}");
            EXIT_NUMERICAL
        }
        None => EXIT_OK,
    }
}

/// Physical flow from the configured datum.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<i32> {
    let op = cfg.build_operator()?;
    let exp = cfg.exponents()?;
    let u0 = cfg.datum.sample(*op.grid(), &exp)?;
    prepare_out(cfg)?;
    let tr = run(&u0, FlowMode::Physical, &cfg.solver, &op, &exp)?;
    write_run(cfg, &tr, FlowMode::Physical)?;
    Ok(finish(&tr, FlowMode::Physical))
}

/// Radius of the profile with mass `mass`, from the unit level and the
/// scaling `R(C) = √C R(1)`.
fn predicted_radius(cfg: &RunConfig, mass: f64) -> Result<(f64, f64)> {
    let exp = cfg.exponents()?;
    let n_cal = if cfg.n == 1 { 256 } else { 32 };
    let unit = solve_obstacle(&ObstacleProblem::with_default_box(1.0, &exp, n_cal)?, &PsorOptions::default())?;
    let level = crate::obstacle::level_for_mass(mass, &exp, unit.mass())?;
    Ok((level, unit.radius * level.sqrt()))
}

/// Rescaled flow. The box must contain `1.5 R(C)` for the datum's mass;
/// when the obstacle problem fits on the run grid the distances to the
/// mass-matched profile are written to `convergence.csv`.
pub fn cmd_rescaled(cfg: &RunConfig) -> Result<i32> {
    let op = cfg.build_operator()?;
    let exp = cfg.exponents()?;
    let grid = *op.grid();
    let v0 = cfg.datum.sample(grid, &exp)?;
    let mass = v0.mass();
    if mass > 0.0 {
        let (level, radius) = predicted_radius(cfg, mass)?;
        if cfg.half_width < 1.5 * radius {
            return Err(Error::Config(vec![format!(
                "box half-width {} must be at least 1.5 R(C) = {:.4} for mass {mass:.6} (C = {level:.6})",
                cfg.half_width,
                1.5 * radius
            )]));
        }
    }
    prepare_out(cfg)?;
    let tr = run(&v0, FlowMode::Rescaled, &cfg.solver, &op, &exp)?;
    write_run(cfg, &tr, FlowMode::Rescaled)?;
    if mass > 0.0 && !op.mode().is_periodic() {
        match match_mass(mass, &exp, &op, &PsorOptions::default()) {
            Ok(profile) => write_convergence(cfg, &tr, &profile)?,
            Err(e) => log::warn!("no mass-matched profile on the run grid: {e}"),
        }
    }
    Ok(finish(&tr, FlowMode::Rescaled))
}

fn write_convergence(cfg: &RunConfig, tr: &Trajectory, profile: &ObstacleSolution) -> Result<()> {
    let op = profile.problem.operator()?;
    let exp = cfg.exponents()?;
    let frame = FlowMode::Rescaled.frame(&exp);
    let e_inf = record(&profile.density, 0.0, frame, &op)?.entropy;
    let mut samples: Vec<(f64, &Field, &DiagnosticsRecord)> = tr
        .snapshots
        .iter()
        .filter_map(|(t, f)| tr.diagnostics.records.iter().find(|r| r.time == *t).map(|r| (*t, f, r)))
        .collect();
    let last = tr.diagnostics.last().expect("a run records at least one state");
    if samples.last().map(|s| s.0) != Some(last.time) {
        samples.push((last.time, &tr.final_state, last));
    }
    let rep = convergence_to_profile(&samples, &profile.density, e_inf)?;
    let mut w = csv::Writer::from_path(cfg.out.join("convergence.csv"))?;
    w.write_record(["time", "l1_distance", "linf_distance", "entropy_gap", "gap_ratio", "literal_ratio"])?;
    let opt = |x: Option<f64>| x.map_or_else(|| "NA".to_string(), |v| format!("{v:e}"));
    for k in 0..rep.times.len() {
        w.write_record([
            format!("{:e}", rep.times[k]),
            format!("{:e}", rep.l1_distance[k]),
            format!("{:e}", rep.linf_distance[k]),
            format!("{:e}", rep.entropy_gap[k]),
            opt(rep.gap_ratio[k]),
            opt(rep.literal_ratio[k]),
        ])?;
    }
    w.flush()?;
    write_snapshot(
        &cfg.out.join("profile.txt"),
        &Snapshot { field: profile.density.clone(), s: cfg.s, time: 0.0, mode: "profile".into() },
    )?;
    let k = rep.times.len() - 1;
    println!(
        "profile C={:e} l1_distance={:e} linf_distance={:e}",
        profile.problem.level, rep.l1_distance[k], rep.linf_distance[k]
    );
    Ok(())
}

fn report_solution(dir: &Path, sol: &ObstacleSolution) -> Result<()> {
    fs::create_dir_all(dir)?;
    let s = sol.problem.s;
    write_snapshot(&dir.join("pressure.txt"), &Snapshot { field: sol.pressure.clone(), s, time: 0.0, mode: "obstacle".into() })?;
    write_snapshot(&dir.join("density.txt"), &Snapshot { field: sol.density.clone(), s, time: 0.0, mode: "obstacle".into() })?;
    let r = &sol.residuals;
    let text = format!(
        "C: {:e}\nmass: {:e}\nradius: {:e}\nradius_uncertainty: {:e}\nobstacle_radius: {:e}\n\
         residual_obstacle: {:e}\nresidual_negativity: {:e}\nresidual_complementarity: {:e}\n\
         tolerance: {:e}\nsweeps: {}\npolished: {}\n",
        sol.problem.level,
        sol.mass(),
        sol.radius,
        sol.problem.grid.spacing(),
        sol.problem.obstacle_radius(),
        r.obstacle,
        r.negativity,
        r.complementarity,
        sol.tolerance(),
        sol.sweeps,
        sol.polished
    );
    fs::write(dir.join("report.txt"), text)?;
    println!(
        "obstacle C={:e} mass={:e} R={:e} residual={:e} tolerance={:e}",
        sol.problem.level,
        sol.mass(),
        sol.radius,
        r.max(),
        sol.tolerance()
    );
    Ok(())
}

/// Obstacle profile for one level `C`, for the level of a target mass `M`,
/// or for every level of a sweep (with the fitted mass law).
pub fn cmd_obstacle(cfg: &RunConfig) -> Result<i32> {
    let exp = cfg.exponents()?;
    let grid = cfg.grid()?;
    let op = crate::Operator::new(grid, cfg.params().allow_supercritical(true), crate::OperatorMode::FreespaceKernel)?;
    let opts = PsorOptions::default();
    prepare_out(cfg)?;
    if !cfg.levels.is_empty() {
        let mut sols = Vec::new();
        let mut w = csv::Writer::from_path(cfg.out.join("obstacle_sweep.csv"))?;
        w.write_record(["C", "mass", "radius", "residual", "sweeps"])?;
        for &c in &cfg.levels {
            let sol = solve_with_operator(&ObstacleProblem::new(c, &exp, grid)?, &op, &opts)?;
            report_solution(&cfg.out.join(format!("C_{c}")), &sol)?;
            w.write_record([c, sol.mass(), sol.radius, sol.residuals.max(), sol.sweeps as f64].map(|x| format!("{x:e}")))?;
            sols.push(sol);
        }
        w.flush()?;
        if let Ok(fit) = mass_law(&sols) {
            println!(
                "mass_law exponent={:.6} expected={:.6} coefficient={:e}",
                fit.exponent,
                exp.mass_exponent(),
                fit.coefficient
            );
        }
        let one = sols.iter().find(|s| s.problem.level == 1.0);
        let four = sols.iter().find(|s| s.problem.level == 4.0);
        if let (Some(a), Some(b)) = (one, four) {
            let rep = scaling_check(a, b)?;
            println!("scaling density_deviation={:e} pressure_deviation={:e}", rep.density_deviation, rep.pressure_deviation);
        }
        return Ok(EXIT_OK);
    }
    let sol = match (cfg.level, cfg.mass) {
        (Some(c), _) => solve_with_operator(&ObstacleProblem::new(c, &exp, grid)?, &op, &opts)?,
        (None, Some(m)) => match_mass(m, &exp, &op, &opts)?,
        (None, None) => return Err(Error::Config(vec!["obstacle mode needs C or M".into()])),
    };
    report_solution(&cfg.out, &sol)?;
    Ok(EXIT_OK)
}

/// The verification suite; writes `verify.csv` and exits 1 if any
/// criterion fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let opts = VerifyOptions { quick: cfg.quick, tolerance_scale: cfg.tolerance_scale };
    fs::create_dir_all(&cfg.out)?;
    let start = Instant::now();
    let mut rows = Vec::new();
    for id in 1..=14 {
        let c = verify::evaluate(id, &opts);
        println!("{}", c.line());
        rows.push(c);
    }
    match verify::probes(&opts) {
        Ok(lines) => lines.iter().for_each(|l| println!("[INFO] {l}")),
        Err(e) => println!("[INFO] probes unavailable: {e}"),
    }
    verify::write_csv(&cfg.out.join("verify.csv"), &rows)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    println!("{} of 14 criteria passed in {:.1} s", 14 - failed, start.elapsed().as_secs_f64());
    Ok(if failed == 0 { EXIT_OK } else { EXIT_CRITERION })
}

fn sweep_threads() -> Option<usize> {
    std::env::var("FRACPME_THREADS").ok()?.parse().ok().filter(|&n: &usize| n > 0)
}

/// Runs `sweep_mode` once per value of `sweep_param`, each in its own
/// subdirectory, at most `FRACPME_THREADS` at a time.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<i32> {
    let param = cfg.sweep_param.clone().ok_or_else(|| Error::Config(vec!["sweep_param is required".into()]))?;
    let mut runs = Vec::new();
    let mut errs = Vec::new();
    for value in &cfg.sweep_values {
        let mut c = cfg.clone();
        c.mode = cfg.sweep_mode;
        c.out = cfg.out.join(format!("{param}_{value}"));
        match c.set(&param, value) {
            Ok(()) => match c.validate() {
                Ok(()) => runs.push((value.clone(), c)),
                Err(e) => errs.push(format!("{param} = {value}: {e}")),
            },
            Err(e) => errs.push(e),
        }
    }
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    fs::create_dir_all(&cfg.out)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = sweep_threads() {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(vec![format!("thread pool: {e}")]))?;
    let codes: Vec<i32> = pool.install(|| {
        runs.par_iter()
            .map(|(_, c)| match execute(c) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("run {}: {e}", c.out.display());
                    e.exit_code()
                }
            })
            .collect()
    });
    let mut w = csv::Writer::from_path(cfg.out.join("sweep.csv"))?;
    w.write_record(["param", "value", "exit_code", "out"])?;
    for ((value, c), code) in runs.iter().zip(&codes) {
        w.write_record([param.as_str(), value, &code.to_string(), &c.out.display().to_string()])?;
    }
    w.flush()?;
    Ok(codes.iter().copied().max().unwrap_or(EXIT_OK))
}
