use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolution::{Exponents, Integrator, SolverConfig};
use crate::fracops::{FracParams, Operator, OperatorMode};
use crate::grid::Grid;

use super::Datum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Physical,
    Rescaled,
    Obstacle,
    Verify,
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Physical => "physical",
            Mode::Rescaled => "rescaled",
            Mode::Obstacle => "obstacle",
            Mode::Verify => "verify",
            Mode::Sweep => "sweep",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "physical" | "evolve" => Ok(Mode::Physical),
            "rescaled" => Ok(Mode::Rescaled),
            "obstacle" => Ok(Mode::Obstacle),
            "verify" => Ok(Mode::Verify),
            "sweep" => Ok(Mode::Sweep),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

/// Everything a command needs. Built from `key = value` text and flag
/// overrides; see [`RunConfig::KEYS`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub s: f64,
    pub mode: Mode,
    pub half_width: f64,
    pub points_per_axis: usize,
    pub operator: OperatorMode,
    pub allow_supercritical: bool,
    pub datum: Datum,
    pub solver: SolverConfig,
    pub out: PathBuf,
    /// Obstacle level `C`.
    pub level: Option<f64>,
    /// Target mass `M` (obstacle mode).
    pub mass: Option<f64>,
    /// Level sweep for the obstacle mass law.
    pub levels: Vec<f64>,
    pub quick: bool,
    /// Multiplies every verification tolerance.
    pub tolerance_scale: f64,
    pub sweep_param: Option<String>,
    pub sweep_values: Vec<String>,
    /// Mode of each run in a sweep.
    pub sweep_mode: Mode,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 1,
            s: 0.25,
            mode: Mode::Physical,
            half_width: 8.0,
            points_per_axis: 256,
            operator: OperatorMode::FreespaceKernel,
            allow_supercritical: false,
            datum: Datum::Box { center: 0.0, width: 2.0, height: 1.0 },
            solver: SolverConfig::default(),
            out: PathBuf::from("out"),
            level: None,
            mass: None,
            levels: Vec::new(),
            quick: false,
            tolerance_scale: 1.0,
            sweep_param: None,
            sweep_values: Vec::new(),
            sweep_mode: Mode::Physical,
        }
    }
}

/// Splits `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    let mut errs = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) if !k.trim().is_empty() => pairs.push((k.trim().to_string(), v.trim().to_string())),
            _ => errs.push(format!("line {}: expected `key = value`, got `{line}`", no + 1)),
        }
    }
    if errs.is_empty() {
        Ok(pairs)
    } else {
        Err(Error::Config(errs))
    }
}

fn list<T: FromStr>(text: &str) -> std::result::Result<Vec<T>, ()> {
    text.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().map_err(|_| ())).collect()
}

fn boolean(text: &str) -> std::result::Result<bool, ()> {
    match text {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(()),
    }
}

impl RunConfig {
    pub const KEYS: &'static [&'static str] = &[
        "n",
        "s",
        "mode",
        "L",
        "N",
        "operator",
        "allow_supercritical",
        "datum",
        "cfl_safety",
        "end_time",
        "max_dt",
        "snapshot_stride",
        "diagnostics_stride",
        "positivity_clip",
        "integrator",
        "mass_drift_limit",
        "out",
        "C",
        "M",
        "levels",
        "quick",
        "tolerance_scale",
        "sweep_param",
        "sweep_values",
        "sweep_mode",
    ];

    /// Reads `path` (if any), then applies `overrides` in order, so flags
    /// win over the file. All problems are reported together.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut pairs = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(vec![format!("cannot read {}: {e}", p.display())]))?;
                parse_pairs(&text)?
            }
            None => Vec::new(),
        };
        pairs.extend_from_slice(overrides);
        Self::from_pairs(&pairs)
    }

    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let mut cfg = Self::default();
        let mut errs = Vec::new();
        for (k, v) in pairs {
            if let Err(msg) = cfg.set(k, v) {
                errs.push(msg);
            }
        }
        errs.extend(cfg.violations());
        if errs.is_empty() {
            Ok(cfg)
        } else {
            Err(Error::Config(errs))
        }
    }

    /// Applies one `key = value`; the error names the key.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let bad = || format!("invalid value `{value}` for key `{key}`");
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad());
        let int = |v: &str| v.parse::<usize>().map_err(|_| bad());
        match key {
            "n" => self.n = int(value)?,
            "s" => self.s = num(value)?,
            "mode" => self.mode = value.parse().map_err(|_| bad())?,
            "L" => self.half_width = num(value)?,
            "N" => self.points_per_axis = int(value)?,
            "operator" => self.operator = value.parse().map_err(|_| bad())?,
            "allow_supercritical" => self.allow_supercritical = boolean(value).map_err(|_| bad())?,
            "datum" => self.datum = value.parse().map_err(|e: Error| e.to_string())?,
            "cfl_safety" => self.solver.cfl_safety = num(value)?,
            "end_time" => self.solver.end_time = num(value)?,
            "max_dt" => self.solver.max_dt = num(value)?,
            "snapshot_stride" => self.solver.snapshot_stride = int(value)?,
            "diagnostics_stride" => self.solver.diagnostics_stride = int(value)?,
            "positivity_clip" => self.solver.positivity_clip = boolean(value).map_err(|_| bad())?,
            "integrator" => self.solver.integrator = value.parse::<Integrator>().map_err(|_| bad())?,
            "mass_drift_limit" => self.solver.mass_drift_limit = num(value)?,
            "out" => self.out = PathBuf::from(value),
            "C" => self.level = Some(num(value)?),
            "M" => self.mass = Some(num(value)?),
            "levels" => self.levels = list(value).map_err(|_| bad())?,
            "quick" => self.quick = boolean(value).map_err(|_| bad())?,
            "tolerance_scale" => self.tolerance_scale = num(value)?,
            "sweep_param" => self.sweep_param = Some(value.to_string()),
            "sweep_values" => self.sweep_values = value.split(',').map(|x| x.trim().to_string()).collect(),
            "sweep_mode" => self.sweep_mode = value.parse().map_err(|_| bad())?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.violations();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if let Err(e) = Grid::new(self.n, self.half_width, self.points_per_axis) {
            errs.push(e.to_string());
        }
        match FracParams::new(self.s).allow_supercritical(self.allow_supercritical).validate(self.n) {
            Err(e) => errs.push(e.to_string()),
            Ok(()) => {
                if self.operator == OperatorMode::FreespaceKernel && 2.0 * self.s >= self.n as f64 {
                    errs.push(format!(
                        "the free-space kernel needs 2s < n (s = {}, n = {}); use operator = periodic",
                        self.s, self.n
                    ));
                }
            }
        }
        if let Err(Error::Config(e)) = self.solver.validate() {
            errs.extend(e);
        }
        if let Err(Error::Config(e)) = self.datum.check() {
            errs.extend(e);
        }
        if self.mode == Mode::Obstacle && self.levels.is_empty() && self.level.is_some() == self.mass.is_some() {
            errs.push("obstacle mode needs exactly one of C and M (or a levels sweep)".into());
        }
        if let Some(c) = self.level {
            if !c.is_finite() {
                errs.push("C must be finite".into());
            }
        }
        if let Some(m) = self.mass {
            if !(m.is_finite() && m > 0.0) {
                errs.push(format!("M must be positive, got {m}"));
            }
        }
        if self.levels.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            errs.push("levels must be positive".into());
        }
        if !(self.tolerance_scale.is_finite() && self.tolerance_scale >= 0.0) {
            errs.push(format!("tolerance_scale must be nonnegative, got {}", self.tolerance_scale));
        }
        if self.mode == Mode::Sweep {
            match &self.sweep_param {
                None => errs.push("sweep mode needs sweep_param".into()),
                Some(p) if !Self::KEYS.contains(&p.as_str()) => errs.push(format!("cannot sweep unknown key `{p}`")),
                _ => {}
            }
            if self.sweep_values.is_empty() {
                errs.push("sweep mode needs sweep_values".into());
            }
            if !matches!(self.sweep_mode, Mode::Physical | Mode::Rescaled) {
                errs.push("sweep_mode must be physical or rescaled".into());
            }
        }
        errs
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.half_width, self.points_per_axis)
    }

    pub fn params(&self) -> FracParams {
        FracParams::new(self.s).allow_supercritical(self.allow_supercritical)
    }

    pub fn exponents(&self) -> Result<Exponents> {
        Exponents::new(self.n, self.s)
    }

    pub fn build_operator(&self) -> Result<Operator> {
        Operator::new(self.grid()?, self.params(), self.operator)
    }

    /// `key = value` text that parses back to `self`.
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        let sv = &self.solver;
        let _ = writeln!(t, "n = {}", self.n);
        let _ = writeln!(t, "s = {}", self.s);
        let _ = writeln!(t, "mode = {}", self.mode.as_str());
        let _ = writeln!(t, "L = {}", self.half_width);
        let _ = writeln!(t, "N = {}", self.points_per_axis);
        let _ = writeln!(t, "operator = {}", self.operator);
        let _ = writeln!(t, "allow_supercritical = {}", self.allow_supercritical);
        let _ = writeln!(t, "datum = {}", self.datum);
        let _ = writeln!(t, "cfl_safety = {}", sv.cfl_safety);
        let _ = writeln!(t, "end_time = {}", sv.end_time);
        let _ = writeln!(t, "max_dt = {}", sv.max_dt);
        let _ = writeln!(t, "snapshot_stride = {}", sv.snapshot_stride);
        let _ = writeln!(t, "diagnostics_stride = {}", sv.diagnostics_stride);
        let _ = writeln!(t, "positivity_clip = {}", sv.positivity_clip);
        let integrator = match sv.integrator {
            Integrator::Euler => "euler",
            Integrator::SspRk3 => "ssprk3",
        };
        let _ = writeln!(t, "integrator = {integrator}");
        let _ = writeln!(t, "mass_drift_limit = {}", sv.mass_drift_limit);
        let _ = writeln!(t, "out = {}", self.out.display());
        if let Some(c) = self.level {
            let _ = writeln!(t, "C = {c}");
        }
        if let Some(m) = self.mass {
            let _ = writeln!(t, "M = {m}");
        }
        if !self.levels.is_empty() {
            let v: Vec<String> = self.levels.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(t, "levels = {}", v.join(", "));
        }
        let _ = writeln!(t, "quick = {}", self.quick);
        let _ = writeln!(t, "tolerance_scale = {}", self.tolerance_scale);
        if let Some(p) = &self.sweep_param {
            let _ = writeln!(t, "sweep_param = {p}");
        }
        if !self.sweep_values.is_empty() {
            let _ = writeln!(t, "sweep_values = {}", self.sweep_values.join(", "));
        }
        let _ = writeln!(t, "sweep_mode = {}", self.sweep_mode.as_str());
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(text: &str) -> Vec<(String, String)> {
        parse_pairs(text).unwrap()
    }

    #[test]
    fn minimal_config_is_valid() {
        let cfg = RunConfig::from_pairs(&pairs("n = 1\ns = 0.25\nmode = physical\ndatum = box(0, 2, 1)\n")).unwrap();
        assert_eq!(cfg.mode, Mode::Physical);
        assert_eq!(cfg.datum, Datum::Box { center: 0.0, width: 2.0, height: 1.0 });
    }

    #[test]
    fn supercritical_order_needs_override() {
        let err = RunConfig::from_pairs(&pairs("n = 1\ns = 0.6\noperator = periodic")).unwrap_err();
        assert!(err.to_string().contains("s < 1/2"), "{err}");
        assert!(RunConfig::from_pairs(&pairs("n = 1\ns = 0.6\noperator = periodic\nallow_supercritical = true")).is_ok());
    }

    #[test]
    fn odd_resolution_rejected() {
        assert!(RunConfig::from_pairs(&pairs("N = 255")).is_err());
    }

    #[test]
    fn all_violations_reported() {
        match RunConfig::from_pairs(&pairs("N = 7\nfoo = 1\ncfl_safety = 2\ns = x")) {
            Err(Error::Config(errs)) => assert!(errs.len() >= 4, "{errs:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines_rejected() {
        assert!(parse_pairs("n 1").is_err());
        assert_eq!(pairs("# comment\n n = 2 # trailing\n").len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.mode = Mode::Obstacle;
        cfg.level = Some(2.0);
        cfg.levels = vec![0.5, 1.0];
        cfg.solver.integrator = Integrator::SspRk3;
        let back = RunConfig::from_pairs(&pairs(&cfg.to_text())).unwrap();
        assert_eq!(back, cfg);
    }
}
