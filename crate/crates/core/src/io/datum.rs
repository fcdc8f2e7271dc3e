use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolution::Exponents;
use crate::fracops::{FracParams, Operator, OperatorMode};
use crate::grid::{Field, FieldKind, Grid};
use crate::obstacle::{self, PsorOptions};

use super::read_snapshot;

/// Values below this are set to zero when truncating smooth data.
pub const TRUNCATION: f64 = 1e-14;

/// Named initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum Datum {
    Zero,
    /// Constant `height` on the cube of side `width` centred at `center`
    /// (the same coordinate on every axis).
    Box { center: f64, width: f64, height: f64 },
    /// `a (b − |x|)²` inside the ball of radius `b`.
    ParabolaCap { a: f64, b: f64 },
    /// `exp(−|x|²/(2σ²))`, zeroed below `1e-14`.
    GaussianTruncated { sigma: f64 },
    /// The obstacle profile `V_C` solved on the run grid.
    Barenblatt { level: f64 },
    FromFile(PathBuf),
}

impl Datum {
    /// Cell values on `grid`. `exp` is only used by the Barenblatt datum.
    pub fn sample(&self, grid: Grid, exp: &Exponents) -> Result<Field> {
        let kind = FieldKind::Density;
        match self {
            Datum::Zero => Ok(Field::zeros(grid, kind)),
            &Datum::Box { center, width, height } => Field::from_fn(grid, kind, |x| {
                if x.iter().all(|&c| (c - center).abs() < 0.5 * width) {
                    height
                } else {
                    0.0
                }
            }),
            &Datum::ParabolaCap { a, b } => Field::from_fn(grid, kind, |x| {
                let d = b - x.iter().map(|c| c * c).sum::<f64>().sqrt();
                if d > 0.0 {
                    a * d * d
                } else {
                    0.0
                }
            }),
            &Datum::GaussianTruncated { sigma } => Field::from_fn(grid, kind, |x| {
                let v = (-x.iter().map(|c| c * c).sum::<f64>() / (2.0 * sigma * sigma)).exp();
                if v < TRUNCATION {
                    0.0
                } else {
                    v
                }
            }),
            &Datum::Barenblatt { level } => {
                let prob = obstacle::ObstacleProblem::new(level, exp, grid)?;
                let op = Operator::new(grid, FracParams::new(exp.s).allow_supercritical(true), OperatorMode::FreespaceKernel)?;
                let sol = obstacle::solve_with_operator(&prob, &op, &PsorOptions::default())?;
                Ok(sol.density)
            }
            Datum::FromFile(path) => {
                let snap = read_snapshot(path)?;
                if snap.field.grid() != &grid {
                    return Err(Error::Format {
                        path: path.display().to_string(),
                        reason: "snapshot grid differs from the configured grid".into(),
                    });
                }
                snap.field.with_kind(kind)
            }
        }
    }

    fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let mut positive = |name: &str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                errs.push(format!("datum parameter {name} must be positive, got {v}"));
            }
        };
        match *self {
            Datum::Box { width, height, center } => {
                positive("width", width);
                if !(height.is_finite() && height >= 0.0) {
                    errs.push(format!("box height must be nonnegative, got {height}"));
                }
                if !center.is_finite() {
                    errs.push("box center must be finite".into());
                }
            }
            Datum::ParabolaCap { a, b } => {
                positive("a", a);
                positive("b", b);
            }
            Datum::GaussianTruncated { sigma } => positive("sigma", sigma),
            Datum::Barenblatt { level } => positive("C", level),
            Datum::Zero | Datum::FromFile(_) => {}
        }
        errs
    }

    pub(crate) fn check(&self) -> Result<()> {
        let errs = self.validate();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Zero => write!(f, "zero"),
            Datum::Box { center, width, height } => write!(f, "box({center}, {width}, {height})"),
            Datum::ParabolaCap { a, b } => write!(f, "parabola_cap({a}, {b})"),
            Datum::GaussianTruncated { sigma } => write!(f, "gaussian_truncated({sigma})"),
            Datum::Barenblatt { level } => write!(f, "barenblatt({level})"),
            Datum::FromFile(p) => write!(f, "from_file({})", p.display()),
        }
    }
}

impl FromStr for Datum {
    type Err = Error;

    /// Parses `name(arg, ...)` or a bare `zero`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |why: &str| Error::InvalidParameter(format!("datum `{text}`: {why}"));
        if text == "zero" {
            return Ok(Datum::Zero);
        }
        let open = text.find('(').ok_or_else(|| bad("expected name(args)"))?;
        if !text.ends_with(')') {
            return Err(bad("missing closing parenthesis"));
        }
        let name = text[..open].trim();
        let inner = &text[open + 1..text.len() - 1];
        if name == "from_file" {
            let path = inner.trim().trim_matches('"');
            if path.is_empty() {
                return Err(bad("empty path"));
            }
            return Ok(Datum::FromFile(PathBuf::from(path)));
        }
        let args: Vec<f64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|a| a.trim().parse::<f64>().map_err(|_| bad(&format!("`{}` is not a number", a.trim()))))
                .collect::<Result<_>>()?
        };
        let want = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(bad(&format!("expected {k} arguments, got {}", args.len())))
            }
        };
        let datum = match name {
            "box" => {
                want(3)?;
                Datum::Box { center: args[0], width: args[1], height: args[2] }
            }
            "parabola_cap" => {
                want(2)?;
                Datum::ParabolaCap { a: args[0], b: args[1] }
            }
            "gaussian_truncated" => {
                want(1)?;
                Datum::GaussianTruncated { sigma: args[0] }
            }
            "barenblatt" => {
                want(1)?;
                Datum::Barenblatt { level: args[0] }
            }
            _ => return Err(bad("unknown shape")),
        };
        Ok(datum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_named_shapes() {
        assert_eq!("box(0, 2, 1)".parse::<Datum>().unwrap(), Datum::Box { center: 0.0, width: 2.0, height: 1.0 });
        assert_eq!("parabola_cap(1,1)".parse::<Datum>().unwrap(), Datum::ParabolaCap { a: 1.0, b: 1.0 });
        assert_eq!("gaussian_truncated(0.5)".parse::<Datum>().unwrap(), Datum::GaussianTruncated { sigma: 0.5 });
        assert_eq!("from_file(a/b.txt)".parse::<Datum>().unwrap(), Datum::FromFile("a/b.txt".into()));
        assert!("box(0, 2)".parse::<Datum>().is_err());
        assert!("blob(1)".parse::<Datum>().is_err());
        assert!("box(0, x, 1)".parse::<Datum>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for d in [
            Datum::Zero,
            Datum::Box { center: 0.5, width: 2.0, height: 1.5 },
            Datum::ParabolaCap { a: 1.0, b: 2.0 },
            Datum::GaussianTruncated { sigma: 0.25 },
            Datum::Barenblatt { level: 1.0 },
        ] {
            assert_eq!(d.to_string().parse::<Datum>().unwrap(), d);
        }
    }

    #[test]
    fn parabola_cap_is_below_its_parabola() {
        let g = Grid::new(1, 2.0, 64).unwrap();
        let e = Exponents::new(1, 0.25).unwrap();
        let u = Datum::ParabolaCap { a: 1.0, b: 1.0 }.sample(g, &e).unwrap();
        for (i, &v) in u.values().iter().enumerate() {
            let x = g.coord(i).abs();
            assert!(v <= (x - 1.0).powi(2) + 1e-15);
            if x >= 1.0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn gaussian_is_truncated() {
        let g = Grid::new(1, 20.0, 64).unwrap();
        let e = Exponents::new(1, 0.25).unwrap();
        let u = Datum::GaussianTruncated { sigma: 1.0 }.sample(g, &e).unwrap();
        assert_eq!(u.values()[0], 0.0);
        assert!(u.values().iter().all(|&v| v == 0.0 || v >= TRUNCATION));
    }
}
