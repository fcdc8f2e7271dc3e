use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracpme::commands::{execute, EXIT_CONFIG};
use fracpme::io::RunConfig;

#[derive(Parser)]
#[command(name = "fracpme", version, about = "Porous medium flow with fractional pressure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Physical flow from the configured datum.
    Evolve(Common),
    /// Self-similar (rescaled) flow.
    Rescaled(Common),
    /// Obstacle profile for a level C, a mass M or a sweep of levels.
    Obstacle(Common),
    /// Run the verification suite.
    Verify(Common),
    /// Repeat a physical or rescaled run over a list of parameter values.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    s: Option<f64>,
    /// Operator realization: periodic or freespace.
    #[arg(long)]
    mode: Option<String>,
    /// Box half-width.
    #[arg(long = "L")]
    half_width: Option<f64>,
    /// Cells per axis.
    #[arg(long = "N")]
    points: Option<usize>,
    #[arg(long)]
    end_time: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    allow_supercritical: bool,
    /// Obstacle level.
    #[arg(long = "C")]
    level: Option<f64>,
    /// Target mass for the obstacle profile.
    #[arg(long = "M")]
    mass: Option<f64>,
    /// Any configuration key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn overrides(&self, mode: &str) -> Result<Vec<(String, String)>, String> {
        let mut v = vec![("mode".to_string(), mode.to_string())];
        let mut push = |k: &str, x: Option<String>| {
            if let Some(x) = x {
                v.push((k.to_string(), x));
            }
        };
        push("n", self.n.map(|x| x.to_string()));
        push("s", self.s.map(|x| x.to_string()));
        push("operator", self.mode.clone());
        push("L", self.half_width.map(|x| x.to_string()));
        push("N", self.points.map(|x| x.to_string()));
        push("end_time", self.end_time.map(|x| x.to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("C", self.level.map(|x| x.to_string()));
        push("M", self.mass.map(|x| x.to_string()));
        if self.quick {
            v.push(("quick".into(), "true".into()));
        }
        if self.allow_supercritical {
            v.push(("allow_supercritical".into(), "true".into()));
        }
        for kv in &self.set {
            let (k, x) = kv.split_once('=').ok_or_else(|| format!("--set expects key=value, got `{kv}`"))?;
            v.push((k.trim().to_string(), x.trim().to_string()));
        }
        Ok(v)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (mode, common) = match &cli.command {
        Command::Evolve(c) => ("physical", c),
        Command::Rescaled(c) => ("rescaled", c),
        Command::Obstacle(c) => ("obstacle", c),
        Command::Verify(c) => ("verify", c),
        Command::Sweep(c) => ("sweep", c),
    };
    let overrides = match common.overrides(mode) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let code = match RunConfig::load(common.config.as_deref(), &overrides).and_then(|cfg| execute(&cfg)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
