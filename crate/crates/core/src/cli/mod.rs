//! Batch runner: a JSON configuration plus flag overrides in, CSV and JSON out.
//!
//! Exit status is 0 when a run completes (or its check passes), 2 when a
//! check fails and 1 on usage errors.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome, COLUMNS};
pub use config::{
    default_quadrature, Command, ExponentSpec, FieldSpec, GridSpec, OutputSpec, PieceSpec, RunConfig, Tolerances,
};

use crate::quadrature::{Quadrature, Scheme};
use crate::regions::DEFAULT_STRATA;
use crate::{Error, Result};

const DEFAULT_SAMPLES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuadKind {
    Radial,
    Mc,
    Strat,
}

#[derive(Args, Debug, Default)]
pub struct Overrides {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed of the Monte Carlo scheme (mandatory when switching to one).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for the CSV and JSON artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub quad: Option<QuadKind>,
    /// Sample count; for `radial`, nodes per radial and azimuthal axis (half as many polar).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Relative tolerance of the norm bisection.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// First radius of the geometric R grid.
    #[arg(long, global = true)]
    pub r_start: Option<f64>,
    #[arg(long, global = true)]
    pub r_factor: Option<f64>,
    #[arg(long, global = true)]
    pub r_count: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Sub {
    /// Luxemburg norm of `field` over `region`.
    Norm,
    /// Volume of `region`, or its growth over the annuli of `r_grid`.
    Volume,
    /// Decay of the cutoff-derivative norms in the conjugate exponents.
    Decay,
    /// Localized energy identity.
    Energy {
        /// Single cutoff radius instead of the grid.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// α(R), β₁(R), β₂(R), β(R) over the grid.
    AlphaBeta,
    /// Exact exponent certificate and admissible inner-exponent bound.
    Certify,
    /// Embedding bounds, restriction, power and Hölder checks.
    Lemmas {
        /// Power s of the power identity.
        #[arg(long)]
        power: Option<f64>,
    },
    /// Full Liouville pipeline.
    Liouville,
}

impl Sub {
    fn command(self) -> Command {
        match self {
            Sub::Norm => Command::Norm,
            Sub::Volume => Command::Volume,
            Sub::Decay => Command::Decay,
            Sub::Energy { .. } => Command::Energy,
            Sub::AlphaBeta => Command::AlphaBeta,
            Sub::Certify => Command::Certify,
            Sub::Lemmas { .. } => Command::Lemmas,
            Sub::Liouville => Command::Liouville,
        }
    }
}

fn columns_help() -> String {
    let mut s = String::from("CSV columns (floats with 17 significant digits):\n");
    for (c, cols) in COLUMNS {
        s.push_str(&format!("  {:<11} {cols}\n", c.id()));
    }
    s
}

#[derive(Parser, Debug)]
#[command(name = "varexp", version, about = "Variable-exponent norms and Liouville-type decay checks", after_help = columns_help())]
pub struct Cli {
    #[command(subcommand)]
    pub sub: Sub,
    #[command(flatten)]
    pub overrides: Overrides,
}

fn flag(name: &str, reason: impl Into<String>) -> Error {
    Error::Config { field: format!("--{name}"), reason: reason.into() }
}

/// Applies the command-line overrides to the quadrature.
fn override_quadrature(q: Quadrature, o: &Overrides) -> Result<Quadrature> {
    let current_seed = match q.scheme {
        Scheme::MonteCarlo { seed, .. } | Scheme::Stratified { seed, .. } => Some(seed),
        Scheme::Radial { .. } => None,
    };
    let current_samples = match q.scheme {
        Scheme::MonteCarlo { samples, .. } | Scheme::Stratified { samples, .. } => Some(samples),
        Scheme::Radial { .. } => None,
    };
    let random = |o: &Overrides| -> Result<(usize, u64)> {
        let seed = o
            .seed
            .or(current_seed)
            .ok_or_else(|| flag("seed", "is required for Monte Carlo schemes"))?;
        Ok((o.samples.or(current_samples).unwrap_or(DEFAULT_SAMPLES), seed))
    };
    let strata = match q.scheme {
        Scheme::Stratified { strata, .. } => strata,
        _ => DEFAULT_STRATA,
    };
    let kind = o.quad.unwrap_or(match q.scheme {
        Scheme::Radial { .. } => QuadKind::Radial,
        Scheme::MonteCarlo { .. } => QuadKind::Mc,
        Scheme::Stratified { .. } => QuadKind::Strat,
    });
    let scheme = match kind {
        QuadKind::Radial => match (o.samples, q.scheme) {
            (Some(n), _) => Scheme::Radial { n_r: n, n_theta: (n / 2).max(2), n_phi: n },
            (None, s @ Scheme::Radial { .. }) => s,
            (None, _) => default_quadrature().scheme,
        },
        QuadKind::Mc => {
            let (samples, seed) = random(o)?;
            Scheme::MonteCarlo { samples, seed }
        }
        QuadKind::Strat => {
            let (samples, seed) = random(o)?;
            Scheme::Stratified { samples, seed, strata }
        }
    };
    Ok(Quadrature { scheme, rel_tol: o.tol.unwrap_or(q.rel_tol), truncation: q.truncation })
}

/// Reads the configuration file (if any) and applies the flags.
pub fn resolve(sub: Sub, o: &Overrides) -> Result<RunConfig> {
    let command = sub.command();
    let mut config = match &o.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| flag("config", format!("{}: {e}", path.display())))?;
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Config { field: "config".into(), reason: e.to_string() })?;
            let obj = value
                .as_object_mut()
                .ok_or_else(|| Error::Config { field: "config".into(), reason: "must be a JSON object".into() })?;
            match obj.get("command").and_then(|c| c.as_str()) {
                Some(c) if c != command.id() => {
                    return Err(Error::Config {
                        field: "command".into(),
                        reason: format!("config is for `{c}` but `{command}` was invoked"),
                    })
                }
                _ => {
                    obj.insert("command".into(), command.id().into());
                }
            }
            RunConfig::from_json(&value.to_string())?
        }
        None => RunConfig::new(command),
    };
    config.quadrature = override_quadrature(config.quadrature, o)?;
    if let Some(dir) = &o.out {
        config.output.dir = dir.to_string_lossy().into_owned();
    }
    if o.r_start.is_some() || o.r_factor.is_some() || o.r_count.is_some() {
        let g = config.r_grid.unwrap_or(GridSpec { start: 8.0, factor: 2.0, count: 6 });
        config.r_grid = Some(GridSpec {
            start: o.r_start.unwrap_or(g.start),
            factor: o.r_factor.unwrap_or(g.factor),
            count: o.r_count.unwrap_or(g.count),
        });
    }
    match sub {
        Sub::Energy { radius: Some(r) } => config.radius = Some(r),
        Sub::Lemmas { power: Some(s) } => config.power = Some(s),
        _ => {}
    }
    config.validate()?;
    Ok(config)
}

impl Outcome {
    /// Writes `<command>.csv` and `<command>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let csv = dir.join(format!("{}.csv", self.command));
        let json = dir.join(format!("{}.json", self.command));
        std::fs::write(&csv, &self.csv)?;
        std::fs::write(&json, &self.json)?;
        Ok((csv, json))
    }

    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            2
        }
    }
}

/// Entry point of the `varexp` binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = resolve(cli.sub, &cli.overrides).and_then(|config| {
        let outcome = run(&config)?;
        outcome.write(Path::new(&config.output.dir))?;
        Ok(outcome)
    });
    match result {
        Ok(o) => {
            println!("{}", o.verdict);
            ExitCode::from(o.exit_code())
        }
        Err(e) => {
            eprintln!("varexp: {e}");
            ExitCode::from(1)
        }
    }
}

pub fn main() -> ExitCode {
    main_with_args(std::env::args_os())
}
