use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use plasmon_core::{GridSpec, PhysicalParams};
use serde::{Deserialize, Serialize};

pub const DEFAULT_C0: f64 = 1e-3;
pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file and then to built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// JSON config file
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Dimensionless coupling (excludes --eta0/--coupling)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c0: Option<f64>,
    /// Inverse binding length
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Surface density of the layer
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub eta0: Option<f64>,
    /// Value of e^2 eta0 / eps0
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub coupling: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for --format json
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for the randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Root-finding tolerance on the energy
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Oracle mesh length
    #[arg(long, global = true)]
    pub grid_zmax: Option<f64>,
    /// Oracle mesh size
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    #[arg(long, global = true)]
    pub grid_panels: Option<usize>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub c0: Option<f64>,
    pub beta: Option<f64>,
    pub eta0: Option<f64>,
    pub coupling: Option<f64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub grid: Option<FileGrid>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileGrid {
    pub z_max: Option<f64>,
    pub n_points: Option<usize>,
    pub panels: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Units {
    Scaled { c0: f64, beta: f64 },
    Physical { beta: f64, eta0: f64, coupling: f64 },
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub units: Units,
    pub c0: f64,
    pub format: Format,
    pub seed: u64,
    pub tolerance: f64,
    pub grid: GridSpec,
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        // The unit group is taken whole from one source so that a flag never
        // mixes with a config file value of the other mode.
        let flag_units = [args.c0, args.beta, args.eta0, args.coupling].iter().any(Option::is_some);
        let (c0, beta, eta0, coupling) = if flag_units {
            (args.c0, args.beta, args.eta0, args.coupling)
        } else {
            (file.c0, file.beta, file.eta0, file.coupling)
        };
        let units = resolve_units(c0, beta, eta0, coupling)?;
        let c0 = match units {
            Units::Scaled { c0, .. } => c0,
            Units::Physical { beta, eta0, coupling } => PhysicalParams::new(beta, eta0, coupling)?.c0(),
        };

        let format = if args.json { Format::Json } else { args.format.or(file.format).unwrap_or(Format::Csv) };
        let tolerance = args.tolerance.or(file.tolerance).unwrap_or(1e-10);
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            bail!("tolerance must be finite and > 0, got {tolerance}");
        }
        let fg = file.grid.unwrap_or_default();
        let d = GridSpec::default();
        let grid = GridSpec {
            z_max: args.grid_zmax.or(fg.z_max).unwrap_or(d.z_max),
            n_points: args.grid_points.or(fg.n_points).unwrap_or(d.n_points),
            panels: args.grid_panels.or(fg.panels).unwrap_or(d.panels),
            rule: d.rule,
        };
        grid.validate()?;

        Ok(Self { units, c0, format, seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED), tolerance, grid })
    }

    pub fn beta(&self) -> f64 {
        match self.units {
            Units::Scaled { beta, .. } | Units::Physical { beta, .. } => beta,
        }
    }
}

fn resolve_units(c0: Option<f64>, beta: Option<f64>, eta0: Option<f64>, coupling: Option<f64>) -> Result<Units> {
    let beta_v = beta.unwrap_or(1.0);
    if !(beta_v.is_finite() && beta_v > 0.0) {
        bail!("beta must be finite and > 0, got {beta_v}");
    }
    match (c0, eta0, coupling) {
        (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
            bail!("give either --c0 or the physical parameters (--eta0, --coupling), not both")
        }
        (Some(c0), None, None) => {
            if !(c0.is_finite() && c0 > 0.0) {
                bail!("c0 must be finite and > 0, got {c0}");
            }
            Ok(Units::Scaled { c0, beta: beta_v })
        }
        (None, Some(eta0), Some(coupling)) => {
            PhysicalParams::new(beta_v, eta0, coupling)?;
            Ok(Units::Physical { beta: beta_v, eta0, coupling })
        }
        (None, None, None) => Ok(Units::Scaled { c0: DEFAULT_C0, beta: beta_v }),
        _ => bail!("physical mode needs both --eta0 and --coupling"),
    }
}
