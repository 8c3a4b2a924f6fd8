//! Run configuration: command-line flags, flat TOML files and validation.
//!
//! Values are resolved in increasing priority: built-in defaults, the
//! `CONE_SEED_TOL` environment variable (tolerance only), the `--config`
//! file, then explicit flags.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const TOL_ENV: &str = "CONE_SEED_TOL";

const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_T_END: f64 = 10.0;
const DEFAULT_SAMPLE_INTERVAL: f64 = 0.1;
const DEFAULT_GRID: (f64, f64, usize) = (-4.0, 4.0, 200);
const TOL_RANGE: (f64, f64) = (1e-14, 1e-3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Geodesic motion.
    Free,
    /// Motion in the harmonic potential.
    Osc,
    /// Table of oscillator energies.
    Spectrum,
    /// Sampled quantum eigenfunction.
    Eigfn,
    /// Divergence of J = ε runs from the J = 0 run.
    Instability,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cone", version, about = "Particle on a double cone: dynamics and spectra")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a simulation or tabulation.
    Sim(SimArgs),
}

/// Every setting is optional here; missing values come from the config file
/// or defaults. Keys in the file use the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SimArgs {
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub l0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub pl0: Option<f64>,
    /// Classical angular momentum.
    #[arg(long = "J", allow_negative_numbers = true)]
    #[serde(rename = "J")]
    pub angular_momentum: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sample_interval: Option<f64>,
    /// Angular quantum number.
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<i64>,
    /// Radial quantum number.
    #[arg(long)]
    pub n: Option<u32>,
    /// Energy of a free eigenstate.
    #[arg(long = "E", allow_negative_numbers = true)]
    #[serde(rename = "E")]
    pub energy: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub j_min: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub j_max: Option<i64>,
    #[arg(long)]
    pub n_min: Option<u32>,
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Share of a free state's norm on the upper nappe.
    #[arg(long, allow_negative_numbers = true)]
    pub upper_weight: Option<f64>,
    /// Comma-separated angular momentum perturbations.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(default)]
    pub eps: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Flat TOML file of settings; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long)]
    #[serde(skip)]
    pub print_config: bool,
}

impl SimArgs {
    /// Fills every unset field from `lower`.
    fn or(self, lower: SimArgs) -> SimArgs {
        macro_rules! pick {
            ($($f:ident),*) => { SimArgs { $($f: self.$f.or(lower.$f),)* config: self.config, print_config: self.print_config } };
        }
        pick!(
            mode,
            mass,
            omega,
            alpha,
            l0,
            phi0,
            pl0,
            angular_momentum,
            tol,
            t_end,
            sample_interval,
            j,
            n,
            energy,
            j_min,
            j_max,
            n_min,
            n_max,
            grid_min,
            grid_max,
            grid_points,
            upper_weight,
            eps,
            format,
            output
        )
    }
}

/// Uniform sampling grid on the radial coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn nodes(&self) -> Vec<f64> {
        let last = self.points - 1;
        (0..self.points)
            .map(|i| {
                if i == last {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Fully validated settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub mass: f64,
    pub omega: f64,
    pub alpha: f64,
    pub l0: f64,
    pub phi0: f64,
    pub pl0: f64,
    pub angular_momentum: f64,
    pub tol: f64,
    pub t_end: f64,
    pub sample_interval: f64,
    pub j: i64,
    pub n: u32,
    pub energy: f64,
    pub j_range: (i64, i64),
    pub n_range: (u32, u32),
    pub grid: Grid,
    pub upper_weight: f64,
    pub eps: Vec<f64>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

/// Flat serialized form, keyed like the flags.
#[derive(Serialize)]
#[serde(rename_all = "kebab-case")]
struct Echo<'a> {
    mode: Mode,
    mass: f64,
    omega: f64,
    alpha: f64,
    l0: f64,
    phi0: f64,
    pl0: f64,
    #[serde(rename = "J")]
    angular_momentum: f64,
    tol: f64,
    t_end: f64,
    sample_interval: f64,
    j: i64,
    n: u32,
    #[serde(rename = "E")]
    energy: f64,
    j_min: i64,
    j_max: i64,
    n_min: u32,
    n_max: u32,
    grid_min: f64,
    grid_max: f64,
    grid_points: usize,
    upper_weight: f64,
    eps: &'a [f64],
    format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<&'a Path>,
}

impl RunConfig {
    fn echo(&self) -> Echo<'_> {
        Echo {
            mode: self.mode,
            mass: self.mass,
            omega: self.omega,
            alpha: self.alpha,
            l0: self.l0,
            phi0: self.phi0,
            pl0: self.pl0,
            angular_momentum: self.angular_momentum,
            tol: self.tol,
            t_end: self.t_end,
            sample_interval: self.sample_interval,
            j: self.j,
            n: self.n,
            energy: self.energy,
            j_min: self.j_range.0,
            j_max: self.j_range.1,
            n_min: self.n_range.0,
            n_max: self.n_range.1,
            grid_min: self.grid.min,
            grid_max: self.grid.max,
            grid_points: self.grid.points,
            upper_weight: self.upper_weight,
            eps: &self.eps,
            format: self.format,
            output: self.output.as_deref(),
        }
    }

    /// The configuration as a flat TOML document accepted by `--config`.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.echo()).expect("flat config serializes")
    }

    /// The configuration as a JSON value with the same keys.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.echo()).expect("flat config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let args: SimArgs =
            toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {}", e.message())))?;
        resolve(args, None)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, CliError> {
        let args: SimArgs =
            serde_json::from_value(value.clone()).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        resolve(args, None)
    }
}

fn usage(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{key}: {msg}"))
}

fn env_tol(value: Option<&str>) -> Result<Option<f64>, CliError> {
    value
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| usage(TOL_ENV, format!("not a number: {v:?}")))
        })
        .transpose()
}

fn read_file(path: &Path) -> Result<SimArgs, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage("config", format!("{}: {}", path.display(), e.message())))
}

/// Merges flags, the config file they name, the environment and defaults.
pub fn parse(flags: SimArgs) -> Result<RunConfig, CliError> {
    let env = std::env::var(TOL_ENV).ok();
    parse_with_env(flags, env.as_deref())
}

/// [`parse`] with an explicit value for the tolerance environment variable.
pub fn parse_with_env(flags: SimArgs, env: Option<&str>) -> Result<RunConfig, CliError> {
    let merged = match &flags.config {
        Some(path) => {
            let file = read_file(path)?;
            flags.or(file)
        }
        None => flags,
    };
    resolve(merged, env_tol(env)?)
}

fn require<T>(value: Option<T>, key: &str, mode: Mode) -> Result<T, CliError> {
    value.ok_or_else(|| usage(key, format!("required in {} mode", mode_name(mode))))
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Free => "free",
        Mode::Osc => "osc",
        Mode::Spectrum => "spectrum",
        Mode::Eigfn => "eigfn",
        Mode::Instability => "instability",
    }
}

fn finite(key: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(usage(key, "must be finite"))
    }
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(key, format!("must be positive, got {v}")))
    }
}

fn resolve(a: SimArgs, env_tol: Option<f64>) -> Result<RunConfig, CliError> {
    let mode = a.mode.ok_or_else(|| usage("mode", "required"))?;
    let mass = positive("mass", a.mass.unwrap_or(1.0))?;
    let alpha = finite("alpha", a.alpha.unwrap_or(std::f64::consts::FRAC_PI_4))?;
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(usage("alpha", format!("must lie in (0, pi/2), got {alpha}")));
    }
    let omega = finite("omega", a.omega.unwrap_or(0.0))?;
    if omega < 0.0 {
        return Err(usage("omega", format!("must be non-negative, got {omega}")));
    }
    match mode {
        Mode::Free if omega != 0.0 => return Err(usage("omega", "must be 0 in free mode")),
        Mode::Osc | Mode::Spectrum if omega == 0.0 => {
            return Err(usage("omega", format!("must be positive in {} mode", mode_name(mode))))
        }
        _ => {}
    }
    let tol = finite("tol", a.tol.or(env_tol).unwrap_or(DEFAULT_TOL))?;
    if !(TOL_RANGE.0..=TOL_RANGE.1).contains(&tol) {
        return Err(usage("tol", format!("must lie in [1e-14, 1e-3], got {tol}")));
    }
    let t_end = positive("t-end", a.t_end.unwrap_or(DEFAULT_T_END))?;
    let sample_interval = positive("sample-interval", a.sample_interval.unwrap_or(DEFAULT_SAMPLE_INTERVAL))?;

    let dynamic = matches!(mode, Mode::Free | Mode::Osc | Mode::Instability);
    let (l0, pl0) = if dynamic {
        (
            finite("l0", require(a.l0, "l0", mode)?)?,
            finite("pl0", require(a.pl0, "pl0", mode)?)?,
        )
    } else {
        (a.l0.unwrap_or(0.0), a.pl0.unwrap_or(0.0))
    };
    let phi0 = finite("phi0", a.phi0.unwrap_or(0.0))?;
    let angular_momentum = match mode {
        Mode::Free | Mode::Osc => finite("J", require(a.angular_momentum, "J", mode)?)?,
        Mode::Instability => match a.angular_momentum {
            Some(j) if j != 0.0 => return Err(usage("J", "the instability base run has J = 0")),
            _ => 0.0,
        },
        _ => a.angular_momentum.unwrap_or(0.0),
    };
    if dynamic && l0 == 0.0 && angular_momentum != 0.0 {
        return Err(usage("l0", "must be nonzero when J is nonzero"));
    }

    let (j, n) = if mode == Mode::Eigfn {
        (require(a.j, "j", mode)?, require(a.n, "n", mode)?)
    } else {
        (a.j.unwrap_or(0), a.n.unwrap_or(0))
    };
    let energy = if mode == Mode::Eigfn && omega == 0.0 {
        require(a.energy, "E", mode)?
    } else {
        a.energy.unwrap_or(0.0)
    };
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(usage("E", format!("must be non-negative, got {energy}")));
    }

    let j_range = (a.j_min.unwrap_or(0), a.j_max.unwrap_or(3));
    if j_range.0 > j_range.1 {
        return Err(usage("j-min", "must not exceed j-max"));
    }
    let n_range = (a.n_min.unwrap_or(0), a.n_max.unwrap_or(4));
    if n_range.0 > n_range.1 {
        return Err(usage("n-min", "must not exceed n-max"));
    }

    let grid = Grid {
        min: finite("grid-min", a.grid_min.unwrap_or(DEFAULT_GRID.0))?,
        max: finite("grid-max", a.grid_max.unwrap_or(DEFAULT_GRID.1))?,
        points: a.grid_points.unwrap_or(DEFAULT_GRID.2),
    };
    if !(grid.min < grid.max) {
        return Err(usage("grid-min", "must be below grid-max"));
    }
    if grid.points < 2 {
        return Err(usage("grid-points", "must be at least 2"));
    }

    let upper_weight = a.upper_weight.unwrap_or(1.0);
    if !(0.0..=1.0).contains(&upper_weight) {
        return Err(usage("upper-weight", format!("must lie in [0, 1], got {upper_weight}")));
    }

    let eps = a.eps.unwrap_or_default();
    if mode == Mode::Instability && eps.is_empty() {
        return Err(usage("eps", "required in instability mode"));
    }
    for &e in &eps {
        finite("eps", e)?;
    }

    Ok(RunConfig {
        mode,
        mass,
        omega,
        alpha,
        l0,
        phi0,
        pl0,
        angular_momentum,
        tol,
        t_end,
        sample_interval,
        j,
        n,
        energy,
        j_range,
        n_range,
        grid,
        upper_weight,
        eps,
        format: a.format.unwrap_or_default(),
        output: a.output,
    })
}
