//! Flat key-value run configuration. A TOML file and command-line flags
//! both produce a [`RunConfig`]; flags are laid over the file.

use serde::{Deserialize, Serialize};
use vacuumlab::quadrature::{OscillatoryStrategy, QuadratureSpec};
use vacuumlab::units::{km_to_planck, metres_to_planck, AU_KM, PLANCK_LENGTH_KM, PLANCK_LENGTH_M};

use crate::error::{CliError, Result};

/// Largest grid or sweep accepted from a config.
pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Delta,
    Coulomb,
    Cavity,
    Casimir,
    Stats,
    Shift,
    Validate,
    Sweep,
}

impl std::str::FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "delta" => Command::Delta,
            "coulomb" => Command::Coulomb,
            "cavity" => Command::Cavity,
            "casimir" => Command::Casimir,
            "stats" => Command::Stats,
            "shift" => Command::Shift,
            "validate" => Command::Validate,
            "sweep" => Command::Sweep,
            other => return Err(CliError::Config(format!("unknown command '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// Planck units, the library's native scale
    #[default]
    Planck,
    M,
    Km,
    Au,
}

impl Units {
    /// Planck lengths per unit.
    pub fn to_planck(self) -> f64 {
        match self {
            Units::Planck => 1.0,
            Units::M => metres_to_planck(1.0),
            Units::Km => km_to_planck(1.0),
            Units::Au => km_to_planck(AU_KM),
        }
    }

    /// Units per Planck length.
    pub fn from_planck(self) -> f64 {
        match self {
            Units::Planck => 1.0,
            Units::M => PLANCK_LENGTH_M,
            Units::Km => PLANCK_LENGTH_KM,
            Units::Au => PLANCK_LENGTH_KM / AU_KM,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Units::Planck => "planck",
            Units::M => "m",
            Units::Km => "km",
            Units::Au => "au",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    Box,
    Lorentz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeName {
    Lambda,
    M,
    Shifted,
    Pv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyName {
    Series,
    Filon,
}

/// Every recognised key. All optional; which ones are required depends on
/// the command.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// command run for each value of a sweep
    pub target: Option<Command>,

    pub units: Option<Units>,
    pub format: Option<Format>,
    pub output: Option<String>,
    pub summary: Option<String>,

    pub profile: Option<ProfileName>,
    pub lambda2: Option<f64>,
    pub y0: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub q: Option<f64>,

    pub rmin: Option<f64>,
    pub rmax: Option<f64>,
    pub points: Option<u64>,

    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gap: Option<f64>,
    pub kmin: Option<f64>,
    pub kmax: Option<f64>,
    pub dims: Option<u32>,

    pub shape: Option<ShapeName>,
    pub n: Option<u64>,
    pub j: Option<u64>,
    pub a: Option<f64>,

    pub probs: Option<Vec<f64>>,
    pub intensities: Option<Vec<f64>>,
    pub oscillators: Option<u64>,
    pub nmax: Option<u64>,

    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_subdivisions: Option<u64>,
    pub strategy: Option<StrategyName>,

    pub parameter: Option<String>,
    pub values: Option<Vec<f64>>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),* $(,)?) => {
        $(if $top.$f.is_some() {
            $base.$f = $top.$f;
        })*
    };
}

impl RunConfig {
    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: RunConfig) -> RunConfig {
        overlay!(self, top;
            command, target, units, format, output, summary,
            profile, lambda2, y0, k1, k2, q, rmin, rmax, points,
            alpha, beta, gap, kmin, kmax, dims,
            shape, n, j, a, probs, intensities, oscillators, nmax,
            abs_tol, rel_tol, max_subdivisions, strategy, parameter, values);
        self
    }

    pub fn command(&self) -> Result<Command> {
        self.command
            .ok_or_else(|| CliError::Config("no command given".into()))
    }

    pub fn units(&self) -> Units {
        self.units.unwrap_or_default()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// Set a numeric key by name; used by sweeps.
    pub fn set_number(&mut self, key: &str, v: f64) -> Result<()> {
        let int = |v: f64| -> Result<Option<u64>> {
            if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 {
                Ok(Some(v as u64))
            } else {
                Err(CliError::Config(format!("'{key}' needs a non-negative integer, got {v}")))
            }
        };
        match key {
            "lambda2" => self.lambda2 = Some(v),
            "y0" => self.y0 = Some(v),
            "k1" => self.k1 = Some(v),
            "k2" => self.k2 = Some(v),
            "q" => self.q = Some(v),
            "rmin" => self.rmin = Some(v),
            "rmax" => self.rmax = Some(v),
            "alpha" => self.alpha = Some(v),
            "beta" => self.beta = Some(v),
            "gap" => self.gap = Some(v),
            "kmin" => self.kmin = Some(v),
            "kmax" => self.kmax = Some(v),
            "a" => self.a = Some(v),
            "abs_tol" => self.abs_tol = Some(v),
            "rel_tol" => self.rel_tol = Some(v),
            "points" => self.points = int(v)?,
            "n" => self.n = int(v)?,
            "j" => self.j = int(v)?,
            "oscillators" | "N" => self.oscillators = int(v)?,
            "nmax" => self.nmax = int(v)?,
            "dims" => self.dims = int(v)?.map(|x| x.min(u32::MAX as u64) as u32),
            other => return Err(CliError::Config(format!("'{other}' cannot be swept"))),
        }
        Ok(())
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let d = QuadratureSpec::default();
        let spec = QuadratureSpec {
            abs_tol: self.abs_tol.unwrap_or(d.abs_tol),
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            max_subdivisions: self
                .max_subdivisions
                .map(|m| m.min(10_000_000) as usize)
                .unwrap_or(d.max_subdivisions),
            oscillatory_strategy: match self.strategy {
                None => d.oscillatory_strategy,
                Some(StrategyName::Series) => OscillatoryStrategy::SeriesTermwise,
                Some(StrategyName::Filon) => OscillatoryStrategy::FilonSegments,
            },
        };
        spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
        if spec.max_subdivisions == 0 {
            return Err(CliError::Config("max_subdivisions must be positive".into()));
        }
        Ok(spec)
    }
}

/// Required key or a ConfigError naming it.
pub fn need<T: Copy>(v: Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("missing '{key}'")))
}

pub fn positive(v: f64, key: &str) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("'{key}' must be a positive number, got {v}")))
    }
}

pub fn grid_points(v: Option<u64>, default: u64) -> Result<usize> {
    let p = v.unwrap_or(default);
    if !(2..=MAX_POINTS as u64).contains(&p) {
        return Err(CliError::Config(format!("'points' must lie in 2..={MAX_POINTS}, got {p}")));
    }
    Ok(p as usize)
}
