//! Command-line flags, turned into a [`RunConfig`] overlay.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{Command, Format, ProfileName, RunConfig, ShapeName, StrategyName, Units};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "vacuumlab", version, about = "Regularized-vacuum numerics: experiments, sweeps and validation")]
pub struct Args {
    /// delta, coulomb, cavity, casimir, stats, shift, validate or sweep
    pub command: Option<String>,
    /// command to run at each sweep value
    pub target: Option<String>,

    /// TOML file with default values; flags win
    #[arg(long, short = 'c')]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
    /// output format
    #[arg(long = "out", value_enum)]
    pub format: Option<FormatArg>,
    /// output file (stdout when absent)
    #[arg(long, short = 'o')]
    pub output: Option<String>,
    /// JSON summary file (coulomb)
    #[arg(long)]
    pub summary: Option<String>,

    #[arg(long, value_enum)]
    pub profile: Option<ProfileArg>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub y0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k2: Option<f64>,
    /// bare charge
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    pub rmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rmax: Option<f64>,
    #[arg(long)]
    pub points: Option<u64>,

    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// plate separation L or plane distance
    #[arg(long, allow_negative_numbers = true)]
    pub gap: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kmin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kmax: Option<f64>,
    /// 1 for the 1+1 plates, 3 for 3+1
    #[arg(long)]
    pub dims: Option<u32>,

    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub j: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub probs: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub intensities: Option<Vec<f64>>,
    /// number of oscillators N
    #[arg(long)]
    pub oscillators: Option<u64>,
    #[arg(long)]
    pub nmax: Option<u64>,

    #[arg(long, allow_negative_numbers = true)]
    pub abs_tol: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<u64>,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,

    /// swept key
    #[arg(long = "param")]
    pub parameter: Option<String>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub values: Option<Vec<f64>>,
}

macro_rules! mirror_enum {
    ($arg:ident => $target:ident { $($v:ident => $t:ident),* $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
        pub enum $arg { $($v),* }
        impl From<$arg> for $target {
            fn from(a: $arg) -> $target {
                match a { $($arg::$v => $target::$t),* }
            }
        }
    };
}

mirror_enum!(UnitsArg => Units { Planck => Planck, M => M, Km => Km, Au => Au });
mirror_enum!(FormatArg => Format { Csv => Csv, Json => Json });
mirror_enum!(ProfileArg => ProfileName { Box => Box, Lorentz => Lorentz });
mirror_enum!(ShapeArg => ShapeName { Lambda => Lambda, M => M, Shifted => Shifted, Pv => Pv });
mirror_enum!(StrategyArg => StrategyName { Series => Series, Filon => Filon });

/// Parse flags without touching the filesystem.
pub fn parse_args<I, T>(argv: I) -> Result<Args>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Ok(Args::try_parse_from(argv)?)
}

impl Args {
    /// The flags as a config overlay. A positional command of `sweep`
    /// takes the following positional as its target.
    pub fn to_config(&self) -> Result<RunConfig> {
        let command = self.command.as_deref().map(str::parse::<Command>).transpose()?;
        let target = self.target.as_deref().map(str::parse::<Command>).transpose()?;
        if target.is_some() && command != Some(Command::Sweep) {
            return Err(CliError::Config("a second positional is only valid after 'sweep'".into()));
        }
        Ok(RunConfig {
            command,
            target,
            units: self.units.map(Into::into),
            format: self.format.map(Into::into),
            output: self.output.clone(),
            summary: self.summary.clone(),
            profile: self.profile.map(Into::into),
            lambda2: self.lambda2,
            y0: self.y0,
            k1: self.k1,
            k2: self.k2,
            q: self.q,
            rmin: self.rmin,
            rmax: self.rmax,
            points: self.points,
            alpha: self.alpha,
            beta: self.beta,
            gap: self.gap,
            kmin: self.kmin,
            kmax: self.kmax,
            dims: self.dims,
            shape: self.shape.map(Into::into),
            n: self.n,
            j: self.j,
            a: self.a,
            probs: self.probs.clone(),
            intensities: self.intensities.clone(),
            oscillators: self.oscillators,
            nmax: self.nmax,
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            strategy: self.strategy.map(Into::into),
            parameter: self.parameter.clone(),
            values: self.values.clone(),
        })
    }
}
