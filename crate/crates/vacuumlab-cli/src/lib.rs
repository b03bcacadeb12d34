//! Command-line front end for vacuumlab: config parsing, dispatch and
//! CSV/JSON output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

pub use config::{parse_config, RunConfig};
pub use error::{CliError, Result};

/// Merge an optional config file with the flags and validate the result.
pub fn resolve<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = args::parse_args(argv)?;
    let flags = args.to_config()?;
    let base = match &args.config {
        Some(path) => parse_config(&fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    let cfg = base.overlay(flags);
    cfg.command()?;
    Ok(cfg)
}

/// Run a resolved config and write its table. Returns the process exit
/// code: 0 on success, 1 when a validation criterion failed.
pub fn execute<W: Write>(cfg: &RunConfig, stdout: W) -> Result<i32> {
    let mut run = commands::dispatch(cfg)?;
    run.table.meta.insert(0, ("units".into(), commands::describe_units(cfg.units()).into()));
    run.table.meta.insert(0, ("vacuumlab".into(), env!("CARGO_PKG_VERSION").into()));
    let format = cfg.format();
    match &cfg.output {
        Some(path) => run.table.write(format, fs::File::create(path)?)?,
        None => run.table.write(format, stdout)?,
    }
    if let (Some(path), Some(json)) = (&cfg.summary, &run.summary_json) {
        fs::write(path, serde_json::to_string_pretty(json)? + "\n")?;
    }
    Ok(if run.failed { 1 } else { 0 })
}
