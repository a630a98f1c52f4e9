//! Command-line front end: plot data, parameter sweeps and the
//! validation battery.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::io::Write;

use config::{Cli, Command, GridSpec, RatioGridArgs, RunConfig, ZGridArgs};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] toroid_vdw::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("validation failed: {}", .0.join(", "))]
    Validation(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 1,
            Self::Config(_) => 2,
            Self::Numerical(_) | Self::Io(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let no_z = ZGridArgs::default();
    let no_ratio = RatioGridArgs::default();
    match cli.command {
        Command::Geom(c) => {
            let cfg = RunConfig::new(&c, &no_z, GridSpec::new(-10.0, 10.0, 201), &no_ratio)?;
            commands::cmd_geom(&cfg)?.emit(&cfg, "geom", c.out.as_deref())
        }
        Command::Potential(args) => {
            let cfg = RunConfig::new(&args.common, &args.z, GridSpec::new(-20.0, 20.0, 401), &no_ratio)?;
            commands::cmd_potential(&cfg, args.source_z, args.cut)?.emit(&cfg, "potential", args.common.out.as_deref())
        }
        Command::ChargeEnergy(args) => {
            let cfg = RunConfig::new(&args.common, &args.z, GridSpec::new(-20.0, 20.0, 401), &no_ratio)?;
            commands::cmd_charge_energy(&cfg)?.emit(&cfg, "charge-energy", args.common.out.as_deref())
        }
        Command::Vdw(args) => {
            let cfg = RunConfig::new(&args.common, &args.z, GridSpec::new(-10.0, 10.0, 401), &no_ratio)?;
            commands::cmd_vdw(&cfg, args.quantity)?.emit(&cfg, "vdw", args.common.out.as_deref())
        }
        Command::SweepRatio(args) => {
            let cfg = RunConfig::new(
                &args.common,
                &no_z,
                GridSpec::new(-10.0, 10.0, 201),
                &RatioGridArgs {
                    ratio_points: args.ratio.ratio_points.or(Some(200)),
                    ..args.ratio.clone()
                },
            )?;
            commands::cmd_sweep_ratio(&cfg, &args.zp)?.emit(&cfg, "sweep-ratio", args.common.out.as_deref())
        }
        Command::Contour(args) => {
            let b = args.common.b;
            let cfg = RunConfig::new(&args.common, &args.z, GridSpec::new(0.0, 10.0 * b, 41), &args.ratio)?;
            commands::cmd_contour(&cfg)?.emit(&cfg, "contour", args.common.out.as_deref())
        }
        Command::Validate(c) => {
            let cfg = RunConfig::new(&c, &no_z, GridSpec::new(-10.0, 10.0, 201), &no_ratio)?;
            let report = validate::run_battery(&cfg);
            let body = match cfg.format {
                config::Format::Csv => report.csv()?,
                config::Format::Json => serde_json::to_string_pretty(&serde_json::json!({
                    "config": cfg,
                    "library_version": toroid_vdw::VERSION,
                    "checks": report.checks,
                }))? + "\n",
            };
            match c.out.as_deref() {
                Some(p) => std::fs::write(p, body)?,
                None => std::io::stdout().lock().write_all(body.as_bytes())?,
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Validation(report.failed()))
            }
        }
    }
}
