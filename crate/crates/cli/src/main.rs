//! `implantphy`: link runs, table and figure reproduction, duty-cycle sweeps.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod format;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Context;

#[derive(Debug, Parser)]
#[command(name = "implantphy", version, about = "LT-coded NC-MFSK implant uplink simulator")]
struct Cli {
    /// TOML scenario file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// CSV destination; stdout if absent. A manifest is written alongside.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one frame end to end.
    LinkRun(LinkRunArgs),
    /// Print the calibration tables or check their consistency.
    Tables(TablesArgs),
    /// Best uncoded and coded energy versus distance.
    Figure5(Figure5Args),
    /// Active time and duty cycle across operating points.
    DutyCycle(DutyCycleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Uncoded,
    Coded,
    Auto,
}

#[derive(Debug, Args)]
pub struct LinkRunArgs {
    #[arg(long, visible_alias = "distance")]
    pub distance_mm: f64,
    #[arg(long)]
    pub pb: Option<f64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Auto)]
    pub scheme: SchemeArg,
    /// Channel SNR in dB instead of the operating point's design SNR.
    #[arg(long)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub block_size: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WhichTable {
    /// M = 2.
    V,
    /// M = 4.
    Vi,
    Consistency,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value_t = WhichTable::Consistency)]
    pub which: WhichTable,
    /// Add density-evolution rates and deltas.
    #[arg(long)]
    pub de: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ScenarioArg {
    Deep,
    Near,
}

#[derive(Debug, Args)]
pub struct Figure5Args {
    #[arg(long)]
    pub pb: Option<f64>,
    /// Path-loss parameter set; the config's if absent.
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioArg>,
    /// Distance grid in mm, `start:stop:step`.
    #[arg(long, default_value = "30:300:1")]
    pub grid: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SweepArg {
    Snr,
    Distance,
}

#[derive(Debug, Args)]
pub struct DutyCycleArgs {
    #[arg(long, value_enum, default_value_t = SweepArg::Snr)]
    pub sweep: SweepArg,
    #[arg(long)]
    pub pb: Option<f64>,
    /// Distance grid in mm for `--sweep distance`, `start:stop:step`.
    #[arg(long, default_value = "30:300:10")]
    pub grid: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let invocation = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let result = Context::load(cli.config.as_deref(), cli.seed, cli.out.clone(), invocation).and_then(|ctx| {
        let checks_passed = match &cli.command {
            Command::LinkRun(a) => commands::link_run(&ctx, a)?,
            Command::Tables(a) => commands::tables(&ctx, a)?,
            Command::Figure5(a) => commands::figure5(&ctx, a)?,
            Command::DutyCycle(a) => commands::duty_cycle(&ctx, a)?,
        };
        Ok(checks_passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("implantphy: {}", e.error);
            ExitCode::from(e.code)
        }
    }
}

