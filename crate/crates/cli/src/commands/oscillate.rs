//! `pslab oscillate`: the square-root oscillation scan, plus the
//! `multiplier` sub-mode for ||f(J_N)|| growth tables.

use std::path::PathBuf;

use clap::{Args, Subcommand};
use serde::Serialize;

use pslab_core::matfun::{multiplier_growth, oscillation_scan, scan_to_csv};
use pslab_core::series::{log_reciprocal_one_minus_z, sqrt_one_minus_z};
use pslab_core::{Error, PowerSeries, Result};

use crate::config::{FileConfig, DEFAULT_SEED};
use crate::util::{ensure_out_dir, parse_ladder, read_input, write_out};

#[derive(Args)]
pub struct OscillateArgs {
    #[command(subcommand)]
    mode: Option<OscillateMode>,
    /// Circle radius r in (0, 1/2): tau ranges over |tau - 1| = r.
    #[arg(long)]
    r: Option<f64>,
    /// Norm threshold M for the first-crossing size N*.
    #[arg(long = "M", visible_alias = "threshold")]
    threshold: Option<f64>,
    /// Sizes ladder (start:stop:step, start:stop doubling, or one size).
    #[arg(long)]
    ladder: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
pub enum OscillateMode {
    /// Table of ||q(J_N)|| over a ladder of sizes.
    Multiplier(MultiplierArgs),
}

#[derive(Args)]
pub struct MultiplierArgs {
    /// Series: `sqrt1mz`, `log1m1z`, or a JSON coefficient file.
    #[arg(long)]
    series: Option<String>,
    #[arg(long)]
    ladder: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ScanConfig {
    command: &'static str,
    r: f64,
    threshold: f64,
    ladder: String,
    out: String,
    seed: u64,
}

#[derive(Serialize)]
struct MultiplierConfig {
    command: &'static str,
    series: String,
    ladder: String,
    out: String,
    seed: u64,
}

pub fn run(args: OscillateArgs, cfg: &FileConfig) -> Result<u8> {
    match args.mode {
        Some(OscillateMode::Multiplier(margs)) => run_multiplier(margs, cfg),
        None => run_scan(args, cfg),
    }
}

fn run_scan(args: OscillateArgs, cfg: &FileConfig) -> Result<u8> {
    let r = args
        .r
        .or(cfg.r)
        .ok_or_else(|| Error::invalid("oscillate needs --r in (0, 1/2)"))?;
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::invalid(format!("--r must lie in (0, 1/2), got {r}")));
    }
    let threshold = args.threshold.or(cfg.threshold).unwrap_or(1e6);
    let ladder_str = args
        .ladder
        .or_else(|| cfg.ladder.clone())
        .unwrap_or_else(|| "40:120:20".into());
    let ladder = parse_ladder(&ladder_str)?;
    let out = args
        .out
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);

    ensure_out_dir(&out)?;
    let effective = ScanConfig {
        command: "oscillate",
        r,
        threshold,
        ladder: ladder_str,
        out: out.display().to_string(),
        seed,
    };
    write_out(
        &out,
        "run.json",
        &serde_json::to_string_pretty(&effective).expect("config"),
    )?;

    let scan = oscillation_scan(r, threshold, &ladder)?;
    // CSV plus the tau = 1 contrast line
    let mut csv = scan_to_csv(&scan);
    csv.push_str(&format!(
        "tau1_contrast,{},1,0,0\n",
        scan.contrast_tau1_norm
    ));
    write_out(&out, "scan.csv", &csv)?;
    write_out(
        &out,
        "scan.json",
        &serde_json::to_string_pretty(&scan).expect("scan"),
    )?;
    Ok(0)
}

fn run_multiplier(args: MultiplierArgs, cfg: &FileConfig) -> Result<u8> {
    let ladder_str = args
        .ladder
        .or_else(|| cfg.ladder.clone())
        .unwrap_or_else(|| "64:512".into());
    let ladder = parse_ladder(&ladder_str)?;
    let n_max = *ladder.iter().max().expect("nonempty");
    let series_name = args
        .series
        .or_else(|| cfg.series.clone())
        .ok_or_else(|| Error::invalid("multiplier needs --series sqrt1mz|log1m1z|FILE"))?;
    let series: PowerSeries = match series_name.as_str() {
        "sqrt1mz" => sqrt_one_minus_z(n_max),
        "log1m1z" => log_reciprocal_one_minus_z(n_max),
        path => PowerSeries::from_json(&read_input(std::path::Path::new(path))?)?,
    };
    let out = args
        .out
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);

    ensure_out_dir(&out)?;
    let effective = MultiplierConfig {
        command: "oscillate multiplier",
        series: series_name,
        ladder: ladder_str,
        out: out.display().to_string(),
        seed,
    };
    write_out(
        &out,
        "run.json",
        &serde_json::to_string_pretty(&effective).expect("config"),
    )?;

    let rows = multiplier_growth(&series, &ladder)?;
    let mut csv = String::from("n,norm\n");
    for (n, norm) in &rows {
        csv.push_str(&format!("{n},{norm}\n"));
    }
    write_out(&out, "multiplier.csv", &csv)?;
    Ok(0)
}
