//! `pslab field`: Psi field CSV plus optional level-set JSON and SVG.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use pslab_core::contour::extract_level;
use pslab_core::field::{compute_field, GridSpec};
use pslab_core::render::{level_color, render_svg, SvgLayer};
use pslab_core::{CMatrix, Error, LevelSet, OperatorModel, Result};

use crate::config::{FileConfig, DEFAULT_SEED};
use crate::util::{ensure_out_dir, parse_levels, read_input, write_out};

#[derive(Args)]
pub struct FieldArgs {
    /// Matrix JSON file ({"rows":..,"cols":..,"data":[[re,im],..]}).
    #[arg(long, conflicts_with = "model")]
    matrix: Option<PathBuf>,
    /// Operator-model JSON file; sectioned at --n.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Section size for --model.
    #[arg(long)]
    n: Option<usize>,
    /// Grid: xmin:xmax:ymin:ymax:nx:ny.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Comma-separated epsilon levels to contour.
    #[arg(long)]
    levels: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Pixel size of the longer SVG side.
    #[arg(long)]
    svg_size: Option<f64>,
}

#[derive(Serialize)]
struct EffectiveConfig<'a> {
    command: &'static str,
    matrix: Option<String>,
    model: Option<String>,
    n: usize,
    grid: &'a str,
    levels: Vec<f64>,
    out: String,
    seed: u64,
    svg_size: f64,
}

pub fn run(args: FieldArgs, cfg: &FileConfig) -> Result<u8> {
    let grid_str = args
        .grid
        .or_else(|| cfg.grid.clone())
        .ok_or_else(|| Error::invalid("field needs --grid xmin:xmax:ymin:ymax:nx:ny"))?;
    let grid = GridSpec::parse(&grid_str)?;
    let out = args
        .out
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let n = args.n.or(cfg.n).unwrap_or(64);
    let levels = match args.levels.or_else(|| cfg.levels.clone()) {
        Some(s) => parse_levels(&s)?,
        None => Vec::new(),
    };
    let svg_size = args.svg_size.or(cfg.svg_size).unwrap_or(640.0);

    let matrix = match (&args.matrix, &args.model) {
        (Some(path), None) => CMatrix::from_json(&read_input(path)?)?,
        (None, Some(path)) => OperatorModel::from_json(&read_input(path)?)?.section(n)?,
        _ => {
            return Err(Error::invalid(
                "field needs exactly one of --matrix or --model",
            ))
        }
    };
    if !matrix.is_square() {
        return Err(Error::invalid("field needs a square matrix"));
    }

    ensure_out_dir(&out)?;
    let effective = EffectiveConfig {
        command: "field",
        matrix: args.matrix.as_ref().map(|p| p.display().to_string()),
        model: args.model.as_ref().map(|p| p.display().to_string()),
        n,
        grid: &grid_str,
        levels: levels.clone(),
        out: out.display().to_string(),
        seed,
        svg_size,
    };
    write_out(
        &out,
        "run.json",
        &serde_json::to_string_pretty(&effective).expect("config"),
    )?;

    let field = compute_field(&matrix, &grid)?;
    write_out(&out, "field.csv", &field.to_csv())?;

    if !levels.is_empty() {
        let sets: Vec<LevelSet> = levels
            .iter()
            .map(|&eps| extract_level(&field, eps))
            .collect::<Result<_>>()?;
        let json = serde_json::to_string_pretty(&sets).expect("level sets");
        write_out(&out, "levels.json", &json)?;

        let layers: Vec<SvgLayer<'_>> = sets
            .iter()
            .enumerate()
            .map(|(k, ls)| SvgLayer {
                polylines: &ls.polylines,
                color: level_color(k),
                width: 1.5,
            })
            .collect();
        let svg = render_svg(
            grid.x_min, grid.x_max, grid.y_min, grid.y_max, svg_size, &layers,
        );
        write_out(&out, "levels.svg", &svg)?;
    }
    Ok(0)
}
