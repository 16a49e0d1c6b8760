//! `pslab shapes`: run the nilpotent-shapes construction and certification.
//! Exit 0 iff the verification passed.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use pslab_core::contour::extract_level;
use pslab_core::field::{compute_field_with, GridSpec};
use pslab_core::linalg::sigma_min;
use pslab_core::render::{level_color, render_svg, SvgLayer};
use pslab_core::shapes::{construct_with_cap, ShapeProblem, LADDER_CAP};
use pslab_core::{Result, ShapeResult};

use crate::config::{FileConfig, DEFAULT_SEED};
use crate::util::{ensure_out_dir, read_input, write_out};

#[derive(Args)]
pub struct ShapesArgs {
    /// Shape problem JSON: {"domains":[...],"eps1":0.15}.
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the chain boundaries and extracted contours.
    #[arg(long)]
    svg: bool,
    /// Omit block matrices from the result JSON.
    #[arg(long)]
    elide_blocks: bool,
    /// Doubling-ladder cap for block sizes.
    #[arg(long)]
    ladder_cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct EffectiveConfig {
    command: &'static str,
    problem: String,
    out: String,
    svg: bool,
    elide_blocks: bool,
    ladder_cap: usize,
    seed: u64,
}

pub fn run(args: ShapesArgs, cfg: &FileConfig) -> Result<u8> {
    let out = args
        .out
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let svg = args.svg || cfg.svg.unwrap_or(false);
    let elide = args.elide_blocks || cfg.elide_blocks.unwrap_or(false);
    let ladder_cap = args.ladder_cap.or(cfg.ladder_cap).unwrap_or(LADDER_CAP);

    let problem = ShapeProblem::from_json(&read_input(&args.problem)?)?;

    ensure_out_dir(&out)?;
    let effective = EffectiveConfig {
        command: "shapes",
        problem: args.problem.display().to_string(),
        out: out.display().to_string(),
        svg,
        elide_blocks: elide,
        ladder_cap,
        seed,
    };
    write_out(
        &out,
        "run.json",
        &serde_json::to_string_pretty(&effective).expect("config"),
    )?;

    let result = construct_with_cap(&problem, ladder_cap)?;

    write_out(&out, "result.json", &result.to_json(elide))?;
    write_out(
        &out,
        "verification.json",
        &serde_json::to_string_pretty(&result.verification).expect("report"),
    )?;
    for (k, block) in result.blocks.iter().enumerate() {
        write_out(
            &out,
            &format!("block_{}.json", k + 1),
            &block.matrix.to_json(),
        )?;
    }

    if svg {
        write_out(&out, "chain.svg", &render_chain(&problem, &result)?)?;
    }

    Ok(if result.verification.pass { 0 } else { 1 })
}

/// Chain boundaries in gray, planned domains dashed-gray (as a second gray
/// layer), extracted eps-contours colored per level.
fn render_chain(problem: &ShapeProblem, result: &ShapeResult) -> Result<String> {
    // bounding box from the outermost domain
    let g0 = problem.domains[0].boundary_samples(256);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in &g0 {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let pad = 0.25 * (x1 - x0).max(y1 - y0);
    let grid = GridSpec::new(x0 - pad, x1 + pad, y0 - pad, y1 + pad, 129, 129)?;

    let blocks = &result.blocks;
    let field = compute_field_with(&grid, |z| {
        blocks
            .iter()
            .map(|b| sigma_min(&b.matrix.minus_scalar(z)).unwrap_or(f64::INFINITY))
            .fold(f64::INFINITY, f64::min)
    });

    let mut contour_layers = Vec::new();
    for &eps in &result.eps {
        contour_layers.push(extract_level(&field, eps)?);
    }

    let closed = |d: &pslab_core::DomainSpec| -> Vec<[f64; 2]> {
        let mut pts: Vec<[f64; 2]> = d
            .boundary_samples(256)
            .iter()
            .map(|p| [p.re, p.im])
            .collect();
        if let Some(first) = pts.first().copied() {
            pts.push(first);
        }
        pts
    };
    let domain_polys: Vec<Vec<[f64; 2]>> = problem.domains.iter().map(closed).collect();
    let omega_polys: Vec<Vec<[f64; 2]>> = result.omegas.iter().map(closed).collect();

    let mut layers = vec![
        SvgLayer {
            polylines: &domain_polys,
            color: "#444444",
            width: 1.0,
        },
        SvgLayer {
            polylines: &omega_polys,
            color: "#bbbbbb",
            width: 0.8,
        },
    ];
    for (k, ls) in contour_layers.iter().enumerate() {
        layers.push(SvgLayer {
            polylines: &ls.polylines,
            color: level_color(k),
            width: 1.5,
        });
    }
    Ok(render_svg(
        grid.x_min, grid.x_max, grid.y_min, grid.y_max, 720.0, &layers,
    ))
}
