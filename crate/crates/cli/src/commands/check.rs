//! `pslab check`: inequality checkers on a matrix, or convergence studies
//! on an operator model. Exit 0 when everything passes, 1 when any check
//! reports a violation (the reports are still written).

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use pslab_core::checks::standard_suite;
use pslab_core::field::GridSpec;
use pslab_core::linalg::sigma_min;
use pslab_core::models::{convergence_study, study_to_csv, support_convergence, support_to_csv};
use pslab_core::{cx, CMatrix, Error, Lcg64, OperatorModel, PropertyReport, Result};

use crate::config::{FileConfig, DEFAULT_SEED};
use crate::util::{ensure_out_dir, parse_ladder, read_input, write_out};

const ALL_PROPS: &str = "lip1,band,ratio,semiconvex,subharmonic";

#[derive(Args)]
pub struct CheckArgs {
    /// Matrix JSON file to check properties on.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Random dense complex matrix of this size (seeded).
    #[arg(long)]
    random: Option<usize>,
    /// Operator-model JSON file (for --study).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Properties: any of lip1,band,ratio,semiconvex,subharmonic.
    #[arg(long)]
    props: Option<String>,
    /// Studies: any of sections,support.
    #[arg(long)]
    study: Option<String>,
    /// Samples per property.
    #[arg(long)]
    samples: Option<usize>,
    /// Section sizes ladder (start:stop doubling, start:stop:step, or one).
    #[arg(long)]
    sizes: Option<String>,
    /// Grid for the sections study.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Pass tolerance for the sections study's final sup error.
    #[arg(long)]
    tol: Option<f64>,
    /// Number of equispaced support-function angles.
    #[arg(long)]
    thetas: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct EffectiveConfig {
    command: &'static str,
    matrix: Option<String>,
    random: Option<usize>,
    model: Option<String>,
    props: Option<String>,
    study: Option<String>,
    samples: usize,
    sizes: String,
    grid: String,
    tol: f64,
    thetas: usize,
    out: String,
    seed: u64,
}

#[derive(Serialize)]
struct NegativeControl {
    z: [f64; 2],
    square_j: f64,
    rect_j: f64,
    gap: f64,
}

#[derive(Serialize)]
struct SectionsReport {
    model_qt_standard: bool,
    rows: Vec<pslab_core::models::StudyRow>,
    final_sup_error: f64,
    nonincreasing: bool,
    tolerance: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    negative_control: Option<NegativeControl>,
}

#[derive(Serialize)]
struct SupportReport {
    rows: Vec<(f64, usize, f64)>,
    monotone_nondecreasing: bool,
    pass: bool,
}

pub fn run(args: CheckArgs, cfg: &FileConfig) -> Result<u8> {
    let out = args
        .out
        .or_else(|| cfg.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let seed = args.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let samples = args.samples.or(cfg.samples).unwrap_or(200);
    let sizes_str = args
        .sizes
        .or_else(|| cfg.sizes.clone())
        .unwrap_or_else(|| "16:256".into());
    let grid_str = args
        .grid
        .or_else(|| cfg.grid.clone())
        .unwrap_or_else(|| "-2:2:-2:2:24:24".into());
    let tol = args.tol.or(cfg.tol).unwrap_or(1e-2);
    let thetas_count = args.thetas.or(cfg.thetas).unwrap_or(8);
    let props = args.props.or_else(|| cfg.props.clone());
    let study = args.study.or_else(|| cfg.study.clone());
    if props.is_none() && study.is_none() {
        return Err(Error::invalid("check needs --props and/or --study"));
    }

    ensure_out_dir(&out)?;
    let effective = EffectiveConfig {
        command: "check",
        matrix: args.matrix.as_ref().map(|p| p.display().to_string()),
        random: args.random,
        model: args.model.as_ref().map(|p| p.display().to_string()),
        props: props.clone(),
        study: study.clone(),
        samples,
        sizes: sizes_str.clone(),
        grid: grid_str.clone(),
        tol,
        thetas: thetas_count,
        out: out.display().to_string(),
        seed,
    };
    write_out(
        &out,
        "run.json",
        &serde_json::to_string_pretty(&effective).expect("config"),
    )?;

    let mut all_pass = true;

    if let Some(props) = props {
        let matrix = match (&args.matrix, args.random) {
            (Some(path), None) => CMatrix::from_json(&read_input(path)?)?,
            (None, Some(n)) => {
                if n == 0 {
                    return Err(Error::invalid("--random needs size >= 1"));
                }
                Lcg64::new(seed).matrix(n, n)
            }
            _ => {
                return Err(Error::invalid(
                    "property checks need exactly one of --matrix or --random",
                ))
            }
        };
        if !matrix.is_square() {
            return Err(Error::invalid("property checks need a square matrix"));
        }
        let list = if props.trim() == "all" {
            ALL_PROPS
        } else {
            props.trim()
        };
        let names: Vec<&str> = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if names.is_empty() {
            return Err(Error::invalid("empty --props list"));
        }
        let reports: Vec<PropertyReport> = standard_suite(&matrix, seed, samples, &names)?;
        for report in &reports {
            all_pass &= report.pass;
            write_out(
                &out,
                &format!("report_{}.json", report.name),
                &serde_json::to_string_pretty(report).expect("report"),
            )?;
        }
        write_out(
            &out,
            "report.json",
            &serde_json::to_string_pretty(&reports).expect("reports"),
        )?;
    }

    if let Some(study) = study {
        let model_path = args
            .model
            .as_ref()
            .ok_or_else(|| Error::invalid("studies need --model"))?;
        let model = OperatorModel::from_json(&read_input(model_path)?)?;
        let sizes = parse_ladder(&sizes_str)?;
        for kind in study.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match kind {
                "sections" => {
                    let grid = GridSpec::parse(&grid_str)?;
                    let rows = convergence_study(&model, &grid, &sizes)?;
                    write_out(&out, "sections.csv", &study_to_csv(&rows))?;
                    let final_err = rows.last().map(|r| r.sup_error).unwrap_or(f64::NAN);
                    let nonincreasing = rows
                        .windows(2)
                        .all(|w| w[1].sup_error <= w[0].sup_error + 1e-12);
                    let qt = model.qt_standard();
                    let negative_control = if qt {
                        None
                    } else {
                        // persistent square-vs-rectangular gap witness at z = 0
                        let n = *sizes.last().expect("nonempty");
                        let square_j = sigma_min(&model.section(n)?.minus_scalar(cx(0.0, 0.0)))?;
                        let rect_j = sigma_min(&model.rect_section_shifted(cx(0.0, 0.0), n)?)?;
                        Some(NegativeControl {
                            z: [0.0, 0.0],
                            square_j,
                            rect_j,
                            gap: (rect_j - square_j).abs(),
                        })
                    };
                    let pass = qt && nonincreasing && final_err <= tol;
                    all_pass &= pass;
                    let report = SectionsReport {
                        model_qt_standard: qt,
                        rows,
                        final_sup_error: final_err,
                        nonincreasing,
                        tolerance: tol,
                        pass,
                        negative_control,
                    };
                    write_out(
                        &out,
                        "sections_report.json",
                        &serde_json::to_string_pretty(&report).expect("report"),
                    )?;
                }
                "support" => {
                    let thetas: Vec<f64> = (0..thetas_count)
                        .map(|k| std::f64::consts::TAU * k as f64 / thetas_count as f64)
                        .collect();
                    let rows = support_convergence(&model, &thetas, &sizes)?;
                    write_out(&out, "support.csv", &support_to_csv(&rows))?;
                    // per theta, rho must be nondecreasing in n
                    let monotone = rows
                        .chunks(sizes.len())
                        .all(|chunk| chunk.windows(2).all(|w| w[1].2 >= w[0].2 - 1e-10));
                    all_pass &= monotone;
                    let report = SupportReport {
                        rows,
                        monotone_nondecreasing: monotone,
                        pass: monotone,
                    };
                    write_out(
                        &out,
                        "support_report.json",
                        &serde_json::to_string_pretty(&report).expect("report"),
                    )?;
                }
                other => {
                    return Err(Error::invalid(format!(
                        "unknown study `{other}` (expected sections, support)"
                    )))
                }
            }
        }
    }

    Ok(if all_pass { 0 } else { 1 })
}
