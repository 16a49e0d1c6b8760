//! Triangular-Toeplitz functional calculus on Jordan blocks and the
//! square-root oscillation experiments.
//!
//! For a function `phi` analytic at 0, `phi(J_N)` is the lower-triangular
//! Toeplitz matrix whose first column holds the Taylor coefficients of
//! `phi`. With `S_N = 4 J_N - 4 J_N^2` the principal square root satisfies
//! `sqrt(tau - S_N) = 2 f_{tau/4}(J_N)` where `f_t(z) = sqrt(z^2 - z + t)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cx::{cx, Cx};
use crate::error::{Error, Result};
use crate::linalg::op_norm;
use crate::matrix::CMatrix;
use crate::series::{ft_series, PowerSeries, MAGNITUDE_GUARD};

/// Lower-triangular Toeplitz matrix with first column `q[0..n]`.
pub fn toeplitz_of_series(q: &PowerSeries, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::invalid("toeplitz_of_series needs n >= 1"));
    }
    if q.len() < n {
        return Err(Error::invalid(format!(
            "series has {} coefficients, need {n}",
            q.len()
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            q.coeff(i - j)
        } else {
            cx(0.0, 0.0)
        }
    }))
}

/// `S_N = 4 J_N - 4 J_N^2`: entries 4 on the first subdiagonal, -4 on the
/// second.
pub fn s_matrix(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        if i == j + 1 {
            cx(4.0, 0.0)
        } else if i == j + 2 {
            cx(-4.0, 0.0)
        } else {
            cx(0.0, 0.0)
        }
    })
}

/// Principal square root `sqrt(tau I - S_N) = 2 f_{tau/4}(J_N)`.
pub fn sqrt_shifted(tau: Cx, n: usize) -> Result<CMatrix> {
    if tau == cx(0.0, 0.0) {
        return Err(Error::Branch("sqrt_shifted requires tau != 0".into()));
    }
    let series = ft_series(tau * 0.25, n)?;
    let mut m = toeplitz_of_series(&series, n)?;
    for v in m.data_mut().iter_mut() {
        *v *= 2.0;
    }
    Ok(m)
}

/// One ladder row of the oscillation scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub n: usize,
    /// min over the tau circle of ||sqrt(tau - S_n)||
    pub min_norm: f64,
    pub argmin_tau: [f64; 2],
}

/// One ladder row of the coefficient-level scan.
#[derive(Debug, Clone, Serialize)]
pub struct CoeffScanRow {
    pub n: usize,
    /// min over the t circle of max_{1<=k<=n} |f_hat_k(t)|
    pub min_max_coeff: f64,
}

/// Result of [`oscillation_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct OscillationScanResult {
    pub r: f64,
    pub m_threshold: f64,
    pub per_n: Vec<ScanRow>,
    /// First ladder size whose min-norm reaches the threshold.
    pub n_star: Option<usize>,
    pub coeff_rows: Vec<CoeffScanRow>,
    /// First ladder size where every t sample's running coefficient max
    /// reaches the threshold.
    pub coeff_n_star: Option<usize>,
    /// Set when a norm or coefficient hit the 1e100 magnitude guard.
    pub saturated: bool,
    /// Contrast value at the circle center: ||sqrt(1 - S_n)|| = ||I - 2 J_n||
    /// at the largest ladder size (bounded by 3 for every n).
    pub contrast_tau1_norm: f64,
}

/// Number of tau samples on the circle |tau - 1| = r.
pub const TAU_SAMPLES: usize = 64;

/// Sweep `min_{|tau-1|=r} ||sqrt(tau - S_N)||` over a ladder of sizes,
/// together with the coefficient-level scan of `f_{t}` on `|t - 1/4| = r/4`.
pub fn oscillation_scan(
    r: f64,
    m_threshold: f64,
    ladder: &[usize],
) -> Result<OscillationScanResult> {
    if r.is_nan() || r <= 0.0 || r >= 0.5 {
        return Err(Error::invalid(format!(
            "oscillation_scan requires 0 < r < 1/2, got {r}"
        )));
    }
    if ladder.is_empty() || ladder.contains(&0) {
        return Err(Error::invalid(
            "oscillation_scan needs a nonempty ladder of sizes >= 1",
        ));
    }
    let taus: Vec<Cx> = (0..TAU_SAMPLES)
        .map(|k| {
            cx(1.0, 0.0) + Cx::from_polar(r, std::f64::consts::TAU * k as f64 / TAU_SAMPLES as f64)
        })
        .collect();
    let n_max = *ladder.iter().max().expect("nonempty");
    let saturated = std::sync::atomic::AtomicBool::new(false);

    // Norm scan: series once per tau at the largest size, truncations reused.
    let per_tau_series: Vec<Option<PowerSeries>> = taus
        .par_iter()
        .map(|&tau| match ft_series(tau * 0.25, n_max) {
            Ok(s) => Some(s),
            Err(_) => {
                saturated.store(true, std::sync::atomic::Ordering::Relaxed);
                None
            }
        })
        .collect();

    let mut per_n = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let norms: Vec<f64> = per_tau_series
            .par_iter()
            .map(|s| match s {
                Some(series) => {
                    let truncated = PowerSeries {
                        coeffs: series.coeffs[..n].to_vec(),
                    };
                    let mut m = toeplitz_of_series(&truncated, n).expect("length checked");
                    for v in m.data_mut().iter_mut() {
                        *v *= 2.0;
                    }
                    op_norm(&m).unwrap_or(MAGNITUDE_GUARD).min(MAGNITUDE_GUARD)
                }
                None => MAGNITUDE_GUARD,
            })
            .collect();
        let (arg, min_norm) = norms
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite norms"))
            .map(|(i, &v)| (i, v))
            .expect("nonempty");
        per_n.push(ScanRow {
            n,
            min_norm,
            argmin_tau: [taus[arg].re, taus[arg].im],
        });
    }
    let n_star = per_n
        .iter()
        .find(|row| row.min_norm >= m_threshold)
        .map(|row| row.n);

    // Coefficient-level scan on |t - 1/4| = r/4.
    let t_samples: Vec<Cx> = (0..TAU_SAMPLES)
        .map(|k| {
            cx(0.25, 0.0)
                + Cx::from_polar(
                    r / 4.0,
                    std::f64::consts::TAU * k as f64 / TAU_SAMPLES as f64,
                )
        })
        .collect();
    let coeff_series: Vec<Option<PowerSeries>> = t_samples
        .par_iter()
        .map(|&t| match ft_series(t, n_max + 1) {
            Ok(s) => Some(s),
            Err(_) => {
                saturated.store(true, std::sync::atomic::Ordering::Relaxed);
                None
            }
        })
        .collect();
    let mut coeff_rows = Vec::with_capacity(ladder.len());
    let mut coeff_n_star = None;
    for &n in ladder {
        let min_max = coeff_series
            .iter()
            .map(|s| match s {
                Some(series) => (1..=n)
                    .map(|k| series.coeff(k).norm())
                    .fold(0.0f64, f64::max),
                None => MAGNITUDE_GUARD,
            })
            .fold(f64::INFINITY, f64::min);
        if coeff_n_star.is_none() && min_max >= m_threshold {
            coeff_n_star = Some(n);
        }
        coeff_rows.push(CoeffScanRow {
            n,
            min_max_coeff: min_max,
        });
    }

    let contrast_tau1_norm = op_norm(&sqrt_shifted(cx(1.0, 0.0), n_max)?)?;

    Ok(OscillationScanResult {
        r,
        m_threshold,
        per_n,
        n_star,
        coeff_rows,
        coeff_n_star,
        saturated: saturated.into_inner(),
        contrast_tau1_norm,
    })
}

/// `||q(J_n)||` for each ladder size; nondecreasing in `n` because nested
/// sections of the same lower-triangular Toeplitz operator.
pub fn multiplier_growth(q: &PowerSeries, ladder: &[usize]) -> Result<Vec<(usize, f64)>> {
    if ladder.is_empty() {
        return Err(Error::invalid("multiplier_growth needs a nonempty ladder"));
    }
    let n_max = *ladder.iter().max().expect("nonempty");
    if q.len() < n_max {
        return Err(Error::invalid(format!(
            "series has {} coefficients, ladder needs {n_max}",
            q.len()
        )));
    }
    ladder
        .iter()
        .map(|&n| {
            let m = toeplitz_of_series(q, n)?;
            Ok((n, op_norm(&m)?))
        })
        .collect()
}

/// CSV for the oscillation scan: `N,min_norm,argmin_tau_re,argmin_tau_im,N_star_flag`.
pub fn scan_to_csv(scan: &OscillationScanResult) -> String {
    let mut out = String::from("N,min_norm,argmin_tau_re,argmin_tau_im,N_star_flag\n");
    for row in &scan.per_n {
        let flag = match scan.n_star {
            Some(ns) if row.n == ns => 1,
            _ => 0,
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n, row.min_norm, row.argmin_tau[0], row.argmin_tau[1], flag
        ));
    }
    out
}
