//! Symbolic banded infinite operators and their finite sections.
//!
//! Every model is an immutable description of an operator on l^2 with the
//! standard-basis filtration (symmetric windows for the bilateral shift).
//! Sections, rectangular injectivity-radius estimates, quasitriangularity
//! defects and closed-form Psi oracles are all derived from the model's
//! infinite matrix entries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::PropertyReport;
use crate::cx::{cx, Cx};
use crate::error::{Error, Result};
use crate::field::GridSpec;
use crate::linalg::{sigma_min, support_function};
use crate::matrix::CMatrix;
use crate::series::PowerSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftDirection {
    Fwd,
    Bwd,
}

/// Weight rule for unilateral shifts: `w_k` multiplies the hop from basis
/// vector k to k+1 (forward) or k+1 to k (backward).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    #[default]
    Ones,
    Geometric {
        ratio: f64,
    },
}

impl WeightRule {
    fn weight(&self, k: usize) -> f64 {
        match self {
            WeightRule::Ones => 1.0,
            WeightRule::Geometric { ratio } => ratio.powi(k as i32),
        }
    }
}

/// Banded infinite operator models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OperatorModel {
    UnilateralShift {
        direction: ShiftDirection,
        #[serde(default)]
        weights: WeightRule,
    },
    /// `T(s) e_j = e_{j+1}` for j != 0 and `T(s) e_0 = s e_1` on l^2(Z).
    BilateralShift { s: Cx },
    /// Toeplitz operator with polynomial symbol (entries `a_{i-j}`), or its
    /// adjoint.
    AnalyticToeplitz {
        symbol: PowerSeries,
        #[serde(default)]
        adjoint: bool,
    },
    /// Diagonal normal operator; the eigenvalue list is cycled, so its
    /// closure is exactly the listed set.
    DiagonalNormal { eigenvalues: Vec<Cx> },
    /// Round-robin interleaved direct sum, so every standard window meets
    /// each child.
    DirectSum { children: Vec<OperatorModel> },
}

use OperatorModel::*;

impl OperatorModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            UnilateralShift { weights, .. } => {
                if let WeightRule::Geometric { ratio } = weights {
                    if !(ratio.is_finite() && ratio.abs() <= 1.0) {
                        return Err(Error::invalid(
                            "geometric weight ratio must satisfy |ratio| <= 1",
                        ));
                    }
                }
                Ok(())
            }
            BilateralShift { s } => {
                if !crate::cx::is_finite(*s) {
                    return Err(Error::invalid("bilateral shift parameter must be finite"));
                }
                Ok(())
            }
            AnalyticToeplitz { symbol, .. } => {
                if symbol.is_empty() {
                    return Err(Error::invalid("analytic Toeplitz symbol must be nonempty"));
                }
                if symbol.coeffs.iter().any(|z| !crate::cx::is_finite(*z)) {
                    return Err(Error::invalid(
                        "analytic Toeplitz symbol has non-finite coefficient",
                    ));
                }
                Ok(())
            }
            DiagonalNormal { eigenvalues } => {
                if eigenvalues.is_empty() {
                    return Err(Error::invalid("diagonal normal model needs eigenvalues"));
                }
                if eigenvalues.iter().any(|z| !crate::cx::is_finite(*z)) {
                    return Err(Error::invalid(
                        "diagonal normal model has non-finite eigenvalue",
                    ));
                }
                Ok(())
            }
            DirectSum { children } => {
                if children.is_empty() {
                    return Err(Error::invalid("direct sum needs children"));
                }
                for c in children {
                    if matches!(c, BilateralShift { .. }) {
                        return Err(Error::UnsupportedModel(
                            "direct sums over the bilateral shift are not supported \
                             (two-sided windows do not interleave with prefixes)"
                                .into(),
                        ));
                    }
                    c.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Lower bandwidth of the abstract operator (entries below the diagonal).
    pub fn lower_bandwidth(&self) -> usize {
        match self {
            UnilateralShift {
                direction: ShiftDirection::Fwd,
                ..
            } => 1,
            UnilateralShift {
                direction: ShiftDirection::Bwd,
                ..
            } => 0,
            BilateralShift { .. } => 1,
            AnalyticToeplitz {
                symbol,
                adjoint: false,
            } => symbol.len().saturating_sub(1),
            AnalyticToeplitz { adjoint: true, .. } => 0,
            DiagonalNormal { .. } => 0,
            DirectSum { children } => children
                .iter()
                .map(|c| c.lower_bandwidth())
                .max()
                .unwrap_or(0),
        }
    }

    pub fn upper_bandwidth(&self) -> usize {
        match self {
            UnilateralShift {
                direction: ShiftDirection::Fwd,
                ..
            } => 0,
            UnilateralShift {
                direction: ShiftDirection::Bwd,
                ..
            } => 1,
            BilateralShift { .. } => 0,
            AnalyticToeplitz {
                symbol,
                adjoint: true,
            } => symbol.len().saturating_sub(1),
            AnalyticToeplitz { adjoint: false, .. } => 0,
            DiagonalNormal { .. } => 0,
            DirectSum { children } => children
                .iter()
                .map(|c| c.upper_bandwidth())
                .max()
                .unwrap_or(0),
        }
    }

    /// True when the matrix is exactly upper triangular plus band with
    /// vanishing below-window block, so `(I - P_n) T P_n = 0` for every n:
    /// backward shifts, adjoints of analytic Toeplitz operators, diagonals
    /// and direct sums thereof.
    pub fn qt_standard(&self) -> bool {
        match self {
            UnilateralShift {
                direction: ShiftDirection::Bwd,
                ..
            } => true,
            UnilateralShift {
                direction: ShiftDirection::Fwd,
                ..
            } => false,
            BilateralShift { .. } => false,
            AnalyticToeplitz { symbol, adjoint } => *adjoint || symbol.len() <= 1,
            DiagonalNormal { .. } => true,
            DirectSum { children } => children.iter().all(|c| c.qt_standard()),
        }
    }

    /// Cheap upper bound for the operator norm.
    pub fn norm_bound(&self) -> f64 {
        match self {
            UnilateralShift { .. } => 1.0,
            BilateralShift { s } => s.norm().max(1.0),
            AnalyticToeplitz { symbol, .. } => symbol.coeffs.iter().map(|c| c.norm()).sum(),
            DiagonalNormal { eigenvalues } => {
                eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
            }
            DirectSum { children } => children.iter().map(|c| c.norm_bound()).fold(0.0, f64::max),
        }
    }

    /// Infinite matrix entry in the standard basis (unilateral indexing).
    fn entry(&self, i: usize, j: usize) -> Cx {
        match self {
            UnilateralShift {
                direction: ShiftDirection::Fwd,
                weights,
            } => {
                if i == j + 1 {
                    cx(weights.weight(j), 0.0)
                } else {
                    cx(0.0, 0.0)
                }
            }
            UnilateralShift {
                direction: ShiftDirection::Bwd,
                weights,
            } => {
                if j == i + 1 {
                    cx(weights.weight(i), 0.0)
                } else {
                    cx(0.0, 0.0)
                }
            }
            BilateralShift { .. } => unreachable!("bilateral entries need window offsets"),
            AnalyticToeplitz {
                symbol,
                adjoint: false,
            } => {
                if i >= j {
                    symbol.coeff(i - j)
                } else {
                    cx(0.0, 0.0)
                }
            }
            AnalyticToeplitz {
                symbol,
                adjoint: true,
            } => {
                if j >= i {
                    symbol.coeff(j - i).conj()
                } else {
                    cx(0.0, 0.0)
                }
            }
            DiagonalNormal { eigenvalues } => {
                if i == j {
                    eigenvalues[i % eigenvalues.len()]
                } else {
                    cx(0.0, 0.0)
                }
            }
            DirectSum { children } => {
                let k = children.len();
                if i % k == j % k {
                    children[i % k].entry(i / k, j / k)
                } else {
                    cx(0.0, 0.0)
                }
            }
        }
    }

    /// Rows below the window that `T P_n` can reach (global indexing).
    fn extra_rows(&self) -> usize {
        match self {
            DirectSum { children } => {
                children.len() * children.iter().map(|c| c.extra_rows()).max().unwrap_or(0)
            }
            other => other.lower_bandwidth(),
        }
    }

    /// Square finite section `P_n T |_{Ran P_n}`. For the bilateral shift
    /// the window is `e_{-n}..e_n`, giving a (2n+1)-dimensional section.
    pub fn section(&self, n: usize) -> Result<CMatrix> {
        self.validate()?;
        if n == 0 {
            return Err(Error::invalid("section size must be >= 1"));
        }
        match self {
            BilateralShift { s } => {
                let dim = 2 * n + 1;
                let mut m = CMatrix::zeros(dim, dim);
                // basis index j in [-n, n] maps to row/col j + n
                for j in -(n as i64)..n as i64 {
                    let w = if j == 0 { *s } else { cx(1.0, 0.0) };
                    m[((j + 1 + n as i64) as usize, (j + n as i64) as usize)] = w;
                }
                Ok(m)
            }
            _ => Ok(CMatrix::from_fn(n, n, |i, j| self.entry(i, j))),
        }
    }

    /// Rectangular section: the full image of the n-window, whose smallest
    /// singular value is exactly the injectivity radius of `T` restricted
    /// to that window. These values are nonincreasing in n.
    pub fn rect_section(&self, n: usize) -> Result<CMatrix> {
        self.validate()?;
        if n == 0 {
            return Err(Error::invalid("section size must be >= 1"));
        }
        match self {
            BilateralShift { s } => {
                let cols = 2 * n + 1;
                let mut m = CMatrix::zeros(cols + 1, cols);
                for j in -(n as i64)..=n as i64 {
                    let w = if j == 0 { *s } else { cx(1.0, 0.0) };
                    m[((j + 1 + n as i64) as usize, (j + n as i64) as usize)] = w;
                }
                Ok(m)
            }
            _ => {
                let rows = n + self.extra_rows();
                Ok(CMatrix::from_fn(rows, n, |i, j| self.entry(i, j)))
            }
        }
    }

    /// Rectangular section of `T - z`: the rectangular section of `T` with
    /// `z` subtracted along the leading diagonal.
    pub fn rect_section_shifted(&self, z: Cx, n: usize) -> Result<CMatrix> {
        let mut m = self.rect_section(n)?;
        let cols = m.cols();
        for j in 0..cols {
            // diagonal of the column window; the bilateral window is square
            // in its leading block as well
            m[(j, j)] -= z;
        }
        Ok(m)
    }

    /// Exact norm of the escaping block `(I - P_n) T P_n`.
    pub fn qt_defect(&self, n: usize) -> Result<f64> {
        self.validate()?;
        if n == 0 {
            return Err(Error::invalid("section size must be >= 1"));
        }
        match self {
            BilateralShift { .. } => Ok(1.0), // T e_n = e_{n+1} escapes the window
            _ => {
                let extra = self.extra_rows();
                if extra == 0 {
                    return Ok(0.0);
                }
                let block = CMatrix::from_fn(extra, n, |i, j| self.entry(n + i, j));
                if block.max_abs() == 0.0 {
                    return Ok(0.0);
                }
                crate::linalg::op_norm(&block)
            }
        }
    }

    /// Closed-form Psi where one is known; `None` where no formula applies
    /// (including points too close to a sampled boundary to classify).
    pub fn psi_oracle(&self, z: Cx) -> Option<f64> {
        match self {
            UnilateralShift {
                weights: WeightRule::Ones,
                ..
            } => Some((z.norm() - 1.0).max(0.0)),
            UnilateralShift { .. } => None,
            BilateralShift { s } => {
                if *s == cx(1.0, 0.0) {
                    Some((z.norm() - 1.0).abs())
                } else if *s == cx(0.0, 0.0) {
                    Some((z.norm() - 1.0).max(0.0))
                } else {
                    None
                }
            }
            AnalyticToeplitz { symbol, adjoint } => {
                let w = if *adjoint { z.conj() } else { z };
                toeplitz_symbol_distance(symbol, w)
            }
            DiagonalNormal { eigenvalues } => Some(
                eigenvalues
                    .iter()
                    .map(|&e| (z - e).norm())
                    .fold(f64::INFINITY, f64::min),
            ),
            DirectSum { children } => {
                let mut best = f64::INFINITY;
                for c in children {
                    best = best.min(c.psi_oracle(z)?);
                }
                Some(best)
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let model: OperatorModel =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("model JSON: {e}")))?;
        model.validate()?;
        Ok(model)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }
}

/// `dist(z, clos psi(D))` for a polynomial symbol: winding-number membership
/// plus brute-force boundary minimization; `None` when the winding is zero
/// but `z` sits within sampling resolution of the boundary curve.
fn toeplitz_symbol_distance(symbol: &PowerSeries, z: Cx) -> Option<f64> {
    const WINDING_SAMPLES: usize = 4096;
    const DIST_SAMPLES: usize = 8192;
    let mut prev = symbol.eval(cx(1.0, 0.0)) - z;
    if prev.norm() == 0.0 {
        return Some(0.0);
    }
    let mut total = 0.0f64;
    for k in 1..=WINDING_SAMPLES {
        let t = std::f64::consts::TAU * k as f64 / WINDING_SAMPLES as f64;
        let cur = symbol.eval(Cx::from_polar(1.0, t)) - z;
        if cur.norm() == 0.0 {
            return Some(0.0);
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    let winding = (total / std::f64::consts::TAU).round() as i64;
    if winding != 0 {
        return Some(0.0);
    }
    let mut dist = f64::INFINITY;
    let mut spacing = 0.0f64;
    let mut prev_pt = symbol.eval(cx(1.0, 0.0));
    for k in 0..DIST_SAMPLES {
        let t = std::f64::consts::TAU * (k + 1) as f64 / DIST_SAMPLES as f64;
        let pt = symbol.eval(Cx::from_polar(1.0, t));
        dist = dist.min((pt - z).norm());
        spacing = spacing.max((pt - prev_pt).norm());
        prev_pt = pt;
    }
    if dist < 2.0 * spacing {
        None // ambiguous: within sampling resolution of the boundary
    } else {
        Some(dist)
    }
}

/// Deterministic polar net of the closed unit disc; includes the point 1.
pub fn disc_net(rings: usize) -> Vec<Cx> {
    let mut pts = vec![cx(0.0, 0.0)];
    for j in 1..=rings {
        let r = j as f64 / rings as f64;
        let count = 6 * j;
        for k in 0..count {
            pts.push(Cx::from_polar(
                r,
                std::f64::consts::TAU * k as f64 / count as f64,
            ));
        }
    }
    pts
}

/// One row of a section-convergence study.
#[derive(Debug, Clone, Serialize)]
pub struct StudyRow {
    pub n: usize,
    pub sup_error: f64,
}

/// Sup over grid nodes of |Psi_{section(n)} - reference|, per size. The
/// reference is the closed-form oracle where available and a large
/// rectangular-section baseline otherwise.
pub fn convergence_study(
    model: &OperatorModel,
    grid: &GridSpec,
    sizes: &[usize],
) -> Result<Vec<StudyRow>> {
    model.validate()?;
    if sizes.is_empty() {
        return Err(Error::invalid("convergence_study needs sizes"));
    }
    let nodes: Vec<Cx> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.node(ix, iy))
        .collect();
    let n_ref = 2 * sizes.iter().max().expect("nonempty");
    let reference: Vec<f64> = nodes
        .par_iter()
        .map(|&z| match model.psi_oracle(z) {
            Some(v) => Ok(v),
            None => sigma_min(&model.rect_section_shifted(z, n_ref)?),
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let section = model.section(n)?;
        let sup = nodes
            .par_iter()
            .zip(reference.par_iter())
            .map(|(&z, &oracle)| {
                sigma_min(&section.minus_scalar(z)).map(|psi| (psi - oracle).abs())
            })
            .try_reduce(|| 0.0f64, |a, b| Ok(a.max(b)))?;
        rows.push(StudyRow { n, sup_error: sup });
    }
    Ok(rows)
}

/// Study CSV: `n,sup_error`.
pub fn study_to_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from("n,sup_error\n");
    for row in rows {
        out.push_str(&format!("{},{}\n", row.n, row.sup_error));
    }
    out
}

/// Support-function table `rho_theta(section(n))` per (theta, n).
pub fn support_convergence(
    model: &OperatorModel,
    thetas: &[f64],
    sizes: &[usize],
) -> Result<Vec<(f64, usize, f64)>> {
    model.validate()?;
    let mut rows = Vec::with_capacity(thetas.len() * sizes.len());
    for &theta in thetas {
        for &n in sizes {
            let rho = support_function(&model.section(n)?, theta)?;
            rows.push((theta, n, rho));
        }
    }
    Ok(rows)
}

/// Support table CSV: `theta,n,rho`.
pub fn support_to_csv(rows: &[(f64, usize, f64)]) -> String {
    let mut out = String::from("theta,n,rho\n");
    for &(theta, n, rho) in rows {
        out.push_str(&format!("{theta},{n},{rho}\n"));
    }
    out
}

/// Direct-sum law check: `min(Psi_T(z), dist(z, K)) = Psi_T(z)` for a point
/// set `K` inside the spectrum, and sections of `T (+) diag(K)` never exceed
/// the Psi of `T`'s sections.
pub fn join_check(model: &OperatorModel, k_sampler: &[Cx], zs: &[Cx]) -> Result<PropertyReport> {
    model.validate()?;
    if zs.is_empty() {
        return Err(Error::invalid("join_check needs sample points"));
    }
    let mut builder = crate::checks::PropertyReportBuilder::new("join", 1e-9);
    let sum_model = if k_sampler.is_empty() {
        None
    } else {
        Some(DirectSum {
            children: vec![
                model.clone(),
                DiagonalNormal {
                    eigenvalues: k_sampler.to_vec(),
                },
            ],
        })
    };
    for &z in zs {
        let psi = match model.psi_oracle(z) {
            Some(v) if v > 0.0 => v,
            _ => {
                builder.exclude();
                continue;
            }
        };
        let dist_k = k_sampler
            .iter()
            .map(|&k| (z - k).norm())
            .fold(f64::INFINITY, f64::min);
        // min law: K lies inside the spectrum, so dist(z, K) >= Psi(z)
        let mut violation = if dist_k.is_finite() {
            psi - dist_k
        } else {
            0.0
        };
        if let Some(sum) = &sum_model {
            for n in [8usize, 16] {
                let psi_t = sigma_min(&model.section(n)?.minus_scalar(z))?;
                let psi_sum = sigma_min(&sum.section(2 * n)?.minus_scalar(z))?;
                violation = violation.max(psi_sum - psi_t - 1e-12);
            }
        }
        builder.record_points(violation, &[z]);
    }
    Ok(builder.finish())
}
