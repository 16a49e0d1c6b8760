//! H^2 of a smooth domain via boundary quadrature: Gram matrices of
//! monomials, orthonormal polynomial bases, the multiplication-by-z matrix,
//! and the nilpotent compressions of its adjoint to the kernel-vector
//! subspaces.
//!
//! The inner product is arclength measure on the boundary. Orthonormal
//! bases are computed internally in scale-normalized monomials `(z/s)^k`
//! with `s` the largest boundary modulus — for a disc centered at 0 this
//! makes the Gram diagonal — while the [`gram`] operation keeps its raw
//! monomial contract.

use serde::{Deserialize, Serialize};

use crate::cx::{cx, is_finite, Cx};
use crate::error::{Error, Result};
use crate::linalg::op_norm;
use crate::matrix::CMatrix;

/// Cap on the Cholesky conditioning proxy; beyond it construction fails
/// (or the basis size is reduced).
pub const COND_CAP: f64 = 1e12;

/// Nilpotency residual threshold: `||B^N||` beyond this (relative to
/// `max(1, ||B||)^N`) means quadrature or conditioning broke down.
pub const RESIDUAL_CAP: f64 = 1e-6;

/// Bounded domain with a parametrized smooth boundary, containing 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Disc {
        center: Cx,
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// Uniformly-parametrized boundary samples; quadrature uses the
    /// polygonal trapezoid rule on them.
    Custom {
        samples: Vec<Cx>,
    },
}

impl DomainSpec {
    pub fn disc(center: Cx, radius: f64) -> Result<Self> {
        let d = DomainSpec::Disc { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        let d = DomainSpec::Ellipse { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Disc { center, radius } => {
                if !radius.is_finite() || *radius <= 0.0 || !is_finite(*center) {
                    return Err(Error::invalid(
                        "disc needs a positive radius and finite center",
                    ));
                }
                if center.norm() >= *radius {
                    return Err(Error::invalid("domain must contain the origin strictly"));
                }
                Ok(())
            }
            DomainSpec::Ellipse { a, b } => {
                if !(a.is_finite() && b.is_finite()) || *a <= 0.0 || *b <= 0.0 {
                    return Err(Error::invalid("ellipse needs positive semi-axes"));
                }
                Ok(())
            }
            DomainSpec::Custom { samples } => {
                if samples.len() < 16 {
                    return Err(Error::invalid("custom boundary needs at least 16 samples"));
                }
                if samples.iter().any(|z| !is_finite(*z)) {
                    return Err(Error::invalid("custom boundary has non-finite sample"));
                }
                if winding_number(samples, cx(0.0, 0.0)) == 0 {
                    return Err(Error::invalid(
                        "custom boundary must wind around the origin",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Boundary point at parameter t in [0, 2pi).
    pub fn boundary_point(&self, t: f64) -> Cx {
        match self {
            DomainSpec::Disc { center, radius } => center + Cx::from_polar(*radius, t),
            DomainSpec::Ellipse { a, b } => cx(a * t.cos(), b * t.sin()),
            DomainSpec::Custom { samples } => {
                let m = samples.len() as f64;
                let u = (t / std::f64::consts::TAU).rem_euclid(1.0) * m;
                let i = (u.floor() as usize) % samples.len();
                let frac = u - u.floor();
                let j = (i + 1) % samples.len();
                samples[i] + (samples[j] - samples[i]).scale(frac)
            }
        }
    }

    /// |d gamma / dt| at parameter t (parametrized curves only).
    pub fn speed(&self, t: f64) -> f64 {
        match self {
            DomainSpec::Disc { radius, .. } => *radius,
            DomainSpec::Ellipse { a, b } => ((a * t.sin()).powi(2) + (b * t.cos()).powi(2)).sqrt(),
            DomainSpec::Custom { samples } => {
                // polygonal speed: chord length over parameter step
                let m = samples.len();
                let u = (t / std::f64::consts::TAU).rem_euclid(1.0) * m as f64;
                let i = (u.floor() as usize) % m;
                (samples[(i + 1) % m] - samples[i]).norm() * m as f64 / std::f64::consts::TAU
            }
        }
    }

    /// Closed-form or winding-number membership in the closed domain.
    pub fn contains(&self, z: Cx) -> bool {
        match self {
            DomainSpec::Disc { center, radius } => (z - center).norm() <= *radius,
            DomainSpec::Ellipse { a, b } => (z.re / a).powi(2) + (z.im / b).powi(2) <= 1.0,
            DomainSpec::Custom { samples } => winding_number(samples, z) != 0,
        }
    }

    /// Largest boundary modulus; the monomial scale of the basis.
    pub fn max_boundary_modulus(&self) -> f64 {
        match self {
            DomainSpec::Disc { center, radius } => center.norm() + radius,
            DomainSpec::Ellipse { a, b } => a.max(*b),
            DomainSpec::Custom { samples } => samples.iter().map(|z| z.norm()).fold(0.0, f64::max),
        }
    }

    pub fn boundary_samples(&self, m: usize) -> Vec<Cx> {
        match self {
            DomainSpec::Custom { samples } => samples.clone(),
            _ => (0..m)
                .map(|k| self.boundary_point(std::f64::consts::TAU * k as f64 / m as f64))
                .collect(),
        }
    }

    /// The reflected domain { conj(w) : w in self }. The adjoint of the
    /// multiplication operator has its spectrum on the conjugate of the
    /// underlying domain, so callers that want blocks landing on a literal
    /// target feed the conjugate in.
    pub fn conjugate(&self) -> DomainSpec {
        match self {
            DomainSpec::Disc { center, radius } => DomainSpec::Disc {
                center: center.conj(),
                radius: *radius,
            },
            DomainSpec::Ellipse { a, b } => DomainSpec::Ellipse { a: *a, b: *b },
            DomainSpec::Custom { samples } => DomainSpec::Custom {
                samples: samples.iter().map(|z| z.conj()).collect(),
            },
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: DomainSpec =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("domain JSON: {e}")))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain serialization cannot fail")
    }
}

fn winding_number(samples: &[Cx], z: Cx) -> i64 {
    let mut total = 0.0f64;
    let mut prev = samples[samples.len() - 1] - z;
    if prev.norm() == 0.0 {
        return 1; // on the curve counts as inside (closed domain)
    }
    for &p in samples {
        let cur = p - z;
        if cur.norm() == 0.0 {
            return 1;
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / std::f64::consts::TAU).round() as i64
}

/// Boundary quadrature nodes and arclength weights.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Cx>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Trapezoid rule in the boundary parameter; spectrally accurate for the
/// smooth parametrized curves, polygonal for custom samples.
pub fn quadrature(domain: &DomainSpec, m: usize) -> Result<QuadratureRule> {
    domain.validate()?;
    if m < 16 {
        return Err(Error::invalid("quadrature needs at least 16 nodes"));
    }
    match domain {
        DomainSpec::Custom { samples } => {
            let n = samples.len();
            let weights = (0..n)
                .map(|q| {
                    let prev = samples[(q + n - 1) % n];
                    let next = samples[(q + 1) % n];
                    0.5 * ((samples[q] - prev).norm() + (next - samples[q]).norm())
                })
                .collect();
            Ok(QuadratureRule {
                nodes: samples.clone(),
                weights,
            })
        }
        _ => {
            let step = std::f64::consts::TAU / m as f64;
            let nodes: Vec<Cx> = (0..m)
                .map(|k| domain.boundary_point(step * k as f64))
                .collect();
            let weights = (0..m)
                .map(|k| domain.speed(step * k as f64) * step)
                .collect();
            Ok(QuadratureRule { nodes, weights })
        }
    }
}

/// Raw monomial Gram matrix `G[j][k] = sum_q w_q z_q^k conj(z_q^j)`,
/// Hermitian positive definite. Fails with a conditioning error when the
/// Cholesky proxy exceeds [`COND_CAP`].
pub fn gram(domain: &DomainSpec, k: usize, m: usize) -> Result<CMatrix> {
    if k == 0 {
        return Err(Error::invalid("gram needs K >= 1"));
    }
    let rule = quadrature(domain, m)?;
    let g = gram_from_powers(&rule, k, 1.0);
    // PD check with the conditioning cap
    let (reached, cond) = cholesky_reach(&g, COND_CAP);
    if reached < k {
        return Err(Error::Conditioning {
            cond,
            cap: COND_CAP,
        });
    }
    Ok(g)
}

/// Gram of the scaled monomials `(z/s)^k`.
fn gram_from_powers(rule: &QuadratureRule, k: usize, scale: f64) -> CMatrix {
    let m = rule.nodes.len();
    // V[q][j] = (z_q / s)^j
    let mut v = vec![cx(0.0, 0.0); m * k];
    for q in 0..m {
        let z = rule.nodes[q] / scale;
        let mut p = cx(1.0, 0.0);
        for j in 0..k {
            v[q * k + j] = p;
            p *= z;
        }
    }
    let mut g = CMatrix::zeros(k, k);
    for q in 0..m {
        let w = rule.weights[q];
        let row = &v[q * k..(q + 1) * k];
        for i in 0..k {
            let wi = row[i].conj() * w;
            for j in i..k {
                g[(i, j)] += wi * row[j];
            }
        }
    }
    // fill the lower triangle hermitianly
    for i in 0..k {
        for j in 0..i {
            g[(i, j)] = g[(j, i)].conj();
        }
    }
    g
}

/// Cholesky feeler: how many columns factor before the pivot ratio proxy
/// crosses `cap` (or the pivot loses positivity). Returns (columns, proxy).
fn cholesky_reach(g: &CMatrix, cap: f64) -> (usize, f64) {
    let k = g.rows();
    let mut l = CMatrix::zeros(k, k);
    let mut max_d = 0.0f64;
    let mut min_d = f64::INFINITY;
    for j in 0..k {
        let mut pivot = g[(j, j)].re;
        for p in 0..j {
            pivot -= l[(j, p)].norm_sqr();
        }
        if pivot.is_nan() || pivot <= 0.0 {
            return (j, f64::INFINITY);
        }
        let d = pivot.sqrt();
        let (new_max, new_min) = (max_d.max(d), min_d.min(d));
        let proxy = (new_max / new_min).powi(2);
        if proxy > cap {
            return (j, proxy);
        }
        max_d = new_max;
        min_d = new_min;
        l[(j, j)] = cx(d, 0.0);
        for i in j + 1..k {
            let mut acc = g[(i, j)];
            for p in 0..j {
                acc -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = acc / d;
        }
    }
    (k, (max_d / min_d).powi(2))
}

/// Full Cholesky `G = L L^H` (caller has verified feasibility).
fn cholesky(g: &CMatrix) -> Result<CMatrix> {
    let k = g.rows();
    let mut l = CMatrix::zeros(k, k);
    for j in 0..k {
        let mut pivot = g[(j, j)].re;
        for p in 0..j {
            pivot -= l[(j, p)].norm_sqr();
        }
        if pivot.is_nan() || pivot <= 0.0 {
            return Err(Error::Conditioning {
                cond: f64::INFINITY,
                cap: COND_CAP,
            });
        }
        let d = pivot.sqrt();
        l[(j, j)] = cx(d, 0.0);
        for i in j + 1..k {
            let mut acc = g[(i, j)];
            for p in 0..j {
                acc -= l[(i, p)] * l[(j, p)].conj();
            }
            l[(i, j)] = acc / d;
        }
    }
    Ok(l)
}

/// Orthonormal polynomial basis of H^2(domain) under boundary-arclength
/// quadrature. `coeff_scaled` is upper triangular with positive diagonal:
/// `e_j(z) = sum_i coeff_scaled[i][j] (z/scale)^i`.
#[derive(Debug, Clone)]
pub struct HardyBasis {
    pub domain: DomainSpec,
    /// Effective basis size after conditioning reduction.
    pub k: usize,
    pub scale: f64,
    pub cond_estimate: f64,
    coeff_scaled: CMatrix,
    quad: QuadratureRule,
}

impl HardyBasis {
    /// Build a basis of size `k_request` (auto-reduced to the largest
    /// well-conditioned size) from an m-node quadrature.
    pub fn new(domain: &DomainSpec, k_request: usize, m: usize) -> Result<Self> {
        if k_request == 0 {
            return Err(Error::invalid("basis needs K >= 1"));
        }
        let rule = quadrature(domain, m)?;
        let scale = domain.max_boundary_modulus();
        let g = gram_from_powers(&rule, k_request, scale);
        let (k_eff, cond) = cholesky_reach(&g, COND_CAP);
        if k_eff == 0 {
            return Err(Error::Conditioning {
                cond,
                cap: COND_CAP,
            });
        }
        let g_eff = CMatrix::from_fn(k_eff, k_eff, |i, j| g[(i, j)]);
        let l = cholesky(&g_eff)?;
        // coeff = (L^H)^{-1}: columns solve L^H x = e_j by back substitution
        let mut coeff = CMatrix::zeros(k_eff, k_eff);
        for j in 0..k_eff {
            // x has support 0..=j because L^H is upper triangular
            for i in (0..=j).rev() {
                let mut acc = if i == j { cx(1.0, 0.0) } else { cx(0.0, 0.0) };
                for p in i + 1..=j {
                    // (L^H)[i][p] = conj(L[p][i])
                    acc -= l[(p, i)].conj() * coeff[(p, j)];
                }
                coeff[(i, j)] = acc / l[(i, i)].re;
            }
        }
        let cond_estimate = cond.min(COND_CAP);
        Ok(HardyBasis {
            domain: domain.clone(),
            k: k_eff,
            scale,
            cond_estimate,
            coeff_scaled: coeff,
            quad: rule,
        })
    }

    /// Coefficients in raw monomials (`coeff_scaled[i][j] / scale^i`); may
    /// overflow for extreme sizes, which the scaled form avoids.
    pub fn coeff_monomial(&self) -> CMatrix {
        CMatrix::from_fn(self.k, self.k, |i, j| {
            self.coeff_scaled[(i, j)] / self.scale.powi(i as i32)
        })
    }

    /// Values of all basis polynomials at a point.
    pub fn eval_basis(&self, z: Cx) -> Vec<Cx> {
        let zs = z / self.scale;
        // powers once, then the triangular combination
        let mut pow = vec![cx(1.0, 0.0); self.k];
        for i in 1..self.k {
            pow[i] = pow[i - 1] * zs;
        }
        (0..self.k)
            .map(|j| {
                pow[..=j]
                    .iter()
                    .enumerate()
                    .map(|(i, p)| self.coeff_scaled[(i, j)] * p)
                    .sum()
            })
            .collect()
    }

    /// Discrete Gram of the orthonormalized family (identity up to
    /// quadrature rounding); exposed for verification.
    pub fn orthonormality_defect(&self) -> f64 {
        let m = self.quad.nodes.len();
        let mut vals = vec![cx(0.0, 0.0); m * self.k];
        for q in 0..m {
            let row = self.eval_basis(self.quad.nodes[q]);
            vals[q * self.k..(q + 1) * self.k].copy_from_slice(&row);
        }
        let mut defect = 0.0f64;
        for i in 0..self.k {
            for j in 0..self.k {
                let mut acc = cx(0.0, 0.0);
                for q in 0..m {
                    acc +=
                        vals[q * self.k + i].conj() * vals[q * self.k + j] * self.quad.weights[q];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((acc - cx(expect, 0.0)).norm());
            }
        }
        defect
    }

    fn node_values(&self) -> Vec<Cx> {
        let m = self.quad.nodes.len();
        let mut vals = vec![cx(0.0, 0.0); m * self.k];
        for q in 0..m {
            let row = self.eval_basis(self.quad.nodes[q]);
            vals[q * self.k..(q + 1) * self.k].copy_from_slice(&row);
        }
        vals
    }
}

/// Matrix of multiplication by z in the orthonormal basis: the usable
/// `(K-1) x (K-1)` block (the last row/column is truncation-polluted and
/// dropped). Upper Hessenberg because z raises degree by exactly one.
pub fn mult_matrix(basis: &HardyBasis) -> Result<CMatrix> {
    if basis.k < 2 {
        return Err(Error::invalid("mult_matrix needs a basis of size >= 2"));
    }
    let kk = basis.k - 1;
    let vals = basis.node_values();
    let m = basis.quad.nodes.len();
    let stride = basis.k;
    let mut out = CMatrix::zeros(kk, kk);
    for q in 0..m {
        let w = basis.quad.weights[q];
        let z = basis.quad.nodes[q];
        let row = &vals[q * stride..q * stride + kk];
        for i in 0..kk {
            let left = row[i].conj() * w;
            for j in 0..kk {
                out[(i, j)] += left * z * row[j];
            }
        }
    }
    Ok(out)
}

/// The nilpotent block: the adjoint of [`mult_matrix`] compressed to the
/// span of the reproducing kernel at 0 and its first N-1 derivatives.
#[derive(Debug, Clone)]
pub struct NilpotentBlock {
    pub n: usize,
    pub matrix: CMatrix,
    pub domain: DomainSpec,
    /// `||matrix^N||`: nilpotency is exact in theory, so this measures
    /// quadrature/conditioning error.
    pub residual: f64,
}

pub fn nilpotent_block(basis: &HardyBasis, n: usize) -> Result<NilpotentBlock> {
    if n == 0 {
        return Err(Error::invalid("nilpotent_block needs N >= 1"));
    }
    if 2 * n > basis.k {
        return Err(Error::Regime(format!(
            "nilpotent_block needs N <= K/2 (N = {n}, K = {})",
            basis.k
        )));
    }
    let kk = basis.k - 1;
    let mult = mult_matrix(basis)?;

    // Kernel-vector coordinates: conj(e_j^{(l)}(0)) up to positive factors,
    // i.e. the conjugated rows of the coefficient matrix.
    let mut vs: Vec<Vec<Cx>> = (0..n)
        .map(|l| (0..kk).map(|j| basis.coeff_scaled[(l, j)].conj()).collect())
        .collect();
    // modified Gram-Schmidt, two passes
    for l in 0..n {
        for _ in 0..2 {
            for p in 0..l {
                let (head, tail) = vs.split_at_mut(l);
                let prev = &head[p];
                let cur = &mut tail[0];
                let proj: Cx = prev.iter().zip(cur.iter()).map(|(a, b)| a.conj() * b).sum();
                for (c, q) in cur.iter_mut().zip(prev) {
                    *c -= proj * q;
                }
            }
        }
        let norm: f64 = vs[l].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return Err(Error::Conditioning {
                cond: f64::INFINITY,
                cap: COND_CAP,
            });
        }
        let inv = cx(1.0 / norm, 0.0);
        for z in vs[l].iter_mut() {
            *z *= inv;
        }
    }

    // B = Q^H M^H Q
    let mh = mult.adjoint();
    let w: Vec<Vec<Cx>> = vs.iter().map(|q| mh.matvec(q)).collect();
    let block = CMatrix::from_fn(n, n, |i, j| {
        vs[i]
            .iter()
            .zip(w[j].iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    });

    let residual = op_norm(&block.pow(n))?;
    let norm_scale = op_norm(&block)?.max(1.0).powi(n as i32);
    if residual > RESIDUAL_CAP * norm_scale {
        return Err(Error::Construction {
            stage: "nilpotent_block".into(),
            message: format!(
                "nilpotency residual {residual:.3e} exceeds {:.3e}; quadrature or \
                 conditioning broke down",
                RESIDUAL_CAP * norm_scale
            ),
        });
    }
    Ok(NilpotentBlock {
        n,
        matrix: block,
        domain: basis.domain.clone(),
        residual,
    })
}

/// Basis sized for a robust block of order `n`: K = 2n suffices for discs
/// centered at 0 (no truncation pollution), other shapes get K = 4n so the
/// kernel-vector tail decays below the nilpotency cap.
pub fn basis_for_block(domain: &DomainSpec, n: usize) -> Result<HardyBasis> {
    let k = match domain {
        DomainSpec::Disc { center, .. } if center.norm() == 0.0 => 2 * n,
        _ => 4 * n,
    };
    let m = (2 * k + 64).max(256);
    HardyBasis::new(domain, k, m)
}

/// Limit of the block Psi outside the domain: `dist(z, clos domain)` via
/// closed form (disc) or dense boundary sampling; 0 inside.
pub fn block_psi_limit(domain: &DomainSpec, z: Cx) -> Result<f64> {
    domain.validate()?;
    if domain.contains(z) {
        return Ok(0.0);
    }
    if let DomainSpec::Disc { center, radius } = domain {
        return Ok((z - center).norm() - radius);
    }
    const SAMPLES: usize = 8192;
    let pts = domain.boundary_samples(SAMPLES);
    let mut dist = f64::INFINITY;
    let mut spacing = 0.0f64;
    for (q, &p) in pts.iter().enumerate() {
        dist = dist.min((z - p).norm());
        let next = pts[(q + 1) % pts.len()];
        spacing = spacing.max((next - p).norm());
    }
    if let DomainSpec::Custom { .. } = domain {
        if dist < spacing {
            return Err(Error::AmbiguousBoundary(format!(
                "point {z} within sampling resolution {spacing:.3e} of the boundary"
            )));
        }
    }
    Ok(dist)
}
