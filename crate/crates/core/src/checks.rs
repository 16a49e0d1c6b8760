//! Empirical checkers for the elementary resolvent-norm inequalities:
//! Lipschitz-1, the numerical-range band, the ratio/Lipschitz estimate at
//! large |z|, semiconvexity of 1/Psi, and subharmonicity of -log Psi.
//!
//! Each checker returns a [`PropertyReport`]; violations beyond tolerance
//! carry witnesses so a failing report can be replayed.

use serde::Serialize;

use crate::cx::Cx;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, psi_eval, support_function};
use crate::matrix::CMatrix;
use crate::sample::Lcg64;

const WITNESS_CAP: usize = 16;

/// Outcome of one property check over a sample set.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub name: String,
    /// Samples actually checked (exclusions not counted).
    pub samples: usize,
    /// Samples excluded for violating the checker's precondition.
    pub excluded: usize,
    /// Largest positive exceedance over the sample set (0 when every
    /// inequality held with slack).
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub witnesses: Vec<Witness>,
}

/// An offending input: the sample points and the exceedance they produced.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub points: Vec<[f64; 2]>,
    pub violation: f64,
}

/// Incremental builder shared by the checkers and the model studies.
pub struct PropertyReportBuilder {
    name: String,
    tolerance: f64,
    samples: usize,
    excluded: usize,
    max_violation: f64,
    witnesses: Vec<Witness>,
}

impl PropertyReportBuilder {
    pub fn new(name: &str, tolerance: f64) -> Self {
        PropertyReportBuilder {
            name: name.to_string(),
            tolerance,
            samples: 0,
            excluded: 0,
            max_violation: 0.0,
            witnesses: Vec::new(),
        }
    }

    pub fn record_points(&mut self, violation: f64, points: &[Cx]) {
        self.samples += 1;
        let v = violation.max(0.0);
        self.max_violation = self.max_violation.max(v);
        if v > self.tolerance && self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness {
                points: points.iter().map(|z| [z.re, z.im]).collect(),
                violation: v,
            });
        }
    }

    pub fn exclude(&mut self) {
        self.excluded += 1;
    }

    pub fn finish(self) -> PropertyReport {
        PropertyReport {
            pass: self.max_violation <= self.tolerance,
            name: self.name,
            samples: self.samples,
            excluded: self.excluded,
            max_violation: self.max_violation,
            tolerance: self.tolerance,
            witnesses: self.witnesses,
        }
    }
}

/// |Psi(z) - Psi(z')| <= |z - z'| for every pair.
pub fn check_lip1(a: &CMatrix, pairs: &[(Cx, Cx)]) -> Result<PropertyReport> {
    if pairs.is_empty() {
        return Err(Error::invalid("check_lip1: empty pair list"));
    }
    let mut rb = PropertyReportBuilder::new("lip1", 1e-9);
    for &(z, w) in pairs {
        let pz = psi_eval(a, z)?;
        let pw = psi_eval(a, w)?;
        let violation = (pz - pw).abs() - (z - w).norm();
        rb.record_points(violation, &[z, w]);
    }
    Ok(rb.finish())
}

/// The band `|z| - rho_theta <= Psi(z) <= sqrt(|z|^2 - 2 rho_theta |z| + ||A||^2)`
/// for z with |z| > rho_theta (theta = arg z), plus the derived gap bound
/// `| (|z| - Psi) - rho_theta | <= (||A||^2 - rho_theta^2) / (2(|z| - rho_theta))`.
pub fn check_band(a: &CMatrix, zs: &[Cx]) -> Result<PropertyReport> {
    if zs.is_empty() {
        return Err(Error::invalid("check_band: empty sample list"));
    }
    let norm = op_norm(a)?;
    let mut rb = PropertyReportBuilder::new("band", 1e-9);
    for &z in zs {
        let theta = z.arg();
        let rho = support_function(a, theta)?;
        let r = z.norm();
        if r <= rho {
            rb.exclude();
            continue;
        }
        let psi = psi_eval(a, z)?;
        let lower = (r - rho) - psi;
        let upper = psi - (r * r - 2.0 * rho * r + norm * norm).max(0.0).sqrt();
        let gap = ((r - psi) - rho).abs() - (norm * norm - rho * rho) / (2.0 * (r - rho));
        rb.record_points(lower.max(upper).max(gap), &[z]);
    }
    Ok(rb.finish())
}

/// Ratio estimate `Psi(z0)/|z0| <= (Psi(z)/|z|)(1 + eps_{z,z0})` with
/// `eps_{z,z0} = ||A|| |z - z0| / (|z0| Psi(z))`, checked in both orders,
/// and the Lipschitz bound `|Psi(z)/|z| - Psi(z')/|z'|| <= eta(c) |z-z'|`
/// with `eta(c) = ||A||/c^2` on `|z|, |z'| >= c`.
pub fn check_ratio(a: &CMatrix, pairs: &[(Cx, Cx)], c: f64) -> Result<PropertyReport> {
    if pairs.is_empty() {
        return Err(Error::invalid("check_ratio: empty pair list"));
    }
    let norm = op_norm(a)?;
    if c.is_nan() || c <= norm {
        return Err(Error::invalid(format!(
            "check_ratio requires c > ||A|| = {norm}, got c = {c}"
        )));
    }
    let eta = norm / (c * c);
    let mut rb = PropertyReportBuilder::new("ratio", 1e-9);
    for &(z, w) in pairs {
        if z.norm() < c || w.norm() < c {
            rb.exclude();
            continue;
        }
        let pz = psi_eval(a, z)?;
        let pw = psi_eval(a, w)?;
        let dist = (z - w).norm();
        // ordered inequality, both orders
        let eps_zw = norm * dist / (w.norm() * pz);
        let v1 = pw / w.norm() - (pz / z.norm()) * (1.0 + eps_zw);
        let eps_wz = norm * dist / (z.norm() * pw);
        let v2 = pz / z.norm() - (pw / w.norm()) * (1.0 + eps_wz);
        // Lipschitz estimate on the normalized function
        let v3 = (pz / z.norm() - pw / w.norm()).abs() - eta * dist;
        rb.record_points(v1.max(v2).max(v3), &[z, w]);
    }
    Ok(rb.finish())
}

/// Three-point semiconvexity of `u = 1/Psi` along segments `[mu-eta, mu+eta]`
/// with the local bound `C' = 2 (min Psi on segment)^{-3}`, plus midpoint
/// convexity of `u(x) + C'/2 |x|^2` at 17 interior triples.
pub fn check_semiconvex(a: &CMatrix, segments: &[(Cx, Cx)]) -> Result<PropertyReport> {
    if segments.is_empty() {
        return Err(Error::invalid("check_semiconvex: empty segment list"));
    }
    let mut rb = PropertyReportBuilder::new("semiconvex", 1e-8);
    'seg: for &(mu, eta) in segments {
        // margin: Psi must stay away from the spectrum on the segment
        let mut psi33 = [0.0f64; 33];
        for (k, slot) in psi33.iter_mut().enumerate() {
            let t = -1.0 + 2.0 * k as f64 / 32.0;
            let p = psi_eval(a, mu + eta.scale(t))?;
            if p <= 1e-6 {
                rb.exclude();
                continue 'seg;
            }
            *slot = p;
        }
        let min_psi = psi33.iter().copied().fold(f64::INFINITY, f64::min);
        let cbound = 2.0 / (min_psi * min_psi * min_psi);

        let u_mid = 1.0 / psi33[16];
        let u_plus = 1.0 / psi33[32];
        let u_minus = 1.0 / psi33[0];
        let three_point = 2.0 * u_mid - u_plus - u_minus - cbound * eta.norm_sqr();

        // midpoint convexity of u + C'/2 |x|^2 on a 19-point subdivision
        let mut worst = three_point;
        let mut v19 = [0.0f64; 19];
        for (k, slot) in v19.iter_mut().enumerate() {
            let t = -1.0 + 2.0 * k as f64 / 18.0;
            let x = mu + eta.scale(t);
            let p = psi_eval(a, x)?;
            if p <= 1e-6 {
                rb.exclude();
                continue 'seg;
            }
            *slot = 1.0 / p + 0.5 * cbound * x.norm_sqr();
        }
        for k in 1..18 {
            worst = worst.max(2.0 * v19[k] - v19[k - 1] - v19[k + 1]);
        }
        rb.record_points(worst, &[mu, eta]);
    }
    Ok(rb.finish())
}

/// Sub-mean-value inequality for `-log Psi` on circles: the center value
/// must not exceed the m-point trapezoid mean plus a quadrature allowance
/// `r^2 * max |second difference|`.
pub fn check_subharmonic(a: &CMatrix, discs: &[(Cx, f64, usize)]) -> Result<PropertyReport> {
    if discs.is_empty() {
        return Err(Error::invalid("check_subharmonic: empty disc list"));
    }
    let mut rb = PropertyReportBuilder::new("subharmonic", 1e-6);
    'disc: for &(center, radius, m) in discs {
        if radius.is_nan() || radius <= 0.0 || m < 4 {
            rb.exclude();
            continue;
        }
        // margin: center, boundary and 5 interior rings must avoid the spectrum
        let psi_center = psi_eval(a, center)?;
        if psi_center <= 1e-6 {
            rb.exclude();
            continue;
        }
        for ring in 1..=5usize {
            let rr = radius * ring as f64 / 5.0;
            for k in 0..m {
                let phi = std::f64::consts::TAU * k as f64 / m as f64;
                if psi_eval(a, center + Cx::from_polar(rr, phi))? <= 1e-6 {
                    rb.exclude();
                    continue 'disc;
                }
            }
        }
        let mut g = vec![0.0f64; m];
        for (k, slot) in g.iter_mut().enumerate() {
            let phi = std::f64::consts::TAU * k as f64 / m as f64;
            *slot = -psi_eval(a, center + Cx::from_polar(radius, phi))?.ln();
        }
        let mean = g.iter().sum::<f64>() / m as f64;
        let max_second_diff = (0..m)
            .map(|k| (g[(k + 1) % m] - 2.0 * g[k] + g[(k + m - 1) % m]).abs())
            .fold(0.0f64, f64::max);
        let allowance = radius * radius * max_second_diff;
        let violation = (-psi_center.ln()) - mean - allowance;
        rb.record_points(violation, &[center]);
    }
    Ok(rb.finish())
}

/// Run a named subset of the checkers against one matrix with seeded
/// sample geometry: Lipschitz pairs in a box, band/ratio points outside
/// the numerical range, segments and discs in a safe annulus.
pub fn standard_suite(
    a: &CMatrix,
    seed: u64,
    samples: usize,
    props: &[&str],
) -> Result<Vec<PropertyReport>> {
    let norm = op_norm(a)?;
    let mut rng = Lcg64::new(seed);
    let mut reports = Vec::new();
    for &prop in props {
        let report = match prop {
            "lip1" => {
                let b = 3.0f64.max(1.2 * norm);
                check_lip1(a, &gen_pairs(&mut rng, samples, b))?
            }
            "band" => {
                let zs =
                    gen_annulus_points(&mut rng, samples, 1.05 * norm + 0.05, 1.05 * norm + 2.0);
                check_band(a, &zs)?
            }
            "ratio" => {
                let c = 1.1 * norm + 0.1;
                let pairs = gen_annulus_pairs(&mut rng, samples, c, c + 2.0);
                check_ratio(a, &pairs, c)?
            }
            "semiconvex" => {
                let segs = gen_segments(&mut rng, samples, norm + 0.5, norm + 1.5, 0.25);
                check_semiconvex(a, &segs)?
            }
            "subharmonic" => {
                let discs = gen_discs(&mut rng, samples, norm + 0.5, norm + 1.5, 0.2, 16);
                check_subharmonic(a, &discs)?
            }
            other => {
                return Err(Error::invalid(format!(
                "unknown property `{other}` (expected lip1, band, ratio, semiconvex, subharmonic)"
            )))
            }
        };
        reports.push(report);
    }
    Ok(reports)
}

// ── Reproducible sample generators ──────────────────────────────────────

/// Pairs in the rectangle [-b, b]^2.
pub fn gen_pairs(rng: &mut Lcg64, count: usize, b: f64) -> Vec<(Cx, Cx)> {
    (0..count)
        .map(|_| {
            (
                rng.complex_in_rect(-b, b, -b, b),
                rng.complex_in_rect(-b, b, -b, b),
            )
        })
        .collect()
}

/// Points in the annulus r_min <= |z| <= r_max.
pub fn gen_annulus_points(rng: &mut Lcg64, count: usize, r_min: f64, r_max: f64) -> Vec<Cx> {
    (0..count)
        .map(|_| rng.complex_in_annulus(r_min, r_max))
        .collect()
}

/// Pairs with both members in the annulus.
pub fn gen_annulus_pairs(rng: &mut Lcg64, count: usize, r_min: f64, r_max: f64) -> Vec<(Cx, Cx)> {
    (0..count)
        .map(|_| {
            (
                rng.complex_in_annulus(r_min, r_max),
                rng.complex_in_annulus(r_min, r_max),
            )
        })
        .collect()
}

/// Segments (mu, eta) with |eta| <= eta_max, mu in the annulus.
pub fn gen_segments(
    rng: &mut Lcg64,
    count: usize,
    r_min: f64,
    r_max: f64,
    eta_max: f64,
) -> Vec<(Cx, Cx)> {
    (0..count)
        .map(|_| {
            let mu = rng.complex_in_annulus(r_min, r_max);
            let eta = rng.complex_in_annulus(0.0, eta_max);
            (mu, eta)
        })
        .collect()
}

/// Discs (center, radius, m) with centers in the annulus.
pub fn gen_discs(
    rng: &mut Lcg64,
    count: usize,
    r_min: f64,
    r_max: f64,
    rad_max: f64,
    m: usize,
) -> Vec<(Cx, f64, usize)> {
    (0..count)
        .map(|_| {
            let c = rng.complex_in_annulus(r_min, r_max);
            let r = rng.uniform(rad_max * 0.2, rad_max);
            (c, r, m)
        })
        .collect()
}
