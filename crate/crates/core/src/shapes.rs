//! Executable construction of nilpotent matrices with prescribed
//! pseudospectral shapes: given nested domains `G_0 .. G_m` and an
//! admissible `eps_1`, produce `eps_2 > ... > eps_m`, intermediate domains
//! `Omega_k`, Hardy-space nilpotent blocks `T_k(N_k)`, and the block
//! diagonal `T` realizing the interleaved inclusion chain
//! `G_0 > sigma_{eps_1}(T) > G_1 > ... > sigma_{eps_m}(T) > G_m`,
//! then certify the chain by sampling.

use serde::{Deserialize, Serialize};

use crate::checks::{PropertyReport, PropertyReportBuilder};
use crate::cx::{cx, Cx};
use crate::error::{Error, Result};
use crate::hardy::{basis_for_block, nilpotent_block, DomainSpec, NilpotentBlock};
use crate::linalg::sigma_min;
use crate::matrix::CMatrix;
use crate::sample::Lcg64;

/// Doubling ladder cap for block sizes.
pub const LADDER_CAP: usize = 512;
/// Boundary samples per curve in every certification.
pub const BOUNDARY_SAMPLES: usize = 256;
/// Interior samples (radial-angular product) per domain.
pub const INTERIOR_RINGS: usize = 8;
pub const INTERIOR_ANGLES: usize = 8;

/// Nested domains plus the first epsilon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeProblem {
    pub domains: Vec<DomainSpec>,
    pub eps1: f64,
}

impl ShapeProblem {
    pub fn from_json(s: &str) -> Result<Self> {
        let p: ShapeProblem =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("problem JSON: {e}")))?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.domains.len() < 2 {
            return Err(Error::invalid("shape problem needs at least G_0 and G_1"));
        }
        if !self.eps1.is_finite() || self.eps1 <= 0.0 {
            return Err(Error::invalid("eps1 must be positive and finite"));
        }
        for d in &self.domains {
            d.validate()?;
        }
        Ok(())
    }
}

/// Outcome of the construction.
#[derive(Debug, Clone)]
pub struct ShapeResult {
    pub omegas: Vec<DomainSpec>,
    /// `eps_1 > eps_2 > ... > eps_m > 0`.
    pub eps: Vec<f64>,
    pub ns: Vec<usize>,
    pub blocks: Vec<NilpotentBlock>,
    pub t: CMatrix,
    pub delta: f64,
    /// Per level `k`: (outer margin `min Psi - eps_k` on the boundary of
    /// `G_{k-1}` and its exterior ring, inner margin `eps_k - max Psi` on
    /// `clos G_k`). Both must be positive.
    pub margins: Vec<(f64, f64)>,
    pub verification: PropertyReport,
}

// ── geometry ────────────────────────────────────────────────────────────

/// Axis-aligned oval (disc or centered ellipse) used for planning; the
/// construction path is restricted to these shapes.
#[derive(Debug, Clone, Copy)]
struct Oval {
    center: Cx,
    a: f64,
    b: f64,
}

impl Oval {
    fn from_domain(d: &DomainSpec) -> Result<Oval> {
        match d {
            DomainSpec::Disc { center, radius } => Ok(Oval {
                center: *center,
                a: *radius,
                b: *radius,
            }),
            DomainSpec::Ellipse { a, b } => Ok(Oval {
                center: cx(0.0, 0.0),
                a: *a,
                b: *b,
            }),
            DomainSpec::Custom { .. } => Err(Error::UnsupportedModel(
                "custom domains are accepted for verification only, not construction".into(),
            )),
        }
    }

    fn to_domain(self) -> Result<DomainSpec> {
        if self.a == self.b {
            DomainSpec::disc(self.center, self.a)
        } else if self.center == cx(0.0, 0.0) {
            DomainSpec::ellipse(self.a, self.b)
        } else {
            Err(Error::UnsupportedModel(
                "planned domain is an off-center ellipse; mix of off-center discs \
                 and ellipses is not constructible"
                    .into(),
            ))
        }
    }

    /// Interpolation with weight `w` toward `inner`.
    fn lerp(outer: Oval, inner: Oval, w: f64) -> Oval {
        Oval {
            center: outer.center + (inner.center - outer.center).scale(w),
            a: outer.a + (inner.a - outer.a) * w,
            b: outer.b + (inner.b - outer.b) * w,
        }
    }
}

fn boundary_samples(d: &DomainSpec, m: usize) -> Vec<Cx> {
    d.boundary_samples(m)
}

fn interior_samples(d: &DomainSpec) -> Vec<Cx> {
    // radial-angular lattice; exact for disc/ellipse, winding-filtered
    // otherwise
    let oval = match d {
        DomainSpec::Disc { center, radius } => Oval {
            center: *center,
            a: *radius,
            b: *radius,
        },
        DomainSpec::Ellipse { a, b } => Oval {
            center: cx(0.0, 0.0),
            a: *a,
            b: *b,
        },
        DomainSpec::Custom { .. } => {
            // fall back to scaled boundary samples toward the origin
            let pts = d.boundary_samples(INTERIOR_RINGS * INTERIOR_ANGLES);
            return pts
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    p.scale((i % INTERIOR_RINGS + 1) as f64 / (INTERIOR_RINGS + 1) as f64)
                })
                .collect();
        }
    };
    let mut pts = Vec::with_capacity(INTERIOR_RINGS * INTERIOR_ANGLES);
    for i in 0..INTERIOR_RINGS {
        let r = (i as f64 + 0.5) / INTERIOR_RINGS as f64;
        for j in 0..INTERIOR_ANGLES {
            let th = std::f64::consts::TAU * j as f64 / INTERIOR_ANGLES as f64;
            pts.push(oval.center + cx(oval.a * r * th.cos(), oval.b * r * th.sin()));
        }
    }
    pts
}

/// Ring strictly outside the domain at offset `d_out` (inflated oval).
fn exterior_ring(d: &DomainSpec, d_out: f64, m: usize) -> Result<Vec<Cx>> {
    let oval = Oval::from_domain(d)?;
    Ok((0..m)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / m as f64;
            oval.center + cx((oval.a + d_out) * th.cos(), (oval.b + d_out) * th.sin())
        })
        .collect())
}

/// Min distance between two sampled boundaries.
fn boundary_distance(a: &DomainSpec, b: &DomainSpec) -> f64 {
    let pa = boundary_samples(a, BOUNDARY_SAMPLES);
    let pb = boundary_samples(b, BOUNDARY_SAMPLES);
    let mut best = f64::INFINITY;
    for &x in &pa {
        for &y in &pb {
            best = best.min((x - y).norm());
        }
    }
    best
}

/// `inner` compactly contained in `outer`, certified by sampling.
fn verify_nested(outer: &DomainSpec, inner: &DomainSpec) -> Result<()> {
    for p in boundary_samples(inner, BOUNDARY_SAMPLES) {
        if !outer.contains(p) {
            return Err(Error::invalid(format!(
                "nesting violation: boundary point {p} of the inner domain \
                 escapes the outer one"
            )));
        }
    }
    if boundary_distance(outer, inner) <= 1e-9 {
        return Err(Error::invalid(
            "nesting violation: boundaries touch (zero gap)",
        ));
    }
    Ok(())
}

// ── construction stages ─────────────────────────────────────────────────

/// Plan the intermediate domains `Omega_k` between `G_{k-1}` and `G_k`,
/// biased 0.75 toward `G_k` so the first-gap requirement on eps_1 has room.
pub fn plan_domains(problem: &ShapeProblem) -> Result<Vec<DomainSpec>> {
    problem.validate()?;
    let g = &problem.domains;
    for w in g.windows(2) {
        verify_nested(&w[0], &w[1])?;
    }
    let mut omegas = Vec::with_capacity(g.len() - 1);
    for k in 1..g.len() {
        let outer = Oval::from_domain(&g[k - 1])?;
        let inner = Oval::from_domain(&g[k])?;
        omegas.push(Oval::lerp(outer, inner, 0.75).to_domain()?);
    }
    // re-verify the interleaved chain
    for k in 1..g.len() {
        verify_nested(&g[k - 1], &omegas[k - 1])?;
        verify_nested(&omegas[k - 1], &g[k])?;
    }
    let achieved = boundary_distance(&g[0], &omegas[0]);
    if problem.eps1 >= achieved {
        return Err(Error::InfeasibleEpsilon {
            eps1: problem.eps1,
            achieved,
        });
    }
    Ok(omegas)
}

/// Psi of a block at a point.
fn block_psi(block: &CMatrix, z: Cx) -> Result<f64> {
    sigma_min(&block.minus_scalar(z))
}

/// Psi of the direct sum: min over blocks.
fn blocks_psi(blocks: &[&CMatrix], z: Cx) -> Result<f64> {
    let mut best = f64::INFINITY;
    for b in blocks {
        best = best.min(block_psi(b, z)?);
    }
    Ok(best)
}

/// Smallest ladder size whose block pushes Psi below `eps_k / 2` on
/// `clos G_k` (boundary + interior sampling); for the first level the block
/// must also keep Psi above `eps_1` on the boundary of `G_0` and an
/// exterior guard ring.
pub fn choose_block(
    omega: &DomainSpec,
    g_target: &DomainSpec,
    eps_k: f64,
    outer: Option<(&DomainSpec, f64)>,
    ladder_cap: usize,
) -> Result<(usize, NilpotentBlock)> {
    if eps_k.is_nan() || eps_k <= 0.0 {
        return Err(Error::invalid("choose_block needs eps_k > 0"));
    }
    let mut inner_pts = boundary_samples(g_target, BOUNDARY_SAMPLES);
    inner_pts.extend(interior_samples(g_target));
    let mut worst_inner = f64::INFINITY;
    let mut worst_outer = f64::NEG_INFINITY;

    // The blocks compress the adjoint of multiplication, whose spectrum is
    // the conjugate of the underlying domain; build on conj(omega) so the
    // pseudospectra land on omega itself.
    let omega_conj = omega.conjugate();

    let mut n = 8usize;
    while n <= ladder_cap {
        let basis = basis_for_block(&omega_conj, n)?;
        let block = nilpotent_block(&basis, n)?;

        let mut ok = true;
        let mut max_inner = 0.0f64;
        for &z in &inner_pts {
            let psi = block_psi(&block.matrix, z)?;
            max_inner = max_inner.max(psi);
            if psi > eps_k / 2.0 {
                ok = false;
                break;
            }
        }
        worst_inner = worst_inner.min(max_inner);

        if ok {
            if let Some((g0, eps1)) = outer {
                let d_out = boundary_distance(g0, omega) / 2.0;
                let mut outer_pts = boundary_samples(g0, BOUNDARY_SAMPLES);
                outer_pts.extend(exterior_ring(g0, d_out, BOUNDARY_SAMPLES)?);
                let mut min_outer = f64::INFINITY;
                for &z in &outer_pts {
                    let psi = block_psi(&block.matrix, z)?;
                    min_outer = min_outer.min(psi);
                    if psi <= eps1 {
                        ok = false;
                        break;
                    }
                }
                worst_outer = worst_outer.max(min_outer);
            }
        }
        if ok {
            return Ok((n, block));
        }
        n *= 2;
    }
    Err(Error::Construction {
        stage: "choose_block".into(),
        message: format!(
            "ladder cap {ladder_cap} reached; best max Psi on target {worst_inner:.3e} \
             vs required {:.3e}{}",
            eps_k / 2.0,
            if outer.is_some() {
                format!("; best exterior min Psi {worst_outer:.3e}")
            } else {
                String::new()
            }
        ),
    })
}

/// `eps_k = 0.5 min(eps_{k-1}, delta, 1/R)` with `R` the largest resolvent
/// norm of the previous blocks over the boundary of `G_{k-1}` plus an
/// exterior guard ring.
pub fn choose_epsilon(
    prev_blocks: &[NilpotentBlock],
    g_prev: &DomainSpec,
    eps_prev: f64,
    delta: f64,
) -> Result<f64> {
    if prev_blocks.is_empty() {
        return Err(Error::invalid("choose_epsilon needs previous blocks"));
    }
    let mut pts = boundary_samples(g_prev, BOUNDARY_SAMPLES);
    pts.extend(exterior_ring(g_prev, delta / 2.0, BOUNDARY_SAMPLES)?);
    let mats: Vec<&CMatrix> = prev_blocks.iter().map(|b| &b.matrix).collect();
    let mut min_psi = f64::INFINITY;
    for &z in &pts {
        let psi = blocks_psi(&mats, z)?;
        if psi == 0.0 {
            continue; // sample hit the spectrum: excluded
        }
        min_psi = min_psi.min(psi);
    }
    if !min_psi.is_finite() {
        return Err(Error::Construction {
            stage: "choose_epsilon".into(),
            message: "every boundary sample hit the spectrum".into(),
        });
    }
    Ok(0.5 * eps_prev.min(delta).min(min_psi))
}

/// Sample-certify the full inclusion chain; margins must be positive.
pub fn verify_inclusions(
    blocks: &[NilpotentBlock],
    eps: &[f64],
    domains: &[DomainSpec],
    delta: f64,
) -> Result<(PropertyReport, Vec<(f64, f64)>)> {
    if blocks.is_empty() || eps.len() != blocks.len() || domains.len() != eps.len() + 1 {
        return Err(Error::invalid("verify_inclusions: inconsistent lengths"));
    }
    let mats: Vec<&CMatrix> = blocks.iter().map(|b| &b.matrix).collect();
    let mut rb = PropertyReportBuilder::new("shape_inclusions", 0.0);
    let mut margins = Vec::with_capacity(eps.len());
    for k in 0..eps.len() {
        let eps_k = eps[k];
        // (a) sigma_eps inside G_{k-1}: Psi > eps_k on its boundary and
        // on an exterior ring (Lip-1 then certifies a margin neighborhood)
        let mut outer_pts = boundary_samples(&domains[k], BOUNDARY_SAMPLES);
        outer_pts.extend(exterior_ring(&domains[k], delta / 2.0, BOUNDARY_SAMPLES)?);
        let mut outer_margin = f64::INFINITY;
        for &z in &outer_pts {
            let psi = blocks_psi(&mats, z)?;
            outer_margin = outer_margin.min(psi - eps_k);
            rb.record_points(eps_k - psi, &[z]);
        }
        // (b) sigma_eps contains G_k: Psi < eps_k on clos G_k
        let mut inner_pts = boundary_samples(&domains[k + 1], BOUNDARY_SAMPLES);
        inner_pts.extend(interior_samples(&domains[k + 1]));
        let mut inner_margin = f64::INFINITY;
        for &z in &inner_pts {
            let psi = blocks_psi(&mats, z)?;
            inner_margin = inner_margin.min(eps_k - psi);
            rb.record_points(psi - eps_k, &[z]);
        }
        margins.push((outer_margin, inner_margin));
    }
    Ok((rb.finish(), margins))
}

/// Run the full construction with the default ladder cap.
pub fn construct(problem: &ShapeProblem) -> Result<ShapeResult> {
    construct_with_cap(problem, LADDER_CAP)
}

pub fn construct_with_cap(problem: &ShapeProblem, ladder_cap: usize) -> Result<ShapeResult> {
    let omegas = plan_domains(problem)?;
    let g = &problem.domains;
    let m = omegas.len();

    let mut delta = f64::INFINITY;
    for omega in &omegas {
        for gk in g {
            delta = delta.min(boundary_distance(omega, gk));
        }
    }

    let mut eps = Vec::with_capacity(m);
    let mut blocks: Vec<NilpotentBlock> = Vec::with_capacity(m);
    let mut ns = Vec::with_capacity(m);
    for k in 0..m {
        let eps_k = if k == 0 {
            problem.eps1
        } else {
            choose_epsilon(&blocks, &g[k], eps[k - 1], delta)?
        };
        let outer = if k == 0 {
            Some((&g[0], problem.eps1))
        } else {
            None
        };
        let (n, block) = choose_block(&omegas[k], &g[k + 1], eps_k, outer, ladder_cap)?;
        eps.push(eps_k);
        ns.push(n);
        blocks.push(block);
    }

    let t = CMatrix::block_diag(&blocks.iter().map(|b| b.matrix.clone()).collect::<Vec<_>>())?;

    // direct-sum law self-check: Psi of the assembled T equals the
    // blockwise min at random samples
    let mats: Vec<&CMatrix> = blocks.iter().map(|b| &b.matrix).collect();
    let outer_oval = Oval::from_domain(&g[0])?;
    let span = outer_oval.a.max(outer_oval.b) * 1.5;
    let mut rng = Lcg64::new(0x5EED);
    for _ in 0..100 {
        let z = rng.complex_in_rect(
            outer_oval.center.re - span,
            outer_oval.center.re + span,
            outer_oval.center.im - span,
            outer_oval.center.im + span,
        );
        let direct = sigma_min(&t.minus_scalar(z))?;
        let blockwise = blocks_psi(&mats, z)?;
        if (direct - blockwise).abs() > 1e-12 * direct.max(1.0) {
            return Err(Error::Construction {
                stage: "direct_sum_law".into(),
                message: format!(
                    "block-diagonal sigma_min {direct} disagrees with blockwise min {blockwise} at {z}"
                ),
            });
        }
    }

    let (verification, margins) = verify_inclusions(&blocks, &eps, g, delta)?;
    Ok(ShapeResult {
        omegas,
        eps,
        ns,
        blocks,
        t,
        delta,
        margins,
        verification,
    })
}

// ── JSON wire form ──────────────────────────────────────────────────────

#[derive(Serialize)]
struct BlockWire<'a> {
    n: usize,
    residual: f64,
    domain: &'a DomainSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<&'a CMatrix>,
}

#[derive(Serialize)]
struct ShapeResultWire<'a> {
    omegas: &'a [DomainSpec],
    eps: &'a [f64],
    ns: &'a [usize],
    delta: f64,
    margins: &'a [(f64, f64)],
    pass: bool,
    verification: &'a PropertyReport,
    blocks: Vec<BlockWire<'a>>,
}

impl ShapeResult {
    /// Result JSON; block matrices elided on request.
    pub fn to_json(&self, elide_blocks: bool) -> String {
        let wire = ShapeResultWire {
            omegas: &self.omegas,
            eps: &self.eps,
            ns: &self.ns,
            delta: self.delta,
            margins: &self.margins,
            pass: self.verification.pass,
            verification: &self.verification,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockWire {
                    n: b.n,
                    residual: b.residual,
                    domain: &b.domain,
                    matrix: if elide_blocks { None } else { Some(&b.matrix) },
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("result serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn discs(radii: &[f64]) -> Vec<DomainSpec> {
        radii
            .iter()
            .map(|&r| DomainSpec::disc(cx(0.0, 0.0), r).unwrap())
            .collect()
    }

    #[test]
    fn plan_domains_three_discs() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.6, 0.3]),
            eps1: 0.15,
        };
        let omegas = plan_domains(&problem).unwrap();
        assert_eq!(omegas.len(), 2);
        match &omegas[0] {
            DomainSpec::Disc { radius, .. } => assert!((radius - 0.7).abs() < 1e-12),
            other => panic!("expected disc, got {other:?}"),
        }
        match &omegas[1] {
            DomainSpec::Disc { radius, .. } => assert!((radius - 0.375).abs() < 1e-12),
            other => panic!("expected disc, got {other:?}"),
        }
    }

    #[test]
    fn plan_domains_single_level() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.5]),
            eps1: 0.1,
        };
        let omegas = plan_domains(&problem).unwrap();
        match &omegas[0] {
            DomainSpec::Disc { radius, .. } => assert!((radius - 0.625).abs() < 1e-12),
            other => panic!("expected disc, got {other:?}"),
        }
    }

    #[test]
    fn plan_rejects_non_nested() {
        let problem = ShapeProblem {
            domains: discs(&[0.5, 0.5]),
            eps1: 0.1,
        };
        assert!(matches!(
            plan_domains(&problem),
            Err(Error::InvalidInput(_))
        ));
        let problem = ShapeProblem {
            domains: discs(&[0.5, 0.9]),
            eps1: 0.1,
        };
        assert!(plan_domains(&problem).is_err());
    }

    #[test]
    fn plan_rejects_infeasible_eps() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.6, 0.3]),
            eps1: 0.5,
        };
        match plan_domains(&problem) {
            Err(Error::InfeasibleEpsilon { eps1, achieved }) => {
                assert_eq!(eps1, 0.5);
                assert!((achieved - 0.3).abs() < 1e-3, "achieved {achieved}");
            }
            other => panic!("expected infeasible epsilon, got {other:?}"),
        }
    }

    #[test]
    fn choose_block_trivial_target_origin() {
        // G a tiny disc around the origin: any block has Psi(0) = 0, the
        // smallest ladder size already wins
        let omega = DomainSpec::disc(cx(0.0, 0.0), 0.5).unwrap();
        let target = DomainSpec::disc(cx(0.0, 0.0), 0.01).unwrap();
        let (n, block) = choose_block(&omega, &target, 0.2, None, 64).unwrap();
        assert_eq!(n, 8);
        assert_eq!(block.n, 8);
    }

    #[test]
    fn choose_block_cap_error() {
        let omega = DomainSpec::disc(cx(0.0, 0.0), 0.5).unwrap();
        let target = DomainSpec::disc(cx(0.0, 0.0), 0.4).unwrap();
        match choose_block(&omega, &target, 1e-12, None, 32) {
            Err(Error::Construction { stage, message }) => {
                assert_eq!(stage, "choose_block");
                assert!(message.contains("ladder cap"));
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn construct_two_discs() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.5]),
            eps1: 0.1,
        };
        let result = construct(&problem).unwrap();
        assert_eq!(result.eps.len(), 1);
        assert!(result.verification.pass, "margins {:?}", result.margins);
        assert!(result.margins[0].0 > 0.0 && result.margins[0].1 > 0.0);
        assert!(result.blocks[0].residual <= 1e-6);
    }

    #[test]
    fn construct_three_discs_end_to_end() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.6, 0.3]),
            eps1: 0.15,
        };
        let result = construct(&problem).unwrap();
        assert_eq!(result.eps.len(), 2);
        assert!(result.eps[0] > result.eps[1] && result.eps[1] > 0.0);
        assert!(result.ns.iter().sum::<usize>() <= LADDER_CAP);
        assert!(result.verification.pass, "margins {:?}", result.margins);
        for &(outer, inner) in &result.margins {
            assert!(outer > 0.0 && inner > 0.0);
        }
        assert_eq!(result.t.rows(), result.ns.iter().sum::<usize>());
    }

    #[test]
    fn construct_off_axis_disc_chain() {
        // centers off the real axis exercise the conjugation bookkeeping:
        // without it the block pseudospectra land mirrored across the axis
        let problem = ShapeProblem {
            domains: vec![
                DomainSpec::disc(cx(0.1, 0.15), 1.0).unwrap(),
                DomainSpec::disc(cx(-0.05, 0.1), 0.45).unwrap(),
            ],
            eps1: 0.1,
        };
        let result = construct(&problem).unwrap();
        assert!(result.verification.pass, "margins {:?}", result.margins);
        assert!(result.margins[0].0 > 0.0 && result.margins[0].1 > 0.0);
    }

    #[test]
    fn verification_catches_doubled_eps() {
        // doubling the last epsilon must break the outer containment
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.6, 0.3]),
            eps1: 0.15,
        };
        let result = construct(&problem).unwrap();
        let mut eps = result.eps.clone();
        let last = eps.len() - 1;
        eps[last] = result.eps[0]; // gratuitously large
        let (report, _) =
            verify_inclusions(&result.blocks, &eps, &problem.domains, result.delta).unwrap();
        assert!(!report.pass);
        assert!(!report.witnesses.is_empty());
    }

    #[test]
    fn verification_fails_when_target_not_covered() {
        // 1x1 zero block: sigma_eps(0) is the eps-disc around 0; a G_1 not
        // containing ... covered by the eps-disc fails the inner check
        let zero_block = NilpotentBlock {
            n: 1,
            matrix: CMatrix::zeros(1, 1),
            domain: DomainSpec::disc(cx(0.0, 0.0), 0.5).unwrap(),
            residual: 0.0,
        };
        let domains = discs(&[2.0, 1.0]);
        let (report, margins) = verify_inclusions(&[zero_block], &[0.5], &domains, 0.25).unwrap();
        // Psi(z) = |z| = 1 on the boundary of G_1, far above eps = 0.5
        assert!(!report.pass);
        assert!(margins[0].1 < 0.0);
    }

    #[test]
    fn result_json_elides_blocks() {
        let problem = ShapeProblem {
            domains: discs(&[1.0, 0.5]),
            eps1: 0.1,
        };
        let result = construct(&problem).unwrap();
        let with = result.to_json(false);
        let without = result.to_json(true);
        assert!(with.contains("\"matrix\""));
        assert!(!without.contains("\"matrix\""));
        assert!(without.contains("\"pass\": true"));
    }

    #[test]
    fn problem_json_round_trip() {
        let s = r#"{"domains":[{"kind":"disc","center":[0,0],"radius":1.0},{"kind":"disc","center":[0,0],"radius":0.5}],"eps1":0.1}"#;
        let p = ShapeProblem::from_json(s).unwrap();
        assert_eq!(p.domains.len(), 2);
        assert_eq!(p.eps1, 0.1);
        assert!(ShapeProblem::from_json(r#"{"domains":[],"eps1":0.1}"#).is_err());
    }
}
