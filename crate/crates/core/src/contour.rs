//! Level-set extraction: marching squares with linear edge interpolation.
//!
//! The eps-level of a sampled field is returned as polylines. Crossing
//! vertices are computed once per grid edge and shared between the two
//! adjacent cells, so chained segments meet exactly. Saddle cells (two
//! opposite corners inside) are resolved by comparing the cell-center
//! average against the level.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Extracted eps-level: polylines in the plane, closed curves repeat the
/// first vertex at the end.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelSet {
    pub epsilon: f64,
    pub polylines: Vec<Vec<[f64; 2]>>,
}

/// Grid edge carrying a crossing: horizontal edges join node (ix, iy) to
/// (ix+1, iy), vertical ones join (ix, iy) to (ix, iy+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    H(usize, usize),
    V(usize, usize),
}

pub fn extract_level(field: &ScalarField, eps: f64) -> Result<LevelSet> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::invalid("level epsilon must be positive and finite"));
    }
    let grid = &field.grid;
    let inside = |v: f64| v < eps;

    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut vertex_of: HashMap<EdgeId, usize> = HashMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();

    let mut vertex_for = |edge: EdgeId, field: &ScalarField| -> usize {
        if let Some(&i) = vertex_of.get(&edge) {
            return i;
        }
        let (p0, p1, f0, f1) = match edge {
            EdgeId::H(ix, iy) => (
                grid.node(ix, iy),
                grid.node(ix + 1, iy),
                field.at(ix, iy),
                field.at(ix + 1, iy),
            ),
            EdgeId::V(ix, iy) => (
                grid.node(ix, iy),
                grid.node(ix, iy + 1),
                field.at(ix, iy),
                field.at(ix, iy + 1),
            ),
        };
        let t = (eps - f0) / (f1 - f0);
        let p = [p0.re + t * (p1.re - p0.re), p0.im + t * (p1.im - p0.im)];
        let idx = vertices.len();
        vertices.push(p);
        vertex_of.insert(edge, idx);
        idx
    };

    for iy in 0..grid.ny - 1 {
        for ix in 0..grid.nx - 1 {
            let bl = inside(field.at(ix, iy));
            let br = inside(field.at(ix + 1, iy));
            let tr = inside(field.at(ix + 1, iy + 1));
            let tl = inside(field.at(ix, iy + 1));
            let code = bl as u8 | (br as u8) << 1 | (tr as u8) << 2 | (tl as u8) << 3;
            if code == 0 || code == 15 {
                continue;
            }
            let bottom = EdgeId::H(ix, iy);
            let top = EdgeId::H(ix, iy + 1);
            let left = EdgeId::V(ix, iy);
            let right = EdgeId::V(ix + 1, iy);
            let mut emit = |a: EdgeId, b: EdgeId, field: &ScalarField| {
                let ia = vertex_for(a, field);
                let ib = vertex_for(b, field);
                segments.push((ia, ib));
            };
            match code {
                1 => emit(left, bottom, field),
                2 => emit(bottom, right, field),
                3 => emit(left, right, field),
                4 => emit(right, top, field),
                6 => emit(bottom, top, field),
                7 => emit(left, top, field),
                8 => emit(top, left, field),
                9 => emit(bottom, top, field),
                11 => emit(right, top, field),
                12 => emit(right, left, field),
                13 => emit(bottom, right, field),
                14 => emit(bottom, left, field),
                5 | 10 => {
                    let center = 0.25
                        * (field.at(ix, iy)
                            + field.at(ix + 1, iy)
                            + field.at(ix + 1, iy + 1)
                            + field.at(ix, iy + 1));
                    let center_inside = inside(center);
                    if code == 5 {
                        // bl and tr inside
                        if center_inside {
                            emit(left, top, field);
                            emit(bottom, right, field);
                        } else {
                            emit(left, bottom, field);
                            emit(right, top, field);
                        }
                    } else {
                        // br and tl inside
                        if center_inside {
                            emit(left, bottom, field);
                            emit(right, top, field);
                        } else {
                            emit(bottom, right, field);
                            emit(top, left, field);
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    Ok(LevelSet {
        epsilon: eps,
        polylines: chain_segments(&vertices, &segments),
    })
}

/// Stitch unordered segments into polylines. Every vertex touches at most
/// two segments; open chains start at degree-1 vertices, the rest are
/// cycles and get closed explicitly.
fn chain_segments(vertices: &[[f64; 2]], segments: &[(usize, usize)]) -> Vec<Vec<[f64; 2]>> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (si, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(si);
        incident.entry(b).or_default().push(si);
    }
    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();

    let trace = |start_seg: usize, start_vertex: usize, used: &mut Vec<bool>| {
        let mut pts: Vec<usize> = vec![start_vertex];
        let mut seg = start_seg;
        let mut v = start_vertex;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == v { b } else { a };
            pts.push(next);
            v = next;
            match incident
                .get(&v)
                .and_then(|ss| ss.iter().find(|&&s| !used[s]))
            {
                Some(&s) => seg = s,
                None => break,
            }
        }
        pts
    };

    // Open chains first: deterministic scan order over segments.
    for si in 0..segments.len() {
        if used[si] {
            continue;
        }
        let (a, b) = segments[si];
        let deg_a = incident[&a].len();
        let deg_b = incident[&b].len();
        if deg_a == 1 || deg_b == 1 {
            let start = if deg_a == 1 { a } else { b };
            let pts = trace(si, start, &mut used);
            polylines.push(pts.iter().map(|&i| vertices[i]).collect());
        }
    }
    // Remaining segments belong to cycles.
    for si in 0..segments.len() {
        if used[si] {
            continue;
        }
        let (a, _) = segments[si];
        let pts = trace(si, a, &mut used);
        // trace stops when it returns to the start; re-close explicitly
        let mut poly: Vec<[f64; 2]> = pts.iter().map(|&i| vertices[i]).collect();
        if poly.first() != poly.last() {
            let first = poly[0];
            poly.push(first);
        }
        polylines.push(poly);
    }
    polylines
}

impl LevelSet {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("level set serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("level-set JSON: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::cx;
    use crate::field::{compute_field, GridSpec};
    use crate::matrix::CMatrix;

    fn circle_field(grid: &GridSpec) -> ScalarField {
        let a = CMatrix::diag(&[cx(0.0, 0.0)]);
        compute_field(&a, grid).unwrap()
    }

    #[test]
    fn rejects_bad_eps() {
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 8, 8).unwrap();
        let f = circle_field(&grid);
        assert!(extract_level(&f, 0.0).is_err());
        assert!(extract_level(&f, -0.1).is_err());
    }

    #[test]
    fn eps_above_max_gives_empty() {
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 16, 16).unwrap();
        let f = circle_field(&grid);
        let ls = extract_level(&f, 10.0).unwrap();
        assert!(ls.polylines.is_empty());
    }

    #[test]
    fn circle_level_is_one_closed_curve_near_radius() {
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 33, 33).unwrap();
        let f = circle_field(&grid);
        let ls = extract_level(&f, 0.5).unwrap();
        assert_eq!(ls.polylines.len(), 1);
        let poly = &ls.polylines[0];
        assert_eq!(poly.first(), poly.last(), "curve must be closed");
        let cell_diag = (grid.dx().powi(2) + grid.dy().powi(2)).sqrt();
        for p in poly {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(
                (r - 0.5).abs() <= cell_diag,
                "radial deviation {}",
                (r - 0.5).abs()
            );
        }
        assert!(poly.len() > 8);
    }

    #[test]
    fn two_eigenvalues_give_two_disjoint_curves() {
        let a = CMatrix::diag(&[cx(0.0, 0.0), cx(1.0, 0.0)]);
        let grid = GridSpec::new(-1.0, 2.0, -1.0, 1.0, 65, 49).unwrap();
        let f = compute_field(&a, &grid).unwrap();
        let ls = extract_level(&f, 0.3).unwrap();
        assert_eq!(ls.polylines.len(), 2);
        for poly in &ls.polylines {
            assert_eq!(poly.first(), poly.last());
            // each curve hugs one of the two circles
            let near0 = (poly[0][0].powi(2) + poly[0][1].powi(2)).sqrt() < 0.5;
            let c = if near0 { cx(0.0, 0.0) } else { cx(1.0, 0.0) };
            for p in poly {
                let r = (cx(p[0], p[1]) - c).norm();
                assert!((r - 0.3).abs() <= 0.1);
            }
        }
    }

    #[test]
    fn vertices_interpolate_to_eps() {
        let a = CMatrix::diag(&[cx(0.1, 0.2), cx(0.8, -0.4)]);
        let grid = GridSpec::new(-1.0, 2.0, -1.5, 1.5, 41, 37).unwrap();
        let f = compute_field(&a, &grid).unwrap();
        let eps = 0.37;
        let ls = extract_level(&f, eps).unwrap();
        assert!(!ls.polylines.is_empty());
        let (dx, dy) = (grid.dx(), grid.dy());
        for poly in &ls.polylines {
            for p in poly {
                // locate the grid edge this vertex lies on and re-interpolate
                let fx = (p[0] - grid.x_min) / dx;
                let fy = (p[1] - grid.y_min) / dy;
                let on_col = (fx - fx.round()).abs() < 1e-9;
                let interp = if on_col {
                    let ix = fx.round() as usize;
                    let iy = fy.floor() as usize;
                    let t = fy - iy as f64;
                    f.at(ix, iy) + t * (f.at(ix, iy + 1) - f.at(ix, iy))
                } else {
                    let iy = fy.round() as usize;
                    let ix = fx.floor() as usize;
                    let t = fx - ix as f64;
                    f.at(ix, iy) + t * (f.at(ix + 1, iy) - f.at(ix, iy))
                };
                assert!(
                    (interp - eps).abs() <= 1e-12,
                    "interpolation inconsistency {}",
                    (interp - eps).abs()
                );
            }
        }
    }

    #[test]
    fn level_set_json_round_trip() {
        let ls = LevelSet {
            epsilon: 0.25,
            polylines: vec![vec![[0.0, 1.0], [0.5, 0.5], [0.0, 1.0]]],
        };
        let s = ls.to_json();
        assert!(s.starts_with(r#"{"epsilon":0.25,"polylines":[[[0.0,1.0]"#));
        let back = LevelSet::from_json(&s).unwrap();
        assert_eq!(back.polylines, ls.polylines);
    }
}
