//! Psi sampled on a rectangular grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cx::{cx, Cx};
use crate::error::{Error, Result};
use crate::linalg::psi_eval;
use crate::matrix::CMatrix;

/// Rectangular grid, inclusive of both endpoints in each direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(Error::invalid("grid bounds must satisfy min < max"));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::invalid("grid needs at least 2 nodes per direction"));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// Node (ix, iy) as a complex point.
    #[inline]
    pub fn node(&self, ix: usize, iy: usize) -> Cx {
        cx(
            self.x_min + ix as f64 * self.dx(),
            self.y_min + iy as f64 * self.dy(),
        )
    }

    /// `start:stop` syntax used by the CLI: `xmin:xmax:ymin:ymax:nx:ny`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 6 {
            return Err(Error::invalid(format!(
                "grid syntax is xmin:xmax:ymin:ymax:nx:ny, got `{s}`"
            )));
        }
        let f = |i: usize| -> Result<f64> {
            parts[i]
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad grid number `{}`", parts[i])))
        };
        let n = |i: usize| -> Result<usize> {
            parts[i]
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad grid count `{}`", parts[i])))
        };
        GridSpec::new(f(0)?, f(1)?, f(2)?, f(3)?, n(4)?, n(5)?)
    }
}

/// Psi sampled on a grid; `values[iy * nx + ix]`, row-major over y then x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl ScalarField {
    #[inline]
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `x,y,psi`, one row per node, row-major over y then x.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,psi\n");
        for iy in 0..self.grid.ny {
            for ix in 0..self.grid.nx {
                let z = self.grid.node(ix, iy);
                out.push_str(&format!("{},{},{}\n", z.re, z.im, self.at(ix, iy)));
            }
        }
        out
    }
}

/// Evaluate Psi_A at every node. Nodes are independent, so the evaluation
/// parallelizes; results are identical to the serial order.
pub fn compute_field(a: &CMatrix, grid: &GridSpec) -> Result<ScalarField> {
    if !a.is_square() {
        return Err(Error::invalid("compute_field: matrix not square"));
    }
    let nodes: Vec<Cx> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.node(ix, iy))
        .collect();
    let values: Result<Vec<f64>> = nodes.par_iter().map(|&z| psi_eval(a, z)).collect();
    Ok(ScalarField {
        grid: *grid,
        values: values?,
    })
}

/// Same evaluation with a caller-supplied pointwise function; used for
/// block-diagonal operators where Psi is a minimum over blocks.
pub fn compute_field_with(grid: &GridSpec, f: impl Fn(Cx) -> f64 + Sync) -> ScalarField {
    let nodes: Vec<Cx> = (0..grid.ny)
        .flat_map(|iy| (0..grid.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.node(ix, iy))
        .collect();
    let values: Vec<f64> = nodes.par_iter().map(|&z| f(z)).collect();
    ScalarField {
        grid: *grid,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 2, 2).is_ok());
        assert!(GridSpec::new(1.0, 1.0, 0.0, 1.0, 2, 2).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 1, 2).is_err());
    }

    #[test]
    fn grid_parse() {
        let g = GridSpec::parse("-1:2:-1:1:64:32").unwrap();
        assert_eq!(g.nx, 64);
        assert_eq!(g.ny, 32);
        assert_eq!(g.x_min, -1.0);
        assert!(GridSpec::parse("1:2:3").is_err());
        assert!(GridSpec::parse("0:1:0:1:64:x").is_err());
    }

    #[test]
    fn normal_matrix_field_is_distance_to_spectrum() {
        let a = CMatrix::diag(&[cx(0.0, 0.0), cx(1.0, 0.0)]);
        let grid = GridSpec::new(-1.0, 2.0, -1.0, 1.0, 64, 64).unwrap();
        let field = compute_field(&a, &grid).unwrap();
        let mut max_err = 0.0f64;
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let z = grid.node(ix, iy);
                let oracle = z.norm().min((z - cx(1.0, 0.0)).norm());
                max_err = max_err.max((field.at(ix, iy) - oracle).abs());
            }
        }
        assert!(max_err <= 1e-10, "max err {max_err}");
    }

    #[test]
    fn one_by_one_field_is_distance() {
        let a = CMatrix::diag(&[cx(0.3, -0.2)]);
        let grid = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 17, 9).unwrap();
        let field = compute_field(&a, &grid).unwrap();
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let z = grid.node(ix, iy);
                let d = (z - cx(0.3, -0.2)).norm();
                assert!((field.at(ix, iy) - d).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn jordan_node_matches_closed_form() {
        // psi of J_2 at z = 2 equals the smallest singular value of J_2 - 2I.
        let a = CMatrix::jordan_block(2);
        let grid = GridSpec::new(0.0, 2.0, -1.0, 1.0, 3, 3).unwrap();
        let field = compute_field(&a, &grid).unwrap();
        // node (2, 1) is z = 2 + 0i
        let v = field.at(2, 1);
        let expect = ((9.0 - 17f64.sqrt()) / 2.0).sqrt();
        assert!((v - expect).abs() <= 1e-12);
    }

    #[test]
    fn csv_shape() {
        let a = CMatrix::diag(&[cx(0.0, 0.0)]);
        let grid = GridSpec::new(0.0, 1.0, 0.0, 1.0, 3, 2).unwrap();
        let field = compute_field(&a, &grid).unwrap();
        let csv = field.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,psi");
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1].starts_with("0,0,"));
    }
}
