//! Dense kernels of the laboratory: smallest/largest singular values,
//! psi evaluation and the numerical-range support function.

use rayon::prelude::*;

use crate::cx::Cx;
use crate::eigen::hermitian_lambda_max;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::svd::singular_values;

/// Above this dimension `op_norm` switches from full SVD to power
/// iteration on `A^H A`. Only the triangular-Toeplitz multiplier
/// experiments ever cross it.
const OP_NORM_POWER_THRESHOLD: usize = 768;

/// Relative tolerance of the power-iteration fast path.
pub const POWER_ITERATION_TOL: f64 = 1e-10;

/// Iteration cap of the power-iteration fast path.
pub const POWER_ITERATION_CAP: usize = 10_000;

/// Smallest singular value. For square `A` this equals the injectivity
/// radius and, when `A` is invertible, `1 / ||A^{-1}||`.
pub fn sigma_min(a: &CMatrix) -> Result<f64> {
    let sv = singular_values(a)?;
    Ok(*sv.last().expect("nonempty"))
}

/// Operator norm (largest singular value). Dimensions beyond
/// [`OP_NORM_POWER_THRESHOLD`] use power iteration with tolerance
/// [`POWER_ITERATION_TOL`] and cap [`POWER_ITERATION_CAP`].
pub fn op_norm(a: &CMatrix) -> Result<f64> {
    if a.rows().min(a.cols()) > OP_NORM_POWER_THRESHOLD {
        return op_norm_power(a, POWER_ITERATION_TOL, POWER_ITERATION_CAP);
    }
    let sv = singular_values(a)?;
    Ok(sv[0])
}

/// Psi(z) = smallest singular value of `A - z I`; zero exactly when `z`
/// is an eigenvalue, to working precision.
pub fn psi_eval(a: &CMatrix, z: Cx) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::invalid("psi_eval: matrix not square"));
    }
    sigma_min(&a.minus_scalar(z))
}

/// Support function of the numerical range: largest eigenvalue of the
/// Hermitian part of `e^{-i theta} A`.
pub fn support_function(a: &CMatrix, theta: f64) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::invalid("support_function: matrix not square"));
    }
    let rotated = a.scale(Cx::from_polar(1.0, -theta));
    let herm = rotated.add(&rotated.adjoint()).scale(Cx::new(0.5, 0.0));
    hermitian_lambda_max(&herm)
}

/// Largest singular value by power iteration on `A^H A`, deterministic
/// all-ones start. Converges from below; intended for very large
/// triangular Toeplitz matrices where the top singular value is
/// well separated.
pub fn op_norm_power(a: &CMatrix, tol: f64, cap: usize) -> Result<f64> {
    let n = a.cols();
    let mut v: Vec<Cx> = vec![Cx::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let mut sigma_prev = 0.0f64;
    for _ in 0..cap {
        let w = par_matvec(a, &v);
        let sigma = l2_norm(&w);
        if sigma == 0.0 {
            return Ok(0.0);
        }
        let mut vnext = par_adjoint_matvec(a, &w);
        let nn = l2_norm(&vnext);
        if nn == 0.0 {
            return Ok(sigma);
        }
        let inv = Cx::new(1.0 / nn, 0.0);
        for x in vnext.iter_mut() {
            *x *= inv;
        }
        v = vnext;
        if (sigma - sigma_prev).abs() <= tol * sigma.max(f64::MIN_POSITIVE) {
            return Ok(sigma);
        }
        sigma_prev = sigma;
    }
    Err(Error::Convergence(format!(
        "power iteration did not reach tol {tol} within {cap} iterations"
    )))
}

fn l2_norm(v: &[Cx]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn par_matvec(a: &CMatrix, v: &[Cx]) -> Vec<Cx> {
    let cols = a.cols();
    (0..a.rows())
        .into_par_iter()
        .map(|i| {
            let row = &a.data()[i * cols..(i + 1) * cols];
            row.iter().zip(v).map(|(x, y)| x * y).sum()
        })
        .collect()
}

fn par_adjoint_matvec(a: &CMatrix, v: &[Cx]) -> Vec<Cx> {
    let cols = a.cols();
    let rows = a.rows();
    (0..cols)
        .into_par_iter()
        .map(|j| {
            let column = a.data().iter().skip(j).step_by(cols).take(rows);
            column.zip(v).map(|(x, y)| x.conj() * y).sum()
        })
        .collect()
}
