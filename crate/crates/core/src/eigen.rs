//! Eigenvalues of Hermitian matrices: complex Householder reduction to real
//! symmetric tridiagonal form, then implicit QL with shifts. Values only.

use crate::cx::Cx;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// Eigenvalues of a Hermitian matrix, ascending. The caller guarantees
/// Hermitian symmetry; only the lower triangle is read.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::invalid("hermitian_eigenvalues: matrix not square"));
    }
    let (mut d, mut e) = tridiagonalize_values(a.clone());
    tridiagonal_ql_values(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
    Ok(d)
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_lambda_max(a: &CMatrix) -> Result<f64> {
    let ev = hermitian_eigenvalues(a)?;
    Ok(*ev.last().expect("nonempty"))
}

/// Householder reduction of a Hermitian matrix to tridiagonal form,
/// returning the real diagonal and the moduli of the off-diagonal (a
/// diagonal unitary similarity makes the off-diagonal real without moving
/// eigenvalues). Columns already in tridiagonal form skip their reflector,
/// so tridiagonal inputs cost O(n^2).
fn tridiagonalize_values(mut a: CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = a.rows();
    let cols = n;
    let dat = a.data_mut();
    let at = |i: usize, j: usize| i * cols + j;

    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    let mut v = vec![Cx::new(0.0, 0.0); n];
    let mut p = vec![Cx::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        d[k] = dat[at(k, k)].re;
        let mut tail_sq = 0.0;
        for i in k + 2..n {
            tail_sq += dat[at(i, k)].norm_sqr();
        }
        if tail_sq == 0.0 {
            e[k] = dat[at(k + 1, k)].norm();
            continue;
        }
        let x0 = dat[at(k + 1, k)];
        let alpha = x0.norm();
        let norm = (tail_sq + alpha * alpha).sqrt();
        let phase = if alpha == 0.0 {
            Cx::new(1.0, 0.0)
        } else {
            x0 / alpha
        };
        let sigma = phase * norm;
        v[k + 1] = x0 + sigma;
        for i in k + 2..n {
            v[i] = dat[at(i, k)];
        }
        let beta = 1.0 / (norm * (norm + alpha));
        e[k] = norm; // |-sigma|

        // Two-sided update of the trailing block: A <- A - v w^H - w v^H
        // with p = beta A v, w = p - (beta/2)(v^H p) v.
        for i in k + 1..n {
            let mut acc = Cx::new(0.0, 0.0);
            for j in k + 1..n {
                acc += dat[at(i, j)] * v[j];
            }
            p[i] = acc * beta;
        }
        let mut vhp = Cx::new(0.0, 0.0);
        for i in k + 1..n {
            vhp += v[i].conj() * p[i];
        }
        let kappa = vhp * (beta / 2.0);
        for i in k + 1..n {
            p[i] -= kappa * v[i]; // p is now w
        }
        for i in k + 1..n {
            let vi = v[i];
            let wi = p[i];
            for j in k + 1..n {
                let upd = vi * p[j].conj() + wi * v[j].conj();
                dat[at(i, j)] -= upd;
            }
        }
    }
    if n >= 2 {
        d[n - 2] = dat[at(n - 2, n - 2)].re;
        e[n - 2] = dat[at(n - 1, n - 2)].norm();
    }
    d[n - 1] = dat[at(n - 1, n - 1)].re;
    (d, e)
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal
/// matrix, values only.
fn tridiagonal_ql_values(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    // Work with an off-diagonal array of length n (last slot scratch).
    let mut off = vec![0.0f64; n];
    off[..n - 1].copy_from_slice(e);
    let scale = d
        .iter()
        .chain(off.iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if scale == 0.0 {
        return Ok(());
    }

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd
                    || off[m].abs() <= f64::EPSILON * f64::EPSILON * scale
                {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::Convergence(
                    "tridiagonal QL exceeded its iteration budget".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            let denom = g + if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + off[l] / denom;
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut pshift = 0.0f64;
            let mut completed = true;
            let mut i = m;
            while i > l {
                let im1 = i - 1;
                let f = s * off[im1];
                let b = c * off[im1];
                r = f.hypot(g);
                off[i] = r;
                if r == 0.0 {
                    d[i] -= pshift;
                    off[m] = 0.0;
                    completed = false;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - pshift;
                r = (d[im1] - g) * s + 2.0 * c * b;
                pshift = s * r;
                d[i] = g + pshift;
                g = c * r - b;
                i -= 1;
            }
            if completed {
                d[l] -= pshift;
                off[l] = g;
                off[m] = 0.0;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::cx;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn real_diagonal() {
        let a = CMatrix::diag(&[cx(3.0, 0.0), cx(-1.0, 0.0), cx(0.5, 0.0)]);
        let ev = hermitian_eigenvalues(&a).unwrap();
        approx(ev[0], -1.0, 1e-14);
        approx(ev[1], 0.5, 1e-14);
        approx(ev[2], 3.0, 1e-14);
    }

    #[test]
    fn complex_hermitian_2x2() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = CMatrix::from_rows(&[vec![(1.0, 0.0), (0.0, 1.0)], vec![(0.0, -1.0), (1.0, 0.0)]])
            .unwrap();
        let ev = hermitian_eigenvalues(&a).unwrap();
        approx(ev[0], 0.0, 1e-14);
        approx(ev[1], 2.0, 1e-14);
    }

    #[test]
    fn jordan_hermitian_part_cosine_law() {
        // (J_n + J_n^T)/2 has eigenvalues cos(k pi/(n+1)).
        for n in [2usize, 5, 31] {
            let j = CMatrix::jordan_block(n);
            let h = j.add(&j.adjoint()).scale(cx(0.5, 0.0));
            let ev = hermitian_eigenvalues(&h).unwrap();
            let top = ev[n - 1];
            let expect = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
            approx(top, expect, 1e-12);
        }
    }

    #[test]
    fn tridiagonal_fast_path_large() {
        let n = 1000;
        let j = CMatrix::jordan_block(n);
        let h = j.add(&j.adjoint()).scale(cx(0.5, 0.0));
        let ev = hermitian_eigenvalues(&h).unwrap();
        let expect = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
        approx(ev[n - 1], expect, 1e-10);
    }
}
