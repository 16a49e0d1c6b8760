//! Singular values of dense complex matrices.
//!
//! Householder bidiagonalization (complex, values only) followed by
//! Golub-Kahan implicit-shift QR on the real bidiagonal form. Nothing in
//! this crate needs singular vectors, so none are accumulated; a complex
//! bidiagonal matrix is diagonally unitarily equivalent to the bidiagonal
//! matrix of entry moduli, which is what the QR stage consumes.
//!
//! Columns (rows) whose below-diagonal (right-of-superdiagonal) part is
//! exactly zero skip their reflector, so already-bidiagonal inputs — the
//! shift sections that dominate the grid sweeps — cost O(n^2) instead of
//! O(n^3).

use crate::cx::Cx;
use crate::error::{Error, Result};
use crate::matrix::CMatrix;

/// All singular values, sorted descending.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        // sigma(A) = sigma(A^H); work with the tall orientation
        a.adjoint()
    };
    let (mut d, mut e) = bidiagonalize_values(work);
    bidiagonal_qr_values(&mut d, &mut e)?;
    d.sort_by(|x, y| y.partial_cmp(x).expect("singular values are finite"));
    Ok(d)
}

/// Reduce to bidiagonal form, returning moduli of the diagonal and
/// superdiagonal. Destroys `a`.
fn bidiagonalize_values(mut a: CMatrix) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (a.rows(), a.cols());
    debug_assert!(m >= n);
    let cols = n;
    let dat = a.data_mut();
    let at = |i: usize, j: usize| i * cols + j;

    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    let mut v = vec![Cx::new(0.0, 0.0); m.max(n)];

    for k in 0..n {
        // Left reflector: zero a[k+1..m, k].
        let mut tail_sq = 0.0;
        for i in k + 1..m {
            tail_sq += dat[at(i, k)].norm_sqr();
        }
        if tail_sq == 0.0 {
            d[k] = dat[at(k, k)].norm();
        } else {
            let x0 = dat[at(k, k)];
            let alpha = x0.norm();
            let norm = (tail_sq + alpha * alpha).sqrt();
            let phase = if alpha == 0.0 {
                Cx::new(1.0, 0.0)
            } else {
                x0 / alpha
            };
            let sigma = phase * norm;
            v[k] = x0 + sigma;
            for i in k + 1..m {
                v[i] = dat[at(i, k)];
            }
            let beta = 1.0 / (norm * (norm + alpha));
            for j in k + 1..n {
                let mut dot = Cx::new(0.0, 0.0);
                for i in k..m {
                    dot += v[i].conj() * dat[at(i, j)];
                }
                dot *= beta;
                for i in k..m {
                    let vi = v[i];
                    dat[at(i, j)] -= dot * vi;
                }
            }
            d[k] = norm;
        }

        // Right reflector: zero a[k, k+2..n].
        if k + 1 < n {
            let mut tail_sq = 0.0;
            for j in k + 2..n {
                tail_sq += dat[at(k, j)].norm_sqr();
            }
            if tail_sq == 0.0 {
                e[k] = dat[at(k, k + 1)].norm();
            } else {
                // Reflector built from the conjugated row segment.
                let x0 = dat[at(k, k + 1)].conj();
                let alpha = x0.norm();
                let norm = (tail_sq + alpha * alpha).sqrt();
                let phase = if alpha == 0.0 {
                    Cx::new(1.0, 0.0)
                } else {
                    x0 / alpha
                };
                let sigma = phase * norm;
                v[k + 1] = x0 + sigma;
                for j in k + 2..n {
                    v[j] = dat[at(k, j)].conj();
                }
                let beta = 1.0 / (norm * (norm + alpha));
                for i in k + 1..m {
                    let mut dot = Cx::new(0.0, 0.0);
                    for j in k + 1..n {
                        dot += dat[at(i, j)] * v[j];
                    }
                    dot *= beta;
                    for j in k + 1..n {
                        let vj = v[j].conj();
                        dat[at(i, j)] -= dot * vj;
                    }
                }
                e[k] = norm;
            }
        }
    }
    (d, e)
}

#[inline]
fn givens(a: f64, b: f64) -> (f64, f64, f64) {
    if b == 0.0 {
        (1.0, 0.0, a)
    } else if a == 0.0 {
        (0.0, 1.0, b)
    } else {
        let r = a.hypot(b);
        (a / r, b / r, r)
    }
}

/// Implicit-shift QR on a real bidiagonal matrix (diagonal `d`,
/// superdiagonal `e`), values only. On return `d` holds the singular
/// values, unsorted, non-negative.
fn bidiagonal_qr_values(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if scale == 0.0 {
        return Ok(());
    }

    let mut hi = n - 1;
    let max_chases = 1000 * n.max(8);
    let mut chases = 0usize;

    while hi > 0 {
        // Deflate a negligible trailing superdiagonal entry.
        let thresh = eps * (d[hi - 1].abs() + d[hi].abs());
        if e[hi - 1].abs() <= thresh || e[hi - 1].abs() <= eps * eps * scale {
            e[hi - 1] = 0.0;
            hi -= 1;
            continue;
        }

        // Active block [lo, hi].
        let mut lo = hi - 1;
        while lo > 0 {
            let t = eps * (d[lo - 1].abs() + d[lo].abs());
            if e[lo - 1].abs() <= t || e[lo - 1].abs() <= eps * eps * scale {
                e[lo - 1] = 0.0;
                break;
            }
            lo -= 1;
        }

        chases += 1;
        if chases > max_chases {
            return Err(Error::Convergence(
                "bidiagonal QR exceeded its iteration budget".into(),
            ));
        }

        // A zero diagonal entry inside the block breaks the shift formula;
        // chase the adjacent superdiagonal off the bottom with left Givens
        // rotations, which splits the problem.
        let mut chased_zero = false;
        for idx in lo..hi {
            if d[idx].abs() <= eps * scale {
                d[idx] = 0.0;
                let mut z = e[idx];
                e[idx] = 0.0;
                for j in idx + 1..=hi {
                    let (c, s, r) = givens(d[j], z);
                    d[j] = r;
                    if j < hi {
                        z = -s * e[j];
                        e[j] *= c;
                    }
                }
                chased_zero = true;
                break;
            }
        }
        if chased_zero {
            continue;
        }

        // Wilkinson shift from the trailing 2x2 of B^T B.
        let d_hi = d[hi];
        let d_hi1 = d[hi - 1];
        let e_hi1 = e[hi - 1];
        let e_hi2 = if hi >= 2 && hi - 2 >= lo {
            e[hi - 2]
        } else {
            0.0
        };
        let t11 = d_hi1 * d_hi1 + e_hi2 * e_hi2;
        let t12 = d_hi1 * e_hi1;
        let t22 = d_hi * d_hi + e_hi1 * e_hi1;
        let mu = if t12 == 0.0 {
            t22
        } else {
            let diff = (t11 - t22) / 2.0;
            let sgn = if diff >= 0.0 { 1.0 } else { -1.0 };
            t22 - t12 * t12 / (diff + sgn * (diff * diff + t12 * t12).sqrt())
        };

        // Bulge chase.
        let mut x = d[lo] * d[lo] - mu;
        let mut z = d[lo] * e[lo];
        for k in lo..hi {
            let (c, s, r) = givens(x, z);
            if k > lo {
                e[k - 1] = r;
            }
            let dk = d[k];
            let ek = e[k];
            let dk1 = d[k + 1];
            d[k] = c * dk + s * ek;
            e[k] = c * ek - s * dk;
            let bulge = s * dk1;
            d[k + 1] = c * dk1;

            let (c2, s2, r2) = givens(d[k], bulge);
            d[k] = r2;
            let old_ek = e[k];
            let old_dk1 = d[k + 1];
            e[k] = c2 * old_ek + s2 * old_dk1;
            d[k + 1] = c2 * old_dk1 - s2 * old_ek;
            if k + 1 < hi {
                let old_ek1 = e[k + 1];
                x = e[k];
                z = s2 * old_ek1;
                e[k + 1] = c2 * old_ek1;
            }
        }
    }

    for x in d.iter_mut() {
        *x = x.abs();
    }
    Ok(())
}
