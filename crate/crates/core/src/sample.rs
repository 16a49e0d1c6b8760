//! Reproducible pseudo-random sampling.
//!
//! A 64-bit linear congruential generator with Knuth's MMIX constants
//! (multiplier 6364136223846793005, increment 1442695040888963407) drives
//! every randomized test and CLI experiment, so reports are replayable
//! from a seed alone.

use crate::cx::{cx, Cx};
use crate::matrix::CMatrix;

/// 64-bit LCG. `state <- state * 6364136223846793005 + 1442695040888963407`.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        // One warm-up step decorrelates small seeds.
        let mut g = Lcg64 { state: seed };
        g.next_u64();
        g
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform in [0, 1) with 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform complex in the rectangle [x0,x1) x [y0,y1).
    pub fn complex_in_rect(&mut self, x0: f64, x1: f64, y0: f64, y1: f64) -> Cx {
        let re = self.uniform(x0, x1);
        let im = self.uniform(y0, y1);
        cx(re, im)
    }

    /// Uniform on the annulus r_min <= |z| <= r_max (area measure).
    pub fn complex_in_annulus(&mut self, r_min: f64, r_max: f64) -> Cx {
        let u = self.next_f64();
        let r = (r_min * r_min + u * (r_max * r_max - r_min * r_min)).sqrt();
        let theta = self.uniform(0.0, std::f64::consts::TAU);
        Cx::from_polar(r, theta)
    }

    /// Dense matrix with entries uniform in the centered unit square.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| {
            self.complex_in_rect(-1.0, 1.0, -1.0, 1.0)
        })
    }

    /// Random unitary: modified Gram-Schmidt orthonormalization of a random
    /// matrix (restarted in the measure-zero event of rank deficiency).
    pub fn unitary(&mut self, n: usize) -> CMatrix {
        loop {
            let raw = self.matrix(n, n);
            if let Some(q) = gram_schmidt_columns(&raw) {
                return q;
            }
        }
    }

    /// Random normal matrix U diag(d) U^H with eigenvalues `d` returned
    /// alongside.
    pub fn normal_matrix(&mut self, n: usize, scale: f64) -> (CMatrix, Vec<Cx>) {
        let eigs: Vec<Cx> = (0..n)
            .map(|_| self.complex_in_rect(-scale, scale, -scale, scale))
            .collect();
        let u = self.unitary(n);
        let a = u.matmul(&CMatrix::diag(&eigs)).matmul(&u.adjoint());
        (a, eigs)
    }
}

/// Orthonormalize the columns of `m`; None if numerically rank deficient.
fn gram_schmidt_columns(m: &CMatrix) -> Option<CMatrix> {
    let n = m.rows();
    let k = m.cols();
    let mut cols: Vec<Vec<Cx>> = (0..k)
        .map(|j| (0..n).map(|i| m[(i, j)]).collect())
        .collect();
    for j in 0..k {
        // two MGS passes for orthogonality at working precision
        for _ in 0..2 {
            for prev in 0..j {
                let (head, tail) = cols.split_at_mut(j);
                let prev_col = &head[prev];
                let col = &mut tail[0];
                let proj: Cx = prev_col
                    .iter()
                    .zip(col.iter())
                    .map(|(p, c)| p.conj() * c)
                    .sum();
                for (c, p) in col.iter_mut().zip(prev_col) {
                    *c -= proj * p;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        let inv = cx(1.0 / norm, 0.0);
        for z in cols[j].iter_mut() {
            *z *= inv;
        }
    }
    Some(CMatrix::from_fn(n, k, |i, j| cols[j][i]))
}
