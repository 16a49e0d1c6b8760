//! Dense complex matrices, row-major. The universal computational substrate:
//! every operator in the laboratory eventually becomes one of these.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cx::{is_finite, Cx};
use crate::error::{Error, Result};

/// Dense complex matrix. `data.len() == rows * cols`, row-major,
/// `rows >= 1`, `cols >= 1`, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cx>,
}

impl CMatrix {
    /// Build from raw parts, validating the invariants.
    pub fn new(rows: usize, cols: usize, data: Vec<Cx>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be at least 1x1"));
        }
        if data.len() != rows * cols {
            return Err(Error::invalid(format!(
                "data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(bad) = data.iter().position(|z| !is_finite(*z)) {
            return Err(Error::invalid(format!(
                "non-finite entry at flat index {bad}"
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "zero dimension");
        CMatrix {
            rows,
            cols,
            data: vec![Cx::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cx) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Convenience constructor from rows of `(re, im)` pairs; for tests and
    /// small literals.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::invalid("no rows"));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&(re, im)| Cx::new(re, im)))
            .collect();
        Self::new(r, c, data)
    }

    /// `n`-by-`n` Jordan block: ones on the first diagonal under the main one.
    pub fn jordan_block(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = Cx::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Cx]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn data(&self) -> &[Cx] {
        &self.data
    }

    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [Cx] {
        &mut self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `self - z I` (square only).
    pub fn minus_scalar(&self, z: Cx) -> Self {
        debug_assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] -= z;
        }
        m
    }

    pub fn scale(&self, s: Cx) -> Self {
        let mut m = self.clone();
        for v in m.data.iter_mut() {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v += *w;
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (v, w) in m.data.iter_mut().zip(&other.data) {
            *v -= *w;
        }
        m
    }

    /// Matrix product, ikj loop order for cache friendliness.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(m, n);
        for i in 0..m {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let src = &other.data[l * n..(l + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for j in 0..n {
                    dst[j] += a * src[j];
                }
            }
        }
        out
    }

    /// `self * v`.
    pub fn matvec(&self, v: &[Cx]) -> Vec<Cx> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(a, x)| a * x).sum()
            })
            .collect()
    }

    /// `self^H * v`.
    pub fn adjoint_matvec(&self, v: &[Cx]) -> Vec<Cx> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Cx::new(0.0, 0.0); self.cols];
        for (vi, row) in v.iter().zip(self.data.chunks(self.cols)) {
            let vc = vi.conj();
            for (o, a) in out.iter_mut().zip(row) {
                *o += (a * vc).conj();
            }
        }
        out
    }

    /// `self^k` by binary powering (square only).
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        if k == 0 {
            return result;
        }
        let mut base = self.clone();
        let mut e = k;
        loop {
            if e & 1 == 1 {
                result = result.matmul(&base);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.matmul(&base);
        }
        result
    }

    /// Block-diagonal direct sum.
    pub fn block_diag(blocks: &[CMatrix]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("block_diag of nothing"));
        }
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Cx;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cx {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Wire format: {"rows":n,"cols":m,"data":[[re,im],...]} row-major.
// Readers must reject length mismatches (and non-finite entries).

#[derive(Serialize, Deserialize)]
struct CMatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CMatrixWire {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = CMatrixWire::deserialize(deserializer)?;
        let data = wire.data.iter().map(|&[re, im]| Cx::new(re, im)).collect();
        CMatrix::new(wire.rows, wire.cols, data).map_err(D::Error::custom)
    }
}

impl CMatrix {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::invalid(format!("matrix JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }
}
