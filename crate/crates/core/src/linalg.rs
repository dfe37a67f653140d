//! Minimal dense linear algebra for tall least-squares problems.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from equal-length columns.
    pub fn from_columns(columns: &[&[f64]]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.len());
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::LengthMismatch {
                left: rows,
                right: bad.len(),
            });
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            data.extend_from_slice(c);
        }
        Ok(Self {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    /// First `n` rows.
    pub fn head(&self, n: usize) -> Self {
        let mut out = Self::zeros(n, self.cols);
        for j in 0..self.cols {
            out.data[j * n..(j + 1) * n].copy_from_slice(&self.column(j)[..n]);
        }
        out
    }

    /// Drops the listed columns.
    pub fn without_columns(&self, drop: &[usize]) -> Self {
        let keep: Vec<&[f64]> = (0..self.cols)
            .filter(|j| !drop.contains(j))
            .map(|j| self.column(j))
            .collect();
        let mut out = Self::from_columns(&keep).expect("columns share the row count");
        out.rows = self.rows;
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (j, &vj) in v.iter().enumerate().take(self.cols) {
            for (o, x) in out.iter_mut().zip(self.column(j)) {
                *o += x * vj;
            }
        }
        out
    }
}

/// Householder QR factorization of a tall matrix.
#[derive(Debug, Clone)]
pub struct Qr {
    /// Householder vectors below the diagonal, R on and above it.
    packed: Matrix,
    /// Diagonal of R.
    r_diag: Vec<f64>,
}

impl Qr {
    /// Factorizes `a` (rows >= cols); fails when a diagonal of R is
    /// negligible relative to the column scale.
    #[allow(clippy::needless_range_loop)]
    pub fn new(a: &Matrix) -> Result<Self> {
        let (m, n) = (a.rows, a.cols);
        if m < n {
            return Err(Error::TooFewObservations { nobs: m, nparams: n });
        }
        let mut qr = a.clone();
        let mut r_diag = vec![0.0; n];
        for k in 0..n {
            let norm = (k..m).map(|i| qr.get(i, k).powi(2)).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::RankDeficient);
            }
            let alpha = if qr.get(k, k) > 0.0 { -norm } else { norm };
            // v = x - alpha e1, normalized so v_k = 1 is implicit via scaling below
            let vk = qr.get(k, k) - alpha;
            qr.set(k, k, vk);
            let vnorm2 = (k..m).map(|i| qr.get(i, k).powi(2)).sum::<f64>();
            for j in (k + 1)..n {
                let dot: f64 = (k..m).map(|i| qr.get(i, k) * qr.get(i, j)).sum();
                let s = 2.0 * dot / vnorm2;
                for i in k..m {
                    let v = qr.get(i, j) - s * qr.get(i, k);
                    qr.set(i, j, v);
                }
            }
            r_diag[k] = alpha;
        }
        let col_scale = (0..n)
            .map(|j| a.column(j).iter().map(|x| x * x).sum::<f64>().sqrt())
            .fold(0.0f64, f64::max);
        if r_diag
            .iter()
            .any(|d| d.abs() <= 1e-10 * col_scale.max(f64::MIN_POSITIVE))
        {
            return Err(Error::RankDeficient);
        }
        Ok(Self { packed: qr, r_diag })
    }

    fn cols(&self) -> usize {
        self.packed.cols
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.r_diag[i]
        } else {
            self.packed.get(i, j)
        }
    }

    /// Applies Q' to `b` in place.
    fn apply_qt(&self, b: &mut [f64]) {
        let m = self.packed.rows;
        for k in 0..self.cols() {
            let vnorm2 = (k..m).map(|i| self.packed.get(i, k).powi(2)).sum::<f64>();
            let dot: f64 = (k..m).map(|i| self.packed.get(i, k) * b[i]).sum();
            let s = 2.0 * dot / vnorm2;
            for (i, bi) in b.iter_mut().enumerate().take(m).skip(k) {
                *bi -= s * self.packed.get(i, k);
            }
        }
    }

    /// Least-squares solution of `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut qtb = b.to_vec();
        self.apply_qt(&mut qtb);
        self.back_substitute(&qtb[..self.cols()])
    }

    fn back_substitute(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.cols();
        let mut x = rhs.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for (j, xj) in x.iter().enumerate().take(n).skip(i + 1) {
                s -= self.r(i, j) * xj;
            }
            x[i] = s / self.r_diag[i];
        }
        x
    }

    /// Solves `R' y = v` (forward substitution).
    fn forward_substitute_rt(&self, v: &[f64]) -> Vec<f64> {
        let n = self.cols();
        let mut y = v.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for (j, yj) in y.iter().enumerate().take(i) {
                s -= self.r(j, i) * yj;
            }
            y[i] = s / self.r_diag[i];
        }
        y
    }

    /// `x' (A'A)^{-1} x`, computed as `|R^{-T} x|^2`.
    pub fn quadratic_form_inv(&self, x: &[f64]) -> f64 {
        self.forward_substitute_rt(x).iter().map(|v| v * v).sum()
    }

    /// `(A'A)^{-1} = R^{-1} R^{-T}`.
    pub fn gram_inverse(&self) -> Matrix {
        let n = self.cols();
        let mut rinv = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.back_substitute(&e);
            for (i, v) in col.into_iter().enumerate() {
                rinv.set(i, j, v);
            }
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| rinv.get(i, k) * rinv.get(j, k)).sum();
                out.set(i, j, s);
            }
        }
        out
    }
}

/// Inverts a small symmetric positive-definite matrix by Gauss-Jordan with
/// partial pivoting.
pub fn invert(a: &Matrix) -> Result<Matrix> {
    let n = a.rows;
    if n != a.cols {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let mut m = a.clone();
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        inv.set(i, i, 1.0);
    }
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| m.get(x, c).abs().total_cmp(&m.get(y, c).abs()))
            .unwrap_or(c);
        if m.get(p, c).abs() < 1e-300 {
            return Err(Error::RankDeficient);
        }
        for j in 0..n {
            let (a1, a2) = (m.get(c, j), m.get(p, j));
            m.set(c, j, a2);
            m.set(p, j, a1);
            let (b1, b2) = (inv.get(c, j), inv.get(p, j));
            inv.set(c, j, b2);
            inv.set(p, j, b1);
        }
        let piv = m.get(c, c);
        for j in 0..n {
            m.set(c, j, m.get(c, j) / piv);
            inv.set(c, j, inv.get(c, j) / piv);
        }
        for i in 0..n {
            if i != c {
                let f = m.get(i, c);
                if f != 0.0 {
                    for j in 0..n {
                        m.set(i, j, m.get(i, j) - f * m.get(c, j));
                        inv.set(i, j, inv.get(i, j) - f * inv.get(c, j));
                    }
                }
            }
        }
    }
    Ok(inv)
}
