//! Small dense linear algebra: just what the estimators and samplers need.

use crate::error::{Error, Result};
use crate::Scalar;

/// Row-major square or rectangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `Xᵀ X`.
    pub fn gram(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for i in 0..self.cols {
                for j in i..self.cols {
                    let v = out.get(i, j) + row[i] * row[j];
                    out.set(i, j, v);
                }
            }
        }
        for i in 0..self.cols {
            for j in 0..i {
                out.set(i, j, out.get(j, i));
            }
        }
        out
    }

    /// `Xᵀ y`.
    pub fn t_mul_vec(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols];
        for (r, &yr) in y.iter().enumerate().take(self.rows) {
            for (o, &x) in out.iter_mut().zip(self.row(r)) {
                *o = *o + x * yr;
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: Matrix<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factorizes a symmetric matrix. Fails unless it is positive definite.
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let n = a.rows();
        if n != a.cols() {
            return Err(Error::InvalidInput("cholesky needs a square matrix".into()));
        }
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut d = a.get(j, j);
            for k in 0..j {
                d = d - l.get(j, k) * l.get(j, k);
            }
            if !(d > T::zero()) {
                return Err(Error::NotPositiveDefinite { pivot: j });
            }
            let d = d.sqrt();
            l.set(j, j, d);
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s = s - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / d);
            }
        }
        Ok(Self { l })
    }

    pub fn factor(&self) -> &Matrix<T> {
        &self.l
    }

    pub fn dim(&self) -> usize {
        self.l.rows()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s = s - self.l.get(i, k) * y[k];
            }
            y[i] = s / self.l.get(i, i);
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s = s - self.l.get(k, i) * x[k];
            }
            x[i] = s / self.l.get(i, i);
        }
        x
    }

    /// Diagonal of `A⁻¹`.
    pub fn inverse_diagonal(&self) -> Vec<T> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut e = vec![T::zero(); n];
                e[i] = T::one();
                self.solve(&e)[i]
            })
            .collect()
    }

    /// `L z`: maps IID standard normals to a draw with covariance `A`.
    pub fn transform(&self, z: &[T], out: &mut [T]) {
        let n = self.dim();
        for i in 0..n {
            let row = self.l.row(i);
            let mut s = T::zero();
            for k in 0..=i {
                s = s + row[k] * z[k];
            }
            out[i] = s;
        }
    }
}

/// Ordinary least squares fit.
#[derive(Debug, Clone)]
pub struct OlsFit<T> {
    pub coefficients: Vec<T>,
    pub standard_errors: Vec<T>,
    pub sse: T,
    pub dof: usize,
}

/// Solves `min ‖y − Xβ‖²` through the normal equations.
///
/// Returns [`Error::RankDeficient`] when `XᵀX` is numerically singular or the
/// residual variance is zero (no standard errors exist).
pub fn ols<T: Scalar>(x: &Matrix<T>, y: &[T]) -> Result<OlsFit<T>> {
    let (n, k) = (x.rows(), x.cols());
    if n <= k {
        return Err(Error::RankDeficient);
    }
    let gram = x.gram();
    // scale-aware singularity check: relative pivot threshold
    let max_diag = (0..k).map(|i| gram.get(i, i)).fold(T::zero(), T::max);
    let chol = Cholesky::new(&gram).map_err(|_| Error::RankDeficient)?;
    let min_pivot = (0..k)
        .map(|i| chol.factor().get(i, i) * chol.factor().get(i, i))
        .fold(T::infinity(), T::min);
    if min_pivot <= max_diag * T::epsilon() * T::lit(1e3) {
        return Err(Error::RankDeficient);
    }
    let beta = chol.solve(&x.t_mul_vec(y));
    let fitted = x.mul_vec(&beta);
    let sse: T = y.iter().zip(&fitted).map(|(&a, &b)| (a - b) * (a - b)).sum();
    let dof = n - k;
    let s2 = sse / T::from_usize_lossy(dof);
    // an exact fit leaves no residual variance to build standard errors from
    let total: T = y.iter().map(|&v| v * v).sum();
    if !(sse > total * T::epsilon() * T::lit(1e3)) {
        return Err(Error::RankDeficient);
    }
    let inv = chol.inverse_diagonal();
    Ok(OlsFit {
        standard_errors: inv.iter().map(|&d| (d * s2).sqrt()).collect(),
        coefficients: beta,
        sse,
        dof,
    })
}
