//! Dense symmetric matrix kernels.
//!
//! Storage is a full row-major `dim x dim` buffer. Symmetry is enforced when a
//! matrix is built, so every kernel may read either triangle.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A dense real symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    /// Builds a matrix by evaluating `f` on the upper triangle and mirroring it.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = vec![T::zero(); dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from rows, rejecting anything not exactly symmetric.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: r.len() });
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Ok(Self { dim, data })
    }

    /// Builds a matrix from a row-major buffer, rejecting asymmetric input.
    pub fn from_row_major(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: data.len() });
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| T::zero())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_, _| T::one())
    }

    pub fn diag(values: &[T]) -> Result<Self> {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { T::zero() })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    /// Row `i`, which is also column `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Applies `f` entrywise. Symmetry is preserved because `f` sees each value
    /// independently of its position.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Entrywise combination of two matrices of the same dimension.
    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    /// Frobenius inner product `<A, B> = sum_ij A_ij B_ij`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        Ok(self.data.iter().zip(&other.data).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &a| acc + a * a).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &a| acc.max(a.abs()))
    }

    pub fn min_entry(&self) -> T {
        self.data.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_entry(&self) -> T {
        self.data.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// First non-finite entry, if any.
    pub fn find_non_finite(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|x| !x.is_finite()).map(|k| (k / self.dim, k % self.dim))
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> Result<T> {
        self.check_finite()?;
        let vals = self.to_faer().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::EigenNoConvergence)?;
        Ok(vals.into_iter().fold(T::infinity(), T::min))
    }

    fn check_finite(&self) -> Result<()> {
        match self.find_non_finite() {
            Some((row, col)) => Err(Error::NonFinite { row, col }),
            None => Ok(()),
        }
    }

    fn to_faer(&self) -> Mat<T> {
        Mat::from_fn(self.dim, self.dim, |i, j| self.data[i * self.dim + j])
    }

    /// Reads the lower triangle of `m` and mirrors it.
    fn from_faer_lower(m: &Mat<T>) -> Self {
        let dim = m.nrows();
        let mut data = vec![T::zero(); dim * dim];
        for j in 0..dim {
            for i in j..dim {
                let v = m[(i, j)];
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Self { dim, data }
    }

    pub(crate) fn from_raw(dim: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        Self { dim, data }
    }
}

/// Eigendecomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEig<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    dim: usize,
    // column-major: vector k occupies vectors[k*dim..(k+1)*dim]
    vectors: Vec<T>,
}

impl<T: Real> SymEig<T> {
    /// Unit eigenvector paired with `values[k]`.
    pub fn vector(&self, k: usize) -> &[T] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rebuilds `V diag(values) V^T`.
    pub fn reconstruct(&self) -> SymMatrix<T> {
        let n = self.dim;
        let mut data = vec![T::zero(); n * n];
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                let s = lam * v[i];
                let row = &mut data[i * n..(i + 1) * n];
                for (dst, &vj) in row.iter_mut().zip(v) {
                    *dst += s * vj;
                }
            }
        }
        enforce_symmetry(n, &mut data);
        SymMatrix::from_raw(n, data)
    }
}

fn enforce_symmetry<T: Real>(n: usize, data: &mut [T]) {
    for i in 0..n {
        for j in (i + 1)..n {
            data[j * n + i] = data[i * n + j];
        }
    }
}

/// Full symmetric eigendecomposition, eigenvalues sorted descending.
pub fn sym_eig<T: Real>(m: &SymMatrix<T>) -> Result<SymEig<T>> {
    m.check_finite()?;
    let evd = m.to_faer().self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenNoConvergence)?;
    let n = m.dim();
    let s = evd.S().column_vector();
    let u = evd.U();
    // faer sorts ascending
    let order: Vec<usize> = (0..n).rev().collect();
    let values = order.iter().map(|&k| s[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend((0..n).map(|i| u[(i, k)]));
    }
    Ok(SymEig { values, dim: n, vectors })
}

/// Frobenius-nearest positive semidefinite matrix: `V diag(max(s, 0)) V^T`.
pub fn psd_project<T: Real>(m: &SymMatrix<T>) -> Result<SymMatrix<T>> {
    m.check_finite()?;
    let n = m.dim();
    let evd = m.to_faer().self_adjoint_eigen(Side::Lower).map_err(|_| Error::EigenNoConvergence)?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let positive: Vec<usize> = (0..n).filter(|&k| s[k] > T::zero()).collect();
    if positive.is_empty() {
        return SymMatrix::zeros(n);
    }
    // Y = W W^T with W = V_+ diag(sqrt(s_+))
    let w = Mat::from_fn(n, positive.len(), |i, c| {
        let k = positive[c];
        u[(i, k)] * s[k].sqrt()
    });
    let y: Mat<T> = &w * w.transpose();
    Ok(SymMatrix::from_faer_lower(&y))
}

/// Entrywise `min(max(x, 0), 1)`.
pub fn clamp01<T: Real>(m: &SymMatrix<T>) -> SymMatrix<T> {
    m.map(|x| x.max(T::zero()).min(T::one()))
}
