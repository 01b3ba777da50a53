//! Runtime checks on solver output.

use log::warn;

use crate::error::Result;
use crate::gsbm::GroundTruth;
use crate::matcore::SymMatrix;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeasibilityReport<T> {
    pub min_eig: T,
    pub min_entry: T,
    pub max_entry: T,
    pub pass: bool,
}

/// Passes iff the smallest eigenvalue is at least `-tol * N` and every entry
/// lies in `[-tol, 1 + tol]`.
pub fn feasibility_check<T: Real>(x: &SymMatrix<T>, tol: T) -> Result<FeasibilityReport<T>> {
    let min_eig = x.min_eigenvalue()?;
    let min_entry = x.min_entry();
    let max_entry = x.max_entry();
    let n = T::of_usize(x.dim());
    let pass = min_eig >= -tol * n && min_entry >= -tol && max_entry <= T::one() + tol;
    Ok(FeasibilityReport { min_eig, min_entry, max_entry, pass })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockFormReport<T> {
    pub pass: bool,
    /// `1 - min` over entries joining two inliers of the same cluster.
    pub max_in_block_deficit: T,
    /// Largest entry joining inliers of different clusters.
    pub max_cross_block_excess: T,
}

/// Compares the inlier part of `x` with the ideal all-ones-within,
/// zero-across pattern. Outlier rows and columns are not inspected.
pub fn check_block_form<T: Real>(x: &SymMatrix<T>, truth: &GroundTruth, tol: T) -> Result<BlockFormReport<T>> {
    if x.dim() != truth.len() {
        return Err(crate::error::Error::DimensionMismatch { expected: truth.len(), got: x.dim() });
    }
    let labels = truth.labels();
    let mut deficit = T::zero();
    let mut excess = T::zero();
    for i in 0..x.dim() {
        if truth.is_outlier(i) {
            continue;
        }
        let row = x.row(i);
        for j in i..x.dim() {
            if truth.is_outlier(j) {
                continue;
            }
            if labels[i] == labels[j] {
                deficit = deficit.max(T::one() - row[j]);
            } else {
                excess = excess.max(row[j]);
            }
        }
    }
    Ok(BlockFormReport {
        pass: deficit <= tol && excess <= tol,
        max_in_block_deficit: deficit,
        max_cross_block_excess: excess,
    })
}

/// All-ones blocks on each planted cluster, zero on every outlier row and
/// column. Feasible for the relaxation.
pub fn truth_block_matrix<T: Real>(truth: &GroundTruth) -> SymMatrix<T> {
    let labels = truth.labels();
    let n = labels.len();
    let mut data = vec![T::zero(); n * n];
    for i in 0..n {
        if truth.is_outlier(i) {
            continue;
        }
        for j in 0..n {
            if labels[j] == labels[i] {
                data[i * n + j] = T::one();
            }
        }
    }
    SymMatrix::from_raw(n, data)
}

/// Objective values of the three analytic comparators `0`, `J` and the
/// truth-block matrix, in that order.
pub fn comparator_objectives<T: Real>(e: &SymMatrix<T>, truth: &GroundTruth) -> Result<[T; 3]> {
    let ones = e.as_slice().iter().fold(T::zero(), |a, &v| a + v);
    let block = truth_block_matrix::<T>(truth).inner(e)?;
    Ok([T::zero(), ones, block])
}

/// `<X_hat, E>` minus the best comparator objective. A solver that reached
/// the optimum returns a value at most zero, up to round-off.
pub fn objective_gap<T: Real>(x_hat: &SymMatrix<T>, e: &SymMatrix<T>, truth: &GroundTruth) -> Result<T> {
    let best = comparator_objectives(e, truth)?.into_iter().fold(T::infinity(), T::min);
    Ok(x_hat.inner(e)? - best)
}

/// Misclassification bound `(2r + 3) m / n` for k-means on a block-form
/// solution.
pub fn kmeans_bound(r: usize, m: usize, n: usize) -> f64 {
    let b = (2 * r + 3) as f64 * m as f64 / n.max(1) as f64;
    if b >= 1.0 {
        warn!("misclassification bound {b} is vacuous");
    }
    b
}

/// Whether the outlier count is small enough for [`kmeans_bound`] to apply:
/// `m < n_min / (2r + 4)`.
pub fn bound_applies(r: usize, m: usize, n_min: usize) -> bool {
    m * (2 * r + 4) < n_min
}
