//! Misclassification scores.
//!
//! Two scores are provided. The pair score counts the largest set of
//! disjoint inlier pairs that carry different true labels yet share an
//! estimated cluster, normalized by the number of inliers. The matched score
//! is the usual minimum error over one-to-one relabellings of the estimate.

use crate::clustering::ClusterAssignment;
use crate::error::{Error, Result};
use crate::gsbm::GroundTruth;

fn check_len(truth: &GroundTruth, est: &ClusterAssignment) -> Result<()> {
    if truth.len() != est.len() {
        return Err(Error::DimensionMismatch { expected: truth.len(), got: est.len() });
    }
    Ok(())
}

/// Largest number of disjoint pairs with distinct colours in a box holding
/// `counts[c]` items of colour `c`.
pub(crate) fn max_cross_pairs(counts: &[usize]) -> usize {
    let total: usize = counts.iter().sum();
    let largest = counts.iter().copied().max().unwrap_or(0);
    (total / 2).min(total - largest)
}

/// Pair-based inlier misclassification rate; outliers are ignored.
pub fn misclassification_pairs(truth: &GroundTruth, est: &ClusterAssignment) -> Result<f64> {
    check_len(truth, est)?;
    let r = truth.r();
    let mut counts = vec![vec![0usize; r]; est.k()];
    for (&t, &e) in truth.labels().iter().zip(est.labels()) {
        if t < r {
            counts[e][t] += 1;
        }
    }
    let n = truth.n_inliers();
    if n == 0 {
        return Ok(0.0);
    }
    let pairs: usize = counts.iter().map(|c| max_cross_pairs(c)).sum();
    Ok(pairs as f64 / n as f64)
}

/// Which nodes a matched score is computed over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Inliers,
    /// Every node, with the outliers forming one extra true class.
    All,
}

/// Fraction of in-scope nodes left mismatched under the best one-to-one
/// relabelling of the estimated clusters.
pub fn misclassification_matched(truth: &GroundTruth, est: &ClusterAssignment, scope: Scope) -> Result<f64> {
    check_len(truth, est)?;
    let classes = match scope {
        Scope::Inliers => truth.r(),
        Scope::All => truth.r() + 1,
    };
    let size = classes.max(est.k());
    let mut counts = vec![vec![0i64; size]; size];
    let mut total = 0usize;
    for (&t, &e) in truth.labels().iter().zip(est.labels()) {
        if t < classes {
            counts[e][t] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Ok(0.0);
    }
    let cost: Vec<Vec<i64>> = counts.iter().map(|row| row.iter().map(|&c| -c).collect()).collect();
    let matched: i64 = -min_cost_assignment(&cost).1;
    Ok(1.0 - matched as f64 / total as f64)
}

/// Hungarian algorithm on a square cost matrix. Returns the column assigned
/// to each row and the total cost.
pub fn min_cost_assignment(cost: &[Vec<i64>]) -> (Vec<usize>, i64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    const INF: i64 = i64::MAX / 4;
    // one-based potentials; column 0 is a sentinel
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = INF;
            let mut col1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = col0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        col1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    let total = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
    (assignment, total)
}
