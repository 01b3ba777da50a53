//! Label recovery from the SDP solution: column normalization followed by
//! k-means with k-means++ starts and independent restarts.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gsbm::Graph;
use crate::matcore::SymMatrix;
use crate::rng::{self, ids};
use crate::scalar::Real;
use crate::solver::{admm_solve, build_e, build_e_degree_corrected, Solution, SolverConfig};

/// Estimated labels in `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!("label {bad} out of range for k = {k}")));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct KmeansResult<T> {
    pub assignment: ClusterAssignment,
    pub centroids: Vec<Vec<T>>,
    /// Within-cluster sum of squared distances.
    pub objective: T,
    /// Final objective of every replicate, in replicate order.
    pub replicate_objectives: Vec<T>,
}

/// Unit-norm, nonnegative copies of the columns of `x`.
///
/// Negative entries are clamped to zero first. A column that is zero after
/// clamping maps to the first standard basis vector.
pub fn normalize_columns<T: Real>(x: &SymMatrix<T>) -> Vec<Vec<T>> {
    let n = x.dim();
    (0..n)
        .map(|i| {
            let mut col: Vec<T> = x.row(i).iter().map(|&v| v.max(T::zero())).collect();
            let norm = col.iter().fold(T::zero(), |acc, &v| acc + v * v).sqrt();
            if norm > T::zero() {
                col.iter_mut().for_each(|v| *v /= norm);
            } else {
                col.iter_mut().for_each(|v| *v = T::zero());
                col[0] = T::one();
            }
            col
        })
        .collect()
}

#[inline]
fn sq_dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

/// Index of the nearest centroid; ties go to the lowest index.
fn nearest<T: Real>(p: &[T], centroids: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, sq_dist(p, &centroids[0]));
    for (c, mu) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, mu);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding.
fn plus_plus<T: Real>(points: &[Vec<T>], k: usize, rng: &mut impl Rng) -> Vec<Vec<T>> {
    let n = points.len();
    let mut centroids = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0]).as_f64()).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut u = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if u < w {
                    pick = i;
                    break;
                }
                u -= w;
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        centroids.push(points[pick].clone());
        let last = centroids.last().expect("non-empty");
        for (d, p) in d2.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, last).as_f64());
        }
    }
    centroids
}

/// Output of a single Lloyd run.
#[derive(Clone, Debug)]
pub struct LloydRun<T> {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<T>>,
    pub objective: T,
    /// Objective after every assignment step.
    pub trace: Vec<T>,
}

/// Lloyd iterations from the given centroids until the assignment is stable.
///
/// A cluster that loses all its points is reseeded with the point farthest
/// from its current centroid.
pub fn lloyd<T: Real>(points: &[Vec<T>], mut centroids: Vec<Vec<T>>, max_iter: usize) -> LloydRun<T> {
    let k = centroids.len();
    let dim = points[0].len();
    let mut labels = vec![usize::MAX; points.len()];
    let mut trace = Vec::new();
    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        let mut dists = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            if labels[i] != c {
                labels[i] = c;
                changed = true;
            }
            dists.push(d);
        }
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        for c in 0..k {
            if counts[c] == 0 {
                let (far, _) = dists.iter().enumerate().filter(|&(i, _)| counts[labels[i]] > 1).fold(
                    (usize::MAX, T::neg_infinity()),
                    |acc, (i, &d)| {
                        if d > acc.1 {
                            (i, d)
                        } else {
                            acc
                        }
                    },
                );
                if far != usize::MAX {
                    counts[labels[far]] -= 1;
                    labels[far] = c;
                    counts[c] = 1;
                    dists[far] = T::zero();
                    changed = true;
                }
            }
        }
        trace.push(dists.iter().fold(T::zero(), |a, &d| a + d));
        if !changed {
            break;
        }
        let mut sums = vec![vec![T::zero(); dim]; k];
        for (p, &l) in points.iter().zip(&labels) {
            for (s, &x) in sums[l].iter_mut().zip(p) {
                *s += x;
            }
        }
        for (c, s) in sums.into_iter().enumerate() {
            if counts[c] > 0 {
                let inv = T::of_usize(counts[c]).recip();
                centroids[c] = s.into_iter().map(|x| x * inv).collect();
            }
        }
    }
    let objective = points.iter().zip(&labels).fold(T::zero(), |a, (p, &l)| a + sq_dist(p, &centroids[l]));
    LloydRun { labels, centroids, objective, trace }
}

const MAX_LLOYD_ITERATIONS: usize = 300;

/// Best of `replicates` seeded k-means runs.
///
/// Replicate `r` draws from its own stream of `seed`, so the result does not
/// depend on evaluation order. Ties in the objective go to the lowest
/// replicate index.
pub fn kmeans<T: Real>(points: &[Vec<T>], k: usize, replicates: usize, seed: u64) -> Result<KmeansResult<T>> {
    if k == 0 || replicates == 0 {
        return Err(Error::InvalidParameter("k and replicates must be at least 1".into()));
    }
    if points.len() < k {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds the number of points {}", points.len())));
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
    }
    let mut best: Option<LloydRun<T>> = None;
    let mut replicate_objectives = Vec::with_capacity(replicates);
    for rep in 0..replicates {
        let mut rng = rng::stream(seed, ids::KMEANS_BASE + rep as u64);
        let run = lloyd(points, plus_plus(points, k, &mut rng), MAX_LLOYD_ITERATIONS);
        replicate_objectives.push(run.objective);
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one replicate");
    Ok(KmeansResult {
        assignment: ClusterAssignment { labels: best.labels, k },
        centroids: best.centroids,
        objective: best.objective,
        replicate_objectives,
    })
}

/// Which penalty matrix the SDP uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Scalar `lambda` from the solver config.
    Plain,
    /// Degree-dependent weights; `lambda` and `alpha` are unused.
    DegreeCorrected,
}

/// Solves the SDP for `g` and clusters the normalized columns into `r` groups.
pub fn detect_communities<T: Real>(
    g: &Graph,
    r: usize,
    cfg: &SolverConfig<T>,
    mode: Mode,
) -> Result<(ClusterAssignment, Solution<T>)> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    cfg.validate()?;
    let e = match mode {
        Mode::Plain => build_e(g, cfg.lambda, cfg.alpha),
        Mode::DegreeCorrected => build_e_degree_corrected(g),
    };
    let solution = admm_solve(&e, cfg)?;
    let points = normalize_columns(&solution.x_hat);
    let km = kmeans(&points, r, cfg.replicates, cfg.seed)?;
    Ok((km.assignment, solution))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        let cols = normalize_columns(&SymMatrix::<f64>::identity(3).unwrap());
        assert_eq!(cols, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);

        let x = SymMatrix::<f64>::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 4.0]]).unwrap();
        let cols = normalize_columns(&x);
        assert_eq!(cols[1], vec![1.0, 0.0, 0.0]);

        let x = SymMatrix::<f64>::from_rows(&[vec![3.0, 4.0, 0.0], vec![4.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        let cols = normalize_columns(&x);
        assert!((cols[0][0] - 0.6).abs() < 1e-15 && (cols[0][1] - 0.8).abs() < 1e-15 && cols[0][2] == 0.0);
        assert_eq!(cols[2], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn negative_entries_are_clamped() {
        let x = SymMatrix::from_rows(&[vec![1.0, -1e-9], vec![-1e-9, 1.0]]).unwrap();
        assert_eq!(normalize_columns(&x), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn two_point_masses() {
        let mut pts = vec![vec![1.0, 0.0]; 5];
        pts.extend(vec![vec![0.0, 1.0]; 5]);
        let km = kmeans(&pts, 2, 10, 1).unwrap();
        assert_eq!(km.objective, 0.0);
        let l = km.assignment.labels();
        assert!(l[..5].iter().all(|&x| x == l[0]) && l[5..].iter().all(|&x| x == l[5]) && l[0] != l[5]);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let pts: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![1.0, 3.0]];
        let km = kmeans(&pts, 1, 3, 0).unwrap();
        assert_eq!(km.centroids[0], vec![1.0, 1.0]);
        // squared distances to (1,1): 2 + 2 + 4
        assert!((km.objective - 8.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let pts = vec![vec![0.0], vec![1.0]];
        assert!(kmeans(&pts, 3, 1, 0).is_err());
        assert!(kmeans(&pts, 0, 1, 0).is_err());
        assert!(kmeans(&[vec![0.0], vec![1.0, 2.0]], 1, 1, 0).is_err());
        assert!(ClusterAssignment::new(vec![0, 2], 2).is_err());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let pts: Vec<Vec<f64>> = (0..40).map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()]).collect();
        let a = kmeans(&pts, 3, 5, 9).unwrap();
        let b = kmeans(&pts, 3, 5, 9).unwrap();
        assert_eq!(a.assignment, b.assignment);
        assert_eq!(a.replicate_objectives, b.replicate_objectives);
        assert!(a.replicate_objectives.iter().all(|&o| a.objective <= o));
    }

    #[test]
    fn empty_cluster_is_reseeded() {
        // both initial centroids far right: the left cluster would be empty
        let pts = vec![vec![0.0], vec![0.1], vec![10.0], vec![10.1]];
        let run = lloyd(&pts, vec![vec![10.0], vec![10.05]], 50);
        let mut counts = [0; 2];
        run.labels.iter().for_each(|&l| counts[l] += 1);
        assert!(counts.iter().all(|&c| c > 0));
    }

    #[test]
    fn two_cliques_recovered_by_pipeline() {
        let g = Graph::disjoint_cliques(&[5, 5]).unwrap();
        let cfg = SolverConfig::<f64> { replicates: 10, ..SolverConfig::with_lambda(0.5) };
        let (est, sol) = detect_communities(&g, 2, &cfg, Mode::Plain).unwrap();
        let l = est.labels();
        assert!(l[..5].iter().all(|&x| x == l[0]) && l[5..].iter().all(|&x| x == l[5]) && l[0] != l[5]);
        assert!(sol.final_residual < 1e-3);
    }
}
