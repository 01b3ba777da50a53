//! Graphs, planted-partition models with outliers, and node relabelling.
//!
//! Generated graphs are block ordered: the inliers of cluster 0 come first,
//! then cluster 1, and so on, with the `m` outlier nodes last. Use
//! [`apply_permutation`] to hide the planted order.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matcore::SymMatrix;
use crate::rng::{self, ids};
use crate::scalar::Real;

/// Simple undirected graph with a dense 0/1 adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u8>,
}

impl Graph {
    /// Graph on `n` nodes without edges.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("graph needs at least one node".into()));
        }
        Ok(Self { n, adj: vec![0; n * n] })
    }

    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!("edge ({i}, {j}) out of range for {n} nodes")));
            }
            if i == j {
                return Err(Error::InvalidParameter(format!("self-loop at node {i}")));
            }
            g.set_edge(i, j);
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, checking the simple-graph invariants.
    pub fn from_adjacency(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Self::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { rows: n, cols: row.len() });
            }
            for (j, &a) in row.iter().enumerate() {
                if a > 1 {
                    return Err(Error::InvalidParameter(format!("adjacency entry ({i}, {j}) = {a} is not binary")));
                }
                if a != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
                if i == j && a != 0 {
                    return Err(Error::InvalidParameter(format!("self-loop at node {i}")));
                }
            }
            g.adj[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(g)
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j);
            }
        }
        Ok(g)
    }

    /// Disjoint union of cliques of the given sizes, in order.
    pub fn disjoint_cliques(sizes: &[usize]) -> Result<Self> {
        let n = sizes.iter().sum();
        let mut g = Self::empty(n)?;
        let mut start = 0;
        for &s in sizes {
            for i in start..start + s {
                for j in (i + 1)..start + s {
                    g.set_edge(i, j);
                }
            }
            start += s;
        }
        Ok(g)
    }

    #[inline]
    pub(crate) fn set_edge(&mut self, i: usize, j: usize) {
        debug_assert_ne!(i, j);
        self.adj[i * self.n + j] = 1;
        self.adj[j * self.n + i] = 1;
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.n + j] == 1
    }

    /// Adjacency row of node `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[u8] {
        &self.adj[i * self.n..(i + 1) * self.n]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().filter(|(_, &a)| a == 1).map(|(j, _)| j)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|&a| a as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Fraction of node pairs joined by an edge.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    /// Induced subgraph on `nodes`, relabelled `0..nodes.len()` in the given order.
    pub fn induced(&self, nodes: &[usize]) -> Result<Self> {
        let mut g = Self::empty(nodes.len())?;
        for (a, &i) in nodes.iter().enumerate() {
            for (b, &j) in nodes.iter().enumerate().skip(a + 1) {
                if self.has_edge(i, j) {
                    g.set_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    pub fn adjacency_matrix<T: Real>(&self) -> SymMatrix<T> {
        SymMatrix::from_raw(self.n, self.adj.iter().map(|&a| if a == 1 { T::one() } else { T::zero() }).collect())
    }
}

/// Node degrees `d_i = sum_j A_ij`.
pub fn degrees(g: &Graph) -> Vec<usize> {
    (0..g.n_nodes()).map(|i| g.row(i).iter().map(|&a| a as usize).sum()).collect()
}

/// Probability law for the per-outlier attachment probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AttachLaw {
    Constant(f64),
    Uniform { lo: f64, hi: f64 },
}

/// How the `m` outlier nodes are wired.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutlierKind {
    None,
    /// Outliers form a dense Erdos-Renyi block with edge probability `p_w`
    /// and no edges to the inliers.
    DenseClique {
        p_w: f64,
    },
    /// Outlier `j` draws an attachment probability from `law` and joins each
    /// inlier independently with it. No outlier-outlier edges.
    RandomAttach {
        law: AttachLaw,
    },
    /// Each outlier joins `degree_target` inliers chosen uniformly at random.
    Hub {
        degree_target: usize,
    },
    /// Outlier block Bernoulli(`p_w`); inlier `i` joins every outlier
    /// independently with probability `beta_i = U_i^2`, `U_i ~ Uniform[0, 1]`,
    /// and one `beta` vector drawn per graph.
    Mixed {
        p_w: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutlierSpec {
    pub m: usize,
    pub kind: OutlierKind,
}

impl OutlierSpec {
    pub fn none() -> Self {
        Self { m: 0, kind: OutlierKind::None }
    }
}

/// Generalized stochastic block model.
#[derive(Clone, Debug, PartialEq)]
pub struct GsbmSpec {
    pub cluster_sizes: Vec<usize>,
    /// Symmetric `r x r` matrix of block edge probabilities.
    pub connectivity: Vec<Vec<f64>>,
    pub outliers: OutlierSpec,
    /// Accept `p_minus <= q_plus`.
    pub allow_nonpositive_gap: bool,
}

impl GsbmSpec {
    /// Equal-size or unequal two-cluster model with within probability `p`
    /// and cross probability `q`.
    pub fn two_block(n1: usize, n2: usize, p: f64, q: f64, outliers: OutlierSpec) -> Self {
        Self {
            cluster_sizes: vec![n1, n2],
            connectivity: vec![vec![p, q], vec![q, p]],
            outliers,
            allow_nonpositive_gap: false,
        }
    }

    /// The 1000-inlier, 30-outlier benchmark: two clusters of 500, `p = 0.17`,
    /// `q = 0.11`, dense outlier block with probability 0.7 and squared-uniform
    /// attachment to the inliers.
    pub fn benchmark() -> Self {
        Self::two_block(500, 500, 0.17, 0.11, OutlierSpec { m: 30, kind: OutlierKind::Mixed { p_w: 0.7 } })
    }

    pub fn r(&self) -> usize {
        self.cluster_sizes.len()
    }

    /// Number of inliers.
    pub fn n(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    pub fn n_min(&self) -> usize {
        self.cluster_sizes.iter().copied().min().unwrap_or(0)
    }

    /// Total number of nodes, inliers plus outliers.
    pub fn n_total(&self) -> usize {
        self.n() + self.outliers.m
    }

    /// Minimum within-cluster probability.
    pub fn p_minus(&self) -> f64 {
        (0..self.r()).map(|a| self.connectivity[a][a]).fold(f64::INFINITY, f64::min)
    }

    /// Maximum cross-cluster probability; 0 with a single cluster.
    pub fn q_plus(&self) -> f64 {
        let mut q: f64 = 0.0;
        for a in 0..self.r() {
            for b in 0..self.r() {
                if a != b {
                    q = q.max(self.connectivity[a][b]);
                }
            }
        }
        q
    }

    pub fn delta(&self) -> f64 {
        self.p_minus() - self.q_plus()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.r();
        if r == 0 {
            return Err(Error::InvalidParameter("at least one cluster required".into()));
        }
        if let Some(a) = self.cluster_sizes.iter().position(|&l| l == 0) {
            return Err(Error::InvalidParameter(format!("cluster {a} has zero size")));
        }
        if self.connectivity.len() != r || self.connectivity.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParameter(format!("connectivity must be {r}x{r}")));
        }
        for a in 0..r {
            for b in 0..r {
                let p = self.connectivity[a][b];
                check_prob(p, "connectivity")?;
                if p != self.connectivity[b][a] {
                    return Err(Error::NotSymmetric { row: a, col: b });
                }
            }
        }
        if !self.allow_nonpositive_gap && r > 1 && self.delta() <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "p_minus = {} does not exceed q_plus = {}",
                self.p_minus(),
                self.q_plus()
            )));
        }
        match self.outliers.kind {
            OutlierKind::None => {
                if self.outliers.m != 0 {
                    return Err(Error::InvalidParameter("outlier count given without an outlier kind".into()));
                }
            }
            OutlierKind::DenseClique { p_w } | OutlierKind::Mixed { p_w } => check_prob(p_w, "p_w")?,
            OutlierKind::RandomAttach { law: AttachLaw::Constant(p) } => check_prob(p, "attach probability")?,
            OutlierKind::RandomAttach { law: AttachLaw::Uniform { lo, hi } } => {
                check_prob(lo, "attach lo")?;
                check_prob(hi, "attach hi")?;
                if lo > hi {
                    return Err(Error::InvalidParameter(format!("attach range [{lo}, {hi}] is empty")));
                }
            }
            OutlierKind::Hub { degree_target } => {
                if degree_target > self.n() {
                    return Err(Error::InvalidParameter(format!(
                        "hub degree {degree_target} exceeds inlier count {}",
                        self.n()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_prob(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{what} = {p} is not a probability")));
    }
    Ok(())
}

/// Planted labels: `0..r` for inliers, `r` for every outlier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    labels: Vec<usize>,
    r: usize,
}

impl GroundTruth {
    pub fn new(labels: Vec<usize>, r: usize) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l > r) {
            return Err(Error::InvalidParameter(format!("label {bad} exceeds outlier label {r}")));
        }
        Ok(Self { labels, r })
    }

    /// Block-ordered labels for the given cluster sizes followed by `m` outliers.
    pub fn block_ordered(cluster_sizes: &[usize], m: usize) -> Self {
        let r = cluster_sizes.len();
        let mut labels: Vec<usize> =
            cluster_sizes.iter().enumerate().flat_map(|(a, &l)| std::iter::repeat_n(a, l)).collect();
        labels.extend(std::iter::repeat_n(r, m));
        Self { labels, r }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of inlier clusters.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn is_outlier(&self, i: usize) -> bool {
        self.labels[i] == self.r
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.r];
        for &l in &self.labels {
            if l < self.r {
                sizes[l] += 1;
            }
        }
        sizes
    }

    pub fn n_inliers(&self) -> usize {
        self.labels.iter().filter(|&&l| l < self.r).count()
    }

    pub fn n_outliers(&self) -> usize {
        self.len() - self.n_inliers()
    }
}

/// Draws a graph from `spec`. Output is block ordered and depends only on
/// `(spec, seed)`.
pub fn generate(spec: &GsbmSpec, seed: u64) -> Result<(Graph, GroundTruth)> {
    spec.validate()?;
    let r = spec.r();
    let n = spec.n();
    let m = spec.outliers.m;
    let mut g = Graph::empty(n + m)?;

    let mut starts = Vec::with_capacity(r + 1);
    let mut acc = 0;
    for &l in &spec.cluster_sizes {
        starts.push(acc);
        acc += l;
    }
    starts.push(acc);

    for a in 0..r {
        for b in a..r {
            let p = spec.connectivity[a][b];
            let mut rng = rng::stream(seed, ids::INLIER_BASE + (a * r + b) as u64);
            for i in starts[a]..starts[a + 1] {
                let j0 = if a == b { i + 1 } else { starts[b] };
                for j in j0..starts[b + 1] {
                    if rng.random::<f64>() < p {
                        g.set_edge(i, j);
                    }
                }
            }
        }
    }

    let outlier = |k: usize| n + k;
    match spec.outliers.kind {
        OutlierKind::None => {}
        OutlierKind::DenseClique { p_w } => fill_outlier_block(&mut g, n, m, p_w, seed),
        OutlierKind::Mixed { p_w } => {
            fill_outlier_block(&mut g, n, m, p_w, seed);
            let mut law = rng::stream(seed, ids::OUTLIER_LAW);
            let beta: Vec<f64> = (0..n).map(|_| law.random::<f64>().powi(2)).collect();
            let mut z = rng::stream(seed, ids::OUTLIER_Z);
            for (i, &b) in beta.iter().enumerate() {
                for k in 0..m {
                    if z.random::<f64>() < b {
                        g.set_edge(i, outlier(k));
                    }
                }
            }
        }
        OutlierKind::RandomAttach { law } => {
            let mut law_rng = rng::stream(seed, ids::OUTLIER_LAW);
            let probs: Vec<f64> = (0..m)
                .map(|_| match law {
                    AttachLaw::Constant(p) => p,
                    AttachLaw::Uniform { lo, hi } => lo + (hi - lo) * law_rng.random::<f64>(),
                })
                .collect();
            let mut z = rng::stream(seed, ids::OUTLIER_Z);
            for i in 0..n {
                for (k, &p) in probs.iter().enumerate() {
                    if z.random::<f64>() < p {
                        g.set_edge(i, outlier(k));
                    }
                }
            }
        }
        OutlierKind::Hub { degree_target } => {
            let mut z = rng::stream(seed, ids::OUTLIER_Z);
            let mut pool: Vec<usize> = (0..n).collect();
            for k in 0..m {
                let (chosen, _) = pool.partial_shuffle(&mut z, degree_target);
                for &i in chosen.iter() {
                    g.set_edge(i, outlier(k));
                }
            }
        }
    }

    Ok((g, GroundTruth::block_ordered(&spec.cluster_sizes, m)))
}

fn fill_outlier_block(g: &mut Graph, n: usize, m: usize, p_w: f64, seed: u64) {
    let mut w = rng::stream(seed, ids::OUTLIER_W);
    for a in 0..m {
        for b in (a + 1)..m {
            if w.random::<f64>() < p_w {
                g.set_edge(n + a, n + b);
            }
        }
    }
}

/// Relabels nodes: old node `i` becomes node `perm[i]`.
pub fn apply_permutation(g: &Graph, truth: &GroundTruth, perm: &[usize]) -> Result<(Graph, GroundTruth)> {
    let n = g.n_nodes();
    if perm.len() != n || truth.len() != n {
        return Err(Error::InvalidPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    let mut out = Graph::empty(n)?;
    for (i, j) in g.edges() {
        out.set_edge(perm[i], perm[j]);
    }
    let mut labels = vec![0; n];
    for (i, &l) in truth.labels().iter().enumerate() {
        labels[perm[i]] = l;
    }
    Ok((out, GroundTruth { labels, r: truth.r() }))
}

/// Uniformly random permutation of `0..n` determined by `seed`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng::stream(seed, ids::PERMUTATION));
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn complete_graph_from_probability_one() {
        let spec = GsbmSpec {
            cluster_sizes: vec![3],
            connectivity: vec![vec![1.0]],
            outliers: OutlierSpec::none(),
            allow_nonpositive_gap: false,
        };
        for seed in [0, 1, u64::MAX] {
            let (g, t) = generate(&spec, seed).unwrap();
            assert_eq!(g, Graph::complete(3).unwrap());
            assert_eq!(t.labels(), &[0, 0, 0]);
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        let mut spec = GsbmSpec::two_block(4, 4, 0.5, 0.2, OutlierSpec::none());
        spec.connectivity[0][0] = 1.5;
        assert!(generate(&spec, 0).is_err());
        let spec = GsbmSpec::two_block(0, 4, 0.5, 0.2, OutlierSpec::none());
        assert!(generate(&spec, 0).is_err());
        let mut spec = GsbmSpec::two_block(4, 4, 0.2, 0.5, OutlierSpec::none());
        assert!(generate(&spec, 0).is_err());
        spec.allow_nonpositive_gap = true;
        assert!(generate(&spec, 0).is_ok());
        let spec =
            GsbmSpec::two_block(4, 4, 0.5, 0.2, OutlierSpec { m: 2, kind: OutlierKind::Hub { degree_target: 9 } });
        assert!(generate(&spec, 0).is_err());
    }

    #[test]
    fn density_parameters() {
        let spec = GsbmSpec {
            cluster_sizes: vec![2, 3, 4],
            connectivity: vec![vec![0.5, 0.1, 0.2], vec![0.1, 0.4, 0.05], vec![0.2, 0.05, 0.6]],
            outliers: OutlierSpec::none(),
            allow_nonpositive_gap: false,
        };
        assert_eq!(spec.p_minus(), 0.4);
        assert_eq!(spec.q_plus(), 0.2);
        assert!((spec.delta() - 0.2).abs() < 1e-15);
        assert_eq!((spec.r(), spec.n(), spec.n_min()), (3, 9, 2));
    }

    #[test]
    fn benchmark_shape() {
        let spec = GsbmSpec::benchmark();
        let (g, t) = generate(&spec, 3).unwrap();
        assert_eq!(g.n_nodes(), 1030);
        assert_eq!(t.cluster_sizes(), vec![500, 500]);
        assert_eq!(t.n_outliers(), 30);
        assert!((0..1000).all(|i| !t.is_outlier(i)) && (1000..1030).all(|i| t.is_outlier(i)));
    }

    #[test]
    fn outlier_kinds_respect_their_wiring() {
        let base = |kind| GsbmSpec::two_block(20, 20, 0.5, 0.1, OutlierSpec { m: 5, kind });
        let (g, _) = generate(&base(OutlierKind::DenseClique { p_w: 1.0 }), 1).unwrap();
        for k in 40..45 {
            assert_eq!(degrees(&g)[k], 4);
        }
        let (g, _) = generate(&base(OutlierKind::Hub { degree_target: 7 }), 1).unwrap();
        for k in 40..45 {
            assert_eq!(g.neighbors(k).filter(|&i| i < 40).count(), 7);
            assert_eq!(g.neighbors(k).filter(|&i| i >= 40).count(), 0);
        }
        let (g, _) = generate(&base(OutlierKind::RandomAttach { law: AttachLaw::Constant(1.0) }), 1).unwrap();
        for k in 40..45 {
            assert_eq!(degrees(&g)[k], 40);
        }
    }

    #[test]
    fn permutation_examples() {
        let g = path3();
        let t = GroundTruth::new(vec![0, 0, 1], 2).unwrap();
        let (g2, t2) = apply_permutation(&g, &t, &[0, 1, 2]).unwrap();
        assert_eq!((&g2, &t2), (&g, &t));

        let swap = [1, 0, 2];
        let (g2, t2) = apply_permutation(&g, &t, &swap).unwrap();
        let (g3, t3) = apply_permutation(&g2, &t2, &swap).unwrap();
        assert_eq!((&g3, &t3), (&g, &t));

        // 1->3, 2->1, 3->2 in one-based terms; path 1-2-3 becomes 3-1-2
        let (g2, t2) = apply_permutation(&g, &t, &[2, 0, 1]).unwrap();
        assert_eq!(g2.edges(), vec![(0, 1), (0, 2)]);
        assert!(g2.has_edge(2, 0) && g2.has_edge(0, 1) && !g2.has_edge(1, 2));
        assert_eq!(t2.labels(), &[0, 1, 0]);

        assert!(apply_permutation(&g, &t, &[0, 0, 1]).is_err());
        assert!(apply_permutation(&g, &t, &[0, 1]).is_err());
        assert!(apply_permutation(&g, &t, &[0, 1, 3]).is_err());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degrees(&Graph::complete(3).unwrap()), vec![2, 2, 2]);
        assert_eq!(degrees(&Graph::empty(4).unwrap()), vec![0, 0, 0, 0]);
        assert_eq!(degrees(&path3()), vec![1, 2, 1]);
    }

    #[test]
    fn adjacency_validation() {
        assert!(Graph::from_adjacency(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[vec![1, 0], vec![0, 0]]).is_err());
        assert!(Graph::from_adjacency(&[vec![0, 2], vec![2, 0]]).is_err());
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        let g = Graph::from_adjacency(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g, Graph::complete(2).unwrap());
    }

    #[test]
    fn ground_truth_rejects_large_labels() {
        assert!(GroundTruth::new(vec![0, 3], 2).is_err());
    }
}
