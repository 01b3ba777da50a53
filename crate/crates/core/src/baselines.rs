//! Spectral clustering baselines on the adjacency matrix and graph Laplacians.

use crate::clustering::{kmeans, ClusterAssignment};
use crate::error::{Error, Result};
use crate::gsbm::{degrees, Graph};
use crate::matcore::{sym_eig, SymMatrix};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianVariant {
    /// `D - A`.
    Unnormalized,
    /// `I - D^{-1/2} A D^{-1/2}`.
    SymNormalized,
    /// `I - (D^{-1} A + A D^{-1}) / 2`.
    RandomWalkSymmetrized,
    /// `D^{-1/2} A D^{-1/2}`, the form used by spectral methods that rank
    /// eigenvalues by magnitude.
    NormalizedAdjacency,
}

impl LaplacianVariant {
    pub const ALL: [LaplacianVariant; 4] = [
        LaplacianVariant::Unnormalized,
        LaplacianVariant::SymNormalized,
        LaplacianVariant::RandomWalkSymmetrized,
        LaplacianVariant::NormalizedAdjacency,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LaplacianVariant::Unnormalized => "unnormalized",
            LaplacianVariant::SymNormalized => "sym_normalized",
            LaplacianVariant::RandomWalkSymmetrized => "random_walk_symmetrized",
            LaplacianVariant::NormalizedAdjacency => "normalized_adjacency",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralSource {
    Adjacency,
    Laplacian(LaplacianVariant),
}

/// Which eigenvectors form the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EigenRule {
    /// The `k` eigenvalues of largest magnitude.
    #[default]
    LargestAbs,
    /// The `k` algebraically smallest eigenvalues.
    Smallest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpectralConfig {
    pub source: SpectralSource,
    pub k: usize,
    pub eigen_rule: EigenRule,
    pub replicates: usize,
}

impl SpectralConfig {
    pub fn new(source: SpectralSource, k: usize) -> Self {
        Self { source, k, eigen_rule: EigenRule::LargestAbs, replicates: 100 }
    }
}

/// Graph Laplacian. Rows and columns of isolated nodes are zero in the
/// normalized variants.
pub fn laplacian<T: Real>(g: &Graph, variant: LaplacianVariant) -> SymMatrix<T> {
    let n = g.n_nodes();
    let deg: Vec<T> = degrees(g).into_iter().map(T::of_usize).collect();
    let inv_sqrt: Vec<T> = deg.iter().map(|&d| if d > T::zero() { d.sqrt().recip() } else { T::zero() }).collect();
    let inv: Vec<T> = deg.iter().map(|&d| if d > T::zero() { d.recip() } else { T::zero() }).collect();
    let half = T::of(0.5);
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let isolated = deg[i] == T::zero();
        data.extend(g.row(i).iter().enumerate().map(|(j, &a)| {
            let a = if a == 1 { T::one() } else { T::zero() };
            match variant {
                LaplacianVariant::Unnormalized if i == j => deg[i],
                LaplacianVariant::Unnormalized => -a,
                _ if isolated => T::zero(),
                LaplacianVariant::SymNormalized | LaplacianVariant::RandomWalkSymmetrized if i == j => T::one(),
                LaplacianVariant::SymNormalized => -a * inv_sqrt[i] * inv_sqrt[j],
                LaplacianVariant::RandomWalkSymmetrized => -a * (inv[i] + inv[j]) * half,
                LaplacianVariant::NormalizedAdjacency => a * inv_sqrt[i] * inv_sqrt[j],
            }
        }));
    }
    SymMatrix::from_raw(n, data)
}

/// Row embedding from the selected eigenvectors of `m`.
pub fn spectral_embedding<T: Real>(m: &SymMatrix<T>, k: usize, rule: EigenRule) -> Result<Vec<Vec<T>>> {
    let n = m.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={n}")));
    }
    let eig = sym_eig(m)?;
    let mut order: Vec<usize> = (0..n).collect();
    match rule {
        // stable sort keeps the descending order among equal magnitudes
        EigenRule::LargestAbs => order.sort_by(|&a, &b| {
            eig.values[b].abs().partial_cmp(&eig.values[a].abs()).unwrap_or(std::cmp::Ordering::Equal)
        }),
        EigenRule::Smallest => order.reverse(),
    }
    let chosen = &order[..k];
    Ok((0..n).map(|i| chosen.iter().map(|&c| eig.vector(c)[i]).collect()).collect())
}

pub fn spectral_cluster<T: Real>(g: &Graph, cfg: &SpectralConfig, seed: u64) -> Result<ClusterAssignment> {
    let m = match cfg.source {
        SpectralSource::Adjacency => g.adjacency_matrix::<T>(),
        SpectralSource::Laplacian(v) => laplacian::<T>(g, v),
    };
    let rows = spectral_embedding(&m, cfg.k, cfg.eigen_rule)?;
    Ok(kmeans(&rows, cfg.k, cfg.replicates, seed)?.assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_examples() {
        let k2 = Graph::complete(2).unwrap();
        assert_eq!(
            laplacian::<f64>(&k2, LaplacianVariant::Unnormalized).to_rows(),
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]]
        );
        let empty = Graph::empty(3).unwrap();
        for v in LaplacianVariant::ALL {
            let l = laplacian::<f64>(&empty, v);
            assert_eq!(l, SymMatrix::zeros(3).unwrap(), "{v:?}");
        }
    }

    #[test]
    fn sym_normalized_path() {
        // D = diag(1, 2, 1); off-diagonal edge entries -1/sqrt(2)
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let l = laplacian::<f64>(&g, LaplacianVariant::SymNormalized);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [[1.0, -h, 0.0], [-h, 1.0, -h], [0.0, -h, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((l.get(i, j) - expect[i][j]).abs() < 1e-15);
            }
        }
        let rw = laplacian::<f64>(&g, LaplacianVariant::RandomWalkSymmetrized);
        assert!((rw.get(0, 1) + 0.75).abs() < 1e-15);
        let na = laplacian::<f64>(&g, LaplacianVariant::NormalizedAdjacency);
        assert!((na.get(0, 1) - h).abs() < 1e-15 && na.get(1, 1) == 0.0);
    }

    #[test]
    fn two_k4_adjacency() {
        let g = Graph::disjoint_cliques(&[4, 4]).unwrap();
        let cfg = SpectralConfig { replicates: 10, ..SpectralConfig::new(SpectralSource::Adjacency, 2) };
        let est = spectral_cluster::<f64>(&g, &cfg, 0).unwrap();
        let l = est.labels();
        assert!(l[..4].iter().all(|&x| x == l[0]) && l[4..].iter().all(|&x| x == l[4]) && l[0] != l[4]);
    }

    #[test]
    fn k_out_of_range() {
        let g = Graph::complete(3).unwrap();
        assert!(spectral_cluster::<f64>(&g, &SpectralConfig::new(SpectralSource::Adjacency, 4), 0).is_err());
    }
}
