//! Robust community detection under the generalized stochastic block model.
//!
//! The pipeline solves a box-constrained semidefinite relaxation of the
//! maximum-likelihood clustering problem with an alternating-direction
//! augmented-Lagrangian scheme, then recovers labels with k-means on the
//! normalized columns of the solution. Outlier nodes may be wired
//! arbitrarily; the relaxation keeps their influence on the inlier
//! clusters bounded.
//!
//! Numerical code is generic over [`Real`], implemented for `f32` and `f64`.
//! The aliases at the crate root fix the scalar to `f64`, which is what the
//! CLI and the experiment harness use.

pub mod baselines;
pub mod certify;
pub mod clustering;
pub mod error;
pub mod gsbm;
pub mod io;
pub mod matcore;
pub mod metrics;
pub mod rng;
pub mod scalar;
pub mod solver;

pub use baselines::{laplacian, spectral_cluster, EigenRule, LaplacianVariant, SpectralConfig, SpectralSource};
pub use certify::{
    check_block_form, feasibility_check, kmeans_bound, objective_gap, truth_block_matrix, BlockFormReport,
    FeasibilityReport,
};
pub use clustering::{detect_communities, kmeans, normalize_columns, ClusterAssignment, KmeansResult, Mode};
pub use error::{Error, Result};
pub use gsbm::{apply_permutation, degrees, generate, Graph, GroundTruth, GsbmSpec, OutlierKind, OutlierSpec};
pub use io::{load_edge_list, EdgeListOptions, LoadedGraph};
pub use matcore::{clamp01, psd_project, sym_eig, SymEig, SymMatrix};
pub use metrics::{misclassification_matched, misclassification_pairs, Scope};
pub use scalar::Real;
pub use solver::{
    admm_solve, auto_lambda, build_e, build_e_degree_corrected, guard_lambda, lambda_from_pq, select_lambda_trimmed,
    AdmmState, Solution, SolverConfig,
};

/// Double-precision symmetric matrix.
pub type SymMatrixF64 = SymMatrix<f64>;
/// Single-precision symmetric matrix.
pub type SymMatrixF32 = SymMatrix<f32>;
pub type SolverConfigF64 = SolverConfig<f64>;
pub type SolutionF64 = Solution<f64>;
pub type KmeansResultF64 = KmeansResult<f64>;
