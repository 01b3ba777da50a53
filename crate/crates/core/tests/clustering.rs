mod common;

use common::{brute_conflict_matching, brute_kmeans, brute_matched, sse, Lcg};
use proptest::prelude::*;
use rcd_core::baselines::spectral_embedding;
use rcd_core::clustering::lloyd;
use rcd_core::{
    detect_communities, kmeans, laplacian, misclassification_matched, misclassification_pairs, spectral_cluster,
    ClusterAssignment, EigenRule, Graph, GroundTruth, LaplacianVariant, Mode, Scope, SolverConfig, SpectralConfig,
    SpectralSource,
};

fn points(rng: &mut Lcg, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.next_f64()).collect()).collect()
}

#[test]
fn kmeans_reaches_the_exhaustive_optimum_on_small_sets() {
    let mut rng = Lcg(77);
    for n in 2..=8 {
        for k in 1..=3.min(n) {
            for _ in 0..4 {
                let pts = points(&mut rng, n, 2);
                let km = kmeans(&pts, k, 100, n as u64).unwrap();
                let best = brute_kmeans(&pts, k);
                assert!((km.objective - best).abs() <= 1e-9, "n {n} k {k}: {} vs {best}", km.objective);
            }
        }
    }
}

#[test]
fn kmeans_objective_matches_its_partition() {
    let mut rng = Lcg(3);
    let pts = points(&mut rng, 40, 3);
    let km = kmeans(&pts, 4, 10, 9).unwrap();
    let l = km.assignment.labels();
    assert!(l.iter().all(|&c| c < 4));
    assert!((km.objective - sse(&pts, l, 4)).abs() <= 1e-9);
    assert_eq!(km.replicate_objectives.len(), 10);
    assert!(km.replicate_objectives.iter().all(|&o| o >= km.objective));
}

#[test]
fn kmeans_is_reproducible() {
    let mut rng = Lcg(11);
    let pts = points(&mut rng, 30, 2);
    let a = kmeans(&pts, 3, 20, 5).unwrap();
    let b = kmeans(&pts, 3, 20, 5).unwrap();
    assert_eq!(a.assignment, b.assignment);
    assert_eq!(a.objective, b.objective);
}

proptest! {
    #[test]
    fn lloyd_trace_never_increases(seed in any::<u64>(), n in 3usize..40, k in 1usize..4) {
        let mut rng = Lcg(seed);
        let pts = points(&mut rng, n, 2);
        let init: Vec<Vec<f64>> = pts.iter().take(k.min(n)).cloned().collect();
        let run = lloyd(&pts, init, 300);
        for w in run.trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        prop_assert!(run.objective >= 0.0);
    }

    #[test]
    fn metrics_ignore_estimate_label_names(labels in prop::collection::vec((0usize..3, 0usize..3), 1..30), perm_seed in any::<u64>()) {
        let truth = GroundTruth::new(labels.iter().map(|p| p.0).collect(), 2).unwrap();
        let est: Vec<usize> = labels.iter().map(|p| p.1).collect();
        let perms = common::permutations(3);
        let p = &perms[(perm_seed % 6) as usize];
        let relabelled: Vec<usize> = est.iter().map(|&e| p[e]).collect();
        let a = ClusterAssignment::new(est, 3).unwrap();
        let b = ClusterAssignment::new(relabelled, 3).unwrap();
        prop_assert_eq!(misclassification_pairs(&truth, &a).unwrap(), misclassification_pairs(&truth, &b).unwrap());
        for scope in [Scope::Inliers, Scope::All] {
            let x = misclassification_matched(&truth, &a, scope).unwrap();
            let y = misclassification_matched(&truth, &b, scope).unwrap();
            prop_assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn metrics_match_brute_force(labels in prop::collection::vec((0usize..4, 0usize..3), 1..10)) {
        // r = 3 true clusters plus outliers (label 3), k = 3 estimated clusters
        let t: Vec<usize> = labels.iter().map(|p| p.0).collect();
        let e: Vec<usize> = labels.iter().map(|p| p.1).collect();
        let truth = GroundTruth::new(t.clone(), 3).unwrap();
        let est = ClusterAssignment::new(e.clone(), 3).unwrap();
        let inl = truth.n_inliers();
        let want = if inl == 0 { 0.0 } else { brute_conflict_matching(&t, &e, 3) as f64 / inl as f64 };
        prop_assert!((misclassification_pairs(&truth, &est).unwrap() - want).abs() < 1e-15);
        let m = misclassification_matched(&truth, &est, Scope::Inliers).unwrap();
        prop_assert!((m - brute_matched(&t, &e, 3, 3)).abs() < 1e-15);
        let m = misclassification_matched(&truth, &est, Scope::All).unwrap();
        prop_assert!((m - brute_matched(&t, &e, 4, 3)).abs() < 1e-15);
    }
}

#[test]
fn pipeline_recovers_two_cliques() {
    let g = Graph::disjoint_cliques(&[5, 5]).unwrap();
    let truth = GroundTruth::block_ordered(&[5, 5], 0);
    for mode in [Mode::Plain, Mode::DegreeCorrected] {
        let (a, _) = detect_communities(&g, 2, &SolverConfig::with_lambda(0.5), mode).unwrap();
        assert_eq!(misclassification_pairs(&truth, &a).unwrap(), 0.0, "{mode:?}");
    }
}

#[test]
fn spectral_recovers_disjoint_cliques() {
    for sizes in [vec![4, 4], vec![3, 5, 4]] {
        let g = Graph::disjoint_cliques(&sizes).unwrap();
        let truth = GroundTruth::block_ordered(&sizes, 0);
        let k = sizes.len();
        let mut cfgs = vec![SpectralConfig::new(SpectralSource::Adjacency, k)];
        for v in LaplacianVariant::ALL {
            let mut cfg = SpectralConfig::new(SpectralSource::Laplacian(v), k);
            // the cluster indicators span the null space of every variant
            // except the normalized adjacency, where they carry eigenvalue 1
            if v != LaplacianVariant::NormalizedAdjacency {
                cfg.eigen_rule = EigenRule::Smallest;
            }
            cfgs.push(cfg);
        }
        for cfg in cfgs {
            let a = spectral_cluster::<f64>(&g, &cfg, 1).unwrap();
            assert_eq!(misclassification_matched(&truth, &a, Scope::Inliers).unwrap(), 0.0, "{sizes:?} {cfg:?}");
        }
    }
}

#[test]
fn spectral_partition_ignores_eigenvector_signs() {
    let spec = rcd_core::GsbmSpec::two_block(20, 20, 0.5, 0.1, rcd_core::OutlierSpec::none());
    let (g, _) = rcd_core::generate(&spec, 4).unwrap();
    for v in LaplacianVariant::ALL {
        let m = laplacian::<f64>(&g, v);
        let rows = spectral_embedding(&m, 2, EigenRule::LargestAbs).unwrap();
        let flipped: Vec<Vec<f64>> = rows.iter().map(|r| vec![-r[0], r[1]]).collect();
        let a = kmeans(&rows, 2, 50, 2).unwrap().assignment;
        let b = kmeans(&flipped, 2, 50, 2).unwrap().assignment;
        let ta = GroundTruth::new(a.labels().to_vec(), 2).unwrap();
        // identical partitions up to label names
        assert_eq!(misclassification_matched(&ta, &b, Scope::Inliers).unwrap(), 0.0, "{v:?}");
    }
}
