//! Reference implementations used only by the tests. They are deliberately
//! naive and share no code with the library.

#![allow(dead_code)]

/// Cyclic Jacobi eigenvalues of a dense symmetric matrix, sorted descending.
pub fn jacobi_eigenvalues(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    values.sort_by(|x, y| y.partial_cmp(x).unwrap());
    values
}

/// Maximum number of disjoint inlier pairs with different true labels that
/// share an estimated label, by memoised search over subsets.
pub fn brute_conflict_matching(truth: &[usize], est: &[usize], r: usize) -> usize {
    let n = truth.len();
    assert!(n <= 16);
    let mut memo = vec![usize::MAX; 1 << n];
    fn go(mask: usize, truth: &[usize], est: &[usize], r: usize, memo: &mut [usize]) -> usize {
        if memo[mask] != usize::MAX {
            return memo[mask];
        }
        let n = truth.len();
        let Some(i) = (0..n).find(|&i| mask & (1 << i) != 0) else {
            return 0;
        };
        let rest = mask & !(1 << i);
        let mut best = go(rest, truth, est, r, memo);
        if truth[i] < r {
            for j in (i + 1)..n {
                if rest & (1 << j) != 0 && truth[j] < r && truth[j] != truth[i] && est[j] == est[i] {
                    best = best.max(1 + go(rest & !(1 << j), truth, est, r, memo));
                }
            }
        }
        memo[mask] = best;
        best
    }
    go((1 << n) - 1, truth, est, r, &mut memo)
}

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Matched error by trying every injective relabelling of the estimate into
/// `classes` true classes (estimated clusters beyond `classes` are wrong).
pub fn brute_matched(truth: &[usize], est: &[usize], classes: usize, k: usize) -> f64 {
    let inscope: Vec<usize> = (0..truth.len()).filter(|&i| truth[i] < classes).collect();
    if inscope.is_empty() {
        return 0.0;
    }
    let size = classes.max(k);
    let best =
        permutations(size).iter().map(|p| inscope.iter().filter(|&&i| p[est[i]] == truth[i]).count()).max().unwrap();
    1.0 - best as f64 / inscope.len() as f64
}

/// Sum of squared distances to cluster means.
pub fn sse(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let d = points[0].len();
    let mut sum = vec![vec![0.0; d]; k];
    let mut count = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        count[l] += 1;
        for (s, x) in sum[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| p.iter().zip(&sum[l]).map(|(x, s)| (x - s / count[l] as f64).powi(2)).sum::<f64>())
        .sum()
}

/// Optimal k-means objective over every partition into `k` non-empty groups.
pub fn brute_kmeans(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; n];
    for code in 0..k.pow(n as u32) {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = c % k;
            c /= k;
        }
        if (0..k).all(|g| labels.contains(&g)) {
            best = best.min(sse(points, &labels, k));
        }
    }
    best
}

/// Tiny deterministic generator for test inputs.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn symmetric(&mut self, n: usize) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = 2.0 * self.next_f64() - 1.0;
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        m
    }
}
