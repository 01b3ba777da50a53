//! Penalty matrices, tuning-parameter selection and the ADMM solver for
//!
//! ```text
//! minimize <X, E>  subject to  X PSD,  0 <= X_ij <= 1.
//! ```
//!
//! The split introduces a PSD copy `Y` and a box copy `Z` with scaled
//! multiplier `L`. One sweep is
//!
//! ```text
//! Y <- (Z - L - E / rho)_+
//! Z <- min(max(Y + L, 0), 1)
//! L <- L + (Y - Z)
//! ```
//!
//! starting from `Z = L = 0`. The final `Y` is reported as the solution.

use log::warn;

use crate::error::{Error, Result};
use crate::gsbm::{degrees, Graph};
use crate::matcore::{psd_project, SymMatrix};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig<T> {
    /// Edge/non-edge trade-off, strictly inside (0, 1).
    pub lambda: T,
    /// Trace penalty.
    pub alpha: T,
    /// Augmented-Lagrangian weight.
    pub rho: T,
    pub iterations: usize,
    pub record_history: bool,
    /// Stop once `||Y - Z||_F` falls below this. Off by default.
    pub tolerance: Option<T>,
    /// k-means restarts used when clustering the solution.
    pub replicates: usize,
    pub seed: u64,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            lambda: T::of(0.5),
            alpha: T::zero(),
            rho: T::one(),
            iterations: 100,
            record_history: false,
            tolerance: None,
            replicates: 100,
            seed: 0,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn with_lambda(lambda: T) -> Self {
        Self { lambda, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > T::zero() && self.lambda < T::one()) {
            return Err(Error::InvalidParameter(format!("lambda = {} must lie in (0, 1)", self.lambda)));
        }
        if !(self.alpha >= T::zero()) {
            return Err(Error::InvalidParameter(format!("alpha = {} must be nonnegative", self.alpha)));
        }
        if !(self.rho > T::zero()) || !self.rho.is_finite() {
            return Err(Error::InvalidParameter(format!("rho = {} must be positive", self.rho)));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be at least 1".into()));
        }
        Ok(())
    }
}

/// Iterates of the splitting scheme.
#[derive(Clone, Debug)]
pub struct AdmmState<T> {
    pub y: SymMatrix<T>,
    pub z: SymMatrix<T>,
    pub l: SymMatrix<T>,
}

impl<T: Real> AdmmState<T> {
    /// `Y = Z = L = 0`.
    pub fn new(dim: usize) -> Result<Self> {
        let zero = SymMatrix::zeros(dim)?;
        Ok(Self { y: zero.clone(), z: zero.clone(), l: zero })
    }

    /// One full sweep of the three updates.
    pub fn step(&mut self, e: &SymMatrix<T>, rho: T) -> Result<()> {
        let n = e.dim();
        let inv_rho = rho.recip();
        let z = self.z.as_slice();
        let l = self.l.as_slice();
        let ev = e.as_slice();
        let shifted: Vec<T> = (0..n * n).map(|k| z[k] - l[k] - ev[k] * inv_rho).collect();
        self.y = psd_project(&SymMatrix::from_raw(n, shifted))?;

        let y = self.y.as_slice();
        let mut z_new = Vec::with_capacity(n * n);
        let mut l_new = Vec::with_capacity(n * n);
        for k in 0..n * n {
            let zk = (y[k] + l[k]).max(T::zero()).min(T::one());
            z_new.push(zk);
            l_new.push(l[k] + (y[k] - zk));
        }
        self.z = SymMatrix::from_raw(n, z_new);
        self.l = SymMatrix::from_raw(n, l_new);
        Ok(())
    }

    /// Primal residual `||Y - Z||_F`.
    pub fn residual(&self) -> T {
        self.y.as_slice().iter().zip(self.z.as_slice()).fold(T::zero(), |acc, (&a, &b)| acc + (a - b) * (a - b)).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord<T> {
    pub residual: T,
    pub objective: T,
}

#[derive(Clone, Debug)]
pub struct Solution<T> {
    /// Final PSD iterate `Y`.
    pub x_hat: SymMatrix<T>,
    /// Final box iterate `Z`, exactly inside `[0, 1]`.
    pub z_final: SymMatrix<T>,
    /// `||Y - Z||_F` at exit.
    pub final_residual: T,
    /// `<X_hat, E>`.
    pub objective: T,
    pub iterations: usize,
    pub history: Option<Vec<IterationRecord<T>>>,
}

/// Runs the splitting scheme on penalty matrix `e`.
pub fn admm_solve<T: Real>(e: &SymMatrix<T>, cfg: &SolverConfig<T>) -> Result<Solution<T>> {
    if !(cfg.rho > T::zero()) || cfg.iterations == 0 {
        return Err(Error::InvalidParameter("rho must be positive and iterations at least 1".into()));
    }
    if let Some((row, col)) = e.find_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    let mut state = AdmmState::new(e.dim())?;
    let mut history = cfg.record_history.then(|| Vec::with_capacity(cfg.iterations));
    let mut done = 0;
    let mut residual = T::zero();
    while done < cfg.iterations {
        state.step(e, cfg.rho).map_err(|err| match err {
            Error::NonFinite { row, col } => Error::Diverged {
                iteration: done + 1,
                what: format!("non-finite entry at ({row}, {col}) entering the PSD step"),
            },
            other => other,
        })?;
        done += 1;
        if let Some((row, col)) = state.y.find_non_finite().or_else(|| state.l.find_non_finite()) {
            return Err(Error::Diverged { iteration: done, what: format!("non-finite iterate at ({row}, {col})") });
        }
        residual = state.residual();
        if let Some(h) = history.as_mut() {
            h.push(IterationRecord { residual, objective: state.y.inner(e)? });
        }
        if cfg.tolerance.is_some_and(|tol| residual < tol) {
            break;
        }
    }
    let objective = state.y.inner(e)?;
    Ok(Solution { x_hat: state.y, z_final: state.z, final_residual: residual, objective, iterations: done, history })
}

/// `E = alpha I - (1 - lambda) A + lambda (J - I - A)`.
pub fn build_e<T: Real>(g: &Graph, lambda: T, alpha: T) -> SymMatrix<T> {
    let n = g.n_nodes();
    let edge = -(T::one() - lambda);
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        data.extend(g.row(i).iter().enumerate().map(|(j, &a)| {
            if i == j {
                alpha
            } else if a == 1 {
                edge
            } else {
                lambda
            }
        }));
    }
    SymMatrix::from_raw(n, data)
}

/// Degree-corrected penalty `-(I - D)^{1/2} A (I - D)^{1/2} + D^{1/2} (J - I - A) D^{1/2}`
/// with `D = diag(degrees) / N`.
pub fn build_e_degree_corrected<T: Real>(g: &Graph) -> SymMatrix<T> {
    let n = g.n_nodes();
    let nf = T::of_usize(n);
    let d: Vec<T> = degrees(g).into_iter().map(|k| T::of_usize(k) / nf).collect();
    let keep: Vec<T> = d.iter().map(|&x| T::one() - x).collect();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        data.extend(g.row(i).iter().enumerate().map(|(j, &a)| {
            if i == j {
                T::zero()
            } else if a == 1 {
                -(keep[i] * keep[j]).sqrt()
            } else {
                (d[i] * d[j]).sqrt()
            }
        }));
    }
    SymMatrix::from_raw(n, data)
}

/// Nearest-rank percentile of an ascending slice, `pct` in [0, 1].
fn nearest_rank(sorted: &[usize], pct: f64) -> usize {
    let n = sorted.len();
    let rank = ((pct * n as f64) - 1e-9).ceil().clamp(1.0, n as f64) as usize;
    sorted[rank - 1]
}

/// Edge density of the subgraph on nodes whose degree lies between the
/// `lo_pct` and `hi_pct` nearest-rank percentiles (inclusive).
///
/// Falls back to the whole-graph density when fewer than two nodes survive.
/// The value is returned raw; see [`guard_lambda`] for the degenerate ends.
pub fn select_lambda_trimmed(g: &Graph, lo_pct: f64, hi_pct: f64) -> Result<f64> {
    let n = g.n_nodes();
    if n < 2 {
        return Err(Error::InvalidParameter("lambda selection needs at least two nodes".into()));
    }
    if g.edge_count() == 0 {
        return Err(Error::InvalidParameter("lambda selection on a graph without edges".into()));
    }
    if !(0.0..=1.0).contains(&lo_pct) || !(0.0..=1.0).contains(&hi_pct) || lo_pct > hi_pct {
        return Err(Error::InvalidParameter(format!("percentiles ({lo_pct}, {hi_pct}) out of order or range")));
    }
    let deg = degrees(g);
    let mut sorted = deg.clone();
    sorted.sort_unstable();
    let lo = nearest_rank(&sorted, lo_pct);
    let hi = nearest_rank(&sorted, hi_pct);
    let kept: Vec<usize> = (0..n).filter(|&i| deg[i] >= lo && deg[i] <= hi).collect();
    let lambda = if kept.len() < 2 {
        warn!("degree trimming left {} node(s); using whole-graph density", kept.len());
        g.density()
    } else {
        let mut edges = 0usize;
        for (a, &i) in kept.iter().enumerate() {
            edges += kept[a + 1..].iter().filter(|&&j| g.has_edge(i, j)).count();
        }
        edges as f64 / (kept.len() * (kept.len() - 1) / 2) as f64
    };
    if lambda <= 0.0 || lambda >= 1.0 {
        warn!("trimmed-degree lambda = {lambda} is degenerate");
    }
    Ok(lambda)
}

/// Pulls a degenerate `lambda` (0 or 1) back into `[1/N, 1 - 1/N]`.
pub fn guard_lambda(lambda: f64, n: usize) -> f64 {
    let lo = 1.0 / n as f64;
    let hi = 1.0 - lo;
    if lambda <= 0.0 || lambda >= 1.0 {
        let clamped = lambda.clamp(lo, hi);
        warn!("lambda = {lambda} clamped to {clamped}");
        clamped
    } else {
        lambda
    }
}

/// Trimmed-degree lambda with the 20th/80th percentile window, guarded.
pub fn auto_lambda(g: &Graph) -> Result<f64> {
    Ok(guard_lambda(select_lambda_trimmed(g, 0.2, 0.8)?, g.n_nodes()))
}

/// Likelihood threshold `log((1-q)/(1-p)) / (log(p/q) + log((1-q)/(1-p)))`
/// for within probability `p` and cross probability `q`; lies in `(q, p)`.
pub fn lambda_from_pq(p: f64, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < q < p < 1, got p = {p}, q = {q}")));
    }
    let non_edge = ((1.0 - q) / (1.0 - p)).ln();
    Ok(non_edge / ((p / q).ln() + non_edge))
}
