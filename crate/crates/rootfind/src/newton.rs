use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use thiserror::Error;

use crate::fd::fd_jacobian;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Convergence when the max-norm of the residual drops below this.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Step shrink factor used by the backtracking line search.
    pub damping: f64,
    /// Step for the central-difference Jacobian when none is supplied.
    pub fd_step: f64,
    pub dedupe_radius: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-12,
            max_iter: 60,
            damping: 0.5,
            fd_step: 1e-7,
            dedupe_radius: 1e-8,
        }
    }
}

/// Smallest line-search fraction tried before the iteration gives up.
const DAMPING_FLOOR: f64 = 1e-10;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum NewtonFailure {
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },
    #[error("singular Jacobian at iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("line search could not reduce the residual {residual:e}")]
    Stalled { residual: f64 },
    #[error("non-finite residual")]
    NonFinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonRoot<const N: usize> {
    pub x: SVector<f64, N>,
    pub residual: f64,
    pub iterations: usize,
}

fn max_norm<const N: usize>(v: &SVector<f64, N>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Damped Newton. Without `jac` the Jacobian is approximated by central
/// differences with `cfg.fd_step`.
pub fn newton<const N: usize>(
    f: impl Fn(&SVector<f64, N>) -> SVector<f64, N>,
    jac: Option<&dyn Fn(&SVector<f64, N>) -> SMatrix<f64, N, N>>,
    seed: SVector<f64, N>,
    cfg: &NewtonConfig,
) -> Result<NewtonRoot<N>, NewtonFailure> {
    let mut x = seed;
    let mut fx = f(&x);
    let mut r = max_norm(&fx);
    if !r.is_finite() {
        return Err(NewtonFailure::NonFinite);
    }
    for it in 0..=cfg.max_iter {
        if r < cfg.residual_tol {
            return Ok(NewtonRoot { x, residual: r, iterations: it });
        }
        if it == cfg.max_iter {
            break;
        }
        let j = match jac {
            Some(jf) => jf(&x),
            None => fd_jacobian(&f, &x, cfg.fd_step),
        };
        let step = solve(&j, &fx).ok_or(NewtonFailure::SingularJacobian { iteration: it })?;
        let mut lambda = 1.0;
        loop {
            let trial = x - step * lambda;
            let ft = f(&trial);
            let rt = max_norm(&ft);
            if rt.is_finite() && rt < r {
                x = trial;
                fx = ft;
                r = rt;
                break;
            }
            lambda *= cfg.damping;
            if lambda < DAMPING_FLOOR {
                return Err(NewtonFailure::Stalled { residual: r });
            }
        }
    }
    Err(NewtonFailure::MaxIterations { iterations: cfg.max_iter, residual: r })
}

fn solve<const N: usize>(j: &SMatrix<f64, N, N>, b: &SVector<f64, N>) -> Option<SVector<f64, N>> {
    let lu = DMatrix::from_column_slice(N, N, j.as_slice()).lu();
    let x = lu.solve(&DVector::from_column_slice(b.as_slice()))?;
    x.iter()
        .all(|v| v.is_finite())
        .then(|| SVector::from_column_slice(x.as_slice()))
}

/// Two-variable convenience wrapper over [`newton`].
pub fn newton2(
    f: impl Fn(f64, f64) -> [f64; 2],
    jac: Option<&dyn Fn(f64, f64) -> [[f64; 2]; 2]>,
    seed: [f64; 2],
    cfg: &NewtonConfig,
) -> Result<NewtonRoot<2>, NewtonFailure> {
    let fv = |v: &SVector<f64, 2>| SVector::<f64, 2>::from(f(v[0], v[1]));
    match jac {
        Some(jf) => {
            let jm = |v: &SVector<f64, 2>| {
                let m = jf(v[0], v[1]);
                SMatrix::<f64, 2, 2>::new(m[0][0], m[0][1], m[1][0], m[1][1])
            };
            newton(fv, Some(&jm), SVector::from(seed), cfg)
        }
        None => newton(fv, None, SVector::from(seed), cfg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeedOutcome {
    /// Index into the final root list.
    Converged(usize),
    Failed(NewtonFailure),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultistartReport<const N: usize> {
    /// Distinct roots in lexicographic order of their canonical value.
    pub roots: Vec<NewtonRoot<N>>,
    /// One entry per seed, in seed order.
    pub outcomes: Vec<SeedOutcome>,
}

/// Runs Newton from every seed and deduplicates in the Euclidean metric.
pub fn multistart<const N: usize>(
    f: impl Fn(&SVector<f64, N>) -> SVector<f64, N>,
    jac: Option<&dyn Fn(&SVector<f64, N>) -> SMatrix<f64, N, N>>,
    seeds: &[SVector<f64, N>],
    cfg: &NewtonConfig,
) -> MultistartReport<N> {
    multistart_with(f, jac, seeds, cfg, |x| *x, |a, b| (a - b).norm())
}

/// As [`multistart`], with roots first mapped to a canonical representative
/// and compared with a caller-supplied distance. Among duplicates the root
/// from the earliest seed is kept.
pub fn multistart_with<const N: usize>(
    f: impl Fn(&SVector<f64, N>) -> SVector<f64, N>,
    jac: Option<&dyn Fn(&SVector<f64, N>) -> SMatrix<f64, N, N>>,
    seeds: &[SVector<f64, N>],
    cfg: &NewtonConfig,
    canonical: impl Fn(&SVector<f64, N>) -> SVector<f64, N>,
    distance: impl Fn(&SVector<f64, N>, &SVector<f64, N>) -> f64,
) -> MultistartReport<N> {
    let mut roots: Vec<NewtonRoot<N>> = Vec::new();
    let mut raw: Vec<Result<usize, NewtonFailure>> = Vec::with_capacity(seeds.len());
    for seed in seeds {
        match newton(&f, jac, *seed, cfg) {
            Ok(mut root) => {
                root.x = canonical(&root.x);
                match roots.iter().position(|r| distance(&r.x, &root.x) <= cfg.dedupe_radius) {
                    Some(i) => raw.push(Ok(i)),
                    None => {
                        roots.push(root);
                        raw.push(Ok(roots.len() - 1));
                    }
                }
            }
            Err(e) => raw.push(Err(e)),
        }
    }
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| lex(&roots[a].x, &roots[b].x));
    let mut rank = vec![0; roots.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let outcomes = raw
        .into_iter()
        .map(|o| match o {
            Ok(i) => SeedOutcome::Converged(rank[i]),
            Err(e) => SeedOutcome::Failed(e),
        })
        .collect();
    MultistartReport { roots: order.into_iter().map(|i| roots[i]).collect(), outcomes }
}

fn lex<const N: usize>(a: &SVector<f64, N>, b: &SVector<f64, N>) -> Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}
