//! Gram matrices, primitivity and the Perron eigenpair of `T = N·Nᵀ`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::math;
use crate::matrix::Matrix;
use crate::multicurve::{support_is_connected, IntersectionMatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PerronError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must be symmetric, nonnegative and finite")]
    BadEntries,
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("random restarts converged to different rays (deviation {deviation:e})")]
    RayMismatch { deviation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerronOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Number of extra runs from random positive starts.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for PerronOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iters: 1_000_000,
            restarts: 8,
            seed: 0,
        }
    }
}

impl PerronOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Perron eigenvalue and its eigenvector, `‖x‖₁ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronResult {
    pub lambda: f64,
    pub x: Vec<f64>,
    /// `‖T·x − λ·x‖∞`
    pub residual: f64,
    pub iterations: usize,
}

/// `N·Nᵀ`, exact.
pub fn gram(n: &IntersectionMatrix) -> Matrix<u64> {
    n.as_matrix().gram()
}

/// True iff `N` has no zero line and its bipartite support graph is connected,
/// which makes `N·Nᵀ` primitive.
pub fn is_primitive(n: &IntersectionMatrix) -> bool {
    support_is_connected(n.rows(), n.cols(), |i, j| n.get(i, j) > 0)
}

/// Primitivity of a symmetric nonnegative matrix: connected support graph,
/// and aperiodic (a positive diagonal entry or an odd cycle).
pub fn is_primitive_square(t: &Matrix<f64>) -> bool {
    let k = t.rows();
    if k == 0 || !t.is_square() {
        return false;
    }
    if k == 1 {
        return t[(0, 0)] > 0.0;
    }
    // BFS two-colouring; a clash means an odd cycle.
    let mut colour: Vec<Option<bool>> = alloc::vec![None; k];
    let mut queue = alloc::collections::VecDeque::new();
    colour[0] = Some(false);
    queue.push_back(0);
    let mut odd = false;
    while let Some(i) = queue.pop_front() {
        let c = colour[i].unwrap();
        for j in 0..k {
            if i == j || t[(i, j)] <= 0.0 {
                continue;
            }
            match colour[j] {
                None => {
                    colour[j] = Some(!c);
                    queue.push_back(j);
                }
                Some(d) if d == c => odd = true,
                Some(_) => {}
            }
        }
    }
    if colour.iter().any(Option::is_none) {
        return false;
    }
    odd || (0..k).any(|i| t[(i, i)] > 0.0)
}

fn check_matrix(t: &Matrix<f64>) -> Result<(), PerronError> {
    if !t.is_square() {
        return Err(PerronError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let k = t.rows();
    for i in 0..k {
        for j in 0..k {
            let a = t[(i, j)];
            if !a.is_finite() || a < 0.0 || a != t[(j, i)] {
                return Err(PerronError::BadEntries);
            }
        }
    }
    if !is_primitive_square(t) {
        return Err(PerronError::NotPrimitive);
    }
    Ok(())
}

fn apply(t: &Matrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..t.rows()).map(|i| math::dot2(t.row(i), x)).collect()
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|a| *a /= s);
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn rayleigh(t: &Matrix<f64>, x: &[f64]) -> (f64, f64) {
    let tx = apply(t, x);
    let lambda = math::dot2(x, &tx) / math::dot2(x, x);
    let residual = tx
        .iter()
        .zip(x)
        .map(|(a, b)| math::fma(-lambda, *b, *a).abs())
        .fold(0.0, f64::max);
    (lambda, residual)
}

/// Power iteration from `x0` until the estimated distance to the fixed ray
/// and the eigen-residual are both below `tol`.
fn iterate(
    t: &Matrix<f64>,
    x0: Vec<f64>,
    opts: &PerronOptions,
) -> Result<PerronResult, PerronError> {
    let mut x = x0;
    normalize(&mut x);
    let mut prev_diff = f64::INFINITY;
    let mut iterations = 0;
    let (mut lambda, mut residual) = (f64::NAN, f64::INFINITY);
    while iterations < opts.max_iters {
        iterations += 1;
        let mut y = apply(t, &x);
        normalize(&mut y);
        let diff = max_abs_diff(&x, &y);
        x = y;
        let rho = diff / prev_diff;
        prev_diff = diff;
        let settled = if diff == 0.0 {
            true
        } else if rho < 1.0 {
            diff / (1.0 - rho) <= opts.tol
        } else {
            // at the rounding floor, or still in the transient
            diff <= opts.tol * 1e-3
        };
        if settled {
            (lambda, residual) = rayleigh(t, &x);
            if residual <= opts.tol || diff == 0.0 {
                break;
            }
        }
    }
    if !(residual <= opts.tol) || x.iter().any(|a| !(*a > 0.0)) || !(lambda > 0.0) {
        if !residual.is_finite() {
            residual = rayleigh(t, &x).1;
        }
        return Err(PerronError::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(PerronResult {
        lambda,
        x,
        residual,
        iterations,
    })
}

/// Perron eigenpair of a symmetric nonnegative primitive matrix.
///
/// The main run starts from the all-ones vector; `opts.restarts` further runs
/// start from seeded random positive vectors and must land on the same ray
/// within `10·tol`.
pub fn perron_solve(t: &Matrix<f64>, opts: &PerronOptions) -> Result<PerronResult, PerronError> {
    if !(opts.tol.is_finite() && opts.tol > 0.0) {
        return Err(PerronError::BadTolerance(opts.tol));
    }
    check_matrix(t)?;
    let k = t.rows();
    let main = iterate(t, alloc::vec![1.0; k], opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let start: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let other = iterate(t, start, opts)?;
        let deviation = max_abs_diff(&main.x, &other.x);
        if !(deviation <= 10.0 * opts.tol) {
            return Err(PerronError::RayMismatch { deviation });
        }
    }
    Ok(main)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(rows: Vec<Vec<f64>>) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn gram_of_golden_matrix() {
        let n = IntersectionMatrix::new(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(gram(&n).to_rows(), vec![vec![2, 1], vec![1, 1]]);
        let n = IntersectionMatrix::new(vec![vec![7]]).unwrap();
        assert_eq!(gram(&n).to_rows(), vec![vec![49]]);
    }

    #[test]
    fn primitivity_examples() {
        let p = |rows: Vec<Vec<u64>>| is_primitive(&IntersectionMatrix::new(rows).unwrap());
        assert!(p(vec![vec![1, 1], vec![1, 0]]));
        assert!(!p(vec![vec![1, 0], vec![0, 1]]));
        assert!(!p(vec![vec![1, 1, 0], vec![0, 0, 0]]));
        assert!(!p(vec![vec![1, 0], vec![1, 0]]));
    }

    #[test]
    fn square_primitivity() {
        assert!(is_primitive_square(&m(vec![
            vec![2.0, 1.0],
            vec![1.0, 1.0]
        ])));
        // bipartite, period 2
        assert!(!is_primitive_square(&m(vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0]
        ])));
        // triangle, odd cycle
        assert!(is_primitive_square(&m(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0]
        ])));
        assert!(!is_primitive_square(&m(vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0]
        ])));
    }

    #[test]
    fn golden_eigenpair() {
        let r = perron_solve(
            &m(vec![vec![2.0, 1.0], vec![1.0, 1.0]]),
            &PerronOptions::default(),
        )
        .unwrap();
        let s5 = math::sqrt(5.0);
        assert!((r.lambda - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert!((r.x[1] / r.x[0] - (s5 - 1.0) / 2.0).abs() < 1e-11);
        assert!((r.x[0] + r.x[1] - 1.0).abs() < 1e-15);
        assert!(r.residual <= 1e-12);
    }

    #[test]
    fn scalar_and_homogeneity() {
        let r = perron_solve(&m(vec![vec![4.0]]), &PerronOptions::default()).unwrap();
        assert_eq!((r.lambda, r.x.clone()), (4.0, vec![1.0]));
        let base = perron_solve(
            &m(vec![vec![2.0, 1.0], vec![1.0, 1.0]]),
            &PerronOptions::default(),
        )
        .unwrap();
        let tripled = perron_solve(
            &m(vec![vec![6.0, 3.0], vec![3.0, 3.0]]),
            &PerronOptions::default(),
        )
        .unwrap();
        assert!((tripled.lambda - 3.0 * base.lambda).abs() < 1e-11);
        assert!(max_abs_diff(&base.x, &tripled.x) < 1e-11);
    }

    #[test]
    fn rejects_bad_input() {
        let opts = PerronOptions::default();
        assert_eq!(
            perron_solve(&m(vec![vec![1.0, 0.0], vec![0.0, 1.0]]), &opts),
            Err(PerronError::NotPrimitive)
        );
        assert_eq!(
            perron_solve(&m(vec![vec![1.0, 2.0], vec![1.0, 1.0]]), &opts),
            Err(PerronError::BadEntries)
        );
        assert!(matches!(
            perron_solve(&m(vec![vec![1.0, 2.0]]), &opts),
            Err(PerronError::NotSquare { .. })
        ));
        assert_eq!(
            perron_solve(&m(vec![vec![1.0]]), &PerronOptions::with_tol(-1.0)),
            Err(PerronError::BadTolerance(-1.0))
        );
    }

    #[test]
    fn unreachable_tolerance_fails_to_converge() {
        let r = perron_solve(
            &m(vec![vec![2.0, 1.0], vec![1.0, 1.0]]),
            &PerronOptions {
                max_iters: 10_000,
                ..PerronOptions::with_tol(1e-30)
            },
        );
        assert!(matches!(r, Err(PerronError::NoConvergence { .. })), "{r:?}");
    }

    #[test]
    fn slow_gap_still_certifies() {
        // eigenvalues 2.01 and 1.99: ratio close to one
        let t = m(vec![vec![2.0, 0.01], vec![0.01, 2.0]]);
        let r = perron_solve(&t, &PerronOptions::default()).unwrap();
        assert!((r.lambda - 2.01).abs() < 1e-12);
        assert!((r.x[0] - 0.5).abs() < 1e-11);
    }
}
