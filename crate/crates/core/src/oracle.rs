//! Desk-scale verification oracle: enumerates all nonnegative solutions by
//! zero-pattern search, checks candidate solutions against the defining
//! equation, and provides finite-difference and complementarity residuals.
//!
//! A zero coordinate of a nonnegative solution forces the corresponding
//! right-side entry to zero on the instances handled here, so candidate zero
//! patterns range over subsets of `I_0 = {i : b_i = 0}`. Each pattern's
//! reduced system is probed with both extremal solvers; a probe contributes
//! a solution when its result is strictly positive (so the pattern is the
//! exact zero set) and the zero-extension satisfies the full equation.
//! Patterns whose reduced system fails the positive-diagonal gate, is not a
//! nonsingular M-tensor, or does not converge are recorded as degenerate:
//! completeness is not guaranteed there (such patterns may carry solution
//! continua). Solutions strictly between the extremals of a reduced system
//! with the same support are outside the oracle's reach.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::solver::{maximal_solve, minimal_solve, SolveStatus, SolverOptions};
use crate::spectral::classify;
use crate::splitting::Splitting;
use crate::tensor::Tensor;

/// Largest dimension accepted by [`enumerate_solutions`] by default.
pub const DEFAULT_ENUM_LIMIT: usize = 12;
/// Residual tolerance for accepting an enumerated solution.
const ACCEPT_TOL: f64 = 1e-9;
/// Solutions closer than this in sup norm are considered duplicates.
const DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SolutionSet {
    /// All nonnegative solutions found, sorted lexicographically.
    pub solutions: Vec<DVector<f64>>,
    /// Candidate zero patterns (0-based) whose reduced system could not be
    /// gated or solved; such patterns may carry solution continua.
    pub degenerate_patterns: Vec<Vec<usize>>,
    /// Indices into `solutions` of the elementwise least and greatest
    /// members, when the set is totally bounded by two of its members.
    pub extremal: Option<(usize, usize)>,
}

/// Enumerates every nonnegative solution of `A x^{m-1} = b` for a Z-tensor
/// `A` and `b >= 0` with `dim <= n_limit`.
pub fn enumerate_solutions(a: &Tensor, b: &DVector<f64>, n_limit: usize) -> Result<SolutionSet> {
    if let Some((entry, value)) = a.z_violation() {
        return Err(Error::NotZTensor { entry, value });
    }
    if let Some(i) = (0..b.len()).find(|&i| b[i] < 0.0) {
        return Err(Error::NegativeRhs {
            index: i,
            value: b[i],
        });
    }
    let n = a.dim();
    if n > n_limit {
        return Err(Error::EnumerationLimit { n, limit: n_limit });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }

    let zero_rhs: Vec<usize> = (0..n).filter(|&i| b[i] == 0.0).collect();
    let opts = SolverOptions::default();

    let mut solutions: Vec<DVector<f64>> = Vec::new();
    let mut degenerate: Vec<Vec<usize>> = Vec::new();

    for mask in 0u64..(1u64 << zero_rhs.len()) {
        let pattern: Vec<usize> = zero_rhs
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, &i)| i)
            .collect();

        if pattern.len() == n {
            // All-zero candidate; a solution exactly when b = 0.
            if verify_solution(a, b, &DVector::zeros(n), ACCEPT_TOL) {
                solutions.push(DVector::zeros(n));
            }
            continue;
        }

        let keep: Vec<usize> = (0..n).filter(|i| !pattern.contains(i)).collect();
        let reduced = a.subtensor(&keep)?;
        if reduced.diagonal().iter().any(|&d| d <= 0.0) {
            degenerate.push(pattern);
            continue;
        }
        let reduced_b = DVector::from_iterator(keep.len(), keep.iter().map(|&i| b[i]));

        // A strictly positive result pins the pattern as an exact zero set;
        // the extension check then screens out zeros that break other rows.
        let accept = |x: &DVector<f64>, solutions: &mut Vec<DVector<f64>>| {
            if !x.iter().all(|&v| v > 0.0) {
                return;
            }
            let mut full = DVector::zeros(n);
            for (pos, &i) in keep.iter().enumerate() {
                full[i] = x[pos];
            }
            if verify_solution(a, b, &full, ACCEPT_TOL) {
                solutions.push(full);
            }
        };

        match minimal_solve(&reduced, &reduced_b, &Splitting::Jacobi, &opts) {
            Ok(r) if r.status == SolveStatus::Converged => accept(&r.x, &mut solutions),
            _ => {
                degenerate.push(pattern);
                continue;
            }
        }
        if classify(&reduced, opts.classify_tol).is_nonsingular_m() {
            match maximal_solve(&reduced, &reduced_b, &Splitting::Jacobi, &opts) {
                Ok(r) if r.status == SolveStatus::Converged => accept(&r.x, &mut solutions),
                _ => degenerate.push(pattern),
            }
        } else {
            // Only the minimal solution is certified on this pattern.
            degenerate.push(pattern);
        }
    }

    solutions.sort_by(|x, y| {
        x.iter()
            .zip(y.iter())
            .find_map(|(a, b)| a.partial_cmp(b).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    solutions.dedup_by(|x, y| (x.clone() - y.clone()).amax() <= DEDUP_TOL);
    degenerate.sort();

    let extremal = find_extremal(&solutions);

    Ok(SolutionSet {
        solutions,
        degenerate_patterns: degenerate,
        extremal,
    })
}

fn find_extremal(solutions: &[DVector<f64>]) -> Option<(usize, usize)> {
    let least = solutions.iter().position(|x| {
        solutions
            .iter()
            .all(|y| (0..x.len()).all(|i| x[i] <= y[i] + DEDUP_TOL))
    })?;
    let greatest = solutions.iter().position(|x| {
        solutions
            .iter()
            .all(|y| (0..x.len()).all(|i| x[i] >= y[i] - DEDUP_TOL))
    })?;
    Some((least, greatest))
}

/// True iff `x >= -tol` elementwise and
/// `||A x^{m-1} - b||_inf <= tol * (||b||_inf + 1)`.
pub fn verify_solution(a: &Tensor, b: &DVector<f64>, x: &DVector<f64>, tol: f64) -> bool {
    if x.len() != a.dim() || b.len() != a.dim() {
        return false;
    }
    if x.iter().any(|&v| v < -tol) {
        return false;
    }
    match a.contract(x) {
        Ok(ax) => (ax - b).amax() <= tol * (b.amax() + 1.0),
        Err(_) => false,
    }
}

/// Central-difference Jacobian of `x -> A x^{m-1}` with step `h`.
pub fn fd_jacobian(a: &Tensor, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    let n = a.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let mut jac = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        let col = (a.contract(&xp)? - a.contract(&xm)?) / (2.0 * h);
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Complementarity data for the tensor complementarity problem: returns
/// `(x, A x^{m-1} - b, x^T (A x^{m-1} - b))`.
pub fn tcp_residual(
    a: &Tensor,
    b: &DVector<f64>,
    x: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>, f64)> {
    let dual = a.contract(x)? - b;
    let complementarity = x.dot(&dual);
    Ok((x.clone(), dual, complementarity))
}
