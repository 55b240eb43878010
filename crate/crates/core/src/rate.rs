//! Convergence-rate certification at a computed solution.
//!
//! The splitting iteration is `x_{k+1} = phi(x_k)` with
//! `phi(x) = (P^{-1}(L x^{m-1} + b))^{[1/(m-1)]}`. At a positive fixed point
//! `x*` the Jacobian is the nonnegative matrix
//!
//! ```text
//! phi'(x*) = diag(x*^{[-(m-2)]}) P^{-1} (Lbar x*^{m-2})
//! ```
//!
//! with `Lbar` the semi-symmetrization of `L`; its spectral radius is the
//! asymptotic linear rate. Four sufficient conditions for `rho < 1` are
//! evaluated structurally: (a) `P^{-1} b > 0`; (b) irreducibility of
//! `P^{-1} (Lbar e^{m-2})`; (c) strict triangularity of `(Bbar e^{m-2})`
//! when `P` carries the whole diagonal of `A`; (d) every zero-rhs row of `A`
//! couples to a coordinate with positive right side.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::solver::TraceEntry;
use crate::spectral::matrix_spectral_radius;
use crate::splitting::SplittingPlan;
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Fails,
    NotApplicable,
}

impl std::fmt::Display for ConditionStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionStatus::Holds => write!(f, "holds"),
            ConditionStatus::Fails => write!(f, "fails"),
            ConditionStatus::NotApplicable => write!(f, "not-applicable"),
        }
    }
}

/// The four linear-convergence conditions.
#[derive(Debug, Clone, Copy)]
pub struct ConditionFlags {
    /// (a) `P^{-1} b > 0`.
    pub rhs_positive: ConditionStatus,
    /// (b) `P^{-1} (Lbar e^{m-2})` is irreducible.
    pub irreducible: ConditionStatus,
    /// (c) `Bbar e^{m-2}` is strictly upper or lower triangular (as given).
    pub triangular: ConditionStatus,
    /// (d) every row with zero right side has an entry reaching a coordinate
    /// with positive right side.
    pub zero_rows_coupled: ConditionStatus,
}

#[derive(Debug, Clone)]
pub struct RateReport {
    pub phi_prime: DMatrix<f64>,
    pub rho: f64,
    pub conditions: ConditionFlags,
    /// Median of successive residual ratios over the tail of a run, when a
    /// run's history is attached via [`measured_factor`].
    pub measured_factor: Option<f64>,
}

/// Builds `phi'(x_star)` and evaluates the rate and the four conditions.
///
/// `x_star` must be strictly positive; reduce the system first when the
/// solution carries zeros.
pub fn estimate_rate(
    a: &Tensor,
    b: &DVector<f64>,
    plan: &SplittingPlan,
    x_star: &DVector<f64>,
) -> Result<RateReport> {
    let n = plan.dim();
    if x_star.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x_star.len(),
        });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if let Some(i) = (0..n).find(|&i| x_star[i] <= 0.0) {
        return Err(Error::ZeroComponentAtRatePoint {
            index: i,
            value: x_star[i],
        });
    }
    let m = plan.order();
    let l_bar = plan.l_part().semi_symmetrize();

    let phi_prime = scaled_p_inverse_contraction(plan, &l_bar, x_star, m)?;
    let rho = matrix_spectral_radius(&phi_prime)?;

    // (a)
    let pb = plan.p_solve(b)?;
    let rhs_positive = if pb.iter().all(|&v| v > 0.0) {
        ConditionStatus::Holds
    } else {
        ConditionStatus::Fails
    };

    // (b)
    let e = DVector::from_element(n, 1.0);
    let graph = scaled_p_inverse_contraction(plan, &l_bar, &e, m)?;
    let irreducible = if is_irreducible(&graph) {
        ConditionStatus::Holds
    } else {
        ConditionStatus::Fails
    };

    // (c) applies when P carries the whole diagonal of A.
    let a_diag = a.diagonal();
    let p_has_diag = (0..n).all(|i| plan.p()[(i, i)] == a_diag[i]);
    let triangular = if !p_has_diag {
        ConditionStatus::NotApplicable
    } else {
        let b_off = Tensor::from_entries(
            m,
            n,
            a.entries().filter_map(|(tuple, value)| {
                let i = tuple[0];
                (!tuple.iter().all(|&j| j == i)).then(|| (tuple.to_vec(), -value))
            }),
        )?;
        let t = b_off.semi_symmetrize().contract_matrix(&e)?;
        let strictly_upper = (0..n).all(|i| (0..=i).all(|j| t[(i, j)] == 0.0));
        let strictly_lower = (0..n).all(|i| (i..n).all(|j| t[(i, j)] == 0.0));
        if strictly_upper || strictly_lower {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Fails
        }
    };

    // (d)
    let zero_rows: Vec<usize> = (0..n).filter(|&i| b[i] == 0.0).collect();
    let zero_rows_coupled = if zero_rows.is_empty() {
        ConditionStatus::NotApplicable
    } else {
        let in_i0 = |i: usize| b[i] == 0.0;
        let ok = zero_rows.iter().all(|&i| {
            a.entries().any(|(tuple, _)| {
                tuple[0] == i && tuple[1..].iter().any(|&j| !in_i0(j))
            })
        });
        if ok {
            ConditionStatus::Holds
        } else {
            ConditionStatus::Fails
        }
    };

    Ok(RateReport {
        phi_prime,
        rho,
        conditions: ConditionFlags {
            rhs_positive,
            irreducible,
            triangular,
            zero_rows_coupled,
        },
        measured_factor: None,
    })
}

/// `diag(x^{[-(m-2)]}) P^{-1} (T x^{m-2})` with tiny negative rounding from
/// the `P`-solve clamped away (the product is nonnegative in exact
/// arithmetic).
fn scaled_p_inverse_contraction(
    plan: &SplittingPlan,
    t: &Tensor,
    x: &DVector<f64>,
    m: usize,
) -> Result<DMatrix<f64>> {
    let n = plan.dim();
    let tx = t.contract_matrix(x)?;
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let col = plan.p_solve(&tx.column(j).clone_owned())?;
        out.set_column(j, &col);
    }
    let scale = out.amax().max(1.0);
    for i in 0..n {
        let row_scale = x[i].powi(-(m as i32 - 2));
        for j in 0..n {
            let v = out[(i, j)] * row_scale;
            out[(i, j)] = if v < 0.0 && v > -1e-12 * scale { 0.0 } else { v };
        }
    }
    Ok(out)
}

/// Strong connectivity of the digraph with an edge `i -> j` whenever
/// `g[(i, j)] > 0`, by transitive closure.
fn is_irreducible(g: &DMatrix<f64>) -> bool {
    let n = g.nrows();
    if n <= 1 {
        return true;
    }
    let mut reach = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            reach[i * n + j] = i == j || g[(i, j)] > 0.0;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }
    (0..n).all(|i| (0..n).all(|j| reach[i * n + j]))
}

/// Median of the successive residual ratios over the last (up to) 20 steps
/// of a run; `None` when fewer than 5 clean ratios are available.
///
/// Residuals within a factor 1e3 of the final one carry the cancellation
/// noise of the residual evaluation, so the window ends above that level
/// whenever enough of the run remains.
pub fn measured_factor(history: &[TraceEntry]) -> Option<f64> {
    let res: Vec<f64> = history.iter().map(|t| t.residual_inf).collect();
    let last_positive = res.iter().rev().copied().find(|&r| r > 0.0)?;
    let cutoff = 1e3 * last_positive;
    let collect = |min_level: f64| -> Vec<f64> {
        res.windows(2)
            .filter(|w| w[0] > 0.0 && w[1] >= min_level)
            .map(|w| w[1] / w[0])
            .collect()
    };
    let mut ratios = collect(cutoff);
    if ratios.len() < 5 {
        ratios = collect(f64::MIN_POSITIVE);
    }
    if ratios.len() > 20 {
        ratios = ratios.split_off(ratios.len() - 20);
    }
    if ratios.len() < 5 {
        return None;
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Some(ratios[ratios.len() / 2])
}
