//! Executable checks of the method's ordering guarantees: termwise
//! comparison between splittings, continuity of the solution in the right
//! side, and monotone dependence on the data. Each probe runs actual solves
//! and reports whether the predicted ordering holds.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::solver::{
    make_upper_start, maximal_solve, minimal_solve, positive_solve, step_with_floor,
    SolveStatus, SolverOptions, StartPolicy,
};
use crate::splitting::{build_plan, Splitting};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremalMode {
    Minimal,
    Maximal,
}

#[derive(Debug, Clone, Copy)]
pub struct OrderingViolation {
    pub step: usize,
    pub coordinate: usize,
    pub gap: f64,
}

/// Result of running two splittings side by side for a fixed step count.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub mode: ExtremalMode,
    pub steps_run: usize,
    /// True when the first splitting's Q is entrywise <= the second's.
    pub first_q_smaller: bool,
    pub violations: Vec<OrderingViolation>,
    pub final_first: DVector<f64>,
    pub final_second: DVector<f64>,
}

impl ComparisonReport {
    /// The predicted termwise ordering held at every recorded step.
    pub fn ordered(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the iteration under two splittings from the same start and checks
/// the termwise comparison guarantee: with `Q_hat <= Q`, the smaller-Q iterates are
/// closer to the target at every step (larger in minimal mode, smaller in
/// maximal mode). Requires the two Q matrices to be entrywise comparable.
pub fn compare_splittings(
    a: &Tensor,
    b: &DVector<f64>,
    first: &Splitting,
    second: &Splitting,
    mode: ExtremalMode,
    steps: usize,
    opts: &SolverOptions,
) -> Result<ComparisonReport> {
    let plan_first = build_plan(a, first)?;
    let plan_second = build_plan(a, second)?;

    let n = a.dim();
    let q1 = plan_first.q();
    let q2 = plan_second.q();
    let first_le = q1.iter().zip(q2.iter()).all(|(x, y)| x <= y);
    let second_le = q2.iter().zip(q1.iter()).all(|(x, y)| x <= y);
    if !first_le && !second_le {
        return Err(Error::IncomparableSplittings);
    }

    let x0 = match mode {
        ExtremalMode::Minimal => {
            if let Some((entry, value)) = a.z_violation() {
                return Err(Error::NotZTensor { entry, value });
            }
            if let Some(i) = (0..n).find(|&i| b[i] < 0.0) {
                return Err(Error::NegativeRhs {
                    index: i,
                    value: b[i],
                });
            }
            DVector::zeros(n)
        }
        ExtremalMode::Maximal => make_upper_start(a, std::slice::from_ref(b), first, opts)?,
    };

    let mut x1 = x0.clone();
    let mut x2 = x0;
    let mut violations = Vec::new();
    let mut steps_run = 0;
    for k in 1..=steps {
        x1 = step_with_floor(&plan_first, &x1, b, 1e-14)?;
        x2 = step_with_floor(&plan_second, &x2, b, 1e-14)?;
        steps_run = k;
        // Orient so `small` is the smaller-Q sequence.
        let (small, large) = if first_le { (&x1, &x2) } else { (&x2, &x1) };
        let slack = 1e-13 * large.amax().max(1.0);
        for i in 0..n {
            let gap = match mode {
                ExtremalMode::Minimal => large[i] - small[i],
                ExtremalMode::Maximal => small[i] - large[i],
            };
            if gap > slack {
                violations.push(OrderingViolation {
                    step: k,
                    coordinate: i,
                    gap,
                });
            }
        }
        if x1.amax() > opts.divergence_bound || x2.amax() > opts.divergence_bound {
            break;
        }
    }

    Ok(ComparisonReport {
        mode,
        steps_run,
        first_q_smaller: first_le,
        violations,
        final_first: x1,
        final_second: x2,
    })
}

/// Result of the continuity probe `b^{(k)} = b + 2^{-k} e`.
#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub solutions: Vec<DVector<f64>>,
    pub monotone_nonincreasing: bool,
    /// Sup-norm gap between the last perturbed solution and the maximal
    /// solution of the unperturbed equation.
    pub final_gap_inf: f64,
    pub x_max: DVector<f64>,
}

/// Solves `A x^{m-1} = b + 2^{-k} e` for `k = 1..=seq_len` and checks that
/// the positive solutions decrease monotonically toward the maximal
/// nonnegative solution of `A x^{m-1} = b`.
pub fn continuity_probe(
    a: &Tensor,
    b: &DVector<f64>,
    seq_len: usize,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<ContinuityReport> {
    if let Some(i) = (0..b.len()).find(|&i| b[i] < 0.0) {
        return Err(Error::NegativeRhs {
            index: i,
            value: b[i],
        });
    }
    let mut inner = opts.clone();
    inner.x0 = StartPolicy::Zero;
    let mut solutions = Vec::with_capacity(seq_len);
    for k in 1..=seq_len {
        let bk = b.add_scalar(2.0f64.powi(-(k as i32)));
        let report = positive_solve(a, &bk, splitting, &inner)?;
        if report.status != SolveStatus::Converged {
            return Err(Error::ProbeFailed(format!(
                "perturbed solve k={k} ended with status {}",
                report.status
            )));
        }
        solutions.push(report.x);
    }
    let slack = 100.0 * opts.tol;
    let monotone = solutions
        .windows(2)
        .all(|w| (0..w[0].len()).all(|i| w[1][i] <= w[0][i] + slack));

    let mut max_opts = opts.clone();
    max_opts.x0 = StartPolicy::Auto;
    let x_max = maximal_solve(a, b, splitting, &max_opts)?.x;
    let final_gap = (solutions.last().unwrap() - &x_max).amax();

    Ok(ContinuityReport {
        solutions,
        monotone_nonincreasing: monotone,
        final_gap_inf: final_gap,
        x_max,
    })
}

/// Admissible one-parameter changes with a guaranteed monotone effect on an
/// extremal solution.
#[derive(Debug, Clone)]
pub enum Perturbation {
    /// Decrease a right-side entry (stays nonnegative); the minimal solution
    /// cannot increase.
    RhsDown { index: usize, new_value: f64 },
    /// Increase a diagonal entry; the minimal solution cannot increase.
    DiagonalUp { coordinate: usize, increase: f64 },
    /// Move an off-diagonal entry toward zero (stays nonpositive); the
    /// minimal solution cannot increase.
    OffDiagonalUp { tuple: Vec<usize>, new_value: f64 },
    /// Increase a right-side entry; the maximal solution cannot decrease.
    RhsUp { index: usize, new_value: f64 },
    /// Decrease any tensor entry; the maximal solution cannot decrease,
    /// provided the perturbed tensor is still a nonsingular M-tensor.
    EntryDown { tuple: Vec<usize>, decrease: f64 },
}

#[derive(Debug, Clone)]
pub struct DependenceReport {
    pub mode: ExtremalMode,
    /// False when the perturbed tensor left the class the guarantee needs
    /// (reported, not asserted).
    pub admissible: bool,
    pub ordering_holds: Option<bool>,
    pub original_x: DVector<f64>,
    pub perturbed_x: Option<DVector<f64>>,
    pub note: Option<String>,
}

/// Solves the original and a perturbed system and checks the elementwise
/// ordering guaranteed for the admissible perturbation.
pub fn monotone_dependence_probe(
    a: &Tensor,
    b: &DVector<f64>,
    perturbation: &Perturbation,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<DependenceReport> {
    let (a_new, b_new, mode) = apply_perturbation(a, b, perturbation)?;

    match mode {
        ExtremalMode::Minimal => {
            let orig = minimal_solve(a, b, splitting, opts)?;
            if orig.status != SolveStatus::Converged {
                return Err(Error::ProbeFailed(format!(
                    "original minimal solve ended with status {}",
                    orig.status
                )));
            }
            let pert = minimal_solve(&a_new, &b_new, splitting, opts)?;
            if pert.status != SolveStatus::Converged {
                return Ok(DependenceReport {
                    mode,
                    admissible: true,
                    ordering_holds: None,
                    original_x: orig.x,
                    perturbed_x: None,
                    note: Some(format!("perturbed solve ended with status {}", pert.status)),
                });
            }
            let slack = 100.0 * opts.tol * (1.0 + orig.x.amax());
            let holds = (0..orig.x.len()).all(|i| pert.x[i] <= orig.x[i] + slack);
            Ok(DependenceReport {
                mode,
                admissible: true,
                ordering_holds: Some(holds),
                original_x: orig.x,
                perturbed_x: Some(pert.x),
                note: None,
            })
        }
        ExtremalMode::Maximal => {
            let orig = maximal_solve(a, b, splitting, opts)?;
            if orig.status != SolveStatus::Converged {
                return Err(Error::ProbeFailed(format!(
                    "original maximal solve ended with status {}",
                    orig.status
                )));
            }
            match maximal_solve(&a_new, &b_new, splitting, opts) {
                Err(Error::NotMTensor(class)) => Ok(DependenceReport {
                    mode,
                    admissible: false,
                    ordering_holds: None,
                    original_x: orig.x,
                    perturbed_x: None,
                    note: Some(format!(
                        "perturbed tensor left the nonsingular M class ({class})"
                    )),
                }),
                Err(e) => Err(e),
                Ok(pert) if pert.status != SolveStatus::Converged => Ok(DependenceReport {
                    mode,
                    admissible: true,
                    ordering_holds: None,
                    original_x: orig.x,
                    perturbed_x: None,
                    note: Some(format!("perturbed solve ended with status {}", pert.status)),
                }),
                Ok(pert) => {
                    let slack = 100.0 * opts.tol * (1.0 + orig.x.amax());
                    let holds = (0..orig.x.len()).all(|i| pert.x[i] >= orig.x[i] - slack);
                    Ok(DependenceReport {
                        mode,
                        admissible: true,
                        ordering_holds: Some(holds),
                        original_x: orig.x,
                        perturbed_x: Some(pert.x),
                        note: None,
                    })
                }
            }
        }
    }
}

fn apply_perturbation(
    a: &Tensor,
    b: &DVector<f64>,
    p: &Perturbation,
) -> Result<(Tensor, DVector<f64>, ExtremalMode)> {
    let n = a.dim();
    let m = a.order();
    match p {
        Perturbation::RhsDown { index, new_value } => {
            if *index >= n {
                return Err(Error::ProbeFailed("rhs index out of range".into()));
            }
            if !(0.0..=b[*index]).contains(new_value) {
                return Err(Error::ProbeFailed(
                    "new rhs value must stay in [0, old value]".into(),
                ));
            }
            let mut bn = b.clone();
            bn[*index] = *new_value;
            Ok((a.clone(), bn, ExtremalMode::Minimal))
        }
        Perturbation::DiagonalUp {
            coordinate,
            increase,
        } => {
            if *coordinate >= n || *increase < 0.0 {
                return Err(Error::ProbeFailed(
                    "diagonal increase needs a valid coordinate and increase >= 0".into(),
                ));
            }
            let mut entries = a.entry_list();
            entries.push((vec![*coordinate; m], *increase));
            Ok((
                Tensor::from_entries(m, n, entries)?,
                b.clone(),
                ExtremalMode::Minimal,
            ))
        }
        Perturbation::OffDiagonalUp { tuple, new_value } => {
            let old = a.get(tuple);
            let constant = tuple.iter().all(|&i| i == tuple[0]);
            if constant || !(old..=0.0).contains(new_value) {
                return Err(Error::ProbeFailed(
                    "off-diagonal move must stay in [old value, 0]".into(),
                ));
            }
            let mut entries = a.entry_list();
            entries.push((tuple.clone(), new_value - old));
            Ok((
                Tensor::from_entries(m, n, entries)?,
                b.clone(),
                ExtremalMode::Minimal,
            ))
        }
        Perturbation::RhsUp { index, new_value } => {
            if *index >= n || *new_value < b[*index] {
                return Err(Error::ProbeFailed(
                    "new rhs value must not be smaller".into(),
                ));
            }
            let mut bn = b.clone();
            bn[*index] = *new_value;
            Ok((a.clone(), bn, ExtremalMode::Maximal))
        }
        Perturbation::EntryDown { tuple, decrease } => {
            if *decrease < 0.0 {
                return Err(Error::ProbeFailed("decrease must be >= 0".into()));
            }
            let mut entries = a.entry_list();
            entries.push((tuple.clone(), -decrease));
            Ok((
                Tensor::from_entries(m, n, entries)?,
                b.clone(),
                ExtremalMode::Maximal,
            ))
        }
    }
}
