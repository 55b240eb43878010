//! Monotone fixed-point iterations for the extremal nonnegative solutions of
//! `A x^{m-1} = b`.
//!
//! Both solvers run the same splitting iteration
//! `P x_{k+1}^{[m-1]} = L x_k^{m-1} + b`:
//!
//! * [`minimal_solve`] starts from `x_0 = 0` on a Z-tensor with `b >= 0`;
//!   iterates increase monotonically and converge to the minimal nonnegative
//!   solution whenever one exists, and grow without bound otherwise.
//! * [`maximal_solve`] starts from a positive `x_0` with `A x_0^{m-1} > 0`
//!   and `A x_0^{m-1} >= b` on a nonsingular M-tensor; iterates decrease
//!   monotonically to the maximal nonnegative solution. A negative component
//!   inside the update signals that the feasible set may be empty.
//!
//! Once two consecutive iterates share a zero pattern the pattern is final;
//! the solver then drops the zero coordinates, continues on the reduced
//! system with the inherited splitting, and re-embeds the zeros on output.
//! Coordinates with a nonpositive diagonal entry are dropped up front in
//! minimal mode (the minimal solution vanishes there whenever it exists),
//! which is what makes plans with strictly positive `P` diagonals available.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::spectral::{classify, DEFAULT_CLASSIFY_TOL};
use crate::splitting::{build_plan, Splitting, SplittingPlan};
use crate::tensor::{power_vec, Tensor};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;
pub const DEFAULT_DIVERGENCE_BOUND: f64 = 1e150;

/// Relative slack for monotonicity verification.
const MONOTONE_SLACK: f64 = 1e-15;
/// Relative floor under which a negative inner component is treated as
/// rounding noise and clamped to zero inside solver runs.
const INNER_NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum StartPolicy {
    /// Mode default: zero start for minimal/positive, upper start for maximal.
    Auto,
    Zero,
    AutoUpper,
    Explicit(DVector<f64>),
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Residual stop: `||A x^{m-1} - b||_inf <= tol * (||b||_inf + 1)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Pattern-detection threshold; `None` picks the mode default (exact
    /// zeros in minimal runs, `1e-13 * ||x_0||_inf` in maximal runs).
    pub zero_threshold: Option<f64>,
    /// Iterates above this sup-norm bound are declared unbounded.
    pub divergence_bound: f64,
    pub x0: StartPolicy,
    pub classify_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            zero_threshold: None,
            divergence_bound: DEFAULT_DIVERGENCE_BOUND,
            x0: StartPolicy::Auto,
            classify_tol: DEFAULT_CLASSIFY_TOL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    DivergingUnbounded,
    PreconditionFailed,
    MaxIter,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveStatus::Converged => write!(f, "converged"),
            SolveStatus::DivergingUnbounded => write!(f, "diverging-unbounded"),
            SolveStatus::PreconditionFailed => write!(f, "precondition-failed"),
            SolveStatus::MaxIter => write!(f, "max-iter"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneDirection {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy)]
pub struct TraceEntry {
    pub k: usize,
    pub residual_inf: f64,
    pub x_inf: f64,
}

/// Zero-pattern and reduction bookkeeping for one run.
#[derive(Debug, Clone)]
pub struct ReductionInfo {
    /// Smallest iterate index whose zero pattern repeats at the next iterate.
    pub k0: Option<usize>,
    /// Stable zero coordinates, 0-based, in original numbering.
    pub zero_set: Vec<usize>,
    /// Coordinates with `b_i = 0`, 0-based, in original numbering.
    pub zero_rhs_set: Vec<usize>,
    pub reduced: bool,
    /// Final reduced system, present when a reduction happened.
    pub reduced_tensor: Option<Tensor>,
    pub reduced_rhs: Option<DVector<f64>>,
}

impl ReductionInfo {
    fn empty(b: &DVector<f64>) -> Self {
        ReductionInfo {
            k0: None,
            zero_set: Vec::new(),
            zero_rhs_set: zero_rhs_set(b),
            reduced: false,
            reduced_tensor: None,
            reduced_rhs: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Final iterate, re-embedded to the original dimension.
    pub x: DVector<f64>,
    /// Residual of `x` in the original system.
    pub residual_inf: f64,
    pub iterations: usize,
    pub monotone: MonotoneDirection,
    /// True when no accepted step violated monotonicity beyond
    /// `1e-15 * ||x_k||_inf`.
    pub monotone_verified: bool,
    pub reduction: ReductionInfo,
    /// Per-iteration residual log: entry `k` holds the residual of `x_k`.
    pub history: Vec<TraceEntry>,
    pub note: Option<String>,
}

fn zero_rhs_set(b: &DVector<f64>) -> Vec<usize> {
    (0..b.len()).filter(|&i| b[i] == 0.0).collect()
}

fn select(v: &DVector<f64>, keep: &[usize]) -> DVector<f64> {
    DVector::from_iterator(keep.len(), keep.iter().map(|&i| v[i]))
}

fn embed(x: &DVector<f64>, keep: &[usize], n: usize) -> DVector<f64> {
    let mut full = DVector::zeros(n);
    for (pos, &i) in keep.iter().enumerate() {
        full[i] = x[pos];
    }
    full
}

fn pattern(x: &DVector<f64>, threshold: f64) -> Vec<bool> {
    x.iter().map(|&v| v.abs() <= threshold).collect()
}

/// One splitting step `x -> (P^{-1}(L x^{m-1} + b))^{[1/(m-1)]}`.
///
/// Errors with [`Error::NegativeInner`] when the vector under the root has a
/// negative component; in maximal mode this signals that the feasible set
/// `{x >= 0 : A x^{m-1} <= b}` may be empty.
pub fn step(plan: &SplittingPlan, x: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    step_with_floor(plan, x, b, 0.0)
}

pub(crate) fn step_with_floor(
    plan: &SplittingPlan,
    x: &DVector<f64>,
    b: &DVector<f64>,
    relative_floor: f64,
) -> Result<DVector<f64>> {
    if b.len() != plan.dim() {
        return Err(Error::DimensionMismatch {
            expected: plan.dim(),
            got: b.len(),
        });
    }
    let inner = plan.l_apply(x)? + b;
    let w = plan.p_solve(&inner)?;
    let floor = relative_floor * inner.amax().max(1.0);
    if let Some(i) = (0..w.len()).find(|&i| w[i] < -floor) {
        return Err(Error::NegativeInner {
            index: i,
            value: w[i],
            inner: w.clone(),
        });
    }
    let mut w = w;
    w.apply(|v| {
        if *v < 0.0 {
            *v = 0.0;
        }
    });
    power_vec(&w, 1.0 / (plan.order() - 1) as f64)
}

struct Engine {
    a: Tensor,
    b: DVector<f64>,
    plan: SplittingPlan,
    x: DVector<f64>,
    /// Current coordinate -> original coordinate.
    keep: Vec<usize>,
    n_orig: usize,
    b_scale: f64,
    direction: MonotoneDirection,
    zero_threshold: f64,
    tol: f64,
    max_iter: usize,
    divergence_bound: f64,
    k0: Option<usize>,
    pattern_stable: bool,
    zero_set: Vec<usize>,
    history: Vec<TraceEntry>,
    monotone_violations: usize,
    iterations: usize,
}

enum LoopOutcome {
    Converged,
    Diverging(String),
    MaxIter,
    NegativeInner(usize, f64),
}

impl Engine {
    fn run(&mut self) -> Result<LoopOutcome> {
        let mut prev_pattern = pattern(&self.x, self.zero_threshold);
        // The zero pattern of monotone iterates stabilizes within dim steps;
        // the stop is gated on it so the reduction trace is always recorded.
        let pattern_wait = self.n_orig + 2;
        loop {
            if self.iterations >= self.max_iter {
                return Ok(LoopOutcome::MaxIter);
            }
            let next = match step_with_floor(&self.plan, &self.x, &self.b, INNER_NOISE_FLOOR) {
                Ok(v) => v,
                Err(Error::NegativeInner { index, value, .. }) => {
                    let orig = self.keep[index];
                    return Ok(LoopOutcome::NegativeInner(orig, value));
                }
                Err(e) => return Err(e),
            };
            self.iterations += 1;

            let slack = MONOTONE_SLACK * self.x.amax();
            let violated = match self.direction {
                MonotoneDirection::Increasing => {
                    (0..next.len()).any(|i| next[i] < self.x[i] - slack)
                }
                MonotoneDirection::Decreasing => {
                    (0..next.len()).any(|i| next[i] > self.x[i] + slack)
                }
            };
            if violated {
                self.monotone_violations += 1;
            }

            let residual = (self.a.contract(&next)? - &self.b).amax();
            self.history.push(TraceEntry {
                k: self.iterations,
                residual_inf: residual,
                x_inf: next.amax(),
            });
            self.x = next;

            if !self.x.iter().all(|v| v.is_finite()) {
                return Ok(LoopOutcome::Diverging("iterate is not finite".into()));
            }
            if self.x.amax() > self.divergence_bound {
                return Ok(LoopOutcome::Diverging(format!(
                    "iterate sup-norm exceeded {:e}",
                    self.divergence_bound
                )));
            }

            if !self.pattern_stable {
                let pat = pattern(&self.x, self.zero_threshold);
                if pat == prev_pattern {
                    self.pattern_stable = true;
                    self.k0 = Some(self.iterations - 1);
                    let zeros: Vec<usize> =
                        (0..pat.len()).filter(|&i| pat[i]).collect();
                    if !zeros.is_empty() && zeros.len() < self.a.dim() {
                        self.reduce(&zeros)?;
                    }
                } else {
                    prev_pattern = pat;
                }
            }

            if residual <= self.tol * self.b_scale
                && (self.pattern_stable || self.iterations > pattern_wait)
            {
                return Ok(LoopOutcome::Converged);
            }
        }
    }

    /// Drops the coordinates in `zeros` (current numbering) and continues on
    /// the reduced system with the inherited splitting.
    fn reduce(&mut self, zeros: &[usize]) -> Result<()> {
        let kept: Vec<usize> = (0..self.a.dim()).filter(|i| !zeros.contains(i)).collect();
        for &z in zeros {
            self.zero_set.push(self.keep[z]);
        }
        self.a = self.a.subtensor(&kept)?;
        self.b = select(&self.b, &kept);
        self.plan = self.plan.restricted(&kept)?;
        self.x = select(&self.x, &kept);
        self.keep = kept.iter().map(|&i| self.keep[i]).collect();
        Ok(())
    }
}

fn finish(
    mut engine: Engine,
    outcome: LoopOutcome,
    a: &Tensor,
    b: &DVector<f64>,
    tol: f64,
) -> Result<SolveReport> {
    engine.zero_set.sort_unstable();
    let x_full = embed(&engine.x, &engine.keep, engine.n_orig);
    let residual = (a.contract(&x_full)? - b).amax();
    let b_scale = b.amax() + 1.0;

    let (mut status, mut note) = match outcome {
        LoopOutcome::Converged => (SolveStatus::Converged, None),
        LoopOutcome::Diverging(msg) => (
            SolveStatus::DivergingUnbounded,
            Some(format!("{msg}; the feasible set is empty")),
        ),
        LoopOutcome::MaxIter => (SolveStatus::MaxIter, None),
        LoopOutcome::NegativeInner(i, v) => (
            SolveStatus::PreconditionFailed,
            Some(format!(
                "inner vector went negative at coordinate {} ({v:e}); the feasible set may be empty",
                i + 1
            )),
        ),
    };
    if status == SolveStatus::Converged && residual > tol * b_scale {
        // The reduced run converged but the re-embedded vector does not solve
        // the original equation, so no solution carries this zero pattern.
        status = match engine.direction {
            MonotoneDirection::Increasing => SolveStatus::DivergingUnbounded,
            MonotoneDirection::Decreasing => SolveStatus::PreconditionFailed,
        };
        note = Some(
            "re-embedded iterate does not satisfy the original equation; no solution with this zero pattern"
                .to_string(),
        );
    }

    let reduced = !engine.zero_set.is_empty();
    let reduction = ReductionInfo {
        k0: engine.k0,
        zero_set: engine.zero_set.clone(),
        zero_rhs_set: zero_rhs_set(b),
        reduced,
        reduced_tensor: reduced.then(|| engine.a.clone()),
        reduced_rhs: reduced.then(|| engine.b.clone()),
    };

    Ok(SolveReport {
        status,
        x: x_full,
        residual_inf: residual,
        iterations: engine.iterations,
        monotone: engine.direction,
        monotone_verified: engine.monotone_violations == 0,
        reduction,
        history: engine.history,
        note,
    })
}

/// Minimal nonnegative solution of `A x^{m-1} = b` for a Z-tensor `A` and
/// `b >= 0`, by the monotonically increasing iteration from `x_0 = 0`.
pub fn minimal_solve(
    a: &Tensor,
    b: &DVector<f64>,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    if let Some((entry, value)) = a.z_violation() {
        return Err(Error::NotZTensor { entry, value });
    }
    if let Some(i) = (0..b.len()).find(|&i| b[i] < 0.0) {
        return Err(Error::NegativeRhs {
            index: i,
            value: b[i],
        });
    }
    match &opts.x0 {
        StartPolicy::Auto | StartPolicy::Zero => {}
        _ => {
            return Err(Error::InvalidStart(
                "minimal mode forces the zero starting vector".to_string(),
            ))
        }
    }
    run_increasing(a, b, splitting, opts)
}

fn run_increasing(
    a: &Tensor,
    b: &DVector<f64>,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let n = a.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let b_scale = b.amax() + 1.0;

    if b.iter().all(|&v| v == 0.0) {
        // x = 0 is already the minimal solution.
        return Ok(SolveReport {
            status: SolveStatus::Converged,
            x: DVector::zeros(n),
            residual_inf: 0.0,
            iterations: 0,
            monotone: MonotoneDirection::Increasing,
            monotone_verified: true,
            reduction: ReductionInfo::empty(b),
            history: Vec::new(),
            note: Some("zero right side: the zero vector is the solution".to_string()),
        });
    }

    // Coordinates with a nonpositive diagonal cannot support a positive
    // component of the minimal solution; drop them up front. A positive
    // right side on such a coordinate makes the equation infeasible.
    let diag = a.diagonal();
    let blocked: Vec<usize> = (0..n).filter(|&i| diag[i] <= 0.0).collect();
    if let Some(&i) = blocked.iter().find(|&&i| b[i] > 0.0) {
        return Ok(SolveReport {
            status: SolveStatus::DivergingUnbounded,
            x: DVector::zeros(n),
            residual_inf: b.amax(),
            iterations: 0,
            monotone: MonotoneDirection::Increasing,
            monotone_verified: true,
            reduction: ReductionInfo::empty(b),
            history: Vec::new(),
            note: Some(format!(
                "row {} has a nonpositive diagonal and positive right side; no x >= 0 reaches it (the feasible set is empty)",
                i + 1
            )),
        });
    }

    let keep: Vec<usize> = (0..n).filter(|i| !blocked.contains(i)).collect();
    let (a_cur, b_cur) = if blocked.is_empty() {
        (a.clone(), b.clone())
    } else {
        (a.subtensor(&keep)?, select(b, &keep))
    };
    let plan = build_plan(&a_cur, splitting)?;

    let mut engine = Engine {
        x: DVector::zeros(a_cur.dim()),
        a: a_cur,
        b: b_cur,
        plan,
        keep,
        n_orig: n,
        b_scale,
        direction: MonotoneDirection::Increasing,
        zero_threshold: opts.zero_threshold.unwrap_or(0.0),
        tol: opts.tol,
        max_iter: opts.max_iter,
        divergence_bound: opts.divergence_bound,
        k0: None,
        pattern_stable: false,
        zero_set: blocked,
        history: Vec::new(),
        monotone_violations: 0,
        iterations: 0,
    };
    let outcome = engine.run()?;
    finish(engine, outcome, a, b, opts.tol)
}

/// Maximal nonnegative solution of `A x^{m-1} = b` for a nonsingular
/// M-tensor `A`, by the monotonically decreasing iteration from an upper
/// starting vector.
pub fn maximal_solve(
    a: &Tensor,
    b: &DVector<f64>,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let cert = classify(a, opts.classify_tol);
    if !cert.is_nonsingular_m() {
        return Err(Error::NotMTensor(cert.classification.to_string()));
    }
    if b.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.len(),
        });
    }

    let x0 = match &opts.x0 {
        StartPolicy::Auto | StartPolicy::AutoUpper => {
            make_upper_start(a, std::slice::from_ref(b), splitting, opts)?
        }
        StartPolicy::Explicit(x0) => {
            validate_upper_start(a, b, x0, opts.tol)?;
            x0.clone()
        }
        StartPolicy::Zero => {
            return Err(Error::InvalidStart(
                "maximal mode requires a positive starting vector with A x0^{m-1} > 0 and >= b"
                    .to_string(),
            ))
        }
    };

    let plan = build_plan(a, splitting)?;
    let threshold = opts.zero_threshold.unwrap_or(1e-13 * x0.amax());
    let mut engine = Engine {
        a: a.clone(),
        b: b.clone(),
        plan,
        x: x0,
        keep: (0..a.dim()).collect(),
        n_orig: a.dim(),
        b_scale: b.amax() + 1.0,
        direction: MonotoneDirection::Decreasing,
        zero_threshold: threshold,
        tol: opts.tol,
        max_iter: opts.max_iter,
        divergence_bound: opts.divergence_bound,
        k0: None,
        pattern_stable: false,
        zero_set: Vec::new(),
        history: Vec::new(),
        monotone_violations: 0,
        iterations: 0,
    };
    let outcome = engine.run()?;

    // Snap coordinates that plateaued below the pattern threshold.
    if !engine.zero_set.is_empty() {
        engine.x.apply(|v| {
            if *v <= threshold {
                *v = 0.0;
            }
        });
    }
    finish(engine, outcome, a, b, opts.tol)
}

fn validate_upper_start(a: &Tensor, b: &DVector<f64>, x0: &DVector<f64>, tol: f64) -> Result<()> {
    if x0.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: x0.len(),
        });
    }
    if let Some(i) = (0..x0.len()).find(|&i| x0[i] <= 0.0) {
        return Err(Error::InvalidStart(format!(
            "x0 must be positive; component {} is {}",
            i + 1,
            x0[i]
        )));
    }
    let ax0 = a.contract(x0)?;
    if let Some(i) = (0..ax0.len()).find(|&i| ax0[i] <= 0.0) {
        return Err(Error::InvalidStart(format!(
            "A x0^{{m-1}} must be positive; component {} is {}",
            i + 1,
            ax0[i]
        )));
    }
    let slack = 10.0 * tol * (b.amax() + 1.0);
    if let Some(i) = (0..ax0.len()).find(|&i| ax0[i] < b[i] - slack) {
        return Err(Error::InvalidStart(format!(
            "A x0^{{m-1}} must dominate b; component {} is {} < {}",
            i + 1,
            ax0[i],
            b[i]
        )));
    }
    Ok(())
}

/// Unique positive solution for a nonsingular M-tensor and `b > 0`, computed
/// with the increasing iteration from zero (it is the only nonnegative
/// solution in this case).
pub fn positive_solve(
    a: &Tensor,
    b: &DVector<f64>,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    let cert = classify(a, opts.classify_tol);
    if !cert.is_nonsingular_m() {
        return Err(Error::NotMTensor(cert.classification.to_string()));
    }
    if let Some(i) = (0..b.len()).find(|&i| b[i] <= 0.0) {
        return Err(Error::NonPositiveRhs {
            index: i,
            value: b[i],
        });
    }
    match &opts.x0 {
        StartPolicy::Auto | StartPolicy::Zero => {}
        _ => {
            return Err(Error::InvalidStart(
                "the positive solve starts from the zero vector".to_string(),
            ))
        }
    }
    run_increasing(a, b, splitting, opts)
}

/// Builds a starting vector for the decreasing iteration: the positive
/// solution of `A x^{m-1} = b_hat` with
/// `b_hat = max(b_1, .., b_p, delta * e)`, `delta = max(1, ||max_i b_i||_inf)`,
/// inflated by a sliver above the solve tolerance so `A x_0^{m-1} >= b_i`
/// survives the residual noise of the inner solve at coordinates where
/// `b_hat` touches `b_i`.
///
/// The result dominates the maximal solution of every `A x^{m-1} = b_i`.
pub fn make_upper_start(
    a: &Tensor,
    bs: &[DVector<f64>],
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<DVector<f64>> {
    if bs.is_empty() {
        return Err(Error::InvalidStart(
            "at least one right side is required".to_string(),
        ));
    }
    let n = a.dim();
    let mut bmax = DVector::from_element(n, f64::NEG_INFINITY);
    for b in bs {
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        bmax.zip_apply(b, |acc, v| *acc = acc.max(v));
    }
    let delta = bmax.amax().max(1.0);
    let b_hat = bmax.map(|v| v.max(delta));

    let mut inner_opts = opts.clone();
    inner_opts.x0 = StartPolicy::Zero;
    let report = positive_solve(a, &b_hat, splitting, &inner_opts)?;
    if report.status != SolveStatus::Converged {
        return Err(Error::StartConstruction(format!(
            "solve for the upper starting vector ended with status {}",
            report.status
        )));
    }
    Ok(report.x * (1.0 + 1e3 * opts.tol))
}

/// Scans an iterate log for the first repeated zero pattern and reduces the
/// system accordingly. Returns the reduction record together with the
/// reduced tensor and right side (unchanged clones when no reduction
/// applies).
pub fn detect_and_reduce(
    a: &Tensor,
    b: &DVector<f64>,
    iterates: &[DVector<f64>],
    zero_threshold: f64,
) -> Result<(ReductionInfo, Tensor, DVector<f64>)> {
    let mut info = ReductionInfo::empty(b);
    let mut found: Option<(usize, Vec<usize>)> = None;
    for k in 0..iterates.len().saturating_sub(1) {
        let p0 = pattern(&iterates[k], zero_threshold);
        let p1 = pattern(&iterates[k + 1], zero_threshold);
        if p0 == p1 {
            let zeros: Vec<usize> = (0..p0.len()).filter(|&i| p0[i]).collect();
            found = Some((k, zeros));
            break;
        }
    }
    match found {
        Some((k0, zeros)) if !zeros.is_empty() && zeros.len() < a.dim() => {
            let kept: Vec<usize> = (0..a.dim()).filter(|i| !zeros.contains(i)).collect();
            let reduced_a = a.subtensor(&kept)?;
            let reduced_b = select(b, &kept);
            info.k0 = Some(k0);
            info.zero_set = zeros;
            info.reduced = true;
            info.reduced_tensor = Some(reduced_a.clone());
            info.reduced_rhs = Some(reduced_b.clone());
            Ok((info, reduced_a, reduced_b))
        }
        Some((k0, _)) => {
            info.k0 = Some(k0);
            Ok((info, a.clone(), b.clone()))
        }
        None => Ok((info, a.clone(), b.clone())),
    }
}
