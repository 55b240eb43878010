//! Extremal nonnegative solutions of the tensor equation `A x^{m-1} = b`.
//!
//! For a Z-tensor (all off-diagonal entries nonpositive) or a nonsingular
//! M-tensor coefficient `A` and a nonnegative right side `b`, the equation
//! can have many nonnegative solutions. This crate computes the two that
//! bound all others:
//!
//! * the minimal nonnegative solution, reached from `x_0 = 0` by a
//!   monotonically increasing splitting iteration, and
//! * the maximal nonnegative solution, reached from a suitable positive
//!   starting vector by the same iteration running downward.
//!
//! Supporting machinery: sparse tensor kernels ([`tensor`]), spectral
//! classification of the coefficient ([`spectral`]), level-1/level-2
//! splittings ([`splitting`]), the solvers with zero-pattern reduction
//! ([`solver`]), convergence-rate certification ([`rate`]), ordering probes
//! ([`probes`]), and a brute-force enumeration oracle for desk-scale
//! verification ([`oracle`]).

pub mod error;
pub mod oracle;
pub mod probes;
pub mod rate;
pub mod solver;
pub mod spectral;
pub mod splitting;
pub mod tensor;

pub use error::{Error, Result};
pub use oracle::{enumerate_solutions, fd_jacobian, tcp_residual, verify_solution, SolutionSet};
pub use probes::{
    compare_splittings, continuity_probe, monotone_dependence_probe, ComparisonReport,
    ContinuityReport, DependenceReport, ExtremalMode, Perturbation,
};
pub use rate::{estimate_rate, measured_factor, ConditionFlags, ConditionStatus, RateReport};
pub use solver::{
    detect_and_reduce, make_upper_start, maximal_solve, minimal_solve, positive_solve, step,
    MonotoneDirection, ReductionInfo, SolveReport, SolveStatus, SolverOptions, StartPolicy,
    TraceEntry,
};
pub use spectral::{
    classify, is_nonsingular_m_matrix, matrix_spectral_radius, nonneg_spectral_radius,
    Classification, MTensorCertificate,
};
pub use splitting::{build_plan, majorization_matrix, Splitting, SplittingPlan};
pub use tensor::{power_vec, Tensor};
