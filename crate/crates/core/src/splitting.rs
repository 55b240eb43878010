//! Level-1 tensor decomposition and level-2 matrix splittings.
//!
//! The unmixed terms of `A` (entries with index pattern `(i, j, j, .., j)`)
//! form the majorization matrix `M` with `M_{ij} = a_{ij..j}`; the remaining
//! mixed terms, negated, form the nonnegative tensor `N`, so that
//! `A x^{m-1} = M x^{[m-1]} - N x^{m-1}`. A splitting `M = P - Q` with `P` a
//! nonsingular M-matrix and `Q >= 0` then turns the equation into the
//! fixed-point form
//!
//! ```text
//! P x_{k+1}^{[m-1]} = Q x_k^{[m-1]} + N x_k^{m-1} + b = L x_k^{m-1} + b
//! ```
//!
//! where `L` is the nonnegative tensor acting as `Q x^{[m-1]} + N x^{m-1}`.
//! A [`SplittingPlan`] packages `M, P, Q, N, L` together with a solve
//! strategy for `P` (elementwise, triangular substitution, or a cached LU
//! factorization). Plans are immutable after construction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::spectral::{is_nonsingular_m_matrix, DEFAULT_CLASSIFY_TOL};
use crate::tensor::{power_vec, Tensor};

/// Requested level-2 splitting of the majorization matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Splitting {
    /// `P = diag(M)`.
    Jacobi,
    /// `P` = lower triangle of `M` including the diagonal.
    LowerTriangular,
    /// `P` = upper triangle of `M` including the diagonal.
    UpperTriangular,
    /// `P = M`, `Q = 0`.
    Full,
    /// User-supplied `P`; validated, never repaired.
    Custom(DMatrix<f64>),
}

impl Splitting {
    /// Cost-guided default: direct solves with the whole majorization matrix
    /// for order >= 4 (and the linear case), triangular sweeps for order 3.
    pub fn default_for_order(order: usize) -> Self {
        if order == 3 {
            Splitting::LowerTriangular
        } else {
            Splitting::Full
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Splitting::Jacobi => "jacobi",
            Splitting::LowerTriangular => "lower",
            Splitting::UpperTriangular => "upper",
            Splitting::Full => "full",
            Splitting::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone)]
enum PSolver {
    Diagonal(DVector<f64>),
    Lower,
    Upper,
    Factored(Box<nalgebra::linalg::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>),
}

/// Immutable splitting data for one tensor equation.
#[derive(Debug, Clone)]
pub struct SplittingPlan {
    order: usize,
    dim: usize,
    majorization: DMatrix<f64>,
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    n_part: Tensor,
    l_part: Tensor,
    solver: PSolver,
    kind: Splitting,
}

/// The majorization matrix `M_{ij} = a_{ij..j}` (zero where absent).
pub fn majorization_matrix(a: &Tensor) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(a.dim(), a.dim());
    for (tuple, value) in a.entries() {
        let j = tuple[1];
        if tuple[1..].iter().all(|&t| t == j) {
            m[(tuple[0], j)] = value;
        }
    }
    m
}

/// Builds and validates a [`SplittingPlan`] for `A` with the requested kind.
pub fn build_plan(a: &Tensor, splitting: &Splitting) -> Result<SplittingPlan> {
    let n = a.dim();
    let m = majorization_matrix(a);
    let p = match splitting {
        Splitting::Jacobi => DMatrix::from_diagonal(&m.diagonal()),
        Splitting::LowerTriangular => m.lower_triangle(),
        Splitting::UpperTriangular => m.upper_triangle(),
        Splitting::Full => m.clone(),
        Splitting::Custom(p) => {
            if p.nrows() != n || p.ncols() != n {
                return Err(Error::NotSquare {
                    rows: p.nrows(),
                    cols: p.ncols(),
                });
            }
            p.clone()
        }
    };

    let blocked: Vec<usize> = (0..n).filter(|&i| p[(i, i)] <= 0.0).map(|i| i + 1).collect();
    if !blocked.is_empty() {
        return Err(Error::NonPositiveDiagonal(blocked));
    }

    let q = &p - &m;
    for i in 0..n {
        for j in 0..n {
            if q[(i, j)] < 0.0 {
                return Err(Error::InvalidSplitting(format!(
                    "Q has negative entry {} at ({}, {})",
                    q[(i, j)],
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    if !is_nonsingular_m_matrix(&p, DEFAULT_CLASSIFY_TOL)? {
        return Err(Error::InvalidSplitting(
            "P is not a nonsingular M-matrix".to_string(),
        ));
    }

    let mut n_entries = Vec::new();
    for (tuple, value) in a.entries() {
        let j = tuple[1];
        if !tuple[1..].iter().all(|&t| t == j) {
            if value > 0.0 {
                return Err(Error::InvalidSplitting(format!(
                    "mixed term at {:?} is positive; N would not be nonnegative",
                    tuple
                )));
            }
            n_entries.push((tuple.to_vec(), -value));
        }
    }
    let n_part = Tensor::from_entries(a.order(), n, n_entries)?;

    from_parts(a.order(), m, p, q, n_part, splitting.clone())
}

fn from_parts(
    order: usize,
    majorization: DMatrix<f64>,
    p: DMatrix<f64>,
    q: DMatrix<f64>,
    n_part: Tensor,
    kind: Splitting,
) -> Result<SplittingPlan> {
    let n = p.nrows();
    let mut l_entries = n_part.entry_list();
    for i in 0..n {
        for j in 0..n {
            if q[(i, j)] != 0.0 {
                let mut tuple = vec![j; order];
                tuple[0] = i;
                l_entries.push((tuple, q[(i, j)]));
            }
        }
    }
    let l_part = Tensor::from_entries(order, n, l_entries)?;

    let is_lower_tri =
        |m: &DMatrix<f64>| (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)] == 0.0));
    let is_upper_tri = |m: &DMatrix<f64>| (0..n).all(|i| (0..i).all(|j| m[(i, j)] == 0.0));

    // Pick the cheapest exact solver the structure of P admits; elementwise
    // division keeps zero propagation exact, which the reduction logic uses.
    let solver = if is_lower_tri(&p) && is_upper_tri(&p) {
        PSolver::Diagonal(p.diagonal())
    } else if is_lower_tri(&p) {
        PSolver::Lower
    } else if is_upper_tri(&p) {
        PSolver::Upper
    } else {
        PSolver::Factored(Box::new(nalgebra::linalg::LU::new(p.clone())))
    };

    Ok(SplittingPlan {
        order,
        dim: n,
        majorization,
        p,
        q,
        n_part,
        l_part,
        solver,
        kind,
    })
}

impl SplittingPlan {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn majorization(&self) -> &DMatrix<f64> {
        &self.majorization
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn n_part(&self) -> &Tensor {
        &self.n_part
    }

    pub fn l_part(&self) -> &Tensor {
        &self.l_part
    }

    pub fn kind(&self) -> &Splitting {
        &self.kind
    }

    /// Solves `P y = rhs`.
    pub fn p_solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        if rhs.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.len(),
            });
        }
        match &self.solver {
            PSolver::Diagonal(d) => Ok(rhs.component_div(d)),
            PSolver::Lower => self.p.solve_lower_triangular(rhs).ok_or(Error::SingularP),
            PSolver::Upper => self.p.solve_upper_triangular(rhs).ok_or(Error::SingularP),
            PSolver::Factored(lu) => lu.solve(rhs).ok_or(Error::SingularP),
        }
    }

    /// The right-side operator `L x^{m-1} = Q x^{[m-1]} + N x^{m-1}`.
    pub fn l_apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let xm = power_vec(x, (self.order - 1) as f64)?;
        Ok(&self.q * xm + self.n_part.contract(x)?)
    }

    /// Restriction of the plan to the index set `keep`, inheriting the
    /// level-1 and level-2 splittings of the subtensor.
    pub fn restricted(&self, keep: &[usize]) -> Result<SplittingPlan> {
        if keep.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let pick = |m: &DMatrix<f64>| {
            DMatrix::from_fn(sorted.len(), sorted.len(), |i, j| m[(sorted[i], sorted[j])])
        };
        from_parts(
            self.order,
            pick(&self.majorization),
            pick(&self.p),
            pick(&self.q),
            self.n_part.subtensor(&sorted)?,
            self.kind.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coupled_pair_tensor(k: usize) -> Tensor {
        let n = 2 * k;
        let mut entries: Vec<(Vec<usize>, f64)> = (0..n).map(|i| (vec![i; 4], 1.0)).collect();
        for i in 0..k {
            entries.push((vec![2 * i, 2 * i, 2 * i, 2 * i + 1], -2.0));
        }
        Tensor::from_entries(4, n, entries).unwrap()
    }

    fn v(s: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(s)
    }

    #[test]
    fn majorization_excludes_mixed_terms() {
        let a = coupled_pair_tensor(1);
        assert_eq!(majorization_matrix(&a), DMatrix::identity(2, 2));
        assert_eq!(
            majorization_matrix(&Tensor::identity(5, 3)),
            DMatrix::identity(3, 3)
        );
    }

    #[test]
    fn majorization_of_matrix_tensor_is_the_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[3.0, -1.0, -2.0, 5.0]);
        let a = Tensor::from_entries(
            2,
            2,
            vec![
                (vec![0, 0], 3.0),
                (vec![0, 1], -1.0),
                (vec![1, 0], -2.0),
                (vec![1, 1], 5.0),
            ],
        )
        .unwrap();
        assert_eq!(majorization_matrix(&a), m);
    }

    #[test]
    fn jacobi_plan_on_coupled_pair() {
        let a = coupled_pair_tensor(1);
        let plan = build_plan(&a, &Splitting::Jacobi).unwrap();
        assert_eq!(plan.p(), &DMatrix::identity(2, 2));
        assert_eq!(plan.q(), &DMatrix::zeros(2, 2));
        assert_eq!(plan.n_part().nnz(), 1);
        assert_eq!(plan.n_part().get(&[0, 0, 0, 1]), 2.0);
        // M is diagonal here, so the full plan coincides with Jacobi.
        let full = build_plan(&a, &Splitting::Full).unwrap();
        assert_eq!(full.p(), plan.p());
        assert_eq!(full.q(), plan.q());
    }

    #[test]
    fn custom_splitting_of_z_matrix_is_permitted() {
        let a = Tensor::from_entries(
            2,
            3,
            vec![
                (vec![0, 0], -1.0),
                (vec![1, 0], -3.0),
                (vec![1, 1], 2.0),
                (vec![1, 2], -2.0),
                (vec![2, 1], -3.0),
                (vec![2, 2], 4.0),
            ],
        )
        .unwrap();
        let p = DMatrix::from_row_slice(3, 3, &[2.0, 0.0, 0.0, -1.0, 3.0, -1.0, 0.0, -2.0, 5.0]);
        let plan = build_plan(&a, &Splitting::Custom(p)).unwrap();
        let expected_q =
            DMatrix::from_row_slice(3, 3, &[3.0, 0.0, 0.0, 2.0, 1.0, 1.0, 0.0, 1.0, 1.0]);
        assert_eq!(plan.q(), &expected_q);
        assert!(plan.q().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn plan_rejects_nonpositive_diagonal() {
        let a = Tensor::from_entries(
            4,
            3,
            vec![
                (vec![1, 1, 1, 1], 1.0),
                (vec![2, 2, 2, 2], 1.0),
                (vec![0, 0, 0, 1], -1.0),
                (vec![2, 0, 0, 0], -1.0),
            ],
        )
        .unwrap();
        match build_plan(&a, &Splitting::Jacobi) {
            Err(Error::NonPositiveDiagonal(blocked)) => assert_eq!(blocked, vec![1]),
            other => panic!("expected NonPositiveDiagonal, got {other:?}"),
        }
    }

    #[test]
    fn p_solve_triangular_and_identity() {
        let a = Tensor::from_entries(
            2,
            2,
            vec![(vec![0, 0], 2.0), (vec![1, 0], -1.0), (vec![1, 1], 3.0)],
        )
        .unwrap();
        let plan = build_plan(&a, &Splitting::Full).unwrap();
        let y = plan.p_solve(&v(&[2.0, 2.0])).unwrap();
        assert!((y - v(&[1.0, 1.0])).amax() < 1e-14);

        let id_plan = build_plan(&Tensor::identity(3, 2), &Splitting::Jacobi).unwrap();
        let rhs = v(&[0.3, -0.7]);
        assert_eq!(id_plan.p_solve(&rhs).unwrap(), rhs);
    }

    #[test]
    fn p_solve_forward_substitution_on_example_matrix() {
        let a = Tensor::from_entries(
            2,
            3,
            vec![
                (vec![0, 0], 2.0),
                (vec![1, 0], -1.0),
                (vec![1, 1], 3.0),
                (vec![1, 2], -1.0),
                (vec![2, 1], -2.0),
                (vec![2, 2], 5.0),
            ],
        )
        .unwrap();
        let plan = build_plan(&a, &Splitting::Full).unwrap();
        let rhs = plan.p() * v(&[1.0, 1.0, 1.0]);
        assert_eq!(rhs, v(&[2.0, 1.0, 3.0]));
        let y = plan.p_solve(&rhs).unwrap();
        assert!((y - v(&[1.0, 1.0, 1.0])).amax() < 1e-14);
    }

    #[test]
    fn l_apply_collects_mixed_terms() {
        let a = coupled_pair_tensor(1);
        let plan = build_plan(&a, &Splitting::Jacobi).unwrap();
        let y = plan.l_apply(&v(&[2.0, 1.0])).unwrap();
        assert_eq!(y, v(&[8.0, 0.0]));
        assert_eq!(plan.l_apply(&v(&[0.0, 0.0])).unwrap(), v(&[0.0, 0.0]));
    }

    #[test]
    fn splitting_consistency_against_contract() {
        let a = coupled_pair_tensor(2);
        for kind in [Splitting::Jacobi, Splitting::Full] {
            let plan = build_plan(&a, &kind).unwrap();
            let x = v(&[0.4, 1.7, 2.3, 0.9]);
            let xm = power_vec(&x, 3.0).unwrap();
            let lhs = plan.p() * xm - plan.l_apply(&x).unwrap();
            let rhs = a.contract(&x).unwrap();
            assert!((lhs - rhs).amax() < 1e-12);
        }
    }

    #[test]
    fn l_part_tensor_matches_operator_action() {
        let a = Tensor::from_entries(
            3,
            3,
            vec![
                (vec![0, 0, 0], 4.0),
                (vec![0, 1, 1], -1.0),
                (vec![1, 1, 1], 3.0),
                (vec![1, 0, 2], -0.5),
                (vec![2, 2, 2], 5.0),
                (vec![2, 1, 1], -2.0),
            ],
        )
        .unwrap();
        let plan = build_plan(&a, &Splitting::LowerTriangular).unwrap();
        let x = v(&[1.2, 0.7, 1.9]);
        let via_tensor = plan.l_part().contract(&x).unwrap();
        let via_operator = plan.l_apply(&x).unwrap();
        assert!((via_tensor - via_operator).amax() < 1e-13);
        assert!(plan.l_part().is_nonnegative());
        // N carries no unmixed pattern (i, j, .., j).
        for (tuple, _) in plan.n_part().entries() {
            let j = tuple[1];
            assert!(!tuple[1..].iter().all(|&t| t == j));
        }
    }

    #[test]
    fn restriction_inherits_the_splitting() {
        let a = coupled_pair_tensor(2);
        let plan = build_plan(&a, &Splitting::Jacobi).unwrap();
        let sub = plan.restricted(&[1, 2, 3]).unwrap();
        assert_eq!(sub.dim(), 3);
        assert_eq!(sub.p(), &DMatrix::identity(3, 3));
        // Mixed entry (2,2,2,3) of the original survives as (1,1,1,2).
        assert_eq!(sub.n_part().get(&[1, 1, 1, 2]), 2.0);
    }
}
