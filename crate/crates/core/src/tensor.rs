//! Sparse order-`m` tensor storage and the multilinear kernels used by the
//! solvers.
//!
//! A tensor of order `m` and dimension `n` is stored in coordinate form: a
//! lexicographically sorted list of index tuples (0-based internally) with
//! their nonzero values. The two contraction kernels are
//!
//! * `contract`: `A x^{m-1}`, the vector with entries
//!   `sum a_{i i2..im} x_{i2} .. x_{im}`, and
//! * `contract_matrix`: `A x^{m-2}`, the `n x n` matrix with entries
//!   `sum a_{i j i3..im} x_{i3} .. x_{im}`.
//!
//! Summation runs in sorted entry order, so results are reproducible across
//! runs. Tensors are immutable after construction and safe to share across
//! threads.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Sparse real tensor of order `m >= 2` and dimension `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    /// Flat index storage: entry `k` occupies `indices[k*order..(k+1)*order]`.
    indices: Vec<usize>,
    values: Vec<f64>,
    semi_symmetric: bool,
}

impl Tensor {
    /// Builds a tensor from `(index tuple, value)` pairs with 0-based indices.
    ///
    /// Duplicate tuples are coalesced by summation, entries that cancel to
    /// zero are dropped, and the result is sorted lexicographically.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        if order < 2 {
            return Err(Error::OrderTooSmall(order));
        }
        if dim < 1 {
            return Err(Error::DimTooSmall(dim));
        }
        let mut list: Vec<(Vec<usize>, f64)> = Vec::new();
        for (k, (tuple, value)) in entries.into_iter().enumerate() {
            if tuple.len() != order {
                return Err(Error::TupleLengthMismatch {
                    expected: order,
                    got: tuple.len(),
                });
            }
            for (pos, &i) in tuple.iter().enumerate() {
                if i >= dim {
                    return Err(Error::IndexOutOfRange {
                        index: i,
                        dim,
                        position: pos,
                    });
                }
            }
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { value, entry: k });
            }
            list.push((tuple, value));
        }
        list.sort_by(|a, b| a.0.cmp(&b.0));

        let mut indices = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        let mut pending: Option<(Vec<usize>, f64)> = None;
        let flush = |slot: Option<(Vec<usize>, f64)>, indices: &mut Vec<usize>, values: &mut Vec<f64>| {
            if let Some((tuple, value)) = slot {
                if value != 0.0 {
                    indices.extend_from_slice(&tuple);
                    values.push(value);
                }
            }
        };
        for (tuple, value) in list {
            match &mut pending {
                Some((t, v)) if *t == tuple => *v += value,
                _ => {
                    flush(pending.take(), &mut indices, &mut values);
                    pending = Some((tuple, value));
                }
            }
        }
        flush(pending, &mut indices, &mut values);

        Ok(Tensor {
            order,
            dim,
            indices,
            values,
            semi_symmetric: false,
        })
    }

    /// Identity tensor: ones on the diagonal tuples `(i, i, .., i)`.
    pub fn identity(order: usize, dim: usize) -> Self {
        let entries = (0..dim).map(|i| (vec![i; order], 1.0));
        let mut t = Self::from_entries(order, dim, entries).expect("identity construction");
        t.semi_symmetric = true;
        t
    }

    /// Tensor with no stored entries.
    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        let mut t = Self::from_entries(order, dim, std::iter::empty())?;
        t.semi_symmetric = true;
        Ok(t)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Whether the semi-symmetry flag is set (see [`Tensor::semi_symmetrize`]).
    pub fn is_semi_symmetric_flagged(&self) -> bool {
        self.semi_symmetric
    }

    /// Iterates over stored entries as `(index tuple, value)` in sorted order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.indices
            .chunks_exact(self.order)
            .zip(self.values.iter().copied())
    }

    /// Stored value at an index tuple; 0 when absent.
    pub fn get(&self, tuple: &[usize]) -> f64 {
        assert_eq!(tuple.len(), self.order, "tuple length must equal order");
        let m = self.order;
        let mut lo = 0usize;
        let mut hi = self.values.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.indices[mid * m..(mid + 1) * m].cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return self.values[mid],
            }
        }
        0.0
    }

    /// The diagonal `(a_{ii..i})_i` as a dense vector.
    pub fn diagonal(&self) -> DVector<f64> {
        let mut d = DVector::zeros(self.dim);
        for (tuple, value) in self.entries() {
            let i = tuple[0];
            if tuple.iter().all(|&j| j == i) {
                d[i] = value;
            }
        }
        d
    }

    /// Largest stored value (0 for an empty tensor).
    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// True iff every stored entry is nonnegative.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// True iff every off-diagonal entry (non-constant index tuple) is <= 0.
    pub fn is_z_tensor(&self) -> bool {
        self.entries().all(|(tuple, value)| {
            let i = tuple[0];
            tuple.iter().all(|&j| j == i) || value <= 0.0
        })
    }

    /// Returns the first stored positive off-diagonal entry, if any.
    pub fn z_violation(&self) -> Option<(usize, f64)> {
        for (k, (tuple, value)) in self.entries().enumerate() {
            let i = tuple[0];
            if !tuple.iter().all(|&j| j == i) && value > 0.0 {
                return Some((k, value));
            }
        }
        None
    }

    /// The contraction `A x^{m-1}`.
    pub fn contract(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut out = DVector::zeros(self.dim);
        for (tuple, value) in self.entries() {
            let mut term = value;
            for &j in &tuple[1..] {
                term *= x[j];
            }
            out[tuple[0]] += term;
        }
        Ok(out)
    }

    /// The matrix contraction `A x^{m-2}` with entries
    /// `sum_{i3..im} a_{i j i3..im} x_{i3} .. x_{im}`.
    ///
    /// For `m = 2` this is the tensor itself viewed as a matrix.
    pub fn contract_matrix(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (tuple, value) in self.entries() {
            let mut term = value;
            for &j in &tuple[2..] {
                term *= x[j];
            }
            out[(tuple[0], tuple[1])] += term;
        }
        Ok(out)
    }

    /// Averages the tensor over all permutations of index positions `2..m`,
    /// producing a semi-symmetric tensor with the same `contract` action.
    pub fn semi_symmetrize(&self) -> Tensor {
        if self.semi_symmetric {
            return self.clone();
        }
        let m = self.order;
        let factorial: f64 = (1..m).map(|k| k as f64).product();
        let mut entries: Vec<(Vec<usize>, f64)> = Vec::new();
        for (tuple, value) in self.entries() {
            // Each distinct rearrangement of the trailing multiset receives
            // value * (product of multiplicities)! / (m-1)!.
            let mut trailing: Vec<usize> = tuple[1..].to_vec();
            trailing.sort_unstable();
            let mut stabilizer = 1.0;
            let mut run = 1usize;
            for w in 1..trailing.len() {
                if trailing[w] == trailing[w - 1] {
                    run += 1;
                    stabilizer *= run as f64;
                } else {
                    run = 1;
                }
            }
            let share = value * stabilizer / factorial;
            loop {
                let mut full = Vec::with_capacity(m);
                full.push(tuple[0]);
                full.extend_from_slice(&trailing);
                entries.push((full, share));
                if !next_permutation(&mut trailing) {
                    break;
                }
            }
        }
        let mut t = Tensor::from_entries(m, self.dim, entries).expect("valid rearranged entries");
        t.semi_symmetric = true;
        t
    }

    /// Scans all stored tuples' trailing permutations and checks the values
    /// are invariant; certifies the `semi_symmetric` flag.
    pub fn verify_semi_symmetric(&self, tol: f64) -> bool {
        for (tuple, value) in self.entries() {
            let mut trailing: Vec<usize> = tuple[1..].to_vec();
            trailing.sort_unstable();
            loop {
                let mut full = Vec::with_capacity(self.order);
                full.push(tuple[0]);
                full.extend_from_slice(&trailing);
                let other = self.get(&full);
                if (other - value).abs() > tol * value.abs().max(1.0) {
                    return false;
                }
                if !next_permutation(&mut trailing) {
                    break;
                }
            }
        }
        true
    }

    /// Restriction to the index set `keep` (0-based, nonempty, deduplicated),
    /// reindexed to `[0, keep.len())` in the order of the sorted set.
    pub fn subtensor(&self, keep: &[usize]) -> Result<Tensor> {
        if keep.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&i| i >= self.dim) {
            return Err(Error::IndexSetOutOfRange {
                index: bad,
                dim: self.dim,
            });
        }
        let mut remap = vec![usize::MAX; self.dim];
        for (new, &old) in sorted.iter().enumerate() {
            remap[old] = new;
        }
        let mut entries = Vec::new();
        'outer: for (tuple, value) in self.entries() {
            let mut mapped = Vec::with_capacity(self.order);
            for &i in tuple {
                if remap[i] == usize::MAX {
                    continue 'outer;
                }
                mapped.push(remap[i]);
            }
            entries.push((mapped, value));
        }
        let mut t = Tensor::from_entries(self.order, sorted.len(), entries)?;
        t.semi_symmetric = self.semi_symmetric;
        Ok(t)
    }

    /// Entry list with 0-based tuples, for serialization.
    pub fn entry_list(&self) -> Vec<(Vec<usize>, f64)> {
        self.entries().map(|(t, v)| (t.to_vec(), v)).collect()
    }
}

/// Elementwise power `x^{[r]}` with `r > 0`; errors on a negative element
/// when `r` is not an integer.
pub fn power_vec(x: &DVector<f64>, r: f64) -> Result<DVector<f64>> {
    if r <= 0.0 || r.is_nan() {
        return Err(Error::NonPositiveExponent(r));
    }
    let integral = r.fract() == 0.0;
    let mut out = DVector::zeros(x.len());
    for (i, &v) in x.iter().enumerate() {
        if v < 0.0 && !integral {
            return Err(Error::NegativePower {
                exponent: r,
                value: v,
                position: i,
            });
        }
        out[i] = if integral { v.powi(r as i32) } else { v.powf(r) };
    }
    Ok(out)
}

/// Advances `a` to its next lexicographic permutation; false when `a` was the
/// last one. Standard next-permutation, duplicates visited once.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
