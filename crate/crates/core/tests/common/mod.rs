#![allow(dead_code)]

//! Shared builders for integration tests.

use mtensor::Tensor;
use nalgebra::DVector;
use rand::Rng;

/// Order-4 coupled-pair family on dimension 2k: unit diagonal plus a
/// coupling entry of -2 in each odd row.
pub fn coupled_pair_tensor(k: usize) -> Tensor {
    let n = 2 * k;
    let mut entries: Vec<(Vec<usize>, f64)> = (0..n).map(|i| (vec![i; 4], 1.0)).collect();
    for i in 0..k {
        entries.push((vec![2 * i, 2 * i, 2 * i, 2 * i + 1], -2.0));
    }
    Tensor::from_entries(4, n, entries).unwrap()
}

/// The two-coordinate variant of arbitrary order with one coupling entry.
pub fn order_m_pair_tensor(m: usize) -> Tensor {
    let mut coupling = vec![0usize; m];
    coupling[m - 1] = 1;
    Tensor::from_entries(
        m,
        2,
        vec![(vec![0; m], 1.0), (vec![1; m], 1.0), (coupling, -2.0)],
    )
    .unwrap()
}

/// Right side alternating 0, 1, .., 0, 1.
pub fn alternating_rhs(k: usize) -> DVector<f64> {
    DVector::from_iterator(2 * k, (0..2 * k).map(|i| if i % 2 == 0 { 0.0 } else { 1.0 }))
}

#[allow(clippy::needless_range_loop)]
/// Random nonsingular M-tensor by diagonally dominant construction: random
/// nonpositive off-diagonal entries, each diagonal entry exceeding its row's
/// absolute off-diagonal mass by a positive margin (so `A e^{m-1} > 0`).
pub fn random_m_tensor<R: Rng>(rng: &mut R, m: usize, n: usize) -> Tensor {
    let mut entries: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut row_mass = vec![0.0f64; n];
    for i in 0..n {
        let count = rng.random_range(1..=3);
        for _ in 0..count {
            let mut tuple = vec![i];
            for _ in 1..m {
                tuple.push(rng.random_range(0..n));
            }
            if tuple[1..].iter().all(|&j| j == i) {
                if n == 1 {
                    continue;
                }
                tuple[1] = (i + 1) % n;
            }
            let v: f64 = -rng.random_range(0.05..1.0);
            row_mass[i] += v.abs();
            entries.push((tuple, v));
        }
        // Unmixed off-diagonal terms keep the majorization matrix
        // non-diagonal, so level-2 splittings differ.
        if n > 1 && rng.random_bool(0.7) {
            let j = loop {
                let j = rng.random_range(0..n);
                if j != i {
                    break j;
                }
            };
            let mut tuple = vec![j; m];
            tuple[0] = i;
            let v: f64 = -rng.random_range(0.05..0.5);
            row_mass[i] += v.abs();
            entries.push((tuple, v));
        }
    }
    for i in 0..n {
        let margin = rng.random_range(0.2..1.0);
        entries.push((vec![i; m], row_mass[i] + margin));
    }
    Tensor::from_entries(m, n, entries).unwrap()
}

/// Random strictly positive right side.
pub fn random_positive_rhs<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.random_range(0.5..2.0)))
}
