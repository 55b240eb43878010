#![allow(dead_code)]

//! Shared fixtures and helpers for the CLI test suites.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mtensor::Tensor;
use nalgebra::DVector;
use rand::Rng;

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mtensor")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap()
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

/// Serializes a tensor in the text format (1-based indices).
pub fn tensor_file(t: &Tensor) -> String {
    let mut out = format!("tns {} {} {}\n", t.order(), t.dim(), t.nnz());
    for (tuple, value) in t.entries() {
        for &i in tuple {
            out.push_str(&format!("{} ", i + 1));
        }
        out.push_str(&format!("{value:.17e}\n"));
    }
    out
}

pub fn vector_file(v: &DVector<f64>) -> String {
    let mut out = format!("vec {}\n", v.len());
    for x in v.iter() {
        out.push_str(&format!("{x:.17e}\n"));
    }
    out
}

/// Order-4 coupled-pair family on dimension 2k.
pub fn coupled_pair_tensor(k: usize) -> Tensor {
    let n = 2 * k;
    let mut entries: Vec<(Vec<usize>, f64)> = (0..n).map(|i| (vec![i; 4], 1.0)).collect();
    for i in 0..k {
        entries.push((vec![2 * i, 2 * i, 2 * i, 2 * i + 1], -2.0));
    }
    Tensor::from_entries(4, n, entries).unwrap()
}

/// Two-coordinate variant of arbitrary order with one coupling entry.
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

/// Z-tensor with a zero diagonal entry; its equation with rhs `[0,0,1]` has
/// a minimal solution but no maximal one.
pub fn zero_diag_chain_tensor() -> Tensor {
    Tensor::from_entries(
        4,
        3,
        vec![
            (vec![1, 1, 1, 1], 1.0),
            (vec![2, 2, 2, 2], 1.0),
            (vec![0, 0, 0, 1], -1.0),
            (vec![2, 0, 0, 0], -1.0),
        ],
    )
    .unwrap()
}

pub fn alternating_rhs(k: usize) -> DVector<f64> {
    DVector::from_iterator(2 * k, (0..2 * k).map(|i| if i % 2 == 0 { 0.0 } else { 1.0 }))
}

#[allow(clippy::needless_range_loop)]
/// Random nonsingular M-tensor by diagonally dominant construction.
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

pub fn random_positive_rhs<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.random_range(0.5..2.0)))
}
