//! Acceptance suite: every release gate runs here at its stated tolerance
//! and prints one PASS line (run with `--nocapture` to see them).

mod common;

use std::time::Instant;

use common::*;
use mtensor::{
    build_plan, compare_splittings, continuity_probe, estimate_rate, fd_jacobian, maximal_solve,
    measured_factor, minimal_solve, positive_solve, ExtremalMode, SolveStatus, SolverOptions,
    Splitting, StartPolicy,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(n: usize, name: &str) {
    println!("ACCEPTANCE {n:02} {name}: PASS");
}

fn expected_min(k: usize) -> Vec<f64> {
    (0..2 * k).map(|i| if i % 2 == 0 { 0.0 } else { 1.0 }).collect()
}

fn expected_max(k: usize) -> Vec<f64> {
    (0..2 * k).map(|i| if i % 2 == 0 { 2.0 } else { 1.0 }).collect()
}

fn json_x(json: &serde_json::Value) -> Vec<f64> {
    json["x"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect()
}

/// Criterion 1: extremal solutions of the coupled-pair family, k = 1..5,
/// through the CLI at residual <= 2e-12, elementwise error <= 1e-10,
/// under a second per instance.
#[test]
fn acceptance_01_extremal_solutions_of_pair_family() {
    let dir = tempfile::tempdir().unwrap();
    for k in 1..=5usize {
        let a = coupled_pair_tensor(k);
        let tns = write_file(dir.path(), &format!("pair{k}.tns"), &tensor_file(&a));
        let rhs = write_file(
            dir.path(),
            &format!("b{k}.vec"),
            &vector_file(&alternating_rhs(k)),
        );
        for (mode, expected) in [("min", expected_min(k)), ("max", expected_max(k))] {
            let start = Instant::now();
            let out = run(&[
                "solve",
                tns.to_str().unwrap(),
                rhs.to_str().unwrap(),
                "--mode",
                mode,
                "--json",
            ]);
            let elapsed = start.elapsed();
            assert!(
                elapsed.as_secs_f64() < 1.0,
                "k={k} {mode}: took {elapsed:?}"
            );
            assert_eq!(out.status.code(), Some(0), "k={k} {mode}");
            let json = stdout_json(&out);
            assert_eq!(json["status"], "converged");
            assert!(json["residual_inf"].as_f64().unwrap() <= 2e-12, "k={k} {mode}");
            assert_eq!(json["monotone_verified"], true, "k={k} {mode}");
            let x = json_x(&json);
            for i in 0..2 * k {
                assert!(
                    (x[i] - expected[i]).abs() <= 1e-10,
                    "k={k} {mode} coordinate {i}: {} vs {}",
                    x[i],
                    expected[i]
                );
            }
        }
    }
    pass(1, "extremal solutions of the coupled-pair family");
}

/// Criterion 2: enumeration finds exactly 2^k solutions and its extremal
/// members match the solver's within 1e-8.
#[test]
fn acceptance_02_enumeration_counts_and_extremals() {
    let dir = tempfile::tempdir().unwrap();
    for k in 1..=5usize {
        let a = coupled_pair_tensor(k);
        let tns = write_file(dir.path(), &format!("pair{k}.tns"), &tensor_file(&a));
        let rhs = write_file(
            dir.path(),
            &format!("b{k}.vec"),
            &vector_file(&alternating_rhs(k)),
        );
        let out = run(&["enumerate", tns.to_str().unwrap(), rhs.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "k={k}");
        let json = stdout_json(&out);
        assert_eq!(json["count"].as_u64().unwrap(), 1u64 << k, "k={k}");

        let solutions: Vec<Vec<f64>> = json["solutions"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect())
            .collect();
        let n = 2 * k;
        let mut set_min = vec![f64::INFINITY; n];
        let mut set_max = vec![f64::NEG_INFINITY; n];
        for s in &solutions {
            for i in 0..n {
                set_min[i] = set_min[i].min(s[i]);
                set_max[i] = set_max[i].max(s[i]);
            }
        }
        for (mode, bound) in [("min", &set_min), ("max", &set_max)] {
            let out = run(&[
                "solve",
                tns.to_str().unwrap(),
                rhs.to_str().unwrap(),
                "--mode",
                mode,
                "--json",
            ]);
            let x = json_x(&stdout_json(&out));
            for i in 0..n {
                assert!(
                    (x[i] - bound[i]).abs() <= 1e-8,
                    "k={k} {mode} coordinate {i}"
                );
            }
        }
    }
    pass(2, "enumeration counts and extremal agreement");
}

/// Criterion 3: the order-m two-coordinate example has linear rate
/// (m-2)/(m-1); the estimate matches to 1e-6 and the measured factor of the
/// run from [3, 1] to 0.02.
#[test]
fn acceptance_03_rate_reproduction_across_orders() {
    for m in [3usize, 4, 6, 10] {
        let a = order_m_pair_tensor(m);
        let b = DVector::from_row_slice(&[0.0, 1.0]);
        let opts = SolverOptions {
            x0: StartPolicy::Explicit(DVector::from_row_slice(&[3.0, 1.0])),
            max_iter: 100_000,
            ..SolverOptions::default()
        };
        let report = maximal_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        assert_eq!(report.status, SolveStatus::Converged, "m={m}");
        assert!(report.monotone_verified, "m={m}");

        let expected = (m as f64 - 2.0) / (m as f64 - 1.0);
        let plan = build_plan(&a, &Splitting::Jacobi).unwrap();
        let rate = estimate_rate(&a, &b, &plan, &report.x).unwrap();
        assert!(
            (rate.rho - expected).abs() <= 1e-6,
            "m={m}: rho {} vs {expected}",
            rate.rho
        );
        let factor = measured_factor(&report.history).unwrap();
        assert!(
            (factor - expected).abs() <= 0.02,
            "m={m}: measured {factor} vs {expected}"
        );
    }
    pass(3, "linear rate (m-2)/(m-1) reproduced for m in {3,4,6,10}");
}

/// Criterion 4: the minimal run on the k=1 instance reports k0 = 1,
/// I = {1}, and the one-dimensional reduced equation x^3 = 1.
#[test]
fn acceptance_04_reduction_trace() {
    let dir = tempfile::tempdir().unwrap();
    let a = coupled_pair_tensor(1);
    let tns = write_file(dir.path(), "pair1.tns", &tensor_file(&a));
    let rhs = write_file(dir.path(), "b1.vec", &vector_file(&alternating_rhs(1)));
    let out = run(&[
        "solve",
        tns.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--mode",
        "min",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    let red = &json["reduction"];
    assert_eq!(red["k0"].as_u64().unwrap(), 1);
    assert_eq!(red["zero_index_set"], serde_json::json!([1]));
    assert_eq!(red["reduced"], true);
    assert_eq!(red["reduced_dim"].as_u64().unwrap(), 1);
    let entries = red["reduced_tensor"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    let row = entries[0].as_array().unwrap();
    assert_eq!(row[..4], [1, 1, 1, 1].map(|v| serde_json::json!(v))[..]);
    assert_eq!(row[4].as_f64().unwrap(), 1.0);
    assert_eq!(red["reduced_rhs"], serde_json::json!([1.0]));
    pass(4, "reduction trace k0=1, I={1}, reduced equation x^3=1");
}

/// Criterion 5: the zero-diagonal chain tensor is Z but not nonsingular-M
/// (exit 2), maximal mode refuses it (exit 5), and its minimal solution
/// [0,0,1] is computed to 1e-10.
#[test]
fn acceptance_05_no_maximal_solution_detection() {
    let dir = tempfile::tempdir().unwrap();
    let a = zero_diag_chain_tensor();
    let tns = write_file(dir.path(), "chain.tns", &tensor_file(&a));
    let rhs = write_file(
        dir.path(),
        "b.vec",
        &vector_file(&DVector::from_row_slice(&[0.0, 0.0, 1.0])),
    );

    let out = run(&["check", tns.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "solve",
        tns.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--mode",
        "max",
    ]);
    assert_eq!(out.status.code(), Some(5));

    let out = run(&[
        "solve",
        tns.to_str().unwrap(),
        rhs.to_str().unwrap(),
        "--mode",
        "min",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["monotone_verified"], true);
    let x = json_x(&json);
    for (i, want) in [0.0, 0.0, 1.0].iter().enumerate() {
        assert!((x[i] - want).abs() <= 1e-10, "coordinate {i}");
    }
    pass(5, "no-maximal detection and minimal solve on the chain tensor");
}

/// Criterion 6: on 50 random diagonally dominant nonsingular M-tensors with
/// b > 0, the minimal and maximal solves agree within 1e-9.
#[test]
fn acceptance_06_uniqueness_for_positive_rhs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = SolverOptions::default();
    for trial in 0..50 {
        let n = rng.random_range(2..=8);
        let a = random_m_tensor(&mut rng, 3, n);
        let b = random_positive_rhs(&mut rng, n);
        let min = minimal_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        let max = maximal_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        assert_eq!(min.status, SolveStatus::Converged, "trial {trial}");
        assert_eq!(max.status, SolveStatus::Converged, "trial {trial}");
        let gap = (min.x - max.x).amax();
        assert!(gap <= 1e-9, "trial {trial}: gap {gap}");
    }
    pass(6, "minimal == maximal on 50 random instances with b > 0");
}

/// Criterion 7: termwise comparison of the full (Q = 0) and Jacobi
/// splittings holds at each of the first 200 iterations on the random
/// family with half the right side zeroed, in both modes.
#[test]
fn acceptance_07_splitting_comparison_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(4711);
    let opts = SolverOptions::default();
    for trial in 0..50 {
        let n = rng.random_range(2..=8);
        let a = random_m_tensor(&mut rng, 3, n);
        let mut b = random_positive_rhs(&mut rng, n);
        for i in 0..n {
            if i % 2 == 0 {
                b[i] = 0.0;
            }
        }
        for mode in [ExtremalMode::Minimal, ExtremalMode::Maximal] {
            let report = compare_splittings(
                &a,
                &b,
                &Splitting::Full,
                &Splitting::Jacobi,
                mode,
                200,
                &opts,
            )
            .unwrap();
            assert_eq!(report.steps_run, 200, "trial {trial} {mode:?}");
            assert!(report.first_q_smaller);
            assert!(
                report.violations.is_empty(),
                "trial {trial} {mode:?}: first violation {:?}",
                report.violations.first()
            );
        }
    }
    pass(7, "termwise splitting comparison over 200 iterations, both modes");
}

/// Criterion 8: positive solutions for b + 2^{-k} e decrease monotonically
/// and land within 1e-4 of the maximal solution [2, 1] at k = 20.
#[test]
fn acceptance_08_continuity_toward_maximal_solution() {
    let a = coupled_pair_tensor(1);
    let b = DVector::from_row_slice(&[0.0, 1.0]);
    let report =
        continuity_probe(&a, &b, 20, &Splitting::Jacobi, &SolverOptions::default()).unwrap();
    assert!(report.monotone_nonincreasing);
    assert!(
        report.final_gap_inf <= 1e-4,
        "gap {}",
        report.final_gap_inf
    );
    assert!((report.x_max.clone() - DVector::from_row_slice(&[2.0, 1.0])).amax() <= 1e-10);
    pass(8, "continuity of positive solutions toward the maximal solution");
}

/// Criterion 9: finite differences confirm the derivative identity
/// d(A x^{m-1})/dx = (m-1) Abar x^{m-2} within 1e-5 relative on random
/// semi-symmetric tensors.
#[test]
fn acceptance_09_derivative_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..20 {
        let m = if trial % 2 == 0 { 3 } else { 4 };
        let n = rng.random_range(2..=6);
        let entries: Vec<(Vec<usize>, f64)> = (0..rng.random_range(4..=10))
            .map(|_| {
                let tuple: Vec<usize> = (0..m).map(|_| rng.random_range(0..n)).collect();
                (tuple, rng.random_range(-1.0..1.0))
            })
            .filter(|(_, v)| *v != 0.0)
            .collect();
        let a = mtensor::Tensor::from_entries(m, n, entries)
            .unwrap()
            .semi_symmetrize();
        for _ in 0..5 {
            let x = DVector::from_iterator(n, (0..n).map(|_| rng.random_range(0.5..2.0)));
            let h = 1e-5 * x.amax();
            let fd = fd_jacobian(&a, &x, h).unwrap();
            let analytic =
                a.semi_symmetrize().contract_matrix(&x).unwrap() * (m as f64 - 1.0);
            let scale = analytic.amax().max(1.0);
            assert!(
                (fd - analytic).amax() <= 1e-5 * scale,
                "trial {trial}: derivative mismatch"
            );
        }
    }
    pass(9, "finite-difference derivative identity on random tensors");
}

/// Criterion 10: every solve behind criteria 1-8 keeps its monotonicity
/// flag; violations beyond -1e-15 * ||x_k|| would clear it.
#[test]
fn acceptance_10_monotonicity_across_the_suite() {
    let opts = SolverOptions::default();

    // Family solves of criteria 1 and 2.
    for k in 1..=5usize {
        let a = coupled_pair_tensor(k);
        let b = alternating_rhs(k);
        let min = minimal_solve(&a, &b, &Splitting::Full, &opts).unwrap();
        let max = maximal_solve(&a, &b, &Splitting::Full, &opts).unwrap();
        assert!(min.monotone_verified && max.monotone_verified, "k={k}");
    }

    // Order-m runs of criterion 3.
    for m in [3usize, 4, 6, 10] {
        let a = order_m_pair_tensor(m);
        let b = DVector::from_row_slice(&[0.0, 1.0]);
        let o = SolverOptions {
            x0: StartPolicy::Explicit(DVector::from_row_slice(&[3.0, 1.0])),
            ..SolverOptions::default()
        };
        let report = maximal_solve(&a, &b, &Splitting::Jacobi, &o).unwrap();
        assert!(report.monotone_verified, "m={m}");
    }

    // Chain-tensor minimal solve of criterion 5.
    let chain = zero_diag_chain_tensor();
    let report = minimal_solve(
        &chain,
        &DVector::from_row_slice(&[0.0, 0.0, 1.0]),
        &Splitting::Jacobi,
        &opts,
    )
    .unwrap();
    assert!(report.monotone_verified);

    // Random family of criterion 6.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let n = rng.random_range(2..=8);
        let a = random_m_tensor(&mut rng, 3, n);
        let b = random_positive_rhs(&mut rng, n);
        let min = minimal_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        let max = maximal_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        assert!(min.monotone_verified && max.monotone_verified);
    }

    // Perturbed positive solves of criterion 8.
    let a = coupled_pair_tensor(1);
    for k in 1..=20 {
        let b = DVector::from_row_slice(&[0.0, 1.0]).add_scalar(2.0f64.powi(-k));
        let report = positive_solve(&a, &b, &Splitting::Jacobi, &opts).unwrap();
        assert!(report.monotone_verified, "k={k}");
    }

    pass(10, "monotone iterates on every solve behind criteria 1-8");
}
