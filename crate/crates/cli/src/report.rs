//! Report formatting. JSON output prints every float with 17 significant
//! digits so reports reload bit-faithfully; non-finite values become `null`.

use mtensor::{
    ConditionStatus, MTensorCertificate, MonotoneDirection, RateReport, SolutionSet, SolveReport,
    Tensor,
};
use nalgebra::{DMatrix, DVector};

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{:.16e}", v)
    } else {
        "null".to_string()
    }
}

pub fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn json_vector(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|&x| fmt_f64(x)).collect();
    format!("[{}]", parts.join(","))
}

pub fn json_matrix(m: &DMatrix<f64>) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let parts: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Index sets are reported 1-based, matching the file format.
pub fn json_index_set(xs: &[usize]) -> String {
    let parts: Vec<String> = xs.iter().map(|&i| (i + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn json_opt_note(note: &Option<String>) -> String {
    note.as_deref().map(json_string).unwrap_or_else(|| "null".into())
}

/// Tensor entries as `[i1, .., im, value]` rows with 1-based indices.
pub fn json_tensor_entries(t: &Tensor) -> String {
    let rows: Vec<String> = t
        .entries()
        .map(|(tuple, value)| {
            let mut parts: Vec<String> = tuple.iter().map(|&i| (i + 1).to_string()).collect();
            parts.push(fmt_f64(value));
            format!("[{}]", parts.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

pub fn monotone_name(d: MonotoneDirection) -> &'static str {
    match d {
        MonotoneDirection::Increasing => "increasing",
        MonotoneDirection::Decreasing => "decreasing",
    }
}

pub fn check_json(cert: &MTensorCertificate, exit_code: i32) -> String {
    let (rho_lower, rho_upper) = match cert.rho_bracket {
        Some((lo, hi)) => (fmt_f64(lo), fmt_f64(hi)),
        None => ("null".into(), "null".into()),
    };
    format!(
        "{{\"classification\":{},\"exit_code\":{},\"s\":{},\"rho_b\":{},\"rho_lower\":{},\"rho_upper\":{},\"borderline\":{},\"witness\":{},\"iterations\":{},\"note\":{}}}",
        json_string(&cert.classification.to_string()),
        exit_code,
        fmt_f64(cert.s),
        cert.rho_b.map(fmt_f64).unwrap_or_else(|| "null".into()),
        rho_lower,
        rho_upper,
        cert.borderline,
        cert.witness
            .as_ref()
            .map(json_vector)
            .unwrap_or_else(|| "null".into()),
        cert.iterations,
        json_opt_note(&cert.note),
    )
}

pub fn check_text(cert: &MTensorCertificate) -> String {
    let mut out = format!("classification: {}\n", cert.classification);
    out.push_str(&format!("s: {}\n", fmt_f64(cert.s)));
    match (cert.rho_b, cert.rho_bracket) {
        (Some(rho), Some((lo, hi))) => {
            out.push_str(&format!(
                "rho(B): {} (bracket [{}, {}])\n",
                fmt_f64(rho),
                fmt_f64(lo),
                fmt_f64(hi)
            ));
        }
        _ => out.push_str("rho(B): n/a\n"),
    }
    if cert.borderline {
        out.push_str("borderline: true\n");
    }
    if let Some(w) = &cert.witness {
        let parts: Vec<String> = w.iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&format!("witness: {}\n", parts.join(" ")));
    }
    if let Some(note) = &cert.note {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

fn reduction_json(report: &SolveReport) -> String {
    let r = &report.reduction;
    format!(
        "{{\"k0\":{},\"zero_index_set\":{},\"zero_rhs_set\":{},\"reduced\":{},\"reduced_dim\":{},\"reduced_tensor\":{},\"reduced_rhs\":{}}}",
        r.k0.map(|k| k.to_string()).unwrap_or_else(|| "null".into()),
        json_index_set(&r.zero_set),
        json_index_set(&r.zero_rhs_set),
        r.reduced,
        r.reduced_tensor
            .as_ref()
            .map(|t| t.dim().to_string())
            .unwrap_or_else(|| "null".into()),
        r.reduced_tensor
            .as_ref()
            .map(json_tensor_entries)
            .unwrap_or_else(|| "null".into()),
        r.reduced_rhs
            .as_ref()
            .map(json_vector)
            .unwrap_or_else(|| "null".into()),
    )
}

pub fn rate_json(rate: &RateReport) -> String {
    let cond = |c: ConditionStatus| json_string(&c.to_string());
    format!(
        "{{\"rho\":{},\"phi_prime\":{},\"conditions\":{{\"rhs_positive\":{},\"irreducible\":{},\"triangular\":{},\"zero_rows_coupled\":{}}},\"measured_factor\":{}}}",
        fmt_f64(rate.rho),
        json_matrix(&rate.phi_prime),
        cond(rate.conditions.rhs_positive),
        cond(rate.conditions.irreducible),
        cond(rate.conditions.triangular),
        cond(rate.conditions.zero_rows_coupled),
        rate.measured_factor
            .map(fmt_f64)
            .unwrap_or_else(|| "null".into()),
    )
}

pub fn solve_json(
    report: &SolveReport,
    mode: &str,
    splitting: &str,
    rate: Option<&RateReport>,
) -> String {
    let rate_field = rate
        .map(|r| format!(",\"rate\":{}", rate_json(r)))
        .unwrap_or_default();
    format!(
        "{{\"status\":{},\"mode\":{},\"splitting\":{},\"x\":{},\"residual_inf\":{},\"iterations\":{},\"monotone\":{},\"monotone_verified\":{},\"reduction\":{},\"note\":{}{}}}",
        json_string(&report.status.to_string()),
        json_string(mode),
        json_string(splitting),
        json_vector(&report.x),
        fmt_f64(report.residual_inf),
        report.iterations,
        json_string(monotone_name(report.monotone)),
        report.monotone_verified,
        reduction_json(report),
        json_opt_note(&report.note),
        rate_field,
    )
}

pub fn solve_text(report: &SolveReport, mode: &str, splitting: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("status: {}\n", report.status));
    out.push_str(&format!("mode: {mode}  splitting: {splitting}\n"));
    out.push_str(&format!("iterations: {}\n", report.iterations));
    out.push_str(&format!("residual_inf: {}\n", fmt_f64(report.residual_inf)));
    out.push_str(&format!(
        "monotone: {} ({})\n",
        monotone_name(report.monotone),
        if report.monotone_verified {
            "verified"
        } else {
            "violated"
        }
    ));
    let r = &report.reduction;
    let fmt_set = |xs: &[usize]| {
        let parts: Vec<String> = xs.iter().map(|&i| (i + 1).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    };
    out.push_str(&format!(
        "reduction: k0={} I={} I0={} reduced={}\n",
        r.k0.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
        fmt_set(&r.zero_set),
        fmt_set(&r.zero_rhs_set),
        r.reduced,
    ));
    if let Some(t) = &r.reduced_tensor {
        out.push_str(&format!("reduced_dim: {}\n", t.dim()));
    }
    let parts: Vec<String> = report.x.iter().map(|&x| fmt_f64(x)).collect();
    out.push_str(&format!("x: {}\n", parts.join(" ")));
    if let Some(note) = &report.note {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}

pub fn enumerate_json(set: &SolutionSet) -> String {
    let solutions: Vec<String> = set.solutions.iter().map(json_vector).collect();
    let patterns: Vec<String> = set
        .degenerate_patterns
        .iter()
        .map(|p| json_index_set(p))
        .collect();
    let extremal = set
        .extremal
        .map(|(lo, hi)| format!("{{\"min_index\":{lo},\"max_index\":{hi}}}"))
        .unwrap_or_else(|| "null".into());
    format!(
        "{{\"count\":{},\"solutions\":[{}],\"degenerate_patterns\":[{}],\"extremal\":{}}}",
        set.solutions.len(),
        solutions.join(","),
        patterns.join(","),
        extremal,
    )
}
