//! Command-line interface: classify coefficient tensors, solve for extremal
//! or positive solutions, enumerate all nonnegative solutions, and report
//! convergence rates.
//!
//! Exit codes are the machine interface: 0 success / nonsingular-M,
//! 2 Z-but-not-nonsingular-M, 3 not-Z, 4 did not converge (unbounded growth
//! or iteration cap), 5 precondition failed, 64 usage or parse error.

mod io;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mtensor::{
    classify, enumerate_solutions, estimate_rate, maximal_solve, measured_factor, minimal_solve,
    positive_solve, Classification, RateReport, SolveReport, SolveStatus, SolverOptions,
    Splitting, StartPolicy, Tensor,
};
use nalgebra::DVector;

use io::CliError;

const EXIT_OK: u8 = 0;
const EXIT_Z_NOT_M: u8 = 2;
const EXIT_NOT_Z: u8 = 3;
const EXIT_NO_CONVERGENCE: u8 = 4;
const EXIT_PRECONDITION: u8 = 5;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "mtensor",
    about = "Extremal nonnegative solutions of tensor equations A x^{m-1} = b",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Minimal nonnegative solution (zero start).
    Min,
    /// Maximal nonnegative solution (upper start).
    Max,
    /// Unique positive solution for b > 0.
    Pos,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Min => "min",
            Mode::Max => "max",
            Mode::Pos => "pos",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SplittingArg {
    Jacobi,
    Lower,
    Upper,
    Full,
}

impl SplittingArg {
    fn to_splitting(self) -> Splitting {
        match self {
            SplittingArg::Jacobi => Splitting::Jacobi,
            SplittingArg::Lower => Splitting::LowerTriangular,
            SplittingArg::Upper => Splitting::UpperTriangular,
            SplittingArg::Full => Splitting::Full,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify the tensor: nonsingular-M, Z-not-nonsingular-M, or not-Z.
    Check {
        tensor: PathBuf,
        /// Relative tolerance separating s from rho(B).
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Solve A x^{m-1} = b for an extremal or positive solution.
    Solve {
        tensor: PathBuf,
        rhs: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Level-2 splitting; defaults to lower for order 3, full otherwise.
        #[arg(long, value_enum)]
        splitting: Option<SplittingArg>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 100_000)]
        max_iter: usize,
        /// Starting vector: 'zero', 'auto', or a vector file path.
        #[arg(long, default_value = "auto")]
        x0: String,
        #[arg(long)]
        json: bool,
        /// Emit one stderr line per iteration: k, residual, sup-norm.
        #[arg(long)]
        trace: bool,
        /// Attach a convergence-rate report.
        #[arg(long)]
        rate: bool,
    },
    /// Enumerate all nonnegative solutions by zero-pattern search (JSON).
    Enumerate {
        tensor: PathBuf,
        rhs: PathBuf,
        /// Largest admissible dimension.
        #[arg(long, default_value_t = 12)]
        limit: usize,
    },
    /// Convergence-rate report for a solve (JSON).
    Rate {
        tensor: PathBuf,
        rhs: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Max)]
        mode: Mode,
        #[arg(long, value_enum)]
        splitting: Option<SplittingArg>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 100_000)]
        max_iter: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's help/version on stdout with success, everything
            // else is a usage error.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                CliError::Parse { .. } | CliError::Io { .. } | CliError::Usage(_) => EXIT_USAGE,
                CliError::Core(_) => EXIT_PRECONDITION,
            }
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { tensor, tol, json } => cmd_check(&tensor, tol, json),
        Command::Solve {
            tensor,
            rhs,
            mode,
            splitting,
            tol,
            max_iter,
            x0,
            json,
            trace,
            rate,
        } => cmd_solve(
            &tensor, &rhs, mode, splitting, tol, max_iter, &x0, json, trace, rate,
        ),
        Command::Enumerate { tensor, rhs, limit } => cmd_enumerate(&tensor, &rhs, limit),
        Command::Rate {
            tensor,
            rhs,
            mode,
            splitting,
            tol,
            max_iter,
        } => cmd_rate(&tensor, &rhs, mode, splitting, tol, max_iter),
    }
}

fn cmd_check(tensor_path: &Path, tol: f64, json: bool) -> Result<u8, CliError> {
    let a = io::read_tensor(tensor_path)?;
    let cert = classify(&a, tol);
    let code = match cert.classification {
        Classification::NonsingularM => EXIT_OK,
        Classification::ZNotNonsingularM => EXIT_Z_NOT_M,
        Classification::NotZ => EXIT_NOT_Z,
    };
    if json {
        println!("{}", report::check_json(&cert, code as i32));
    } else {
        print!("{}", report::check_text(&cert));
    }
    Ok(code)
}

fn resolve_splitting(requested: Option<SplittingArg>, order: usize) -> Splitting {
    requested
        .map(SplittingArg::to_splitting)
        .unwrap_or_else(|| Splitting::default_for_order(order))
}

fn run_solve(
    a: &Tensor,
    b: &DVector<f64>,
    mode: Mode,
    splitting: &Splitting,
    opts: &SolverOptions,
) -> Result<SolveReport, CliError> {
    let report = match mode {
        Mode::Min => minimal_solve(a, b, splitting, opts)?,
        Mode::Max => maximal_solve(a, b, splitting, opts)?,
        Mode::Pos => positive_solve(a, b, splitting, opts)?,
    };
    Ok(report)
}

fn status_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Converged => EXIT_OK,
        SolveStatus::DivergingUnbounded | SolveStatus::MaxIter => EXIT_NO_CONVERGENCE,
        SolveStatus::PreconditionFailed => EXIT_PRECONDITION,
    }
}

/// Rate report at the run's solution, evaluated on the reduced system when
/// the run reduced (the rate is defined at a positive point).
fn rate_for_run(
    a: &Tensor,
    b: &DVector<f64>,
    splitting: &Splitting,
    report: &SolveReport,
) -> Result<RateReport, CliError> {
    let (ra, rb, rx) = if report.reduction.reduced {
        let keep: Vec<usize> = (0..a.dim())
            .filter(|i| !report.reduction.zero_set.contains(i))
            .collect();
        let rx = DVector::from_iterator(keep.len(), keep.iter().map(|&i| report.x[i]));
        (
            report
                .reduction
                .reduced_tensor
                .clone()
                .expect("reduced tensor"),
            report.reduction.reduced_rhs.clone().expect("reduced rhs"),
            rx,
        )
    } else {
        (a.clone(), b.clone(), report.x.clone())
    };
    let plan = mtensor::build_plan(&ra, splitting)?;
    let mut rate = estimate_rate(&ra, &rb, &plan, &rx)?;
    rate.measured_factor = measured_factor(&report.history);
    Ok(rate)
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    tensor_path: &Path,
    rhs_path: &Path,
    mode: Mode,
    splitting: Option<SplittingArg>,
    tol: f64,
    max_iter: usize,
    x0: &str,
    json: bool,
    trace: bool,
    rate: bool,
) -> Result<u8, CliError> {
    let a = io::read_tensor(tensor_path)?;
    let b = io::read_vector(rhs_path)?;
    let splitting = resolve_splitting(splitting, a.order());

    let x0_policy = match (mode, x0) {
        (Mode::Min | Mode::Pos, "zero" | "auto") => StartPolicy::Zero,
        (Mode::Min | Mode::Pos, _) => {
            return Err(CliError::Usage(
                "modes 'min' and 'pos' force the zero starting vector (--x0 zero|auto)".into(),
            ))
        }
        (Mode::Max, "auto") => StartPolicy::AutoUpper,
        (Mode::Max, "zero") => {
            return Err(CliError::Usage(
                "mode 'max' needs a positive start (--x0 auto or a vector file)".into(),
            ))
        }
        (Mode::Max, path) => StartPolicy::Explicit(io::read_vector(&PathBuf::from(path))?),
    };

    let opts = SolverOptions {
        tol,
        max_iter,
        x0: x0_policy,
        ..SolverOptions::default()
    };
    let report = run_solve(&a, &b, mode, &splitting, &opts)?;

    if trace {
        for entry in &report.history {
            eprintln!(
                "trace {} {} {}",
                entry.k,
                report::fmt_f64(entry.residual_inf),
                report::fmt_f64(entry.x_inf)
            );
        }
    }

    let rate_report = if rate && report.status == SolveStatus::Converged {
        Some(rate_for_run(&a, &b, &splitting, &report)?)
    } else {
        None
    };

    if json {
        println!(
            "{}",
            report::solve_json(&report, mode.name(), splitting.name(), rate_report.as_ref())
        );
    } else {
        print!(
            "{}",
            report::solve_text(&report, mode.name(), splitting.name())
        );
        if let Some(r) = &rate_report {
            println!("rate: {}", report::fmt_f64(r.rho));
        }
    }
    Ok(status_code(report.status))
}

fn cmd_enumerate(tensor_path: &Path, rhs_path: &Path, limit: usize) -> Result<u8, CliError> {
    let a = io::read_tensor(tensor_path)?;
    let b = io::read_vector(rhs_path)?;
    let set = match enumerate_solutions(&a, &b, limit) {
        Ok(set) => set,
        Err(e @ mtensor::Error::EnumerationLimit { .. }) => {
            return Err(CliError::Usage(e.to_string()))
        }
        Err(e) => return Err(CliError::Core(e)),
    };
    println!("{}", report::enumerate_json(&set));
    Ok(EXIT_OK)
}

fn cmd_rate(
    tensor_path: &Path,
    rhs_path: &Path,
    mode: Mode,
    splitting: Option<SplittingArg>,
    tol: f64,
    max_iter: usize,
) -> Result<u8, CliError> {
    if mode == Mode::Pos {
        return Err(CliError::Usage(
            "rate reports use --mode min or --mode max".into(),
        ));
    }
    let a = io::read_tensor(tensor_path)?;
    let b = io::read_vector(rhs_path)?;
    let splitting = resolve_splitting(splitting, a.order());
    let opts = SolverOptions {
        tol,
        max_iter,
        ..SolverOptions::default()
    };
    let report = run_solve(&a, &b, mode, &splitting, &opts)?;
    if report.status != SolveStatus::Converged {
        eprintln!(
            "error: solve ended with status {}; no rate at a non-solution",
            report.status
        );
        return Ok(status_code(report.status));
    }
    let rate = rate_for_run(&a, &b, &splitting, &report)?;
    println!(
        "{{\"mode\":{},\"splitting\":{},\"status\":{},\"iterations\":{},\"rate\":{}}}",
        report::json_string(mode.name()),
        report::json_string(splitting.name()),
        report::json_string(&report.status.to_string()),
        report.iterations,
        report::rate_json(&rate)
    );
    Ok(EXIT_OK)
}
