use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{check_epsilons, check_wavenumbers, ConfigError};
use crate::{BenchArgs, PatternArgs, ProblemArgs, SolveArgs};
use waveatom::kernel::assemble_kernel;
use waveatom::nsform::{analyze, compress as compress_table, sparsity_pattern};
use waveatom::solver::{bistatic_rcs, far_field, solve_with, BoundaryOperator};
use waveatom::{
    CoefficientTable2D, Curve, DenseKernel, Error, FormHeader, IncidentWave, KernelKind, SolveMode, SparseNSForm,
    SparsityReport, Threshold,
};

pub const REPORT_HEADER: &str = "shape,kernel,k,N,epsilon,delta,nnz,per_row,eps_l2,seconds";
pub const BENCH_HEADER: &str = "k,N,epsilon,nnz,t_dense_ms,t_sparse_ms,speedup";
pub const SOLVE_HEADER: &str =
    "shape,k,N,eta,mode,incident,iterations,converged,residual,density_norm,theta,rcs,rcs_db";

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numeric(Error),
    Output(io::Error),
    NotConverged(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output(_) => 2,
            CliError::Numeric(Error::Io(_) | Error::Format(_) | Error::Json(_)) => 2,
            CliError::Numeric(_) | CliError::NotConverged(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Output(e) => write!(f, "cannot write output: {e}"),
            CliError::NotConverged(n) => write!(f, "{n} solve(s) did not converge"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn single_k(args: &ProblemArgs) -> CliResult<f64> {
    check_wavenumbers(&args.k)?;
    match args.k.as_slice() {
        [k] => Ok(*k),
        _ => Err(ConfigError(format!("this command takes exactly one wavenumber, got {}", args.k.len())).into()),
    }
}

fn threshold(args: &ProblemArgs, eps: f64) -> Threshold {
    if args.absolute {
        Threshold::Absolute(eps)
    } else {
        Threshold::Relative(eps)
    }
}

/// Assembled kernel and its coefficient table for one wavenumber.
struct Analysis {
    kernel: DenseKernel,
    coeffs: CoefficientTable2D,
    seconds: f64,
}

fn analyze_kernel(curve: &Curve, args: &ProblemArgs, k: f64) -> CliResult<Analysis> {
    let start = Instant::now();
    let n = args.n.resolve(k);
    let kernel = assemble_kernel(curve, args.kernel, k, n, args.eta.resolve(k))?;
    let coeffs = analyze(&kernel)?;
    Ok(Analysis { kernel, coeffs, seconds: start.elapsed().as_secs_f64() })
}

fn report_rows(analysis: &Analysis, args: &ProblemArgs) -> CliResult<Vec<(SparseNSForm, SparsityReport, f64)>> {
    let rows: Result<Vec<_>, Error> = args
        .eps
        .par_iter()
        .map(|&eps| {
            let start = Instant::now();
            let form = compress_table(FormHeader::from(&analysis.kernel), &analysis.coeffs, threshold(args, eps))?;
            let seconds = analysis.seconds + start.elapsed().as_secs_f64();
            let report = SparsityReport::measure(&form, &analysis.kernel, args.trials, args.seed)?;
            Ok((form, report, seconds))
        })
        .collect();
    Ok(rows?)
}

/// Quotes a CSV field that contains a comma (shape parameters do).
fn csv_field(value: impl fmt::Display) -> String {
    let s = value.to_string();
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn format_report(args: &ProblemArgs, report: &SparsityReport, seconds: f64) -> String {
    format!(
        "{},{},{},{},{:.6e},{:.6e},{},{:.3},{:.6e},{:.3}",
        csv_field(&args.shape),
        args.kernel,
        report.k,
        report.n,
        report.epsilon,
        report.delta,
        report.nnz,
        report.per_row,
        report.eps_l2,
        seconds
    )
}

fn form_path(base: &Path, eps: f64, count: usize) -> PathBuf {
    if count == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("form");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("nsf");
    base.with_file_name(format!("{stem}-eps{eps:.3e}.{ext}"))
}

fn check_problem(args: &ProblemArgs) -> CliResult<()> {
    check_epsilons(&args.eps)?;
    if args.trials < 5 {
        return Err(ConfigError(format!("--trials must be at least 5, got {}", args.trials)).into());
    }
    Ok(())
}

pub fn compress(args: &ProblemArgs) -> CliResult<()> {
    let k = single_k(args)?;
    check_problem(args)?;
    let curve = args.shape.build()?;
    let analysis = analyze_kernel(&curve, args, k)?;
    let rows = report_rows(&analysis, args)?;
    let mut out = io::stdout().lock();
    writeln!(out, "{REPORT_HEADER}")?;
    for (form, report, seconds) in &rows {
        if let Some(base) = &args.out {
            form.save(form_path(base, form.epsilon, rows.len()))?;
        }
        writeln!(out, "{}", format_report(args, report, *seconds))?;
    }
    Ok(())
}

pub fn table(args: &ProblemArgs) -> CliResult<()> {
    check_wavenumbers(&args.k)?;
    check_problem(args)?;
    let curve = args.shape.build()?;
    let mut out = output(args.out.as_deref())?;
    writeln!(out, "{REPORT_HEADER}")?;
    out.flush()?;
    // Wavenumbers run one after another (each dense kernel is N^2); the
    // accuracies of one wavenumber share its coefficient table.
    for &k in &args.k {
        let analysis = analyze_kernel(&curve, args, k)?;
        for (_, report, seconds) in report_rows(&analysis, args)? {
            writeln!(out, "{}", format_report(args, &report, seconds))?;
        }
        out.flush()?;
    }
    Ok(())
}

pub fn pattern(args: &PatternArgs) -> CliResult<()> {
    let out = args.problem.out.as_ref().ok_or_else(|| ConfigError("pattern needs --out <file.pgm>".into()))?;
    let form = match &args.form {
        Some(path) => SparseNSForm::load(path)?,
        None => {
            let k = single_k(&args.problem)?;
            check_epsilons(&args.problem.eps)?;
            let curve = args.problem.shape.build()?;
            let analysis = analyze_kernel(&curve, &args.problem, k)?;
            compress_table(
                FormHeader::from(&analysis.kernel),
                &analysis.coeffs,
                threshold(&args.problem, args.problem.eps[0]),
            )?
        }
    };
    std::fs::write(out, sparsity_pattern(&form).to_pgm())?;
    eprintln!("{}x{} pattern, {} kept coefficients", form.n, form.n, form.nnz());
    Ok(())
}

pub fn solve(args: &SolveArgs) -> CliResult<()> {
    let p = &args.problem;
    let k = single_k(p)?;
    let mode = match args.mode.as_str() {
        "dense" => SolveMode::Dense,
        "compressed" => {
            check_epsilons(&p.eps)?;
            SolveMode::Compressed(p.eps[0])
        }
        other => return Err(ConfigError(format!("unknown solve mode '{other}' (dense or compressed)")).into()),
    };
    if !(args.tol > 1e-12 && args.tol < 1e-2) {
        return Err(ConfigError(format!("--tol must lie in (1e-12, 1e-2), got {}", args.tol)).into());
    }
    if args.incident.is_empty() || args.rcs_samples == 0 {
        return Err(ConfigError("need at least one incident angle and one RCS sample".into()).into());
    }
    let curve = p.shape.build()?;
    let n = p.n.resolve(k);
    let eta = p.eta.resolve(k);
    let kernel = assemble_kernel(&curve, KernelKind::Combined, k, n, eta)?;
    let form = match mode {
        SolveMode::Dense => None,
        SolveMode::Compressed(eps) => {
            Some(compress_table(FormHeader::from(&kernel), &analyze(&kernel)?, threshold(p, eps))?)
        }
    };
    let op = match &form {
        Some(f) => BoundaryOperator::Compressed(f),
        None => BoundaryOperator::Dense(&kernel),
    };
    let angles: Vec<f64> =
        (0..args.rcs_samples).map(|i| 2.0 * std::f64::consts::PI * i as f64 / args.rcs_samples as f64).collect();
    // Independent incident directions share the operator.
    let results: Result<Vec<_>, Error> = args
        .incident
        .par_iter()
        .map(|&angle| {
            let wave = IncidentWave::from_angle(angle, k)?;
            let result = solve_with(op, &curve, &wave, args.tol, args.maxit)?;
            let far = far_field(&curve, &result.density, k, eta, &angles)?;
            Ok((angle, result, far))
        })
        .collect();
    let mode_name = match mode {
        SolveMode::Dense => "dense".to_string(),
        SolveMode::Compressed(eps) => format!("compressed:{eps:.6e}"),
    };
    let mut out = output(p.out.as_deref())?;
    writeln!(out, "{SOLVE_HEADER}")?;
    let mut failures = 0;
    for (angle, result, far) in results? {
        failures += usize::from(!result.converged);
        let density_norm = result.density.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        for (theta, rcs) in angles.iter().zip(bistatic_rcs(&far)) {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.6e},{:.6e},{:.6},{:.6e},{:.4}",
                csv_field(&p.shape),
                k,
                n,
                eta,
                mode_name,
                angle,
                result.iterations,
                result.converged,
                result.final_residual(),
                density_norm,
                theta,
                rcs.linear,
                rcs.db
            )?;
        }
    }
    out.flush()?;
    if failures > 0 {
        return Err(CliError::NotConverged(failures));
    }
    Ok(())
}

fn median_ms(reps: usize, mut f: impl FnMut() -> Result<(), Error>) -> Result<f64, Error> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

pub fn apply_bench(args: &BenchArgs) -> CliResult<()> {
    let p = &args.problem;
    check_wavenumbers(&p.k)?;
    check_epsilons(&p.eps)?;
    if args.reps == 0 {
        return Err(ConfigError("--reps must be at least 1".into()).into());
    }
    let curve = p.shape.build()?;
    let mut out = output(p.out.as_deref())?;
    writeln!(out, "{BENCH_HEADER}")?;
    for &k in &p.k {
        let analysis = analyze_kernel(&curve, p, k)?;
        let n = analysis.kernel.n;
        let f: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        for &eps in &p.eps {
            let form = compress_table(FormHeader::from(&analysis.kernel), &analysis.coeffs, threshold(p, eps))?;
            let dense = median_ms(args.reps, || analysis.kernel.matvec(&f).map(drop))?;
            let sparse = median_ms(args.reps, || form.apply(&f).map(drop))?;
            writeln!(out, "{},{},{:.6e},{},{:.4},{:.4},{:.3}", k, n, eps, form.nnz(), dense, sparse, dense / sparse)?;
        }
        out.flush()?;
    }
    Ok(())
}

pub fn info(path: &Path) -> CliResult<()> {
    let form = SparseNSForm::load(path)?;
    let mut out = io::stdout().lock();
    writeln!(out, "file: {}", path.display())?;
    writeln!(out, "k: {}", form.k)?;
    writeln!(out, "N: {}", form.n)?;
    writeln!(out, "kernel: {}", form.kind)?;
    writeln!(out, "eta: {}", form.eta)?;
    writeln!(out, "epsilon: {:.6e}", form.epsilon)?;
    writeln!(out, "delta: {:.6e}", form.delta)?;
    writeln!(out, "total_norm: {:.6e}", form.total_norm)?;
    writeln!(out, "nnz: {}", form.nnz())?;
    writeln!(out, "per_row: {:.3}", form.per_row())?;
    let scales = form.tiling().num_scales();
    let mut per_scale = vec![0usize; scales];
    for (idx, _) in form.entries() {
        per_scale[idx.j as usize] += 1;
    }
    for (j, count) in per_scale.iter().enumerate() {
        writeln!(out, "scale {j}: {count}")?;
    }
    Ok(())
}
