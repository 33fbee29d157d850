// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, EtaSpec, SamplesSpec, ShapeSpec};
use waveatom::KernelKind;

#[derive(Parser, Debug)]
#[command(name = "waveatom", version, about = "Wave atom compression of Helmholtz boundary integral operators")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "WAVEATOM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compress one kernel and write a form file per accuracy.
    Compress(ProblemArgs),
    /// Sparsity table over a grid of wavenumbers and accuracies.
    Table(ProblemArgs),
    /// Sparsity pattern of a form as a binary PGM image.
    Pattern(PatternArgs),
    /// Solve the combined-field equation and report the bistatic RCS.
    Solve(SolveArgs),
    /// Time dense matrix-vector products against compressed applies.
    ApplyBench(BenchArgs),
    /// Print the header and per-scale counts of a form file.
    Info { file: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// ellipse[:a,b], circle, kite, star[:p,a] or file:path
    #[arg(long, default_value = "kite", value_parser = parse_shape)]
    pub shape: ShapeSpec,

    /// Comma-separated wavenumbers. The fully qualified `Vec` keeps clap from
    /// treating the list as repeated occurrences.
    #[arg(long, default_value = "32", value_parser = parse_list)]
    pub k: ::std::vec::Vec<f64>,

    /// Comma-separated relative accuracies; `1e-1.5` means 10^-1.5.
    #[arg(long, default_value = "1e-2", value_parser = parse_list)]
    pub eps: ::std::vec::Vec<f64>,

    /// single, double or combined
    #[arg(long, default_value = "single", value_parser = parse_kernel)]
    pub kernel: KernelKind,

    /// Combined-kernel coupling: `auto` (= k) or a number.
    #[arg(long, default_value = "auto", value_parser = parse_eta)]
    pub eta: EtaSpec,

    /// Samples: `auto` (8k rounded up to a power of two) or a power of two.
    #[arg(long, default_value = "auto", value_parser = parse_samples)]
    pub n: SamplesSpec,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Random test vectors for the operator error estimate.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,

    /// Threshold against an absolute instead of a relative budget.
    #[arg(long)]
    pub absolute: bool,

    /// Output path (form file for `compress`, CSV otherwise).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    /// Existing form file; when absent the kernel is compressed inline.
    #[arg(long)]
    pub form: Option<PathBuf>,

    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Comma-separated incident angles in radians.
    #[arg(long, default_value = "0", value_parser = parse_list)]
    pub incident: ::std::vec::Vec<f64>,

    /// `dense` or `compressed` (thresholded at the first `--eps`).
    #[arg(long, default_value = "dense")]
    pub mode: String,

    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,

    #[arg(long, default_value_t = waveatom::solver::DEFAULT_MAXIT)]
    pub maxit: usize,

    /// Far-field observation angles, evenly spaced on the circle.
    #[arg(long, default_value_t = 360)]
    pub rcs_samples: usize,

    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,

    #[command(flatten)]
    pub problem: ProblemArgs,
}

fn parse_shape(s: &str) -> Result<ShapeSpec, ConfigError> {
    s.parse()
}

fn parse_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    config::parse_list(s)
}

fn parse_kernel(s: &str) -> Result<KernelKind, ConfigError> {
    config::parse_kernel(s)
}

fn parse_eta(s: &str) -> Result<EtaSpec, ConfigError> {
    s.parse()
}

fn parse_samples(s: &str) -> Result<SamplesSpec, ConfigError> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Compress(args) => commands::compress(&args),
        Command::Table(args) => commands::table(&args),
        Command::Pattern(args) => commands::pattern(&args),
        Command::Solve(args) => commands::solve(&args),
        Command::ApplyBench(args) => commands::apply_bench(&args),
        Command::Info { file } => commands::info(&file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
