use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use obmf::bitmat::{self, BinaryMatrix};
use obmf::check::{run_checks, Fault};
use obmf::factorizer::{parse_report, to_report};
use obmf::render::{render, Layout, RenderSpec};
use obmf::synth::{flip_noise, gen_blocks, gen_random, BlockSpec};
use obmf::{factorize, Error, FactorizeOptions, SeedMode, Variant};

#[derive(Parser)]
#[command(name = "obmf", version, about = "Ordered Boolean matrix factorization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic matrix.
    Synth {
        #[command(subcommand)]
        kind: SynthKind,
    },
    /// Factorize a matrix and print the report.
    Factorize(FactorizeArgs),
    /// Error of a factor report against one or more matrices.
    Eval(EvalArgs),
    /// Draw a factor report as SVG.
    Render(RenderArgs),
    /// Compare the engines against brute-force oracles on random instances.
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Dense,
    Sparse,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Matrix format; by default taken from the extension (.dns dense, .spm sparse), else sparse.
    #[arg(long, value_enum)]
    format: Option<MatrixFormat>,
}

#[derive(Subcommand)]
enum SynthKind {
    /// Overlapping diagonal blocks, optionally with flipped cells.
    Blocks {
        #[arg(long, default_value_t = 6)]
        blocks: usize,
        #[arg(long, default_value_t = 20)]
        size: usize,
        #[arg(long, default_value_t = 5)]
        overlap: usize,
        /// Fraction of cells to flip, in [0, 0.5].
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        rng: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Square matrix with independent cells.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.24)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        rng: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct FactorizeArgs {
    input: PathBuf,
    #[arg(short, long)]
    k: usize,
    #[arg(long, default_value = "plain")]
    variant: String,
    /// `all` or `sample:<fraction>`.
    #[arg(long, default_value = "all")]
    seeds: String,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, env = "OBMF_THREADS")]
    threads: Option<usize>,
    #[arg(long, default_value_t = obmf::factorizer::MAX_ITERATIONS)]
    max_iterations: usize,
    #[arg(long, value_enum)]
    format: Option<MatrixFormat>,
    /// Write the report here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    factors: PathBuf,
    /// Matrices to compare against (e.g. the clean and the noisy one).
    #[arg(required = true)]
    matrices: Vec<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<MatrixFormat>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    factors: PathBuf,
    #[arg(long, default_value = "circular")]
    layout: String,
    /// One label per line, in index order.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Data matrix, needed by the heatmap.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long)]
    size: Option<f64>,
    #[arg(long)]
    opacity: Option<f64>,
    /// Hide labels closer than this (degrees on the circle, pixels on the line).
    #[arg(long)]
    min_label_spacing: Option<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    DropOrder,
    GainOffByOne,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 200)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    rng: u64,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Incompatible => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn format_of(path: Option<&Path>, explicit: Option<MatrixFormat>) -> MatrixFormat {
    explicit.unwrap_or_else(|| match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("dns") => MatrixFormat::Dense,
        _ => MatrixFormat::Sparse,
    })
}

fn load_matrix(path: &Path, format: Option<MatrixFormat>) -> Result<BinaryMatrix, Failure> {
    let text = read(path)?;
    let parsed = match format_of(Some(path), format) {
        MatrixFormat::Dense => bitmat::load_dense(&text),
        MatrixFormat::Sparse => bitmat::load_sparse(&text),
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_matrix(m: &BinaryMatrix, out: &OutputArgs) -> Result<(), Failure> {
    let text = match format_of(out.output.as_deref(), out.format) {
        MatrixFormat::Dense => bitmat::to_dense_string(m),
        MatrixFormat::Sparse => bitmat::to_sparse_string(m),
    };
    emit(out.output.as_deref(), &text)?;
    eprintln!(
        "{}x{} nnz={} density={:.4}",
        m.n_rows(),
        m.n_cols(),
        m.nnz(),
        m.nnz() as f64 / (m.n_rows() * m.n_cols()).max(1) as f64
    );
    Ok(())
}

fn cmd_synth(kind: SynthKind) -> Result<(), Failure> {
    match kind {
        SynthKind::Blocks { blocks, size, overlap, noise, rng, out } => {
            let spec = BlockSpec::new(blocks, size, overlap)?;
            let clean = gen_blocks(&spec)?;
            let m = flip_noise(&clean, noise, rng)?;
            write_matrix(&m, &out)
        }
        SynthKind::Random { n, density, rng, out } => {
            if n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            write_matrix(&gen_random(n, density, rng)?, &out)
        }
    }
}

fn cmd_factorize(args: FactorizeArgs) -> Result<(), Failure> {
    let variant: Variant = args.variant.parse()?;
    let seeds: SeedMode = args.seeds.parse()?;
    if args.k == 0 {
        return Err(Failure::Usage("-k must be at least 1".into()));
    }
    let threads = match args.threads {
        Some(0) => return Err(Failure::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if args.max_iterations == 0 {
        return Err(Failure::Usage("--max-iterations must be at least 1".into()));
    }
    let d = load_matrix(&args.input, args.format)?;
    let opts = FactorizeOptions { k: args.k, variant, seeds, rng_seed: args.rng, threads, max_iterations: args.max_iterations };
    let f = factorize(&d, &opts)?;
    emit(args.output.as_deref(), &to_report(&f))
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let f = parse_report(&read(&args.factors)?)?;
    let z = bitmat::reconstruct(&f);
    let mut out = String::new();
    for path in &args.matrices {
        let d = load_matrix(path, args.format)?;
        let error = bitmat::hamming_error(&d, &z)?;
        let rel = bitmat::relative_error(&d, &z).map_or_else(|_| "NA".to_string(), |r| format!("{r:.4}"));
        out.push_str(&format!("{} error={error} relerr={rel}\n", path.display()));
    }
    emit(None, &out)
}

fn cmd_render(args: RenderArgs) -> Result<(), Failure> {
    let f = parse_report(&read(&args.factors)?)?;
    let layout: Layout = args.layout.parse()?;
    let mut spec = RenderSpec::new(layout);
    if let Some(size) = args.size {
        spec.size = size;
    }
    if let Some(opacity) = args.opacity {
        spec.opacity = opacity;
    }
    if let Some(spacing) = args.min_label_spacing {
        spec.min_label_spacing = spacing;
    }
    if let Some(path) = &args.labels {
        spec.labels = Some(read(path)?.lines().map(str::to_string).collect());
    }
    let d = args.matrix.as_deref().map(|p| load_matrix(p, None)).transpose()?;
    let svg = render(d.as_ref(), &f, &spec)?;
    emit(args.output.as_deref(), &svg)
}

fn cmd_check(args: CheckArgs) -> Result<(), Failure> {
    let fault = args.inject_fault.map(|f| match f {
        FaultArg::DropOrder => Fault::DropOrder,
        FaultArg::GainOffByOne => Fault::GainOffByOne,
    });
    let report = run_checks(args.cases, args.rng, fault)?;
    if report.passed() {
        println!("all {} cases passed", report.cases);
        return Ok(());
    }
    for m in &report.mismatches {
        println!("MISMATCH {} case {} (rng {}):\n{}", m.batch.name(), m.case, args.rng, m.dump);
    }
    Err(Failure::Verification(format!("{} of {} cases failed", report.mismatches.len(), report.cases)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth { kind } => cmd_synth(kind),
        Command::Factorize(args) => cmd_factorize(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Render(args) => cmd_render(args),
        Command::Check(args) => cmd_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("obmf: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("obmf: {msg}");
            ExitCode::from(2)
        }
    }
}
