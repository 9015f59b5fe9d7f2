use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kravchuk::io::{self as kio, AngleArgs, Format, ObjectKind};
use kravchuk::transform;
use kravchuk::verify::{self, SuiteConfig};
use kravchuk::Tolerance;

const TOL_ENV: &str = "KRAVCHUK_TOL";

#[derive(Parser)]
#[command(name = "kravchuk", version, about = "Kravchuk transform, su(2) representations and the finite oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a matrix or state to a file (or stdout).
    Gen(GenArgs),
    /// Run the identity suite and stream JSON-lines reports.
    Verify(VerifyArgs),
    /// Summarize the space for one spin.
    Info(InfoArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Twice the spin.
    #[arg(long)]
    two_j: u32,
    #[arg(long, value_parser = parse_object)]
    object: ObjectKind,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// Read angles in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "two_j_range", required_unless_present = "two_j_range")]
    two_j: Option<u32>,
    /// Inclusive range `a..b`.
    #[arg(long, value_parser = parse_range)]
    two_j_range: Option<RangeInclusive<u32>>,
    /// Fixed float tolerance replacing the dimension-scaled default.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    seed: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InfoArgs {
    #[arg(long)]
    two_j: u32,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

fn parse_object(s: &str) -> Result<ObjectKind, String> {
    s.parse()
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (lo, hi) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| format!("expected a..b, got '{s}'"))?;
    let lo: u32 = lo.trim().parse().map_err(|e| format!("lower bound: {e}"))?;
    let hi: u32 = hi.trim().parse().map_err(|e| format!("upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("lower bound {lo} exceeds upper bound {hi}"));
    }
    Ok(lo..=hi)
}

/// `--tol` first, then `KRAVCHUK_TOL`, else the scaled default.
fn resolve_tolerance(flag: Option<f64>) -> Result<Option<f64>, String> {
    let value = match flag {
        Some(t) => Some(t),
        None => match std::env::var(TOL_ENV) {
            Ok(s) => Some(s.trim().parse::<f64>().map_err(|e| format!("{TOL_ENV}='{s}': {e}"))?),
            Err(_) => None,
        },
    };
    match value {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(format!("tolerance must be positive and finite, got {t}")),
        v => Ok(v),
    }
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn cmd_gen(args: GenArgs) -> ExitCode {
    let scale = |a: Option<f64>| a.map(|x| if args.degrees { x.to_radians() } else { x });
    let angles = AngleArgs { alpha: scale(args.alpha), beta: scale(args.beta), gamma: scale(args.gamma) };
    let file = match kio::generate(args.object, args.two_j, angles) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let result = open_output(args.output.as_ref())
        .map_err(kio::FileError::from)
        .and_then(|mut w| {
            kio::write(&mut w, &file, args.format.into())?;
            w.flush()?;
            Ok(())
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let tolerance = match resolve_tolerance(args.tol) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let range = match (args.two_j, args.two_j_range) {
        (Some(t), _) => t..=t,
        (None, Some(r)) => r,
        (None, None) => return usage_error("one of --two-j or --two-j-range is required"),
    };
    let cfg = SuiteConfig { tolerance, seed: args.seed, ..SuiteConfig::default() };
    let reports = verify::run_suite(range, &cfg);

    let written = open_output(args.output.as_ref()).and_then(|mut w| {
        for r in &reports {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        w.flush()
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_info(args: InfoArgs) -> ExitCode {
    let tolerance = match resolve_tolerance(args.tol) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let d = args.two_j as usize + 1;
    let (policy, threshold) = match tolerance {
        Some(t) => ("fixed", t),
        None => ("1e-12*d^2", Tolerance::Scaled.for_dim(d)),
    };
    println!("d={d}, labels {}", kio::label_range(args.two_j));
    println!("tolerance: {threshold:e} ({policy})");

    let started = Instant::now();
    std::hint::black_box(transform::kravchuk_transform_matrix(args.two_j));
    let k_ms = started.elapsed().as_secs_f64() * 1e3;
    let started = Instant::now();
    std::hint::black_box(transform::fourier_matrix(args.two_j));
    let f_ms = started.elapsed().as_secs_f64() * 1e3;

    match transform::kravchuk_eigen_multiplicities(args.two_j, 1e-8) {
        Ok(m) => println!(
            "K eigenvalue multiplicities: 1 -> {}, exp(2pi i/3) -> {}, exp(-2pi i/3) -> {}, other -> {}",
            m.one, m.omega, m.omega_bar, m.stray
        ),
        Err(e) => println!("K eigenvalue multiplicities: unavailable ({e})"),
    }
    println!("build time: K {k_ms:.3} ms, F {f_ms:.3} ms");
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Info(a) => cmd_info(a),
    }
}
