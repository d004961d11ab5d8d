use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thinset::harness::{emit_report, run_experiment, ExperimentConfig, Format, HarnessError, Mode};

#[derive(Parser)]
#[command(name = "thinset", version, about = "Point-count experiments on weighted covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integral points in the box |y| <= B^e, |x_i| <= B
    Count(Common),
    /// Smallest auxiliary polynomial through the box solutions
    Aux(Common),
    /// Twisted lines meeting the box (n = 2)
    Twisted(Common),
    /// Monomials of weighted degree M; --B lists the degrees
    Monomials(Common),
    /// Points of the affine cone mod p; --B lists the primes
    Modp(Common),
    /// Enumeration checked against a full scan of the box
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Polynomial in Y, X1, ..., Xn, e.g. "Y^2 - X1*X2"
    #[arg(long)]
    poly: Option<String>,
    /// Weight of Y
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Number of X variables
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Sweep values: repeat the flag, separate with commas, or give a:b[:step]
    #[arg(long = "B", value_delimiter = ',', required = true)]
    b: Vec<String>,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long, default_value_t = thinset::irreducible::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Smallest prime examined by the bad-prime estimate (default 27 d^4)
    #[arg(long)]
    sigma_threshold: Option<u64>,
    /// Weights for monomials mode, e.g. 2,1,1
    #[arg(long, value_delimiter = ',')]
    weights: Option<Vec<u64>>,
    /// Degree cap for the auxiliary polynomial search
    #[arg(long)]
    m_max: Option<u64>,
    /// Record wall-clock times (output is then not reproducible)
    #[arg(long)]
    timings: bool,
}

fn parse_values(items: &[String]) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for item in items {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad --B value {item:?}"));
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, b] | [a, b, _] => {
                let (a, b) = (num(a)?, num(b)?);
                let step = if parts.len() == 3 { num(parts[2])? } else { 1 };
                if step == 0 || a > b {
                    return Err(format!("bad range {item:?}"));
                }
                out.extend((a..=b).step_by(step as usize));
            }
            _ => return Err(format!("bad --B value {item:?}")),
        }
    }
    Ok(out)
}

fn config(mode: Mode, c: Common) -> Result<ExperimentConfig, String> {
    let poly = match (mode, c.poly) {
        (_, Some(p)) => p,
        (Mode::Monomials, None) => String::new(),
        (_, None) => return Err("--poly is required".into()),
    };
    let mut cfg = ExperimentConfig::new(mode, &poly, c.e, c.n, parse_values(&c.b)?);
    cfg.budget_nodes = c.budget_nodes;
    cfg.budget_seconds = c.budget_seconds;
    cfg.seed = c.seed;
    cfg.format = c.format;
    cfg.out = c.out;
    cfg.threads = c.threads;
    cfg.sigma_threshold = c.sigma_threshold;
    cfg.weights = c.weights;
    cfg.m_max = c.m_max;
    cfg.timings = c.timings;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, common) = match cli.command {
        Command::Count(c) => (Mode::Count, c),
        Command::Aux(c) => (Mode::Aux, c),
        Command::Twisted(c) => (Mode::Twisted, c),
        Command::Monomials(c) => (Mode::Monomials, c),
        Command::Modp(c) => (Mode::Modp, c),
        Command::Verify(c) => (Mode::Verify, c),
    };
    let cfg = match config(mode, common) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(3);
        }
    };
    let report = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                HarnessError::Hypothesis(_) => 1,
                HarnessError::Config(_) | HarnessError::Poly(_) => 3,
                _ => 1,
            });
        }
    };
    if let Err(e) = emit_report(&report, cfg.format, cfg.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if report.all_rows_over_budget() {
        eprintln!("every row exhausted its budget");
        return ExitCode::from(2);
    }
    if report.failed_rows() > 0 {
        eprintln!("{} row(s) failed a checked property", report.failed_rows());
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
