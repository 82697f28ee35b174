//! `snailbudget` command line.
//!
//! Exit codes: 0 success, 1 infeasible allocation or failed verification,
//! 2 bad config or flags (nothing written), 3 I/O failure, 4 fidelity target
//! unreachable.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use snailbudget::allocation::{
    maximize_delta, verify_allocation, AllocationProblem, AllocationResult, SnailConstraints,
};
use snailbudget::budget::{run_budget, BudgetOptions, BudgetReport, BudgetStatus};
use snailbudget::params::log_space;
use snailbudget::sweep::{emit_grid_csv, emit_heatmap_svg, fidelity_grid};
use snailbudget::{Band, Config};

const EXIT_OK: u8 = 0;
const EXIT_INFEASIBLE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_UNREACHABLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "snailbudget",
    version,
    about = "Fidelity sweeps and frequency allocation for SNAIL-coupled qubit modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity grid over pump amplitude and conversion separation.
    Sweep(SweepArgs),
    /// Maximize the conversion separation of a qubit frequency allocation.
    Allocate(AllocateArgs),
    /// Pump amplitude, separation threshold and allocation from one config.
    Budget(BudgetArgs),
    /// Re-check an allocation or budget record.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_csv: PathBuf,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    eta_min: Option<f64>,
    #[arg(long)]
    eta_max: Option<f64>,
    #[arg(long)]
    eta_points: Option<usize>,
    /// Hz.
    #[arg(long)]
    delta_min: Option<f64>,
    /// Hz.
    #[arg(long)]
    delta_max: Option<f64>,
    #[arg(long)]
    delta_points: Option<usize>,
}

#[derive(Args)]
struct AllocateArgs {
    #[arg(long)]
    n: usize,
    /// `lo:hi` in Hz, e.g. `4e9:5e9`.
    #[arg(long, value_parser = parse_band)]
    band: Band,
    /// Hz.
    #[arg(long)]
    min_qubit_sep: f64,
    /// SNAIL frequency in Hz; needs --snail-sep.
    #[arg(long, requires = "snail_sep")]
    snail_freq: Option<f64>,
    /// Minimum qubit-SNAIL separation in Hz.
    #[arg(long, requires = "snail_freq")]
    snail_sep: Option<f64>,
    /// Minimum separation between SNAIL-qubit and qubit-qubit conversions in Hz.
    #[arg(long, requires = "snail_freq")]
    snail_conv_sep: Option<f64>,
    /// Hz.
    #[arg(long, default_value_t = 1e6)]
    resolution: f64,
    /// Allocation record; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long)]
    config: PathBuf,
    /// Budget record; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the separation search and use this value (Hz).
    #[arg(long)]
    min_delta2_override: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Allocation or budget record.
    #[arg(long)]
    result: PathBuf,
    /// Separation to check against (Hz); defaults to the record's own.
    #[arg(long)]
    delta2: Option<f64>,
}

fn parse_band(s: &str) -> Result<Band, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|e| format!("band lower edge: {e}"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|e| format!("band upper edge: {e}"))?;
    Band::new(lo, hi).map_err(|e| e.to_string())
}

/// Error carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn io(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: EXIT_USAGE,
            error: e.into(),
        })
    }

    fn io(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: EXIT_IO,
            error: e.into(),
        })
    }
}

/// Library errors: I/O maps to 3, everything else is a bad input.
fn lib<T>(r: snailbudget::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure {
        code: if matches!(e, snailbudget::Error::Io { .. }) {
            EXIT_IO
        } else {
            EXIT_USAGE
        },
        error: e.into(),
    })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .io()
}

fn load_config(path: &Path) -> Result<Config, Failure> {
    let text = read_text(path)?;
    Config::parse(&text)
        .with_context(|| format!("config {}", path.display()))
        .usage()
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .io(),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing standard output")
            .io(),
    }
}

fn cmd_sweep(a: SweepArgs) -> Result<u8, Failure> {
    let mut cfg = load_config(&a.config)?;
    let sw = &mut cfg.sweep;
    sw.eta_min = a.eta_min.unwrap_or(sw.eta_min);
    sw.eta_max = a.eta_max.unwrap_or(sw.eta_max);
    sw.eta_points = a.eta_points.unwrap_or(sw.eta_points);
    sw.delta_min_hz = a.delta_min.unwrap_or(sw.delta_min_hz);
    sw.delta_max_hz = a.delta_max.unwrap_or(sw.delta_max_hz);
    sw.delta_points = a.delta_points.unwrap_or(sw.delta_points);
    if !(sw.eta_min > 0.0 && sw.eta_min <= sw.eta_max && sw.eta_points > 0) {
        return Err(anyhow!("invalid η axis")).usage();
    }
    if !(sw.delta_min_hz > 0.0 && sw.delta_min_hz <= sw.delta_max_hz && sw.delta_points > 0) {
        return Err(anyhow!("invalid separation axis")).usage();
    }
    let etas = log_space(sw.eta_min, sw.eta_max, sw.eta_points);
    let deltas = log_space(sw.delta_min_hz, sw.delta_max_hz, sw.delta_points);
    let grid = lib(fidelity_grid(&cfg, &etas, &deltas))?;
    lib(emit_grid_csv(&grid, &a.out_csv))?;
    if let Some(svg) = &a.out_svg {
        lib(emit_heatmap_svg(&grid, svg))?;
    }
    Ok(EXIT_OK)
}

fn cmd_allocate(a: AllocateArgs) -> Result<u8, Failure> {
    let mut problem = lib(AllocationProblem::new(a.n, a.band, a.min_qubit_sep))?;
    if let (Some(snail_freq), Some(delta_s)) = (a.snail_freq, a.snail_sep) {
        problem = lib(problem.with_snail(SnailConstraints {
            snail_freq,
            delta_s,
            delta_s_conv: a.snail_conv_sep,
        }))?;
    }
    let result = lib(maximize_delta(&problem, a.resolution))?;
    if result.feasible && !result.verify().ok {
        return Err(anyhow!("solver output failed verification")).usage();
    }
    emit(a.out.as_deref(), &result.to_toml_string())?;
    if result.feasible {
        eprintln!(
            "achieved conversion separation {} Hz ({} branch nodes, {} LP iterations)",
            result.achieved_delta_hz, result.stats.branch_nodes, result.stats.lp_iterations
        );
        Ok(EXIT_OK)
    } else {
        eprintln!(
            "infeasible: {} qubits do not fit the band at the requested separation",
            a.n
        );
        Ok(EXIT_INFEASIBLE)
    }
}

fn cmd_budget(a: BudgetArgs) -> Result<u8, Failure> {
    let cfg = load_config(&a.config)?;
    let report = lib(run_budget(
        &cfg,
        BudgetOptions {
            min_delta2_override: a.min_delta2_override,
        },
    ))?;
    emit(a.out.as_deref(), &report.to_toml_string())?;
    Ok(match report.status {
        BudgetStatus::Met => EXIT_OK,
        BudgetStatus::AllocationInfeasible => {
            eprintln!("allocation cannot provide the required conversion separation");
            EXIT_INFEASIBLE
        }
        BudgetStatus::FidelityUnreachable => {
            eprintln!(
                "target fidelity {} unreachable on the swept window",
                cfg.gate.target_fidelity
            );
            EXIT_UNREACHABLE
        }
    })
}

fn cmd_verify(a: VerifyArgs) -> Result<u8, Failure> {
    let text = read_text(&a.result)?;
    let (alloc, own_delta) = match AllocationResult::from_toml_str(&text) {
        Ok(r) => {
            let d = r.achieved_delta_hz.min(r.searched_delta_hz);
            (r, d)
        }
        Err(alloc_err) => {
            let report = BudgetReport::from_toml_str(&text)
                .map_err(|_| anyhow!("{alloc_err}"))
                .usage()?;
            let d = report.min_delta2_hz;
            match (report.allocation, d) {
                (Some(r), Some(d)) => (r, d),
                _ => return Err(anyhow!("budget record carries no allocation")).usage(),
            }
        }
    };
    if !alloc.feasible {
        eprintln!("record is marked infeasible");
        return Ok(EXIT_INFEASIBLE);
    }
    let delta2 = a.delta2.unwrap_or(own_delta);
    let report = verify_allocation(&alloc.freqs_hz, &alloc.problem, delta2);
    emit(None, &report.to_toml_string())?;
    if report.ok {
        Ok(EXIT_OK)
    } else {
        eprintln!("{} violation(s)", report.violations.len());
        Ok(EXIT_INFEASIBLE)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let outcome = match cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Allocate(a) => cmd_allocate(a),
        Command::Budget(a) => cmd_budget(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
