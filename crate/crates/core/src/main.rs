//! Batch experiment runner: JSON configs in, CSV/JSON reports out, plus the
//! seeded property-suite driver.
//!
//! Exit codes: 0 success, 1 numerical/runtime failure (including failing
//! properties under `verify`), 2 configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use spectral_count::config::{
    self, CountConfig, DetEventConfig, ReduceConfig, WegnerConfig, WitnessConfig,
};
use spectral_count::rng::SampleSeed;
use spectral_count::verify::{self, Area, PropertyReport};
use spectral_count::{eigen, reduction, wegner, witness, Error, Result};

#[derive(Parser)]
#[command(
    name = "spectral-count",
    version,
    about = "Eigenvalue counting near an energy: certificates, shift reductions, and Monte Carlo spectral statistics"
)]
struct Cli {
    /// Worker threads for Monte Carlo sweeps (default: SPECTRAL_COUNT_JOBS,
    /// then machine parallelism).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count eigenvalues in (center-eps, center+eps) for each eps on a grid.
    Count(CountArgs),
    /// Search for a counting certificate (witness pair or block witness).
    Witness(WitnessArgs),
    /// Reduce a pair (B1, B2) by an integer shift and report the count sandwich.
    Reduce(ReduceArgs),
    /// Monte Carlo sweep of P(C_eps(H) >= m) with scaling fits.
    Wegner(WegnerArgs),
    /// Monte Carlo sweep of P(|det H_hat| <= delta) for the reduced sampler.
    DetEvent(DetEventArgs),
    /// Run the seeded property suite and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Path to a JSON config (see `CountConfig`).
    #[arg(long)]
    config: PathBuf,
    /// Output stem: writes <stem>.csv and <stem>.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the effective config as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output stem: writes <stem>.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct WegnerArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's trial count.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct DetEventArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated areas to run: core,witness,reduction,models,mc
    /// (default: all).
    #[arg(long)]
    areas: Option<String>,
    /// Seed for instance generation; failing runs replay with the same seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override every property's instance count (default: per-property).
    #[arg(long)]
    trials: Option<usize>,
    /// Output stem: writes <stem>.json with the full report list.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Test fixture: append one deliberately failing report to exercise the
    /// failure path end to end.
    #[arg(long, hide = true)]
    fixture_fail: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                2
            } else {
                1
            }
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8> {
    init_worker_pool(cli.jobs)?;
    match cli.command {
        Command::Count(args) => run_count(args),
        Command::Witness(args) => run_witness(args),
        Command::Reduce(args) => run_reduce(args),
        Command::Wegner(args) => run_wegner(args),
        Command::DetEvent(args) => run_det_event(args),
        Command::Verify(args) => run_verify(args),
    }
}

/// Size rayon's global pool from --jobs, falling back to the
/// SPECTRAL_COUNT_JOBS environment variable, then rayon's own default
/// (machine parallelism).
fn init_worker_pool(jobs: Option<u32>) -> Result<()> {
    let jobs = match jobs {
        Some(j) => j as usize,
        None => match std::env::var("SPECTRAL_COUNT_JOBS") {
            Ok(v) => v.parse::<usize>().ok().filter(|&j| j >= 1).ok_or_else(|| {
                Error::Config {
                    what: format!("SPECTRAL_COUNT_JOBS must be a positive integer; got {v:?}"),
                }
            })?,
            Err(_) => return Ok(()),
        },
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Error::Config {
            what: format!("worker pool: {e}"),
        })
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

/// `--out results.csv`, `--out results.json`, and `--out results` all mean
/// the stem `results`.
fn out_stem(out: &Path) -> PathBuf {
    match out.extension().and_then(|e| e.to_str()) {
        Some("csv") | Some("json") => out.with_extension(""),
        _ => out.to_path_buf(),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.display().to_string(),
        what: e.to_string(),
    })
}

/// Write `<stem>.csv` (when given) and `<stem>.json`, or print the JSON to
/// stdout when no output stem was requested.
fn emit(out: Option<&Path>, csv: Option<&str>, json: &str) -> Result<()> {
    match out {
        Some(out) => {
            let stem = out_stem(out);
            if let Some(csv) = csv {
                write_file(&stem.with_extension("csv"), csv)?;
            }
            write_file(&stem.with_extension("json"), json)?;
            Ok(())
        }
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(Error::from)
}

fn dump_config<T: Serialize>(cfg: &T) -> Result<u8> {
    println!("{}", to_pretty(cfg)?);
    Ok(0)
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CountRow {
    eps: f64,
    count: usize,
}

#[derive(Serialize)]
struct CountSummary {
    dim: usize,
    center: f64,
    rows: Vec<CountRow>,
}

fn run_count(args: CountArgs) -> Result<u8> {
    let cfg: CountConfig = config::load(&args.config)?;
    if args.dump_config {
        return dump_config(&cfg);
    }
    cfg.validate()?;
    let a = cfg.matrix()?;
    let eigs = eigen::eigenvalues(&a);
    let rows: Vec<CountRow> = cfg
        .eps
        .iter()
        .map(|&eps| CountRow {
            eps,
            count: eigen::count_in_sorted(&eigs, cfg.center, eps),
        })
        .collect();

    let mut csv = String::from("eps,count\n");
    for row in &rows {
        csv.push_str(&format!("{},{}\n", row.eps, row.count));
    }
    let summary = CountSummary {
        dim: a.dim(),
        center: cfg.center,
        rows,
    };
    emit(args.out.as_deref(), Some(&csv), &to_pretty(&summary)?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct WitnessMiss {
    found: bool,
    eps: f64,
    m: usize,
    #[serde(rename = "K")]
    k: f64,
}

#[derive(Serialize)]
struct BlockWitnessSummary {
    found: bool,
    eps: f64,
    m: usize,
    block: usize,
    #[serde(rename = "K")]
    k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<Vec<usize>>,
}

fn run_witness(args: WitnessArgs) -> Result<u8> {
    let cfg: WitnessConfig = config::load(&args.config)?;
    if args.dump_config {
        return dump_config(&cfg);
    }
    cfg.validate()?;
    let a = cfg.matrix()?;
    let k = match cfg.strength {
        Some(k) => k,
        None => witness::counting_constant(cfg.m, a.dim())?.k,
    };
    let json = match cfg.block {
        Some(block) => {
            let gamma = witness::find_block_witness(&a, cfg.eps, cfg.m, block, k)?;
            to_pretty(&BlockWitnessSummary {
                found: gamma.is_some(),
                eps: cfg.eps,
                m: cfg.m,
                block,
                k,
                gamma: gamma.map(|g| g.members().to_vec()),
            })?
        }
        None => match witness::find_witness_pair(&a, cfg.eps, cfg.m, k)? {
            Some(cert) => to_pretty(&cert)?,
            None => to_pretty(&WitnessMiss {
                found: false,
                eps: cfg.eps,
                m: cfg.m,
                k,
            })?,
        },
    };
    emit(args.out.as_deref(), None, &json)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// reduce
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SandwichRow {
    eps: f64,
    low: usize,
    mid: usize,
    high: usize,
    holds: bool,
}

#[derive(Serialize)]
struct ReduceSummary {
    l: usize,
    a: i64,
    nu: f64,
    lower_scale: f64,
    upper_scale: f64,
    rows: Vec<SandwichRow>,
}

fn run_reduce(args: ReduceArgs) -> Result<u8> {
    let cfg: ReduceConfig = config::load(&args.config)?;
    if args.dump_config {
        return dump_config(&cfg);
    }
    cfg.validate()?;
    let b1 = cfg.matrix_b1()?;
    let b2 = cfg.matrix_b2()?;
    let red = reduction::reduce(&b1, &b2)?;
    let rows: Vec<SandwichRow> = cfg
        .eps
        .iter()
        .map(|&eps| {
            let chk = reduction::count_sandwich_check(&b1, &b2, eps)?;
            Ok(SandwichRow {
                eps,
                low: chk.low,
                mid: chk.mid,
                high: chk.high,
                holds: chk.holds(),
            })
        })
        .collect::<Result<_>>()?;

    let mut csv = String::from("eps,low,mid,high,holds\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.eps, row.low, row.mid, row.high, row.holds
        ));
    }
    let summary = ReduceSummary {
        l: red.l,
        a: red.a,
        nu: red.nu,
        lower_scale: red.lower_scale,
        upper_scale: red.upper_scale,
        rows,
    };
    emit(args.out.as_deref(), Some(&csv), &to_pretty(&summary)?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// wegner / det-event
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FitSummary {
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    intercept: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fit_error: Option<String>,
}

fn fit_chunk(m: usize, grid: &[f64], reports: &[wegner::McReport]) -> FitSummary {
    match wegner::fit_scaling(grid, reports) {
        Ok(f) => FitSummary {
            m,
            exponent: Some(f.exponent),
            intercept: Some(f.intercept),
            r_squared: Some(f.r_squared),
            fit_error: None,
        },
        Err(e) => FitSummary {
            m,
            exponent: None,
            intercept: None,
            r_squared: None,
            fit_error: Some(e.to_string()),
        },
    }
}

#[derive(Serialize)]
struct WegnerSummary {
    trials: u64,
    seed: u64,
    fits: Vec<FitSummary>,
    /// `slope(m=2) - slope(m=1)` when both fits succeeded.
    #[serde(skip_serializing_if = "Option::is_none")]
    minami_gap: Option<f64>,
    reports: Vec<wegner::McReport>,
}

fn run_wegner(args: WegnerArgs) -> Result<u8> {
    let mut cfg: WegnerConfig = config::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if args.dump_config {
        return dump_config(&cfg);
    }
    cfg.validate()?;
    let model = cfg.model()?;
    let seed = SampleSeed {
        master: cfg.seed,
        trial: 0,
    };
    let reports = wegner::sweep_count_probability(&model, &cfg.eps, &cfg.m, cfg.trials, seed)?;

    // reports are ordered m-outer / eps-inner
    let fits: Vec<FitSummary> = cfg
        .m
        .iter()
        .enumerate()
        .map(|(mi, &m)| {
            let chunk = &reports[mi * cfg.eps.len()..(mi + 1) * cfg.eps.len()];
            fit_chunk(m, &cfg.eps, chunk)
        })
        .collect();
    let slope_of = |level: usize| -> Option<f64> {
        fits.iter().find(|f| f.m == level).and_then(|f| f.exponent)
    };
    let minami_gap = match (slope_of(1), slope_of(2)) {
        (Some(s1), Some(s2)) => Some(s2 - s1),
        _ => None,
    };

    let csv = wegner::to_csv_string(&reports);
    let summary = WegnerSummary {
        trials: cfg.trials,
        seed: cfg.seed,
        fits,
        minami_gap,
        reports,
    };
    emit(args.out.as_deref(), Some(&csv), &to_pretty(&summary)?)?;
    Ok(0)
}

#[derive(Serialize)]
struct DetEventSummary {
    trials: u64,
    seed: u64,
    shift: i64,
    fit: FitSummary,
    /// Largest `p_hat / bound_value` over the grid (reported, not asserted).
    max_implied_constant: f64,
    reports: Vec<wegner::McReport>,
}

fn run_det_event(args: DetEventArgs) -> Result<u8> {
    let mut cfg: DetEventConfig = config::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if args.dump_config {
        return dump_config(&cfg);
    }
    cfg.validate()?;
    let model = cfg.model()?;
    let seed = SampleSeed {
        master: cfg.seed,
        trial: 0,
    };
    let reports = wegner::sweep_det_event(&model, cfg.shift, &cfg.delta, cfg.trials, seed)?;
    let fit = fit_chunk(1, &cfg.delta, &reports);
    let max_implied_constant = reports
        .iter()
        .map(|r| r.implied_constant())
        .fold(0.0_f64, f64::max);

    let csv = wegner::to_csv_string(&reports);
    let summary = DetEventSummary {
        trials: cfg.trials,
        seed: cfg.seed,
        shift: cfg.shift,
        fit,
        max_implied_constant,
        reports,
    };
    emit(args.out.as_deref(), Some(&csv), &to_pretty(&summary)?)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn parse_areas(arg: Option<&str>) -> Result<Vec<Area>> {
    match arg {
        None => Ok(Area::all().to_vec()),
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect(),
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8> {
    let areas = parse_areas(args.areas.as_deref())?;
    if areas.is_empty() {
        return Err(Error::Config {
            what: "no areas selected".into(),
        });
    }
    let mut reports = verify::run_suite(&areas, args.trials, args.seed);
    if args.fixture_fail {
        reports.push(PropertyReport {
            name: "fixture_forced_failure",
            area: Area::Core,
            instances: 1,
            violations: 1,
            worst_margin: -1.0,
            pass: false,
            details: "deliberate failure injected by --fixture-fail".into(),
        });
    }

    println!(
        "{:<4} {:<9} {:<46} {:>9} {:>10} {:>13}",
        "", "area", "property", "instances", "violations", "worst margin"
    );
    for r in &reports {
        println!(
            "{:<4} {:<9} {:<46} {:>9} {:>10} {:>13.3e}",
            if r.pass { "ok" } else { "FAIL" },
            r.area.to_string(),
            r.name,
            r.instances,
            r.violations,
            r.worst_margin,
        );
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    println!(
        "{passed}/{} properties passed (seed {})",
        reports.len(),
        args.seed
    );

    if let Some(out) = &args.out {
        let stem = out_stem(out);
        write_file(&stem.with_extension("json"), &to_pretty(&reports)?)?;
    }

    match reports.iter().find(|r| !r.pass) {
        None => Ok(0),
        Some(first) => {
            eprintln!(
                "first failing property: {} ({} violations, worst margin {:.3e}); \
                 replay with --seed {}",
                first.name, first.violations, first.worst_margin, args.seed
            );
            eprintln!("  details: {}", first.details);
            Ok(1)
        }
    }
}
