//! Monte Carlo drivers for small-eigenvalue-count probabilities and
//! determinant events, with Wilson confidence intervals, reference bound
//! values, and log-log scaling-exponent fits.
//!
//! Two event families are estimated:
//!
//! * **count events** — `P(C_eps(H - E) >= m)` for the full random model
//!   `H = H_0 + g * blockdiag(A(x))`, where `C_eps` counts eigenvalues in the
//!   open interval `(E - eps, E + eps)`;
//! * **determinant events** — `P(|det Ĥ| <= delta)` for the reduced model
//!   built from an integer shift `a`.
//!
//! Sweeps share one Hamiltonian draw across every threshold of a trial, so
//! event nesting (`{C >= m+1} ⊆ {C >= m}`, `{|det| <= d1} ⊆ {|det| <= d2}`)
//! holds exactly at the per-trial level, not just in the estimates. Trials
//! are keyed by `(master seed, trial index)` and run in parallel; aggregation
//! folds the collected per-trial results in index order, so identical inputs
//! give bit-identical reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::lu;
use crate::models::{self, ModelSpec};
use crate::rng::SampleSeed;

/// Normal quantile for two-sided 95% coverage, `Phi^{-1}(0.975)`.
pub const WILSON_Z: f64 = 1.959963984540054;

/// One Monte Carlo cell: an event threshold, its estimate, and the matching
/// reference bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    /// Event threshold: the spectral window half-width for count events, the
    /// determinant cutoff `delta` for determinant events.
    pub eps: f64,
    /// Level of the count event (`count >= m`); determinant events report 1.
    pub m: usize,
    /// Number of independent trials.
    pub trials: u64,
    /// Trials on which the event occurred.
    pub successes: u64,
    /// Point estimate `successes / trials`.
    pub p_hat: f64,
    /// Lower endpoint of the Wilson 95% interval.
    pub ci_low: f64,
    /// Upper endpoint of the Wilson 95% interval (rule of three `3/n` when
    /// no successes were seen).
    pub ci_high: f64,
    /// Reference bound evaluated at this cell, without its unknown leading
    /// constant: `|ln(N eps/g) * (N eps/g)^alpha|^m` for count events,
    /// `(2 K alpha)^N * ln^N(1/delta) * delta^alpha` for determinant events
    /// (`+inf` when the formula's regime does not apply, e.g. `g = 0` or
    /// `delta >= 1`).
    pub bound_value: f64,
    /// Base seed of the run; trial `t` used `seed.trial + t`.
    pub seed: SampleSeed,
}

impl McReport {
    /// Ratio `p_hat / bound_value`: the leading constant the bound would
    /// need at this cell. Reported for inspection only — the true constant
    /// is not explicit, so nothing asserts against this value. `0` when the
    /// bound is infinite; `NaN` for `0/0`.
    pub fn implied_constant(&self) -> f64 {
        self.p_hat / self.bound_value
    }
}

/// Wilson 95% score interval. Returns `(p_hat, ci_low, ci_high)`.
///
/// Zero-success cells fall back to the rule of three: `(0, 0, min(1, 3/n))`,
/// which keeps the upper endpoint informative where the score interval would
/// be driven purely by the continuity of the quadratic.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64, f64) {
    assert!(trials > 0, "wilson_interval needs at least one trial");
    assert!(successes <= trials, "more successes than trials");
    let n = trials as f64;
    if successes == 0 {
        return (0.0, 0.0, (3.0 / n).min(1.0));
    }
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (p, (center - half).max(0.0), (center + half).min(1.0))
}

fn check_trials(trials: u64, seed: SampleSeed) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    if seed.trial.checked_add(trials).is_none() {
        return Err(Error::invalid(format!(
            "seed.trial {} + trials {trials} overflows the trial counter",
            seed.trial
        )));
    }
    Ok(())
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("{name} grid is empty")));
    }
    for &v in grid {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!(
                "{name} grid values must be positive and finite; got {v}"
            )));
        }
    }
    Ok(())
}

fn trial_failure(t: u64) -> impl FnOnce(Error) -> Error {
    move |e| Error::TrialFailure { trial: t, source: Box::new(e) }
}

/// Count-event bound value `|ln(N eps / g) * (N eps / g)^alpha|^m`.
/// `g = 0` puts the argument at infinity and the value is `+inf`: the
/// formula claims nothing about deterministic models.
fn count_bound(sites: usize, g: f64, alpha: f64, eps: f64, m: usize) -> f64 {
    let x = sites as f64 * eps / g;
    (x.ln() * x.powf(alpha)).abs().powi(m as i32)
}

/// Determinant-event bound value `(2 K alpha)^N * ln^N(1/delta) * delta^alpha`
/// for `delta < 1`; `+inf` outside that regime (where `ln(1/delta) <= 0`
/// makes the formula meaningless while the event probability is 1).
fn det_bound(sites: usize, k: f64, alpha: f64, delta: f64) -> f64 {
    if delta >= 1.0 {
        return f64::INFINITY;
    }
    let n = sites as i32;
    (2.0 * k * alpha).powi(n) * delta.recip().ln().powi(n) * delta.powf(alpha)
}

/// Estimate `P(C_eps(H - E) >= m)` over a grid of window half-widths and a
/// list of levels, sharing one Hamiltonian draw per trial across every
/// `(eps, m)` cell. Reports are ordered level-major: all of `ms[0]` across
/// `eps_grid`, then all of `ms[1]`, and so on.
pub fn sweep_count_probability(
    spec: &ModelSpec,
    eps_grid: &[f64],
    ms: &[usize],
    trials: u64,
    seed: SampleSeed,
) -> Result<Vec<McReport>> {
    spec.validate()?;
    check_grid(eps_grid, "eps")?;
    check_trials(trials, seed)?;
    if ms.is_empty() {
        return Err(Error::invalid("list of levels m is empty"));
    }
    if let Some(&bad) = ms.iter().find(|&&m| m == 0) {
        return Err(Error::invalid(format!("levels m must be >= 1; got {bad}")));
    }
    let h0 = spec.hopping_matrix()?;
    let energy = spec.energy;

    let counts: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed_t = SampleSeed { master: seed.master, trial: seed.trial + t };
            let h = models::sample_with_hopping(spec, &h0, seed_t).map_err(trial_failure(t))?;
            let eigs = eigen::eigenvalues(&h);
            Ok(eps_grid
                .iter()
                .map(|&eps| eigen::count_in_sorted(&eigs, energy, eps))
                .collect())
        })
        .collect::<Result<_>>()?;

    let alpha = spec.site_dist.regularity_alpha;
    let mut reports = Vec::with_capacity(ms.len() * eps_grid.len());
    for &m in ms {
        for (e_idx, &eps) in eps_grid.iter().enumerate() {
            let successes = counts.iter().filter(|row| row[e_idx] >= m).count() as u64;
            let (p_hat, ci_low, ci_high) = wilson_interval(successes, trials);
            reports.push(McReport {
                eps,
                m,
                trials,
                successes,
                p_hat,
                ci_low,
                ci_high,
                bound_value: count_bound(spec.sites(), spec.coupling, alpha, eps, m),
                seed,
            });
        }
    }
    Ok(reports)
}

/// Single-cell count-event estimate; see [`sweep_count_probability`].
pub fn estimate_count_probability(
    spec: &ModelSpec,
    eps: f64,
    m: usize,
    trials: u64,
    seed: SampleSeed,
) -> Result<McReport> {
    let mut reports = sweep_count_probability(spec, &[eps], &[m], trials, seed)?;
    Ok(reports.pop().expect("one cell requested"))
}

/// Estimate `P(|det Ĥ| <= delta)` for the reduced model over a grid of
/// cutoffs, sharing one reduced draw (and one determinant) per trial. Each
/// report records the cutoff in `eps` and sets `m = 1`.
pub fn sweep_det_event(
    spec: &ModelSpec,
    a: i64,
    delta_grid: &[f64],
    trials: u64,
    seed: SampleSeed,
) -> Result<Vec<McReport>> {
    spec.validate()?;
    check_grid(delta_grid, "delta")?;
    check_trials(trials, seed)?;
    if a.abs() < 3 {
        return Err(Error::invalid(format!(
            "reduced sampling needs an integer shift with |a| >= 3; got {a}"
        )));
    }
    let h0 = spec.hopping_matrix()?;
    let h0_norm = eigen::operator_norm(&h0);
    if h0_norm > 0.5 + models::NORM_SLACK {
        return Err(Error::HoppingNormTooLarge { norm: h0_norm });
    }

    let dets: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed_t = SampleSeed { master: seed.master, trial: seed.trial + t };
            let h = models::sample_reduced_with(spec, &h0, a, seed_t).map_err(trial_failure(t))?;
            Ok(lu::hermitian_determinant(&h).value.abs())
        })
        .collect::<Result<_>>()?;

    let dist = &spec.site_dist;
    let mut reports = Vec::with_capacity(delta_grid.len());
    for &delta in delta_grid {
        let successes = dets.iter().filter(|&&d| d <= delta).count() as u64;
        let (p_hat, ci_low, ci_high) = wilson_interval(successes, trials);
        reports.push(McReport {
            eps: delta,
            m: 1,
            trials,
            successes,
            p_hat,
            ci_low,
            ci_high,
            bound_value: det_bound(
                spec.sites(),
                dist.regularity_k,
                dist.regularity_alpha,
                delta,
            ),
            seed,
        });
    }
    Ok(reports)
}

/// Single-cutoff determinant-event estimate; see [`sweep_det_event`].
pub fn estimate_det_event(
    spec: &ModelSpec,
    a: i64,
    delta: f64,
    trials: u64,
    seed: SampleSeed,
) -> Result<McReport> {
    let mut reports = sweep_det_event(spec, a, &[delta], trials, seed)?;
    Ok(reports.pop().expect("one cell requested"))
}

/// Least-squares fit of `log p_hat` against `log eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    /// The full grid, including cells excluded from the fit.
    pub eps_grid: Vec<f64>,
    /// Point estimates aligned with `eps_grid`.
    pub p_hats: Vec<f64>,
    /// Fitted slope: the empirical scaling exponent.
    pub exponent: f64,
    /// Fitted intercept (log of the empirical prefactor).
    pub intercept: f64,
    /// Coefficient of determination of the fit; `1` for an exact power law.
    pub r_squared: f64,
}

/// Fit a power law `p ≈ exp(intercept) * eps^exponent` to the reports by
/// least squares on log-log coordinates. Cells with `p_hat = 0` carry no
/// log information and are skipped; at least three positive cells on
/// distinct grid values are required.
pub fn fit_scaling(eps_grid: &[f64], reports: &[McReport]) -> Result<ScalingFit> {
    check_grid(eps_grid, "eps")?;
    if reports.len() != eps_grid.len() {
        return Err(Error::invalid(format!(
            "fit needs one report per grid point; got {} reports for {} points",
            reports.len(),
            eps_grid.len()
        )));
    }
    for (&eps, r) in eps_grid.iter().zip(reports) {
        if (r.eps - eps).abs() > 1e-9 * eps.max(1.0) {
            return Err(Error::invalid(format!(
                "report at eps {} does not match grid point {eps}",
                r.eps
            )));
        }
    }
    let points: Vec<(f64, f64)> = eps_grid
        .iter()
        .zip(reports)
        .filter(|(_, r)| r.p_hat > 0.0)
        .map(|(&eps, r)| (eps.ln(), r.p_hat.ln()))
        .collect();
    if points.len() < 3 {
        return Err(Error::InsufficientPositivePoints {
            context: "log-log fit",
            available: points.len(),
            needed: 3,
        });
    }
    let n = points.len() as f64;
    let xbar = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid(
            "log-log fit needs at least two distinct eps values among positive cells",
        ));
    }
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - ybar) * (p.1 - ybar)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let resid = p.1 - (intercept + exponent * p.0);
            resid * resid
        })
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(ScalingFit {
        eps_grid: eps_grid.to_vec(),
        p_hats: reports.iter().map(|r| r.p_hat).collect(),
        exponent,
        intercept,
        r_squared,
    })
}

/// Two-slope comparison of one- and two-level count events on shared samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinamiCheck {
    /// Fitted scaling exponent of `P(C >= 1)`.
    pub slope_m1: f64,
    /// Fitted scaling exponent of `P(C >= 2)`; `NaN` when too few grid
    /// cells had two-level successes to fit (expected at small `eps`).
    pub slope_m2: f64,
    /// Per-cell reports for `m = 1`, in grid order.
    pub reports_m1: Vec<McReport>,
    /// Per-cell reports for `m = 2`, in grid order.
    pub reports_m2: Vec<McReport>,
}

impl MinamiCheck {
    /// Whether the two-level events decay at least as fast as the one-level
    /// events, within Monte Carlo noise: `slope_m2 >= slope_m1 - 0.2`.
    /// `false` when `slope_m2` could not be fitted.
    pub fn gap_ok(&self) -> bool {
        self.slope_m2 >= self.slope_m1 - 0.2
    }
}

/// Run `m = 1` and `m = 2` count sweeps on shared samples and fit both
/// scaling exponents. The one-level fit must succeed; a two-level fit with
/// fewer than three positive cells is reported as `slope_m2 = NaN` rather
/// than an error, since zero-success cells are expected deep in the tail.
/// Deterministic models (`coupling = 0`) are rejected: their cell
/// probabilities are all 0 or 1 and no slope is defined.
pub fn minami_gap_check(
    spec: &ModelSpec,
    eps_grid: &[f64],
    trials: u64,
    seed: SampleSeed,
) -> Result<MinamiCheck> {
    if spec.coupling == 0.0 {
        return Err(Error::invalid(
            "minami gap check needs a random model (coupling > 0); \
             success probabilities are degenerate when the disorder is off",
        ));
    }
    let reports = sweep_count_probability(spec, eps_grid, &[1, 2], trials, seed)?;
    let (reports_m1, reports_m2) = reports.split_at(eps_grid.len());
    let fit_m1 = fit_scaling(eps_grid, reports_m1)?;
    let slope_m2 = match fit_scaling(eps_grid, reports_m2) {
        Ok(fit) => fit.exponent,
        Err(Error::InsufficientPositivePoints { .. }) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(MinamiCheck {
        slope_m1: fit_m1.exponent,
        slope_m2,
        reports_m1: reports_m1.to_vec(),
        reports_m2: reports_m2.to_vec(),
    })
}

/// Header line for the CSV report format.
pub fn csv_header() -> &'static str {
    "eps,m,trials,successes,p_hat,ci_low,ci_high,bound_value,seed"
}

/// One CSV line for a report. Floats print in shortest round-trip form; the
/// seed column carries the master seed (the base trial index lives in the
/// JSON form of the report).
pub fn csv_row(report: &McReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        report.eps,
        report.m,
        report.trials,
        report.successes,
        report.p_hat,
        report.ci_low,
        report.ci_high,
        report.bound_value,
        report.seed.master
    )
}

/// Render reports as a CSV document with header.
pub fn to_csv_string(reports: &[McReport]) -> String {
    let mut out = String::from(csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&csv_row(r));
        out.push('\n');
    }
    out
}

/// Write reports to a CSV file.
pub fn write_csv(path: &str, reports: &[McReport]) -> Result<()> {
    std::fs::write(path, to_csv_string(reports)).map_err(|e| Error::Io {
        path: path.to_string(),
        what: e.to_string(),
    })
}
