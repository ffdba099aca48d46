//! Seeded property suite: every inequality and contract the library claims,
//! exercised on freshly generated instances and reported with counts and
//! margins.
//!
//! Each property runs a configurable number of instances keyed by
//! `(seed, instance index)` and reports the number of violations plus the
//! worst slack seen (`worst_margin >= 0` means every instance held, with
//! that much room to spare). Properties never panic on violations — they
//! report, so a runner can print the whole table before failing.
//!
//! The default instance counts target a sub-minute full run; acceptance
//! harnesses call the same runners with larger counts.

use serde::Serialize;

use crate::eigen;
use crate::error::Result;
use crate::lu;
use crate::matrix::{ComplexMatrix, HermitianMatrix, IndexSet, MatrixDocument};
use crate::models::{
    self, GraphSpec, HoppingSpec, ModelFamily, ModelSpec, SiteDistribution,
};
use crate::reduction;
use crate::rng::{SampleSeed, Stream};
use crate::schur;
use crate::synth;
use crate::wegner;
use crate::witness;

/// Property grouping, mirroring the library's module areas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Area {
    /// Matrix, eigensolver, LU, and Schur-complement identities.
    Core,
    /// Witness-pair counting certificates.
    Witness,
    /// Shift-based reduction and count comparisons.
    Reduction,
    /// Random model samplers and regularity checkers.
    Models,
    /// Monte Carlo drivers and their statistics.
    Mc,
}

impl Area {
    /// All areas, in display order.
    pub fn all() -> [Area; 5] {
        [Area::Core, Area::Witness, Area::Reduction, Area::Models, Area::Mc]
    }
}

impl std::fmt::Display for Area {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Area::Core => "core",
            Area::Witness => "witness",
            Area::Reduction => "reduction",
            Area::Models => "models",
            Area::Mc => "mc",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Area {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "core" => Ok(Area::Core),
            "witness" => Ok(Area::Witness),
            "reduction" => Ok(Area::Reduction),
            "models" => Ok(Area::Models),
            "mc" => Ok(Area::Mc),
            other => Err(crate::Error::invalid(format!(
                "unknown area {other:?}; expected one of core, witness, reduction, models, mc"
            ))),
        }
    }
}

/// Outcome of one property run.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    /// Stable property name.
    pub name: &'static str,
    /// Which area the property belongs to.
    pub area: Area,
    /// Instances exercised.
    pub instances: usize,
    /// Instances on which the property failed.
    pub violations: usize,
    /// Smallest slack observed across instances; negative (or NaN) iff some
    /// instance violated the property.
    pub worst_margin: f64,
    /// `violations == 0`.
    pub pass: bool,
    /// Extra context: reported constants, branch statistics, and the first
    /// few violating instances.
    pub details: String,
}

/// One registered property: its identity and its runner. `run` receives
/// `(instances, seed)`; a property is free to interpret `instances` as
/// points or repetitions where that is the natural unit (documented per
/// property in `details`).
pub struct PropertyDef {
    pub name: &'static str,
    pub area: Area,
    pub default_instances: usize,
    runner: fn(usize, u64) -> PropertyReport,
}

impl PropertyDef {
    /// Run with an explicit instance count.
    pub fn run(&self, instances: usize, seed: u64) -> PropertyReport {
        (self.runner)(instances, seed)
    }

    /// Run with the registered default count.
    pub fn run_default(&self, seed: u64) -> PropertyReport {
        (self.runner)(self.default_instances, seed)
    }
}

// ---------------------------------------------------------------------------
// Tally plumbing
// ---------------------------------------------------------------------------

struct Tally {
    instances: usize,
    violations: usize,
    worst_margin: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            instances: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            failures: Vec::new(),
        }
    }

    /// Record one instance; `margin >= 0` passes, anything else (including
    /// NaN) is a violation.
    fn record(&mut self, index: usize, margin: f64, what: &str) {
        self.instances += 1;
        if margin < self.worst_margin || self.worst_margin.is_nan() {
            self.worst_margin = margin;
        }
        if !(margin >= 0.0) {
            self.violations += 1;
            if self.failures.len() < 3 {
                self.failures
                    .push(format!("instance {index}: margin {margin:.3e} ({what})"));
            }
        }
    }

    fn finish(self, name: &'static str, area: Area, mut details: String) -> PropertyReport {
        if !self.failures.is_empty() {
            if !details.is_empty() {
                details.push_str("; ");
            }
            details.push_str(&self.failures.join("; "));
        }
        PropertyReport {
            name,
            area,
            instances: self.instances,
            violations: self.violations,
            worst_margin: if self.instances == 0 { f64::NAN } else { self.worst_margin },
            pass: self.violations == 0 && self.instances > 0,
            details,
        }
    }
}

fn instance_stream(seed: u64, index: usize, label: &str) -> Stream {
    SampleSeed { master: seed, trial: index as u64 }.stream(label, 0)
}

/// Run `f` per instance, mapping `Err` to a definite violation.
fn for_instances(
    tally: &mut Tally,
    instances: usize,
    seed: u64,
    label: &str,
    mut f: impl FnMut(usize, &mut Stream) -> Result<f64>,
) {
    for i in 0..instances {
        let mut stream = instance_stream(seed, i, label);
        match f(i, &mut stream) {
            Ok(margin) => tally.record(i, margin, "margin"),
            Err(e) => tally.record(i, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
}

fn bool_margin(ok: bool) -> f64 {
    if ok { 1.0 } else { -1.0 }
}

// ---------------------------------------------------------------------------
// Shared instance builders
// ---------------------------------------------------------------------------

fn anderson_spec(n: usize, g: f64) -> ModelSpec {
    ModelSpec {
        family: ModelFamily::Anderson,
        graph: GraphSpec::path(n).expect("path graph"),
        block_size: 1,
        coupling: g,
        energy: 0.0,
        site_dist: SiteDistribution::uniform_interval(1.0).expect("uniform interval"),
        hopping: HoppingSpec::Default,
    }
}

fn bdg_spec(n: usize, g: f64, hopping_scale: f64) -> ModelSpec {
    ModelSpec {
        family: ModelFamily::Bdg,
        graph: GraphSpec::path(n).expect("path graph"),
        block_size: 2,
        coupling: g,
        energy: 0.0,
        site_dist: SiteDistribution::uniform_disc(),
        hopping: HoppingSpec::Scaled { scale: hopping_scale },
    }
}

/// One site, no neighbors, fixed on-site energy `h`.
fn single_site_spec(h: f64) -> ModelSpec {
    let m = HermitianMatrix::diagonal(&[h]).expect("1x1 diagonal");
    ModelSpec {
        family: ModelFamily::Anderson,
        graph: GraphSpec::path(1).expect("path graph"),
        block_size: 1,
        coupling: 1.0,
        energy: 0.0,
        site_dist: SiteDistribution::uniform_interval(1.0).expect("uniform interval"),
        hopping: HoppingSpec::Matrix { matrix: MatrixDocument::from_matrix(&m) },
    }
}

/// Random signed spectrum with magnitudes in `[lo, hi]`.
fn signed_spectrum(n: usize, lo: f64, hi: f64, stream: &mut Stream) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let mag = stream.uniform(lo, hi);
            if stream.next_f64() < 0.5 { -mag } else { mag }
        })
        .collect()
}

/// Random subset of `{1..n}` of the given size (1-based, sorted).
fn random_subset(n: usize, size: usize, stream: &mut Stream) -> Result<IndexSet> {
    let mut indices: Vec<usize> = (1..=n).collect();
    for i in 0..size {
        let j = i + (stream.next_u64() as usize) % (n - i);
        indices.swap(i, j);
    }
    let mut members = indices[..size].to_vec();
    members.sort_unstable();
    IndexSet::new(n, members)
}

// ---------------------------------------------------------------------------
// Core properties
// ---------------------------------------------------------------------------

fn prop_eigen_reconstruction(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "eigen-recon", |i, stream| {
        let n = 2 + i % 7;
        let a = synth::random_hermitian(n, 1.5, stream)?;
        let (vals, vecs) = eigen::eigen_decomposition(&a);
        let scaled = ComplexMatrix::from_fn(n, n, |r, c| vecs[(r, c)] * vals[c]);
        let recon = scaled.mul(&vecs.adjoint());
        let resid = recon.sub(a.inner()).max_abs_entry();
        let orth = vecs.adjoint().mul(&vecs).sub(&ComplexMatrix::identity(n)).max_abs_entry();
        Ok(1e-9 - resid.max(orth))
    });
    tally.finish(
        "eigen_reconstruction",
        Area::Core,
        "V diag(w) V* = A and V*V = I to 1e-9".into(),
    )
}

fn prop_count_matches_direct_scan(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "count-scan", |i, stream| {
        let n = 2 + i % 7;
        let a = synth::random_hermitian(n, 1.0, stream)?;
        let center = stream.uniform(-1.0, 1.0);
        let eps = stream.uniform(0.05, 2.0);
        let eigs = eigen::eigenvalues(&a);
        let direct = eigs
            .iter()
            .filter(|&&v| v > center - eps && v < center + eps)
            .count();
        Ok(bool_margin(eigen::count_in_interval(&a, center, eps) == direct))
    });
    tally.finish(
        "count_matches_direct_scan",
        Area::Core,
        "interval counts agree with a strict open-interval scan".into(),
    )
}

fn prop_lu_inverse_residual(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "lu-inverse", |i, stream| {
        let n = 2 + i % 7;
        let eigs = signed_spectrum(n, 0.3, 3.0, stream);
        let a = synth::hermitian_with_spectrum(&eigs, stream)?;
        let inv = lu::factor(a.inner()).inverse("verify inverse")?;
        let resid = a.inner().mul(&inv).sub(&ComplexMatrix::identity(n)).max_abs_entry();
        Ok(1e-9 - resid)
    });
    tally.finish(
        "lu_inverse_residual",
        Area::Core,
        "A A^{-1} = I to 1e-9 on spectra bounded away from zero".into(),
    )
}

fn prop_determinant_matches_spectrum(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "det-spectrum", |i, stream| {
        let n = 2 + i % 7;
        let eigs = signed_spectrum(n, 0.2, 2.5, stream);
        let a = synth::hermitian_with_spectrum(&eigs, stream)?;
        let det = lu::hermitian_determinant(&a).value;
        let expected: f64 = eigs.iter().product();
        let rel = (det - expected).abs() / expected.abs();
        Ok(1e-8 - rel)
    });
    tally.finish(
        "determinant_matches_spectrum",
        Area::Core,
        "LU determinant equals the planted eigenvalue product to 1e-8".into(),
    )
}

fn prop_inertia_additivity(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "inertia-add", |i, stream| {
        let n = 3 + i % 6;
        let pivot = 1 + i % (n - 1);
        let (d, gamma) = synth::pivot_gap_instance(n, pivot, 0.08, stream)?;
        let block = d.principal(&gamma)?;
        let comp = schur::schur_complement(&d, &gamma)?;
        let whole = eigen::inertia(&d, None);
        let part = eigen::inertia(&block, None);
        let rest = eigen::inertia(&comp, None);
        let ok = whole.negative == part.negative + rest.negative
            && whole.positive == part.positive + rest.positive
            && whole.zero == part.zero + rest.zero;
        Ok(bool_margin(ok))
    });
    tally.finish(
        "inertia_additivity",
        Area::Core,
        "inertia splits across an invertible pivot block and its Schur complement".into(),
    )
}

fn prop_woodbury_identity(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "woodbury", |i, stream| {
        let n = 2 + i % 5;
        let a = synth::hermitian_with_spectrum(&signed_spectrum(n, 0.05, 1.0, stream), stream)?;
        // resample J until A + J is safely invertible (almost always first try)
        let mut j = synth::hermitian_with_spectrum(&signed_spectrum(n, 0.2, 2.0, stream), stream)?;
        for _ in 0..20 {
            if eigen::spectrum(&a.add(&j)?).min_abs > 1e-4 {
                break;
            }
            j = synth::hermitian_with_spectrum(&signed_spectrum(n, 0.2, 2.0, stream), stream)?;
        }
        let w = schur::woodbury_resolvent(&a, &j, 3.0)?;
        let direct =
            HermitianMatrix::from_complex(&lu::factor(a.add(&j)?.inner()).inverse("A + J")?);
        let direct = match direct {
            Ok(m) => m,
            Err(_) => return Ok(f64::NEG_INFINITY),
        };
        let scale = direct.max_abs_entry().max(1.0);
        let err = w.sub(&direct)?.max_abs_entry() / scale;
        Ok(1e-8 - err)
    });
    tally.finish(
        "woodbury_identity",
        Area::Core,
        "resolvent identity matches the directly inverted sum to 1e-8".into(),
    )
}

fn prop_det_schur_factorization(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "det-schur", |i, stream| {
        let n = 3 + i % 6;
        let pivot = 1 + i % (n - 1);
        let (d, gamma) = synth::pivot_gap_instance(n, pivot, 0.1, stream)?;
        let det_whole = lu::hermitian_determinant(&d).value;
        let det_block = lu::hermitian_determinant(&d.principal(&gamma)?).value;
        let det_comp = lu::hermitian_determinant(&schur::schur_complement(&d, &gamma)?).value;
        let rel = (det_whole - det_block * det_comp).abs()
            / det_whole.abs().max(1e-300);
        Ok(1e-8 - rel)
    });
    tally.finish(
        "det_schur_factorization",
        Area::Core,
        "det(D) = det(pivot) * det(Schur complement)
         to 1e-8 relative".into(),
    )
}

// ---------------------------------------------------------------------------
// Witness properties
// ---------------------------------------------------------------------------

fn prop_witness_forward(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "witness-fwd", |i, stream| {
        let m = 1 + i % 3;
        let n = (2 * m).max(4) + i % 3; // up to 8
        let eps = [0.05, 0.01][i % 2];
        let a = synth::planted_count_instance(n, m, eps, stream)?;
        let k = witness::counting_constant(m, n)?.k;
        match witness::find_witness_pair(&a, eps, m, k)? {
            Some(cert) => Ok(cert.margin),
            None => Ok(f64::NEG_INFINITY),
        }
    });
    tally.finish(
        "witness_pair_exists_at_guaranteed_strength",
        Area::Witness,
        "planted m small eigenvalues always yield a witness pair at K = C_m/N".into(),
    )
}

fn prop_witness_converse(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let mut certified = 0usize;
    for i in 0..instances {
        let mut stream = instance_stream(seed, i, "witness-conv");
        let mut run = || -> Result<f64> {
            let planted = i % 4; // 0..=3 small eigenvalues
            let n = 6 + i % 3;
            let eps = 0.04;
            let a = synth::planted_count_instance(n, planted, eps, &mut stream)?;
            let m = 1 + i % 3;
            let count = eigen::count_in_interval(&a, 0.0, eps);
            // full-strength search: any certificate must be sound
            if let Some(cert) = witness::find_witness_pair(&a, eps, m, 1.0)? {
                certified += 1;
                let alpha = IndexSet::new(n, cert.alpha.clone())?;
                let beta = IndexSet::new(n, cert.beta.clone())?;
                if !witness::certify_lower_count(&a, eps, &alpha, &beta)? {
                    return Ok(f64::NEG_INFINITY);
                }
                return Ok((count as f64) - (m as f64));
            }
            // random pair: a true certificate must be sound as well
            let alpha = random_subset(n, m, &mut stream)?;
            let beta = random_subset(n, m, &mut stream)?;
            if witness::certify_lower_count(&a, eps, &alpha, &beta)? {
                certified += 1;
                return Ok((count as f64) - (m as f64));
            }
            Ok(f64::INFINITY) // nothing certified: nothing claimed
        };
        match run() {
            Ok(margin) => tally.record(i, margin, "count minus certified level"),
            Err(e) => tally.record(i, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
    tally.finish(
        "witness_certificates_are_sound",
        Area::Witness,
        format!("{certified} certificates issued; each implied the claimed count"),
    )
}

fn prop_heavy_subset_guarantee(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "heavy-subset", |i, stream| {
        let n = 4 + i % 7; // up to 10
        let k = 1 + i % 3;
        let level = 0.2;
        let a = synth::random_positive_definite(n, level, 3.0, stream)?;
        let alpha = witness::select_heavy_principal_subset(&a, k, level)?;
        let lam_min = eigen::min_eigenvalue(&a.principal(&alpha)?);
        // level / (k! 2^{k-1} N) = level * C_k / N
        let bound = level * witness::counting_constant(k, n)?.k;
        Ok(lam_min - bound + 1e-10)
    });
    tally.finish(
        "heavy_subset_eigenvalue_floor",
        Area::Witness,
        "greedy k-subset keeps lambda_min(A[alpha]) >= level/(k! 2^{k-1} N) - 1e-10".into(),
    )
}

fn prop_block_witness(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "block-witness", |i, stream| {
        let m = 1 + i % 2;
        let block = 1 + i % 2;
        let nb = 2 * m + i % 2;
        let n = nb * block;
        let eps = 0.05;
        let a = synth::planted_count_instance(n, m, eps, stream)?;
        let k = witness::counting_constant(m, n)?.k;
        let found = witness::find_block_witness(&a, eps, m, block, k)?;
        if found.is_none() {
            return Ok(f64::NEG_INFINITY);
        }
        // full-strength block witnesses must be sound
        if witness::find_block_witness(&a, eps, m, block, 1.0)?.is_some() {
            let count = eigen::count_in_interval(&a, 0.0, eps);
            return Ok((count as f64) - (m as f64));
        }
        Ok(f64::INFINITY)
    });
    tally.finish(
        "block_witness_exists_and_sound",
        Area::Witness,
        "block-aligned witness found at K = C_m/N; full-strength finds imply the count".into(),
    )
}

fn prop_green_relations(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "green", |i, stream| {
        let n = 3 + i % 6;
        let planted = i % 3; // 0, 1, or 2 small eigenvalues
        let eps = 0.05;
        let a = synth::planted_count_instance(n, planted, eps, stream)?;
        let g = witness::green_function_relations(&a, eps)?;
        let count = eigen::count_in_interval(&a, 0.0, eps);
        // (1) the necessary-direction flag is a theorem and must be true
        let necessary = g.implied_by_small_eig;
        // (2) the sufficient-direction flag must imply the count
        let sufficient = !g.implies_small_eig || count >= 1;
        Ok(bool_margin(necessary && sufficient))
    });
    tally.finish(
        "green_entry_eigenvalue_relations",
        Area::Witness,
        "large inverse entries imply small eigenvalues, and conversely".into(),
    )
}

fn prop_compression_norm(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "compression", |i, stream| {
        let n = 4 + i % 6;
        let a = synth::random_positive_definite(n, 0.3, 3.0, stream)?;
        let s1 = 1 + i % (n - 2).max(1);
        let s2 = 1 + (i / 3) % (n - s1 - 1).max(1);
        let both = random_subset(n, s1 + s2, stream)?;
        let members = both.members();
        let p1 = IndexSet::new(n, members[..s1].to_vec())?;
        let p2 = IndexSet::new(n, members[s1..].to_vec())?;
        let out = witness::compressed_norm_bound(&a, &p1, &p2)?;
        Ok(out.rhs - out.lhs + 1e-10)
    });
    tally.finish(
        "compressed_norm_bound",
        Area::Witness,
        "|A[p1 u p2]| <= 2 max(|A[p1]|, |A[p2]|) for positive definite A".into(),
    )
}

// ---------------------------------------------------------------------------
// Reduction properties
// ---------------------------------------------------------------------------

fn prop_shift_admissible(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "shift", |i, stream| {
        let l = 2 + i % 11; // up to 12
        let (_, b2) = synth::shift_reduction_pair(l, stream)?;
        let a = reduction::choose_shift(&b2, l)?;
        let neg_a = -(a as f64);
        let dist = eigen::eigenvalues(&b2)
            .iter()
            .map(|&lam| (lam - neg_a).abs())
            .fold(f64::INFINITY, f64::min);
        Ok(dist - 2.0)
    });
    tally.finish(
        "integer_shift_is_admissible",
        Area::Reduction,
        "chosen shift stays at distance >= 2 from the second spectrum".into(),
    )
}

fn prop_reduction_norms(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "red-norms", |i, stream| {
        let l = 2 + i % 7;
        let (b1, b2) = synth::shift_reduction_pair(l, stream)?;
        let red = reduction::reduce(&b1, &b2)?;
        let upper = 0.5 + 1e-10 - red.nu;
        let lower = red.nu - (1.0 / (l as f64 + 4.0) - 1e-10);
        Ok(upper.min(lower))
    });
    tally.finish(
        "resolvent_norm_window",
        Area::Reduction,
        "nu stays inside [1/(L+4), 1/2]".into(),
    )
}

fn prop_count_sandwich(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "sandwich", |i, stream| {
        let l = 2 + i % 7; // up to 8
        let (b1, b2) = synth::shift_reduction_pair(l, stream)?;
        let mut worst = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let chk = reduction::count_sandwich_check(&b1, &b2, eps)?;
            let slack = (chk.mid as f64 - chk.low as f64)
                .min(chk.high as f64 - chk.mid as f64);
            worst = worst.min(slack);
        }
        Ok(worst)
    });
    tally.finish(
        "count_sandwich_bounds",
        Area::Reduction,
        "scaled transform counts bracket the sum's count at eps in {1e-1, 1e-2, 1e-3}".into(),
    )
}

fn prop_weyl_stability(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "weyl", |i, stream| {
        let n = 2 + i % 7;
        let d = synth::random_hermitian(n, 1.0, stream)?;
        let eps = [0.5, 0.1, 0.02][i % 3];
        let raw = synth::random_hermitian(n, 1.0, stream)?;
        let norm = eigen::operator_norm(&raw);
        let target = eps * stream.uniform(0.1, 0.95);
        let p = raw.scaled(if norm > 0.0 { target / norm } else { 0.0 });
        let dtilde = d.add(&p)?;
        let ok = reduction::weyl_count_stability(&d, &dtilde, eps)?;
        let slack = eigen::count_in_interval(&dtilde, 0.0, 2.0 * eps) as f64
            - eigen::count_in_interval(&d, 0.0, eps) as f64;
        Ok(if ok { slack } else { f64::NEG_INFINITY })
    });
    tally.finish(
        "count_stable_under_small_perturbation",
        Area::Reduction,
        "C_eps(D) <= C_{2eps}(D + P) whenever |P| <= eps".into(),
    )
}

fn prop_conjugation_monotone(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "conjugation", |i, stream| {
        let n = 2 + i % 7;
        let a = synth::random_hermitian(n, 1.2, stream)?;
        let eigs: Vec<f64> = (0..n).map(|_| stream.uniform(-1.0, 1.0)).collect();
        let b = synth::hermitian_with_spectrum(&eigs, stream)?;
        let eps = stream.uniform(0.02, 0.8);
        Ok(bool_margin(reduction::sandwich_count_conjugation(&a, &b, eps)?))
    });
    tally.finish(
        "count_monotone_under_contraction",
        Area::Reduction,
        "C_eps(A) <= C_eps(BAB) for Hermitian contractions B".into(),
    )
}

fn prop_schur_count_sandwich(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "schur-sandwich", |i, stream| {
        let n = 4 + i % 5; // up to 8
        let pivot = 1 + i % (n - 1);
        let eps = [0.05, 0.1][i % 2];
        let (d, gamma) = synth::pivot_gap_instance(n, pivot, eps, stream)?;
        // the pivot block of the comparison is the complement of its argument
        let out = reduction::schur_count_bounds(&d, &gamma.complement(), eps)?;
        let slack = (out.full_count as f64 - out.schur_count as f64)
            .min(out.beta_scaled_count as f64 - out.full_count as f64);
        Ok(slack)
    });
    tally.finish(
        "schur_complement_count_bounds",
        Area::Reduction,
        "C_eps(D/B) <= C_eps(D) <= C_{beta eps}(D/B) under a gapped pivot".into(),
    )
}

fn prop_determinant_dichotomy(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let mut applicable = 0usize;
    for i in 0..instances {
        let mut stream = instance_stream(seed, i, "dichotomy");
        let run = |stream: &mut Stream| -> Result<(f64, bool)> {
            let k = 1 + i % 3;
            let shift = [2.0, -2.0, 3.0, -3.0, 4.0][i % 5];
            let a_mat =
                synth::hermitian_with_spectrum(&signed_spectrum(k, 0.05, 0.95, stream), stream)?;
            // resample J until J + shift and A + J are invertible
            let mut j =
                synth::hermitian_with_spectrum(&signed_spectrum(k, 0.1, 1.8, stream), stream)?;
            for _ in 0..20 {
                let j_ok = eigen::eigenvalues(&j)
                    .iter()
                    .all(|&lam| (lam + shift).abs() > 1e-3);
                let sum_ok = eigen::spectrum(&a_mat.add(&j)?).min_abs > 1e-4;
                if j_ok && sum_ok {
                    break;
                }
                j = synth::hermitian_with_spectrum(&signed_spectrum(k, 0.1, 1.8, stream), stream)?;
            }
            let out = reduction::determinant_dichotomy(&a_mat, &j, shift)?;
            let is_applicable = out.branch != reduction::DichotomyBranch::NotApplicable;
            let margin = if is_applicable { out.rhs - out.lhs } else { f64::INFINITY };
            Ok((if out.conclusion_holds() { margin } else { f64::NEG_INFINITY }, is_applicable))
        };
        match run(&mut stream) {
            Ok((margin, is_app)) => {
                if is_app {
                    applicable += 1;
                }
                tally.record(i, margin, "bound slack");
            }
            Err(e) => tally.record(i, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
    tally.finish(
        "small_determinant_dichotomy",
        Area::Reduction,
        format!("{applicable} instances hit the small-determinant regime; every asserted branch held"),
    )
}

// ---------------------------------------------------------------------------
// Model properties
// ---------------------------------------------------------------------------

fn prop_sampling_deterministic(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "sample-det", |i, _stream| {
        let spec = match i % 3 {
            0 => anderson_spec(3 + i % 5, 1.0),
            1 => bdg_spec(2 + i % 3, 0.8, 0.2),
            _ => {
                let mut s = anderson_spec(3 + i % 4, 0.5);
                s.family = ModelFamily::RandomBlock;
                s.block_size = 2;
                s.graph = GraphSpec::path(3 + i % 4).expect("path");
                s
            }
        };
        let sample_seed = SampleSeed { master: seed ^ 0x5eed, trial: i as u64 };
        let h1 = models::sample_hamiltonian(&spec, sample_seed)?;
        let h2 = models::sample_hamiltonian(&spec, sample_seed)?;
        Ok(-h1.inner().sub(h2.inner()).max_abs_entry())
    });
    tally.finish(
        "sampling_is_deterministic",
        Area::Models,
        "identical (spec, seed) produce bit-identical Hamiltonians".into(),
    )
}

fn prop_bdg_block_structure(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "bdg-blocks", |i, _stream| {
        let n = 2 + i % 4;
        let spec = bdg_spec(n, 1.0, 0.0); // no hopping: pure block diagonal
        let h = models::sample_hamiltonian(
            &spec,
            SampleSeed { master: seed ^ 0xb10c, trial: i as u64 },
        )?;
        let mut worst: f64 = f64::INFINITY;
        for x in 0..n {
            let u = h.inner()[(2 * x, 2 * x)];
            let v = h.inner()[(2 * x, 2 * x + 1)];
            let vt = h.inner()[(2 * x + 1, 2 * x)];
            let d = h.inner()[(2 * x + 1, 2 * x + 1)];
            // real symmetric, trace zero, inside the unit disc
            let structural = u.im.abs().max(v.im.abs()).max((u + d).norm()).max((v - vt).norm());
            worst = worst.min(1e-12 - structural);
            worst = worst.min(1.0 - (u.re * u.re + v.re * v.re).sqrt());
        }
        Ok(worst)
    });
    tally.finish(
        "bdg_blocks_are_particle_hole_symmetric",
        Area::Models,
        "site blocks are real symmetric, traceless, and unit-disc bounded".into(),
    )
}

fn prop_reduced_norm(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "reduced-norm", |i, _stream| {
        let a = [3, -3, 4, -4, 5][i % 5];
        let h = if i % 2 == 0 {
            let mut spec = anderson_spec(3 + i % 6, 1.0);
            spec.hopping = HoppingSpec::Scaled { scale: 0.2 };
            models::sample_reduced_hamiltonian(
                &spec,
                a,
                SampleSeed { master: seed ^ 0x4ed, trial: i as u64 },
            )?
        } else {
            let spec = bdg_spec(2 + i % 4, 1.0, 0.2);
            models::sample_reduced_hamiltonian(
                &spec,
                a,
                SampleSeed { master: seed ^ 0x4ed, trial: i as u64 },
            )?
        };
        Ok(1.0 + 1e-10 - eigen::operator_norm(&h))
    });
    tally.finish(
        "reduced_sample_norm_bounded",
        Area::Models,
        "every reduced sample satisfies |H| <= 1".into(),
    )
}

fn prop_scalar_margin_caps(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "scalar-cap", |i, stream| {
        let a = [2i64, 3, 5][i % 3];
        let j = stream.uniform(-(a as f64) - 1.5, -(a as f64) + 1.5);
        let eps = stream.uniform(1e-6, 1.0 / (2.0 * a as f64));
        let m = models::scalar_regularity_margin(a, j, eps)?;
        Ok(m.bound - m.interval_length)
    });
    tally.finish(
        "scalar_interval_capped",
        Area::Models,
        "near-singularity interval length never exceeds 4 eps".into(),
    )
}

fn prop_bdg_margin_caps(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    for_instances(&mut tally, instances, seed, "bdg-cap", |_, stream| {
        let a = stream.uniform(-1.2, 1.2);
        let b = stream.uniform(-1.2, 1.2);
        let c = stream.uniform(-1.2, 1.2);
        let eps = stream.uniform(0.0, 1.0);
        let out = models::bdg_regularity_margin(a, b, c, eps)?;
        let det_slack = out.det_bound + 1e-7 - out.det_set_area;
        let norm_slack = out.norm_bound + 1e-7 - out.norm_set_area;
        Ok(det_slack.min(norm_slack))
    });
    tally.finish(
        "bdg_areas_capped",
        Area::Models,
        "det/norm event areas never exceed 2 pi eps / 4 pi eps".into(),
    )
}

fn prop_bdg_quadrature_vs_rejection(points: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let configs = [
        (0.3, 0.2, 0.5, 0.2),
        (0.0, 0.0, 0.7, 0.3),
        (0.8, -0.4, 0.9, 0.15),
    ];
    let per = (points / configs.len()).max(1000);
    for (ci, &(a, b, c, eps)) in configs.iter().enumerate() {
        let run = || -> Result<f64> {
            let exact = models::bdg_regularity_margin(a, b, c, eps)?;
            let mut stream = instance_stream(seed, ci, "bdg-reject");
            let mut det_hits = 0u64;
            let mut norm_hits = 0u64;
            for _ in 0..per {
                let (u, v) = stream.unit_disc();
                let dist2 = (u - a) * (u - a) + (v - b) * (v - b);
                if (dist2 - c * c).abs() <= eps {
                    det_hits += 1;
                }
                if (dist2.sqrt() - c.abs()).abs() <= eps {
                    norm_hits += 1;
                }
            }
            use std::f64::consts::PI;
            let nf = per as f64;
            let mut worst = f64::INFINITY;
            for (hits, area) in [(det_hits, exact.det_set_area), (norm_hits, exact.norm_set_area)] {
                let p = hits as f64 / nf;
                let est = PI * p;
                let se = PI * (p * (1.0 - p) / nf).sqrt();
                // 3 SE, with a tiny absolute floor for near-zero probabilities
                worst = worst.min(3.0 * se + 1e-4 - (est - area).abs());
            }
            Ok(worst)
        };
        match run() {
            Ok(margin) => tally.record(ci, margin, "3 SE band"),
            Err(e) => tally.record(ci, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
    tally.finish(
        "bdg_quadrature_matches_rejection_sampling",
        Area::Models,
        format!("{per} rejection samples per configuration, 3 standard-error agreement"),
    )
}

// ---------------------------------------------------------------------------
// Monte Carlo properties
// ---------------------------------------------------------------------------

fn prop_mc_reproducible(trials: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let trials = (trials as u64).clamp(20, 500);
    let run = || -> Result<f64> {
        let spec = anderson_spec(4, 1.0);
        let s = SampleSeed { master: seed ^ 0x3c, trial: 0 };
        let a = wegner::sweep_count_probability(&spec, &[0.2, 0.4], &[1, 2], trials, s)?;
        let b = wegner::sweep_count_probability(&spec, &[0.2, 0.4], &[1, 2], trials, s)?;
        if a != b {
            return Ok(f64::NEG_INFINITY);
        }
        let site = single_site_spec(0.4);
        let da = wegner::sweep_det_event(&site, 3, &[0.05, 0.1], trials, s)?;
        let db = wegner::sweep_det_event(&site, 3, &[0.05, 0.1], trials, s)?;
        Ok(bool_margin(da == db))
    };
    match run() {
        Ok(margin) => tally.record(0, margin, "reports equal"),
        Err(e) => tally.record(0, f64::NEG_INFINITY, &format!("error: {e}")),
    }
    tally.finish(
        "mc_reports_reproducible",
        Area::Mc,
        format!("count and determinant sweeps repeated at {trials} trials"),
    )
}

fn prop_mc_event_nesting(instances: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let spec = anderson_spec(4, 1.0);
    let site = single_site_spec(0.4);
    for t in 0..instances.min(60) {
        let run = || -> Result<f64> {
            let s = SampleSeed { master: seed ^ 0xe57, trial: t as u64 };
            let m1 = wegner::estimate_count_probability(&spec, 0.3, 1, 1, s)?;
            let m2 = wegner::estimate_count_probability(&spec, 0.3, 2, 1, s)?;
            let narrow = wegner::estimate_count_probability(&spec, 0.1, 1, 1, s)?;
            let d_small = wegner::estimate_det_event(&site, 3, 0.05, 1, s)?;
            let d_big = wegner::estimate_det_event(&site, 3, 0.15, 1, s)?;
            let level_nested = m2.successes <= m1.successes;
            let eps_nested = narrow.successes <= m1.successes;
            let delta_nested = d_small.successes <= d_big.successes;
            Ok(bool_margin(level_nested && eps_nested && delta_nested))
        };
        match run() {
            Ok(margin) => tally.record(t, margin, "per-trial nesting"),
            Err(e) => tally.record(t, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
    tally.finish(
        "mc_events_nest_per_trial",
        Area::Mc,
        "higher levels and smaller thresholds never gain successes on a shared trial".into(),
    )
}

fn prop_wilson_coverage(repetitions: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let spec = single_site_spec(0.4);
    let exact = models::single_site_event_measure(0.4, 3.0, 0.1, 1.0)
        .expect("closed-form measure");
    let reps = repetitions.max(10);
    let mut covered = 0usize;
    let mut failed: Option<String> = None;
    for rep in 0..reps {
        match wegner::estimate_det_event(
            &spec,
            3,
            0.1,
            150,
            SampleSeed { master: seed.wrapping_add(rep as u64), trial: 0 },
        ) {
            Ok(r) => {
                if r.ci_low <= exact && exact <= r.ci_high {
                    covered += 1;
                }
            }
            Err(e) => {
                failed = Some(format!("repetition {rep}: {e}"));
                break;
            }
        }
    }
    let coverage = covered as f64 / reps as f64;
    match failed {
        Some(msg) => tally.record(0, f64::NEG_INFINITY, &msg),
        None => tally.record(0, coverage - 0.90, "coverage minus 0.90"),
    }
    tally.finish(
        "wilson_interval_covers_closed_form",
        Area::Mc,
        format!("coverage {coverage:.3} over {reps} repetitions of 150 trials (floor 0.90)"),
    )
}

fn prop_bound_ratio_reported(trials: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let trials = (trials as u64).clamp(100, 2000);
    let run = || -> Result<(f64, String)> {
        let spec = anderson_spec(8, 1.0);
        let reports = wegner::sweep_count_probability(
            &spec,
            &[0.05, 0.1, 0.2],
            &[1],
            trials,
            SampleSeed { master: seed ^ 0xbd, trial: 0 },
        )?;
        let mut implied: f64 = 0.0;
        for r in &reports {
            if !(r.bound_value > 0.0) || !r.bound_value.is_finite() {
                return Ok((f64::NEG_INFINITY, "bound value not positive/finite".into()));
            }
            implied = implied.max(r.implied_constant());
        }
        Ok((
            bool_margin(implied.is_finite()),
            format!("implied leading constant <= {implied:.3} across the grid (reported, not asserted)"),
        ))
    };
    let detail = match run() {
        Ok((margin, detail)) => {
            tally.record(0, margin, "finite implied constant");
            detail
        }
        Err(e) => {
            tally.record(0, f64::NEG_INFINITY, &format!("error: {e}"));
            String::new()
        }
    };
    tally.finish("count_bound_ratio_reported", Area::Mc, detail)
}

fn prop_det_event_matches_measure(trials: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let trials = (trials as u64).max(500);
    let spec = single_site_spec(0.4);
    for (idx, delta) in [0.02, 0.05, 0.1].into_iter().enumerate() {
        let run = || -> Result<f64> {
            let exact = models::single_site_event_measure(0.4, 3.0, delta, 1.0)?;
            let r = wegner::estimate_det_event(
                &spec,
                3,
                delta,
                trials,
                SampleSeed { master: seed ^ 0xde7, trial: 0 },
            )?;
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            Ok(3.0 * se - (r.p_hat - exact).abs())
        };
        match run() {
            Ok(margin) => tally.record(idx, margin, "3 SE band"),
            Err(e) => tally.record(idx, f64::NEG_INFINITY, &format!("error: {e}")),
        }
    }
    tally.finish(
        "det_event_matches_closed_form",
        Area::Mc,
        format!("single-site determinant event vs exact measure at {trials} trials"),
    )
}

fn prop_assumption_a_matches_measure(trials: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let trials = (trials as u64).max(500);
    let run = || -> Result<f64> {
        let dist = SiteDistribution::uniform_interval(4.0)?;
        let j = HermitianMatrix::diagonal(&[-2.5])?;
        let eps = 0.1;
        let exact = models::single_site_event_measure(2.0, 3.0, eps, 4.0)?;
        let reports = models::empirical_assumption_a(
            &dist,
            1,
            3,
            &j,
            &[eps],
            trials,
            SampleSeed { master: seed ^ 0xa55, trial: 0 },
        )?;
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        Ok(3.0 * se - (reports[0].p_hat - exact).abs())
    };
    match run() {
        Ok(margin) => tally.record(0, margin, "3 SE band"),
        Err(e) => tally.record(0, f64::NEG_INFINITY, &format!("error: {e}")),
    }
    tally.finish(
        "single_site_anticoncentration_matches_measure",
        Area::Mc,
        format!("scalar block determinant event vs exact interval measure at {trials} trials"),
    )
}

fn prop_minami_two_slopes(trials: usize, seed: u64) -> PropertyReport {
    let mut tally = Tally::new();
    let trials = (trials as u64).max(1000);
    let run = || -> Result<(f64, String)> {
        let spec = anderson_spec(12, 1.0);
        let check = wegner::minami_gap_check(
            &spec,
            &[0.4, 0.25, 0.15],
            trials,
            SampleSeed { master: seed ^ 0x111a, trial: 0 },
        )?;
        let detail = format!(
            "slope_m1 = {:.3}, slope_m2 = {:.3} at {trials} trials",
            check.slope_m1, check.slope_m2
        );
        Ok((check.slope_m2 - (check.slope_m1 + 0.3), detail))
    };
    let detail = match run() {
        Ok((margin, detail)) => {
            tally.record(0, margin, "slope gap");
            detail
        }
        Err(e) => {
            tally.record(0, f64::NEG_INFINITY, &format!("error: {e}"));
            String::new()
        }
    };
    tally.finish("two_level_slope_dominates", Area::Mc, detail)
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Every registered property, in report order.
pub fn properties() -> Vec<PropertyDef> {
    vec![
        PropertyDef {
            name: "eigen_reconstruction",
            area: Area::Core,
            default_instances: 200,
            runner: prop_eigen_reconstruction,
        },
        PropertyDef {
            name: "count_matches_direct_scan",
            area: Area::Core,
            default_instances: 300,
            runner: prop_count_matches_direct_scan,
        },
        PropertyDef {
            name: "lu_inverse_residual",
            area: Area::Core,
            default_instances: 200,
            runner: prop_lu_inverse_residual,
        },
        PropertyDef {
            name: "determinant_matches_spectrum",
            area: Area::Core,
            default_instances: 200,
            runner: prop_determinant_matches_spectrum,
        },
        PropertyDef {
            name: "inertia_additivity",
            area: Area::Core,
            default_instances: 200,
            runner: prop_inertia_additivity,
        },
        PropertyDef {
            name: "woodbury_identity",
            area: Area::Core,
            default_instances: 200,
            runner: prop_woodbury_identity,
        },
        PropertyDef {
            name: "det_schur_factorization",
            area: Area::Core,
            default_instances: 200,
            runner: prop_det_schur_factorization,
        },
        PropertyDef {
            name: "witness_pair_exists_at_guaranteed_strength",
            area: Area::Witness,
            default_instances: 200,
            runner: prop_witness_forward,
        },
        PropertyDef {
            name: "witness_certificates_are_sound",
            area: Area::Witness,
            default_instances: 200,
            runner: prop_witness_converse,
        },
        PropertyDef {
            name: "heavy_subset_eigenvalue_floor",
            area: Area::Witness,
            default_instances: 200,
            runner: prop_heavy_subset_guarantee,
        },
        PropertyDef {
            name: "block_witness_exists_and_sound",
            area: Area::Witness,
            default_instances: 100,
            runner: prop_block_witness,
        },
        PropertyDef {
            name: "green_entry_eigenvalue_relations",
            area: Area::Witness,
            default_instances: 200,
            runner: prop_green_relations,
        },
        PropertyDef {
            name: "compressed_norm_bound",
            area: Area::Witness,
            default_instances: 200,
            runner: prop_compression_norm,
        },
        PropertyDef {
            name: "integer_shift_is_admissible",
            area: Area::Reduction,
            default_instances: 200,
            runner: prop_shift_admissible,
        },
        PropertyDef {
            name: "resolvent_norm_window",
            area: Area::Reduction,
            default_instances: 150,
            runner: prop_reduction_norms,
        },
        PropertyDef {
            name: "count_sandwich_bounds",
            area: Area::Reduction,
            default_instances: 150,
            runner: prop_count_sandwich,
        },
        PropertyDef {
            name: "count_stable_under_small_perturbation",
            area: Area::Reduction,
            default_instances: 200,
            runner: prop_weyl_stability,
        },
        PropertyDef {
            name: "count_monotone_under_contraction",
            area: Area::Reduction,
            default_instances: 200,
            runner: prop_conjugation_monotone,
        },
        PropertyDef {
            name: "schur_complement_count_bounds",
            area: Area::Reduction,
            default_instances: 150,
            runner: prop_schur_count_sandwich,
        },
        PropertyDef {
            name: "small_determinant_dichotomy",
            area: Area::Reduction,
            default_instances: 200,
            runner: prop_determinant_dichotomy,
        },
        PropertyDef {
            name: "sampling_is_deterministic",
            area: Area::Models,
            default_instances: 60,
            runner: prop_sampling_deterministic,
        },
        PropertyDef {
            name: "bdg_blocks_are_particle_hole_symmetric",
            area: Area::Models,
            default_instances: 60,
            runner: prop_bdg_block_structure,
        },
        PropertyDef {
            name: "reduced_sample_norm_bounded",
            area: Area::Models,
            default_instances: 100,
            runner: prop_reduced_norm,
        },
        PropertyDef {
            name: "scalar_interval_capped",
            area: Area::Models,
            default_instances: 400,
            runner: prop_scalar_margin_caps,
        },
        PropertyDef {
            name: "bdg_areas_capped",
            area: Area::Models,
            default_instances: 150,
            runner: prop_bdg_margin_caps,
        },
        PropertyDef {
            name: "bdg_quadrature_matches_rejection_sampling",
            area: Area::Models,
            default_instances: 90_000,
            runner: prop_bdg_quadrature_vs_rejection,
        },
        PropertyDef {
            name: "mc_reports_reproducible",
            area: Area::Mc,
            default_instances: 100,
            runner: prop_mc_reproducible,
        },
        PropertyDef {
            name: "mc_events_nest_per_trial",
            area: Area::Mc,
            default_instances: 24,
            runner: prop_mc_event_nesting,
        },
        PropertyDef {
            name: "wilson_interval_covers_closed_form",
            area: Area::Mc,
            default_instances: 300,
            runner: prop_wilson_coverage,
        },
        PropertyDef {
            name: "count_bound_ratio_reported",
            area: Area::Mc,
            default_instances: 400,
            runner: prop_bound_ratio_reported,
        },
        PropertyDef {
            name: "det_event_matches_closed_form",
            area: Area::Mc,
            default_instances: 2000,
            runner: prop_det_event_matches_measure,
        },
        PropertyDef {
            name: "single_site_anticoncentration_matches_measure",
            area: Area::Mc,
            default_instances: 2000,
            runner: prop_assumption_a_matches_measure,
        },
        PropertyDef {
            name: "two_level_slope_dominates",
            area: Area::Mc,
            default_instances: 1500,
            runner: prop_minami_two_slopes,
        },
    ]
}

/// Run the selected areas. `instances` of `None` uses each property's
/// default count; `Some(n)` overrides all of them (properties interpreting
/// the count as points or repetitions scale accordingly).
pub fn run_suite(areas: &[Area], instances: Option<usize>, seed: u64) -> Vec<PropertyReport> {
    properties()
        .into_iter()
        .filter(|p| areas.contains(&p.area))
        .map(|p| match instances {
            Some(n) => p.run(n, seed),
            None => p.run_default(seed),
        })
        .collect()
}
