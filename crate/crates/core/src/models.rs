//! Seeded random block Hamiltonians on finite graphs, and the closed-form
//! single-site regularity checkers that accompany them.
//!
//! A model is `H(g) = H_0 + g * blockdiag(A(x))` where `H_0` is a
//! deterministic Hermitian hopping matrix on a graph with `N` sites, and
//! each site `x` carries an independent random `k x k` Hermitian block
//! `A(x)`:
//!
//! * **Anderson** (`k = 1`): scalar potential `A(x) = v(x)` drawn from the
//!   site distribution (uniform on `[-b, b]` by default).
//! * **RandomBlock**: dense Hermitian block; diagonal entries and the real
//!   and imaginary parts of the upper triangle are i.i.d. draws from the
//!   site distribution.
//! * **BdG** (`k = 2`): particle-hole symmetric blocks
//!   `[[u, v], [v, -u]]` with `(u, v)` uniform on the unit disc; the block
//!   eigenvalues are exactly `±sqrt(u^2 + v^2)`.
//!
//! The *reduced* form swaps each random block for its shifted inverse:
//! `H_hat = H_0 + blockdiag((A(x) - a)^{-1})` with an integer `|a| >= 3`.
//! When `|H_0| <= 1/2` and the shift stays at distance `>= 2` from every
//! block spectrum, `|H_hat| <= 1`; both conditions are checked per sample.
//!
//! Sampling is reproducible by construction: all randomness flows from
//! per-site counter streams keyed by `(master, trial, "site", x)`, so a
//! `(spec, seed)` pair identifies one Hamiltonian bit-for-bit, regardless
//! of evaluation order or thread count.
//!
//! The regularity checkers quantify how unlikely near-singular site blocks
//! are: [`scalar_regularity_margin`] measures the interval of scalar
//! potentials that make a shifted resolvent sum small, and
//! [`bdg_regularity_margin`] measures the annulus-disc intersection areas
//! that play the same role for BdG blocks. [`single_site_event_measure`]
//! gives the exact probability of the scalar event for cross-checking
//! Monte Carlo estimates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::lu;
use crate::matrix::{ComplexMatrix, HermitianMatrix, MatrixDocument};
use crate::rng::{SampleSeed, Stream};
use crate::wegner;

/// Slack accepted on checked norm bounds, absorbing eigensolve roundoff.
pub(crate) const NORM_SLACK: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// A finite simple graph: the sites of a model and its hopping structure.
///
/// Edges are stored 0-based and canonically ordered internally; the JSON
/// form uses 1-based vertex pairs, consistent with index sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDocument", into = "GraphDocument")]
pub struct GraphSpec {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    max_degree: usize,
}

/// Serialized form of [`GraphSpec`]: 1-based edge pairs; `max_degree` is
/// emitted for readability and, when present on input, checked against the
/// recomputed value.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_degree: Option<usize>,
}

impl TryFrom<GraphDocument> for GraphSpec {
    type Error = Error;
    fn try_from(doc: GraphDocument) -> Result<GraphSpec> {
        let pairs: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = GraphSpec::from_edges(doc.vertices, &pairs)?;
        if let Some(claimed) = doc.max_degree {
            if claimed != g.max_degree {
                return Err(Error::invalid(format!(
                    "graph document claims max_degree {claimed} but the edges give {}",
                    g.max_degree
                )));
            }
        }
        Ok(g)
    }
}

impl From<GraphSpec> for GraphDocument {
    fn from(g: GraphSpec) -> GraphDocument {
        GraphDocument {
            vertices: g.vertices,
            edges: g.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            max_degree: Some(g.max_degree),
        }
    }
}

impl GraphSpec {
    /// Build from an explicit edge list with 1-based vertex pairs.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::invalid("graph needs at least one vertex"));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > vertices || v > vertices {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {vertices} vertices (1-based)"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            let (a, b) = (u.min(v) - 1, u.max(v) - 1);
            normalized.push((a, b));
        }
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!(
                    "duplicate edge ({}, {})",
                    w[0].0 + 1,
                    w[0].1 + 1
                )));
            }
        }
        let mut degree = vec![0usize; vertices];
        for &(a, b) in &normalized {
            degree[a] += 1;
            degree[b] += 1;
        }
        let max_degree = degree.into_iter().max().unwrap_or(0);
        Ok(GraphSpec {
            vertices,
            edges: normalized,
            max_degree,
        })
    }

    /// 1D path on `n` vertices.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_edges(n, &edges)
    }

    /// 2D grid box of `nx * ny` vertices with nearest-neighbor edges.
    pub fn grid2d(nx: usize, ny: usize) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::invalid("grid dimensions must be positive"));
        }
        let index = |i: usize, j: usize| i * ny + j + 1; // 1-based
        let mut edges = Vec::new();
        for i in 0..nx {
            for j in 0..ny {
                if i + 1 < nx {
                    edges.push((index(i, j), index(i + 1, j)));
                }
                if j + 1 < ny {
                    edges.push((index(i, j), index(i, j + 1)));
                }
            }
        }
        Self::from_edges(nx * ny, &edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Edge list as 1-based pairs, canonically ordered.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }

    /// The 0/1 adjacency matrix (the default scalar hopping).
    pub fn adjacency(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.vertices, self.vertices);
        for &(u, v) in &self.edges {
            m[(u, v)] = Complex64::new(1.0, 0.0);
            m[(v, u)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Adjacency lifted to `k x k` blocks: `adjacency (x) I_k`, the default
    /// translation-invariant hopping for block models.
    pub fn block_adjacency(&self, k: usize) -> ComplexMatrix {
        let n = self.vertices;
        let mut m = ComplexMatrix::zeros(n * k, n * k);
        for &(u, v) in &self.edges {
            for i in 0..k {
                m[(u * k + i, v * k + i)] = Complex64::new(1.0, 0.0);
                m[(v * k + i, u * k + i)] = Complex64::new(1.0, 0.0);
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------
// Site distributions
// ---------------------------------------------------------------------------

/// The supported single-site laws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionKind {
    /// Uniform on `[-b, b]`, `b` = `support_bound`.
    UniformInterval,
    /// Uniform on the unit disc in the plane (`support_bound` fixed at 1).
    UniformDisc,
    /// Piecewise-constant density on `[-b, b]`, sampled by inverse CDF;
    /// `density` lists nonnegative cell weights (normalized internally).
    Custom { density: Vec<f64> },
}

/// A site distribution together with its regularity data: the law is
/// `(K, alpha)`-regular when `P(value in S) <= K |S|^alpha` for measurable
/// `S`. The uniform kinds are exactly `1`-regular with `K` equal to their
/// density bound (`1/(2b)` on the interval, `1/pi` on the disc).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDistribution {
    pub kind: DistributionKind,
    pub regularity_alpha: f64,
    #[serde(rename = "regularity_K")]
    pub regularity_k: f64,
    pub support_bound: f64,
}

impl SiteDistribution {
    /// Uniform on `[-b, b]`: density `1/(2b)`, so `K = 1/(2b)`, `alpha = 1`.
    pub fn uniform_interval(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid("support bound must be positive and finite"));
        }
        Ok(SiteDistribution {
            kind: DistributionKind::UniformInterval,
            regularity_alpha: 1.0,
            regularity_k: 1.0 / (2.0 * b),
            support_bound: b,
        })
    }

    /// Uniform on the unit disc: density `1/pi`, so `K = 1/pi`, `alpha = 1`.
    pub fn uniform_disc() -> Self {
        SiteDistribution {
            kind: DistributionKind::UniformDisc,
            regularity_alpha: 1.0,
            regularity_k: 1.0 / std::f64::consts::PI,
            support_bound: 1.0,
        }
    }

    /// Piecewise-constant density on `[-b, b]` with caller-supplied
    /// regularity data (the caller asserts `(K, alpha)`-regularity).
    pub fn custom(density: Vec<f64>, b: f64, regularity_k: f64, alpha: f64) -> Result<Self> {
        let dist = SiteDistribution {
            kind: DistributionKind::Custom { density },
            regularity_alpha: alpha,
            regularity_k,
            support_bound: b,
        };
        dist.validate()?;
        Ok(dist)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.regularity_alpha > 0.0 && self.regularity_alpha <= 1.0) {
            return Err(Error::invalid(
                "regularity_alpha must lie in (0, 1]",
            ));
        }
        if !(self.regularity_k > 0.0 && self.regularity_k.is_finite()) {
            return Err(Error::invalid("regularity_K must be positive and finite"));
        }
        if !(self.support_bound > 0.0 && self.support_bound.is_finite()) {
            return Err(Error::invalid("support bound must be positive and finite"));
        }
        match &self.kind {
            DistributionKind::UniformInterval => {
                if self.regularity_alpha != 1.0 {
                    return Err(Error::invalid(
                        "the uniform interval law is exactly 1-regular; set regularity_alpha = 1",
                    ));
                }
            }
            DistributionKind::UniformDisc => {
                if self.regularity_alpha != 1.0 {
                    return Err(Error::invalid(
                        "the uniform disc law is exactly 1-regular; set regularity_alpha = 1",
                    ));
                }
                if self.support_bound != 1.0 {
                    return Err(Error::invalid(
                        "the disc law is supported on the unit disc; set support_bound = 1",
                    ));
                }
            }
            DistributionKind::Custom { density } => {
                if density.is_empty() {
                    return Err(Error::invalid("custom density grid must be nonempty"));
                }
                let mut total = 0.0;
                for &w in density {
                    if !(w >= 0.0 && w.is_finite()) {
                        return Err(Error::invalid(
                            "custom density weights must be finite and nonnegative",
                        ));
                    }
                    total += w;
                }
                if !(total > 0.0) {
                    return Err(Error::invalid("custom density must have positive mass"));
                }
            }
        }
        Ok(())
    }

    /// Whether the law produces scalar draws (anything but the disc).
    pub fn is_scalar(&self) -> bool {
        !matches!(self.kind, DistributionKind::UniformDisc)
    }

    /// One scalar draw. Exactly one stream value is consumed for the
    /// uniform and custom kinds, keeping replay simple.
    pub fn sample_real(&self, stream: &mut Stream) -> Result<f64> {
        let b = self.support_bound;
        match &self.kind {
            DistributionKind::UniformInterval => Ok(stream.uniform(-b, b)),
            DistributionKind::UniformDisc => Err(Error::invalid(
                "the disc law yields planar pairs, not scalars",
            )),
            DistributionKind::Custom { density } => {
                let total: f64 = density.iter().sum();
                let mut target = stream.next_f64() * total;
                let cells = density.len();
                let width = 2.0 * b / cells as f64;
                for (i, &w) in density.iter().enumerate() {
                    if target <= w || i + 1 == cells {
                        let frac = if w > 0.0 { (target / w).clamp(0.0, 1.0) } else { 0.0 };
                        return Ok(-b + (i as f64 + frac) * width);
                    }
                    target -= w;
                }
                unreachable!("loop returns on the last cell");
            }
        }
    }

    /// One planar draw from the unit disc (disc kind only).
    pub fn sample_planar(&self, stream: &mut Stream) -> Result<(f64, f64)> {
        match self.kind {
            DistributionKind::UniformDisc => Ok(stream.unit_disc()),
            _ => Err(Error::invalid("only the disc law yields planar pairs")),
        }
    }
}

// ---------------------------------------------------------------------------
// Model specification
// ---------------------------------------------------------------------------

/// The three random block families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    Anderson,
    RandomBlock,
    Bdg,
}

/// How the deterministic hopping `H_0` is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum HoppingSpec {
    /// Graph adjacency, lifted to `k x k` blocks for block families.
    Default,
    /// Adjacency scaled by a constant — the usual way to meet the
    /// `|H_0| <= 1/2` requirement of the reduced sampler.
    Scaled { scale: f64 },
    /// Arbitrary Hermitian matrix of dimension `k * N`.
    Matrix { matrix: MatrixDocument },
}

/// Everything needed to sample one Hamiltonian family on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub graph: GraphSpec,
    /// Block size `k`: 1 for Anderson, 2 for BdG, free for RandomBlock.
    pub block_size: usize,
    /// Coupling `g >= 0` multiplying the random part (`0` = deterministic).
    pub coupling: f64,
    /// The energy `E` at which counts are taken (used by the MC drivers).
    pub energy: f64,
    pub site_dist: SiteDistribution,
    pub hopping: HoppingSpec,
}

impl ModelSpec {
    pub fn sites(&self) -> usize {
        self.graph.vertices()
    }

    /// Full matrix dimension `k * N`.
    pub fn dim(&self) -> usize {
        self.block_size * self.graph.vertices()
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::invalid("block_size must be >= 1"));
        }
        if !(self.coupling >= 0.0 && self.coupling.is_finite()) {
            return Err(Error::invalid("coupling must be finite and nonnegative"));
        }
        if !self.energy.is_finite() {
            return Err(Error::invalid("energy must be finite"));
        }
        self.site_dist.validate()?;
        match self.family {
            ModelFamily::Anderson => {
                if self.block_size != 1 {
                    return Err(Error::invalid("the Anderson family has block_size 1"));
                }
                if !self.site_dist.is_scalar() {
                    return Err(Error::invalid(
                        "the Anderson family needs a scalar site distribution",
                    ));
                }
            }
            ModelFamily::RandomBlock => {
                if !self.site_dist.is_scalar() {
                    return Err(Error::invalid(
                        "the random-block family needs a scalar site distribution",
                    ));
                }
            }
            ModelFamily::Bdg => {
                if self.block_size != 2 {
                    return Err(Error::invalid("the BdG family has block_size 2"));
                }
                if !matches!(self.site_dist.kind, DistributionKind::UniformDisc) {
                    return Err(Error::invalid(
                        "the BdG family draws (u, v) from the unit disc law",
                    ));
                }
            }
        }
        if self.dim() > eigen::MAX_DIM {
            return Err(Error::invalid(format!(
                "model dimension {} exceeds the supported maximum {}",
                self.dim(),
                eigen::MAX_DIM
            )));
        }
        if let HoppingSpec::Scaled { scale } = self.hopping {
            if !scale.is_finite() {
                return Err(Error::invalid("hopping scale must be finite"));
            }
        }
        Ok(())
    }

    /// Resolve the hopping specification to the concrete `H_0`.
    pub fn hopping_matrix(&self) -> Result<HermitianMatrix> {
        self.validate()?;
        let k = self.block_size;
        match &self.hopping {
            HoppingSpec::Default => HermitianMatrix::from_complex(&self.graph.block_adjacency(k)),
            HoppingSpec::Scaled { scale } => {
                let m = self.graph.block_adjacency(k).scale(Complex64::new(*scale, 0.0));
                HermitianMatrix::from_complex(&m)
            }
            HoppingSpec::Matrix { matrix } => {
                let h0 = matrix.into_matrix()?;
                if h0.dim() != self.dim() {
                    return Err(Error::invalid(format!(
                        "hopping matrix has dimension {} but the model needs {}",
                        h0.dim(),
                        self.dim()
                    )));
                }
                Ok(h0)
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModelSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Draw one raw (unscaled) site block for the family. The draw order per
/// block is fixed — diagonal first, then the upper triangle row-major —
/// which is part of the reproducibility contract.
pub(crate) fn sample_site_block(
    family: ModelFamily,
    dist: &SiteDistribution,
    k: usize,
    stream: &mut Stream,
) -> Result<ComplexMatrix> {
    match family {
        ModelFamily::Anderson => {
            let v = dist.sample_real(stream)?;
            let mut m = ComplexMatrix::zeros(1, 1);
            m[(0, 0)] = Complex64::new(v, 0.0);
            Ok(m)
        }
        ModelFamily::Bdg => {
            let (u, v) = dist.sample_planar(stream)?;
            let mut m = ComplexMatrix::zeros(2, 2);
            m[(0, 0)] = Complex64::new(u, 0.0);
            m[(0, 1)] = Complex64::new(v, 0.0);
            m[(1, 0)] = Complex64::new(v, 0.0);
            m[(1, 1)] = Complex64::new(-u, 0.0);
            Ok(m)
        }
        ModelFamily::RandomBlock => {
            let mut m = ComplexMatrix::zeros(k, k);
            for i in 0..k {
                m[(i, i)] = Complex64::new(dist.sample_real(stream)?, 0.0);
            }
            for i in 0..k {
                for j in (i + 1)..k {
                    let re = dist.sample_real(stream)?;
                    let im = dist.sample_real(stream)?;
                    m[(i, j)] = Complex64::new(re, im);
                    m[(j, i)] = Complex64::new(re, -im);
                }
            }
            Ok(m)
        }
    }
}

/// Sample `H(g) = H_0 + g * blockdiag(A(x))` with a precomputed `H_0`
/// (callers running many trials resolve the hopping once).
pub(crate) fn sample_with_hopping(
    spec: &ModelSpec,
    h0: &HermitianMatrix,
    seed: SampleSeed,
) -> Result<HermitianMatrix> {
    let k = spec.block_size;
    let g = spec.coupling;
    let mut work = h0.to_complex();
    for x in 0..spec.sites() {
        let mut stream = seed.stream("site", x as u64);
        let block = sample_site_block(spec.family, &spec.site_dist, k, &mut stream)?;
        for i in 0..k {
            for j in 0..k {
                let at = (x * k + i, x * k + j);
                work[at] += block[(i, j)] * g;
            }
        }
    }
    HermitianMatrix::from_complex(&work)
}

/// Sample one Hamiltonian `H(g)` for the model. Identical `(spec, seed)`
/// pairs produce bit-identical matrices.
pub fn sample_hamiltonian(spec: &ModelSpec, seed: SampleSeed) -> Result<HermitianMatrix> {
    let h0 = spec.hopping_matrix()?;
    sample_with_hopping(spec, &h0, seed)
}

/// Sample the reduced form `H_hat = H_0 + blockdiag((A(x) - a)^{-1})`.
///
/// Requirements, each checked: integer shift `|a| >= 3`; `|H_0| <= 1/2`
/// ([`Error::HoppingNormTooLarge`]); every site block invertible after the
/// shift ([`Error::SingularSiteBlock`], 1-based site). The result must come
/// out with `|H_hat| <= 1` ([`Error::ReducedNormExceeded`]) — guaranteed
/// when the shift sits at distance `>= 2` from all block spectra, e.g. any
/// `|a| >= 3` with site data bounded by 1. The coupling is not applied
/// here: the reduced form inverts the raw block.
pub fn sample_reduced_hamiltonian(
    spec: &ModelSpec,
    a: i64,
    seed: SampleSeed,
) -> Result<HermitianMatrix> {
    if a.abs() < 3 {
        return Err(Error::invalid(format!(
            "reduced sampling needs an integer shift with |a| >= 3; got {a}"
        )));
    }
    let h0 = spec.hopping_matrix()?;
    let h0_norm = eigen::operator_norm(&h0);
    if h0_norm > 0.5 + NORM_SLACK {
        return Err(Error::HoppingNormTooLarge { norm: h0_norm });
    }
    sample_reduced_with(spec, &h0, a, seed)
}

/// Reduced-model sampler with the hopping term already resolved and checked;
/// sweep drivers call this per trial so the shared `H_0` work happens once.
pub(crate) fn sample_reduced_with(
    spec: &ModelSpec,
    h0: &HermitianMatrix,
    a: i64,
    seed: SampleSeed,
) -> Result<HermitianMatrix> {
    let k = spec.block_size;
    let af = a as f64;
    let mut work = h0.to_complex();
    for x in 0..spec.sites() {
        let mut stream = seed.stream("site", x as u64);
        let mut block = sample_site_block(spec.family, &spec.site_dist, k, &mut stream)?;
        for i in 0..k {
            block[(i, i)] -= Complex64::new(af, 0.0);
        }
        let f = lu::factor(&block);
        if !f.is_invertible() {
            return Err(Error::SingularSiteBlock { site: x + 1 });
        }
        let inv = f.inverse("site block")?;
        for i in 0..k {
            for j in 0..k {
                work[(x * k + i, x * k + j)] += inv[(i, j)];
            }
        }
    }
    let h = HermitianMatrix::from_complex(&work)?;
    let norm = eigen::operator_norm(&h);
    if norm > 1.0 + NORM_SLACK {
        return Err(Error::ReducedNormExceeded { norm });
    }
    Ok(h)
}

// ---------------------------------------------------------------------------
// Scalar regularity (interval geometry)
// ---------------------------------------------------------------------------

/// Length of the scalar near-singularity interval versus its `4 eps` cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarMargin {
    /// Length of the interval of potentials `v` making
    /// `|1/(v - a) + 1/(j + a)|` small; `0` when the solution window
    /// `0 < j + a < 1` is missed.
    pub interval_length: f64,
    /// The cap `4 eps`.
    pub bound: f64,
}

/// Closed-form interval length for the scalar near-singularity event.
///
/// For a scalar site value `v`, a fixed `j`, and an integer shift `a >= 2`
/// at distance at least 2 from the support, the set of `v` for which
/// `(v - a)^{-1} + (j + a)^{-1}` has magnitude below `eps` is an interval;
/// when the window `0 < j + a < 1` holds its length is
/// `2 eps / ((j + a)^{-2} - eps^2)`, and otherwise no solutions meet the
/// support, giving length 0. The length never reaches `4 eps` on the
/// admissible domain `eps <= 1/(2a)`.
pub fn scalar_regularity_margin(a: i64, j: f64, eps: f64) -> Result<ScalarMargin> {
    if a < 2 {
        return Err(Error::invalid(format!(
            "scalar regularity needs an integer shift a >= 2; got {a}"
        )));
    }
    if !j.is_finite() {
        return Err(Error::invalid("j must be finite"));
    }
    let cap = 1.0 / (2.0 * a as f64);
    if !(eps >= 0.0 && eps <= cap) {
        return Err(Error::invalid(format!(
            "eps must lie in [0, 1/(2a)] = [0, {cap}]; got {eps}"
        )));
    }
    let s = j + a as f64;
    let interval_length = if s > 0.0 && s < 1.0 {
        2.0 * eps / (s.powi(-2) - eps * eps)
    } else {
        0.0
    };
    let bound = 4.0 * eps;
    debug_assert!(
        interval_length <= bound + 1e-15,
        "interval length {interval_length} exceeded its cap {bound}"
    );
    Ok(ScalarMargin {
        interval_length,
        bound,
    })
}

/// Exact probability that `|h + 1/(v - a)| <= delta` for `v` uniform on
/// `[-b, b]`.
///
/// This is the single-site determinant event of the scalar reduced model
/// in closed form (with `h` the deterministic part, e.g. a diagonal `H_0`
/// entry or `1/(j + a)`), used as an oracle against Monte Carlo estimates.
/// The event preimage under `t = 1/(v - a)` is one interval or a union of
/// two rays; the measure is its clipped length over `2b`.
pub fn single_site_event_measure(h: f64, a: f64, delta: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::invalid("support bound must be positive and finite"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::invalid("delta must be nonnegative and finite"));
    }
    if !(h.is_finite() && a.is_finite()) {
        return Err(Error::invalid("h and a must be finite"));
    }
    let t_lo = -h - delta;
    let t_hi = -h + delta;
    // v = a + 1/t maps [t_lo, t_hi] to intervals; the map is decreasing on
    // each sign branch, and t = 0 (unreachable value) splits the image into
    // two rays.
    let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(2);
    if t_lo > 0.0 || t_hi < 0.0 {
        pieces.push((a + 1.0 / t_hi, a + 1.0 / t_lo));
    } else {
        if t_lo < 0.0 {
            pieces.push((f64::NEG_INFINITY, a + 1.0 / t_lo));
        }
        if t_hi > 0.0 {
            pieces.push((a + 1.0 / t_hi, f64::INFINITY));
        }
        // t_lo = t_hi = 0 (h = 0, delta = 0): the event is empty.
    }
    let mut length = 0.0;
    for (lo, hi) in pieces {
        length += (hi.min(b) - lo.max(-b)).max(0.0);
    }
    Ok(length / (2.0 * b))
}

// ---------------------------------------------------------------------------
// BdG regularity (annulus-disc geometry)
// ---------------------------------------------------------------------------

/// Areas of the BdG near-singularity sets versus their caps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BdgMargin {
    /// Area of `{(u,v) in unit disc : |c^2 - (u-a)^2 - (v-b)^2| <= eps}`.
    pub det_set_area: f64,
    /// The cap `2 pi eps`.
    pub det_bound: f64,
    /// Area of `{(u,v) in unit disc : ||c| - dist((u,v),(a,b))| <= eps}`.
    pub norm_set_area: f64,
    /// The cap `4 pi eps`.
    pub norm_bound: f64,
}

impl BdgMargin {
    /// Whether both areas respect their caps. The determinant cap is
    /// attained exactly when the annulus sits fully inside the unit disc,
    /// so the comparison allows the quadrature's absolute error.
    pub fn holds(&self) -> bool {
        const QUAD_TOL: f64 = 1e-8;
        self.det_set_area <= self.det_bound + QUAD_TOL
            && self.norm_set_area <= self.norm_bound + QUAD_TOL
    }
}

/// Angular measure (radians) of the circle of radius `r` around a center at
/// distance `d` from the origin that lies inside the unit disc.
fn inside_angle(d: f64, r: f64) -> f64 {
    use std::f64::consts::PI;
    if r == 0.0 {
        return if d <= 1.0 { 2.0 * PI } else { 0.0 };
    }
    if d == 0.0 {
        return if r <= 1.0 { 2.0 * PI } else { 0.0 };
    }
    let t = (d * d + r * r - 1.0) / (2.0 * d * r);
    if t <= -1.0 {
        2.0 * PI
    } else if t >= 1.0 {
        0.0
    } else {
        2.0 * t.acos()
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 48)
}

/// Area of `disc(center at distance d, radius) ∩ unit disc`, by adaptive
/// radial quadrature of the inside angle to absolute accuracy ~1e-9. The
/// integrand has kinks where the circles start and stop intersecting
/// (`r = |1 - d|` and `r = 1 + d`), so the integral is split there.
fn disc_intersection_area(d: f64, radius: f64) -> f64 {
    if radius <= 0.0 {
        return 0.0;
    }
    let f = move |r: f64| r * inside_angle(d, r);
    let mut cuts = vec![0.0];
    for c in [(1.0 - d).abs(), 1.0 + d] {
        if c > 0.0 && c < radius {
            cuts.push(c);
        }
    }
    cuts.push(radius);
    cuts.sort_by(f64::total_cmp);
    let mut area = 0.0;
    for w in cuts.windows(2) {
        area += adaptive_simpson(&f, w[0], w[1], 2.5e-10);
    }
    area
}

/// Areas of the two BdG near-singularity sets, with their caps.
///
/// The determinant set is the annulus `|c^2 - r^2| <= eps` around `(a, b)`
/// (radii `sqrt(max(c^2 - eps, 0))` to `sqrt(c^2 + eps)`) clipped to the
/// unit disc; its area never exceeds `2 pi eps`. The norm set is the
/// annulus `||c| - r| <= eps`, capped by `4 pi eps`. Both caps hold for
/// every center and radius because a circle contributes arc length at most
/// `2 pi` inside the unit disc.
pub fn bdg_regularity_margin(a: f64, b: f64, c: f64, eps: f64) -> Result<BdgMargin> {
    if !(eps >= 0.0 && eps <= 1.0) {
        return Err(Error::invalid(format!("eps must lie in [0, 1]; got {eps}")));
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::invalid("annulus parameters must be finite"));
    }
    use std::f64::consts::PI;
    let d = a.hypot(b);
    let det_lo = (c * c - eps).max(0.0).sqrt();
    let det_hi = (c * c + eps).sqrt();
    let det_set_area =
        (disc_intersection_area(d, det_hi) - disc_intersection_area(d, det_lo)).max(0.0);
    let norm_lo = (c.abs() - eps).max(0.0);
    let norm_hi = c.abs() + eps;
    let norm_set_area =
        (disc_intersection_area(d, norm_hi) - disc_intersection_area(d, norm_lo)).max(0.0);
    let out = BdgMargin {
        det_set_area,
        det_bound: 2.0 * PI * eps,
        norm_set_area,
        norm_bound: 4.0 * PI * eps,
    };
    debug_assert!(
        out.det_set_area <= out.det_bound + 1e-7 && out.norm_set_area <= out.norm_bound + 1e-7,
        "area caps violated: {out:?}"
    );
    Ok(out)
}

// ---------------------------------------------------------------------------
// Determinant anti-concentration of a single shifted site block
// ---------------------------------------------------------------------------

/// Monte Carlo check of the single-site determinant anti-concentration
/// hypothesis: for a random `k x k` site block `A` and a fixed deterministic
/// environment `J`, estimate
///
/// ```text
/// P( |det( (A - a)^{-1} + (J + a)^{-1} )| <= eps )
/// ```
///
/// for each `eps` in the grid, sharing one block draw (and one determinant)
/// per trial across the whole grid. Each report carries the reference value
/// `K * eps^alpha` in `bound_value`, with `K` and `alpha` taken from the
/// distribution's regularity fields; the estimate is reported against it,
/// never asserted.
///
/// The block law follows the distribution: a unit-disc distribution samples
/// particle-hole symmetric `2 x 2` blocks (`k` must be 2), a scalar
/// distribution samples the scalar potential for `k = 1` or a dense
/// Hermitian block otherwise.
///
/// `eps = 0` is allowed (the event degenerates to `det = 0`, null for
/// continuous laws). `J + aI` must be invertible; a sampled `A - aI` that
/// is not invertible aborts the run with the offending trial index.
pub fn empirical_assumption_a(
    dist: &SiteDistribution,
    k: usize,
    a: i64,
    j: &HermitianMatrix,
    eps_grid: &[f64],
    trials: u64,
    seed: SampleSeed,
) -> Result<Vec<wegner::McReport>> {
    dist.validate()?;
    if k == 0 {
        return Err(Error::invalid("block size k must be >= 1"));
    }
    if j.dim() != k {
        return Err(Error::invalid(format!(
            "environment J is {}x{} but the block size is {k}",
            j.dim(),
            j.dim()
        )));
    }
    if eps_grid.is_empty() {
        return Err(Error::invalid("eps grid is empty"));
    }
    for &eps in eps_grid {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::invalid(format!(
                "eps grid values must be nonnegative and finite; got {eps}"
            )));
        }
    }
    if trials == 0 {
        return Err(Error::invalid("trials must be >= 1"));
    }
    if seed.trial.checked_add(trials).is_none() {
        return Err(Error::invalid(format!(
            "seed.trial {} + trials {trials} overflows the trial counter",
            seed.trial
        )));
    }
    let family = match dist.kind {
        DistributionKind::UniformDisc => {
            if k != 2 {
                return Err(Error::invalid(format!(
                    "a unit-disc distribution fixes the block size at 2; got {k}"
                )));
            }
            ModelFamily::Bdg
        }
        _ if k == 1 => ModelFamily::Anderson,
        _ => ModelFamily::RandomBlock,
    };
    let af = a as f64;
    // J + aI = J - (-a)I
    let j_shifted = j.shifted(-af);
    let jf = lu::factor(j_shifted.inner());
    if !jf.is_invertible() {
        return Err(Error::SingularFactor { factor: "J + a*I" });
    }
    let j_inv = jf.inverse("J + a*I")?;

    use rayon::prelude::*;
    let dets: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let run = || -> Result<f64> {
                let seed_t = SampleSeed { master: seed.master, trial: seed.trial + t };
                let mut stream = seed_t.stream("site", 0);
                let mut block = sample_site_block(family, dist, k, &mut stream)?;
                for i in 0..k {
                    block[(i, i)] -= Complex64::new(af, 0.0);
                }
                let bf = lu::factor(&block);
                if !bf.is_invertible() {
                    return Err(Error::SingularFactor { factor: "A - a*I" });
                }
                let m = bf.inverse("A - a*I")?.add(&j_inv);
                Ok(lu::factor(&m).det().norm())
            };
            run().map_err(|e| Error::TrialFailure { trial: t, source: Box::new(e) })
        })
        .collect::<Result<_>>()?;

    let mut reports = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let successes = dets.iter().filter(|&&d| d <= eps).count() as u64;
        let (p_hat, ci_low, ci_high) = wegner::wilson_interval(successes, trials);
        reports.push(wegner::McReport {
            eps,
            m: 1,
            trials,
            successes,
            p_hat,
            ci_low,
            ci_high,
            bound_value: dist.regularity_k * eps.powf(dist.regularity_alpha),
            seed,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn anderson_spec(n: usize, b: f64, g: f64) -> ModelSpec {
        ModelSpec {
            family: ModelFamily::Anderson,
            graph: GraphSpec::path(n).unwrap(),
            block_size: 1,
            coupling: g,
            energy: 0.0,
            site_dist: SiteDistribution::uniform_interval(b).unwrap(),
            hopping: HoppingSpec::Default,
        }
    }

    fn bdg_spec(n: usize, g: f64) -> ModelSpec {
        ModelSpec {
            family: ModelFamily::Bdg,
            graph: GraphSpec::path(n).unwrap(),
            block_size: 2,
            coupling: g,
            energy: 0.0,
            site_dist: SiteDistribution::uniform_disc(),
            hopping: HoppingSpec::Default,
        }
    }

    #[test]
    fn graphs_validate_and_compute_degree() {
        let p = GraphSpec::path(4).unwrap();
        assert_eq!(p.vertices(), 4);
        assert_eq!(p.max_degree(), 2);
        assert_eq!(p.edges(), vec![(1, 2), (2, 3), (3, 4)]);
        let g = GraphSpec::grid2d(3, 3).unwrap();
        assert_eq!(g.vertices(), 9);
        assert_eq!(g.max_degree(), 4);
        assert_eq!(g.edges().len(), 12);
        assert!(GraphSpec::from_edges(3, &[(1, 1)]).is_err());
        assert!(GraphSpec::from_edges(3, &[(1, 2), (2, 1)]).is_err());
        assert!(GraphSpec::from_edges(3, &[(1, 4)]).is_err());
    }

    #[test]
    fn graph_round_trips_through_json() {
        let g = GraphSpec::grid2d(2, 3).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GraphSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(g, back);
        let bad = r#"{"vertices": 2, "edges": [[1,2]], "max_degree": 7}"#;
        assert!(serde_json::from_str::<GraphSpec>(bad).is_err());
    }

    #[test]
    fn zero_coupling_returns_hopping_exactly() {
        let spec = anderson_spec(5, 1.0, 0.0);
        let h = sample_hamiltonian(&spec, SampleSeed { master: 7, trial: 0 }).unwrap();
        assert_eq!(h.to_json(), spec.hopping_matrix().unwrap().to_json());
    }

    #[test]
    fn sampling_is_reproducible_bit_for_bit() {
        let spec = anderson_spec(3, 1.0, 1.0);
        let seed = SampleSeed { master: 42, trial: 9 };
        let h1 = sample_hamiltonian(&spec, seed).unwrap();
        let h2 = sample_hamiltonian(&spec, seed).unwrap();
        assert_eq!(h1.to_json(), h2.to_json());
        let other = sample_hamiltonian(&spec, SampleSeed { master: 42, trial: 10 }).unwrap();
        assert_ne!(h1.to_json(), other.to_json());
    }

    #[test]
    fn bdg_blocks_have_symmetric_spectrum() {
        let spec = bdg_spec(1, 1.0);
        let seed = SampleSeed { master: 3, trial: 1 };
        let h = sample_hamiltonian(&spec, seed).unwrap();
        // replay the single site draw to get (u, v)
        let (u, v) = spec
            .site_dist
            .sample_planar(&mut seed.stream("site", 0))
            .unwrap();
        let r = (u * u + v * v).sqrt();
        let eigs = eigen::eigenvalues(&h);
        assert!((eigs[0] + r).abs() < 1e-12);
        assert!((eigs[1] - r).abs() < 1e-12);
        // trace zero, real symmetric entries
        assert!(h.inner()[(0, 0)].re + h.inner()[(1, 1)].re < 1e-15);
        assert_eq!(h.inner()[(0, 1)].im, 0.0);
    }

    #[test]
    fn reduced_anderson_entries_live_in_the_predicted_interval() {
        let mut spec = anderson_spec(3, 1.0, 1.0);
        spec.hopping = HoppingSpec::Scaled { scale: 0.2 };
        let h = sample_reduced_hamiltonian(&spec, 3, SampleSeed { master: 5, trial: 2 }).unwrap();
        for x in 0..3 {
            let e = h.inner()[(x, x)].re;
            assert!((-0.5..=-0.25).contains(&e), "entry {e} outside [-1/2, -1/4]");
        }
        assert!(eigen::operator_norm(&h) <= 1.0 + 1e-10);
    }

    #[test]
    fn reduced_degenerate_potential_gives_minus_third() {
        let mut spec = anderson_spec(2, 1e-12, 1.0);
        spec.hopping = HoppingSpec::Scaled { scale: 0.0 };
        let h = sample_reduced_hamiltonian(&spec, 3, SampleSeed { master: 1, trial: 0 }).unwrap();
        for x in 0..2 {
            assert!((h.inner()[(x, x)].re + 1.0 / 3.0).abs() < 1e-11);
        }
    }

    #[test]
    fn reduced_rejects_wide_hopping_and_small_shift() {
        let spec = anderson_spec(4, 1.0, 1.0); // default adjacency norm > 1/2
        assert!(matches!(
            sample_reduced_hamiltonian(&spec, 3, SampleSeed { master: 0, trial: 0 }),
            Err(Error::HoppingNormTooLarge { .. })
        ));
        let mut narrow = anderson_spec(4, 1.0, 1.0);
        narrow.hopping = HoppingSpec::Scaled { scale: 0.1 };
        assert!(sample_reduced_hamiltonian(&narrow, 2, SampleSeed { master: 0, trial: 0 }).is_err());
    }

    #[test]
    fn custom_density_sampling_respects_support() {
        let dist = SiteDistribution::custom(vec![1.0, 0.0, 3.0], 2.0, 0.375, 1.0).unwrap();
        let seed = SampleSeed { master: 11, trial: 0 };
        let mut stream = seed.stream("site", 0);
        for _ in 0..200 {
            let v = dist.sample_real(&mut stream).unwrap();
            assert!((-2.0..=2.0).contains(&v));
            // middle cell has weight zero; values must avoid (-2/3, 2/3)
            assert!(!(-0.66..0.66).contains(&v), "drew {v} from a zero-density cell");
        }
    }

    #[test]
    fn scalar_margin_matches_closed_form() {
        // j + a = 1/2 at eps = 0.1: 0.2 / (4 - 0.01)
        let m = scalar_regularity_margin(3, -2.5, 0.1).unwrap();
        assert!((m.interval_length - 0.2 / 3.99).abs() < 1e-15);
        assert_eq!(m.bound, 0.4);
        // outside the window: no solutions
        let far = scalar_regularity_margin(3, -1.0, 0.1).unwrap();
        assert_eq!(far.interval_length, 0.0);
        // eps = 0
        assert_eq!(
            scalar_regularity_margin(3, -2.5, 0.0).unwrap().interval_length,
            0.0
        );
        // eps beyond 1/(2a) rejected
        assert!(scalar_regularity_margin(3, -2.5, 0.2).is_err());
        assert!(scalar_regularity_margin(1, 0.0, 0.1).is_err());
    }

    #[test]
    fn single_site_measure_matches_hand_computation() {
        // h = 0.4, a = 3, b = 1: event |0.4 + 1/(v-3)| <= delta solves to
        // v in [3 - 1/(0.4 - delta), 3 - 1/(0.4 + delta)]
        let p = single_site_event_measure(0.4, 3.0, 0.1, 1.0).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 1e-12, "got {p}");
        let small = single_site_event_measure(0.4, 3.0, 0.01, 1.0).unwrap();
        assert!((small - 0.01 / (0.16 - 0.0001)).abs() < 1e-12);
        // delta = 0: null event
        assert_eq!(single_site_event_measure(0.4, 3.0, 0.0, 1.0).unwrap(), 0.0);
        // h = 0: event |1/(v-a)| <= delta needs |v - a| >= 1/delta
        let rays = single_site_event_measure(0.0, 0.0, 2.0, 1.0).unwrap();
        assert!((rays - 0.5).abs() < 1e-12); // |v| >= 1/2 within [-1, 1]
    }

    #[test]
    fn disc_intersection_matches_closed_forms() {
        // fully inside: area pi r^2
        let a = disc_intersection_area(0.3, 0.5);
        assert!((a - PI * 0.25).abs() < 1e-8);
        // fully covering: unit disc area
        let b = disc_intersection_area(0.1, 5.0);
        assert!((b - PI).abs() < 1e-7);
        // disjoint
        assert_eq!(disc_intersection_area(3.0, 1.0), 0.0);
        // half-plane-like symmetric lens: equal circles distance 1 apart
        let lens = {
            let d: f64 = 1.0;
            let r: f64 = 1.0;
            // closed-form two-circle lens area
            2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt()
        };
        let q = disc_intersection_area(1.0, 1.0);
        assert!((q - lens).abs() < 1e-8, "quadrature {q} vs closed form {lens}");
    }

    #[test]
    fn bdg_margins_on_centered_annuli() {
        // c = 0: det set is the disc of radius sqrt(eps)
        let m = bdg_regularity_margin(0.0, 0.0, 0.0, 0.09).unwrap();
        assert!((m.det_set_area - PI * 0.09).abs() < 1e-8);
        assert!(m.holds());
        // annulus fully inside the unit disc: exact area pi (R+^2 - R-^2)
        let inside = bdg_regularity_margin(0.0, 0.0, 0.5, 0.01).unwrap();
        assert!((inside.det_set_area - PI * 0.02).abs() < 1e-8);
        assert!((inside.norm_set_area - PI * ((0.51f64).powi(2) - 0.49f64.powi(2))).abs() < 1e-8);
        assert!(inside.holds());
        // far-away annulus misses the disc entirely
        let far = bdg_regularity_margin(5.0, 0.0, 0.5, 0.01).unwrap();
        assert_eq!(far.det_set_area, 0.0);
        assert!(far.holds());
        assert!(bdg_regularity_margin(0.0, 0.0, 0.5, 1.5).is_err());
    }

    #[test]
    fn bdg_area_agrees_with_rejection_sampling() {
        let (a, b, c, eps) = (0.4, -0.3, 0.6, 0.1);
        let m = bdg_regularity_margin(a, b, c, eps).unwrap();
        let seed = SampleSeed { master: 313, trial: 0 };
        let mut stream = seed.stream("area-check", 0);
        let trials = 200_000;
        let mut det_hits = 0u64;
        let mut norm_hits = 0u64;
        for _ in 0..trials {
            let (u, v) = stream.unit_disc();
            let r2 = (u - a) * (u - a) + (v - b) * (v - b);
            if (c * c - r2).abs() <= eps {
                det_hits += 1;
            }
            if (c.abs() - r2.sqrt()).abs() <= eps {
                norm_hits += 1;
            }
        }
        for (hits, area) in [(det_hits, m.det_set_area), (norm_hits, m.norm_set_area)] {
            let p = hits as f64 / trials as f64;
            let est = p * PI; // sample space is the unit disc, area pi
            let se = PI * (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (est - area).abs() <= 3.0 * se.max(1e-4),
                "rejection {est} vs quadrature {area} (se {se})"
            );
        }
    }

    #[test]
    fn model_spec_round_trips_and_validates() {
        let spec = bdg_spec(2, 0.7);
        let text = spec.to_json();
        let back = ModelSpec::from_json(&text).unwrap();
        assert_eq!(spec, back);

        let mut bad = bdg_spec(2, 0.7);
        bad.block_size = 3;
        assert!(bad.validate().is_err());
        let mut bad2 = anderson_spec(3, 1.0, 1.0);
        bad2.site_dist = SiteDistribution::uniform_disc();
        assert!(bad2.validate().is_err());
    }

    #[test]
    fn hopping_matrix_dimension_is_enforced() {
        let mut spec = anderson_spec(3, 1.0, 1.0);
        let wrong = HermitianMatrix::identity(2).unwrap();
        spec.hopping = HoppingSpec::Matrix {
            matrix: MatrixDocument::from_matrix(&wrong),
        };
        assert!(spec.hopping_matrix().is_err());
        let right = HermitianMatrix::diagonal(&[0.1, 0.2, 0.3]).unwrap();
        spec.hopping = HoppingSpec::Matrix {
            matrix: MatrixDocument::from_matrix(&right),
        };
        assert_eq!(spec.hopping_matrix().unwrap().dim(), 3);
    }

    #[test]
    fn assumption_check_saturates_and_vanishes() {
        // v ~ U[-1,1], a = 3, J = -2.5: the statistic |1/(v-3) + 2| stays
        // inside [1.5, 1.75], so eps = 2 is almost sure and eps below 1.5
        // (here 1e-6 and 0) is impossible.
        let dist = SiteDistribution::uniform_interval(1.0).unwrap();
        let j = HermitianMatrix::diagonal(&[-2.5]).unwrap();
        let seed = SampleSeed { master: 17, trial: 0 };
        let reports =
            empirical_assumption_a(&dist, 1, 3, &j, &[0.0, 1e-6, 2.0], 60, seed).unwrap();
        assert_eq!(reports[0].p_hat, 0.0);
        assert_eq!(reports[1].p_hat, 0.0);
        assert_eq!(reports[2].p_hat, 1.0);
        assert_eq!(reports[2].bound_value, 0.5 * 2.0);
        // shared draws: successes nest along the grid
        assert!(reports[0].successes <= reports[1].successes);
        assert!(reports[1].successes <= reports[2].successes);
    }

    #[test]
    fn assumption_check_matches_scalar_measure_when_support_covers() {
        // The solution interval for |1/(v-3) + 2| <= eps sits near v = 2.5;
        // a support of [-4, 4] covers it, so the probability is the interval
        // length times the density 1/8. (With the narrower support [-1, 1]
        // the same event is impossible — checked above.)
        let dist = SiteDistribution::uniform_interval(4.0).unwrap();
        let j = HermitianMatrix::diagonal(&[-2.5]).unwrap();
        let eps = 0.1;
        let exact = single_site_event_measure(2.0, 3.0, eps, 4.0).unwrap();
        let margin = scalar_regularity_margin(3, -2.5, eps).unwrap();
        assert!((exact - margin.interval_length / 8.0).abs() < 1e-12);

        let trials = 4000;
        let seed = SampleSeed { master: 23, trial: 0 };
        let reports = empirical_assumption_a(&dist, 1, 3, &j, &[eps], trials, seed).unwrap();
        let r = &reports[0];
        let se = (exact * (1.0 - exact) / trials as f64).sqrt();
        assert!(
            (r.p_hat - exact).abs() <= 3.0 * se,
            "p_hat {} vs exact {exact} (3se = {})",
            r.p_hat,
            3.0 * se
        );
        assert!(r.ci_low <= exact && exact <= r.ci_high);
    }

    #[test]
    fn assumption_check_handles_blocks_and_rejects_bad_input() {
        // 2x2 particle-hole blocks from the unit disc
        let disc = SiteDistribution::uniform_disc();
        let j2 = HermitianMatrix::diagonal(&[0.5, -0.5]).unwrap();
        let seed = SampleSeed { master: 3, trial: 0 };
        let reports = empirical_assumption_a(&disc, 2, 3, &j2, &[0.05, 0.1], 40, seed).unwrap();
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(|r| r.successes <= r.trials));
        let again = empirical_assumption_a(&disc, 2, 3, &j2, &[0.05, 0.1], 40, seed).unwrap();
        assert_eq!(reports, again);

        // disc law pins k = 2
        assert!(empirical_assumption_a(&disc, 1, 3, &j2, &[0.1], 10, seed).is_err());
        // J + aI singular: J = -3, a = 3
        let jbad = HermitianMatrix::diagonal(&[-3.0]).unwrap();
        let scalar = SiteDistribution::uniform_interval(1.0).unwrap();
        assert!(matches!(
            empirical_assumption_a(&scalar, 1, 3, &jbad, &[0.1], 10, seed),
            Err(Error::SingularFactor { factor: "J + a*I" })
        ));
        // dimension mismatch
        let j1 = HermitianMatrix::diagonal(&[0.0]).unwrap();
        assert!(empirical_assumption_a(&scalar, 2, 3, &j1, &[0.1], 10, seed).is_err());
    }
}
