//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. Variants carry enough context
//! to identify *which* factor, site, or hypothesis failed, because most
//! callers are verification harnesses that report rather than recover.

/// Errors produced by matrix operations, witness searches, samplers, and
/// Monte Carlo drivers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A matrix failed the invertibility threshold (smallest LU pivot
    /// magnitude below `1e-12` times the largest entry magnitude).
    #[error("{context}: matrix is numerically singular (min pivot {min_pivot:.3e}, threshold {threshold:.3e})")]
    SingularMatrix {
        context: &'static str,
        min_pivot: f64,
        threshold: f64,
    },

    /// A named factor inside a composite resolvent expression is singular.
    #[error("factor {factor} is numerically singular")]
    SingularBlock { factor: &'static str },

    /// A named factor of a determinant comparison is singular.
    #[error("cannot invert {factor}")]
    SingularFactor { factor: &'static str },

    /// A principal submatrix required by a block search is singular; raised
    /// only when every candidate fails.
    #[error("every candidate principal submatrix failed the invertibility threshold")]
    SingularPrincipalSubmatrix,

    /// The pair/subset enumeration would exceed the fixed search budget.
    #[error("subset search space {candidates} exceeds budget {budget}")]
    SearchBudgetExceeded { candidates: u128, budget: u128 },

    /// An operation requiring positive definiteness saw a non-positive
    /// eigenvalue.
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    /// Fewer eigenvalues above the requested level than the requested
    /// subset size.
    #[error("only {available} eigenvalues lie at or above {level}, need {requested}")]
    InsufficientSpectralMass {
        level: f64,
        available: usize,
        requested: usize,
    },

    /// No integer shift in the admissible range stays at distance >= 2 from
    /// the given spectrum. Unreachable for spectra inside [-3, 3]; surfaced
    /// honestly for adversarial ones.
    #[error("no admissible integer shift in [-{max}, -3] u [3, {max}] for the given spectrum")]
    NoAdmissibleShift { max: i64 },

    /// An operator-norm precondition (`<= 1`) failed.
    #[error("{what}: operator norm {norm:.6} exceeds 1")]
    NormTooLarge { what: &'static str, norm: f64 },

    /// The perturbation is larger than the tolerance it is checked against.
    #[error("perturbation norm {norm:.6e} exceeds eps {eps:.6e}")]
    PerturbationTooLarge { norm: f64, eps: f64 },

    /// A stated hypothesis of a count-comparison lemma does not hold for the
    /// given input.
    #[error("hypothesis violated: {hypothesis}")]
    PreconditionViolation { hypothesis: String },

    /// Hopping term is too large for the reduced sampler (needs norm <= 1/2).
    #[error("hopping norm {norm:.6} exceeds 1/2")]
    HoppingNormTooLarge { norm: f64 },

    /// A per-site block of the reduced Hamiltonian is singular after the
    /// shift.
    #[error("site {site}: shifted block is numerically singular")]
    SingularSiteBlock { site: usize },

    /// The assembled reduced Hamiltonian exceeds the guaranteed norm bound,
    /// i.e. the shift is too close to the support of the site distribution.
    #[error("reduced Hamiltonian norm {norm:.6} exceeds 1; shift too close to the site spectrum")]
    ReducedNormExceeded { norm: f64 },

    /// A log-log scaling fit needs at least three cells with nonzero
    /// empirical probability.
    #[error("{context}: only {available} grid cells have nonzero successes, need {needed}")]
    InsufficientPositivePoints {
        context: &'static str,
        available: usize,
        needed: usize,
    },

    /// A Monte Carlo run aborted inside one trial; carries the trial index
    /// so the failure can be replayed with the same seed.
    #[error("trial {trial}: {source}")]
    TrialFailure { trial: u64, source: Box<Error> },

    /// Bad argument values (dimension mismatches, out-of-range parameters).
    #[error("invalid argument: {what}")]
    InvalidArgument { what: String },

    /// Configuration files that parse but fail validation.
    #[error("config: {what}")]
    Config { what: String },

    /// JSON (de)serialization failures, with serde's line/column context.
    #[error("json: {what}")]
    Json { what: String },

    /// Filesystem failures while reading configs or writing reports.
    #[error("io: {path}: {what}")]
    Io { path: String, what: String },
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidArgument { what: what.into() }
    }

    /// True for errors that indicate a malformed configuration rather than a
    /// numerical/runtime failure; the CLI maps these to exit code 2.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::Config { .. } | Error::Json { .. } | Error::InvalidArgument { .. })
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            what: format!("line {} column {}: {}", e.line(), e.column(), e),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
