//! Shift-and-invert reduction and the counting-stability toolbox.
//!
//! The central transform replaces a sum `B = B1 + B2` (with `|B1| <= 1` and
//! `B2` arbitrary Hermitian, both `L x L`) by
//!
//! ```text
//! B_hat = (B1 - a)^{-1} + (B2 + a)^{-1}
//! ```
//!
//! for an integer shift `a` chosen so that both resolvents have norm at most
//! `1/2`, hence `|B_hat| <= 1`. The payoff is a two-sided comparison of
//! near-zero eigenvalue counts:
//!
//! ```text
//! C_{eps/(225 L^4)}(B_hat)  <=  C_eps(B1 + B2)  <=  C_{7 L^2 eps}(B_hat)
//! ```
//!
//! valid for `eps < 1/2` ([`EPS0`]), so counting small eigenvalues of an
//! unbounded sum reduces to counting them for a norm-one matrix.
//!
//! The supporting lemmas live here too: count stability under perturbation
//! ([`weyl_count_stability`]), count monotonicity under contractive
//! conjugation ([`sandwich_count_conjugation`]), the two-sided Schur
//! complement count comparison ([`schur_count_bounds`]), and a determinant
//! dichotomy ([`determinant_dichotomy`]) that turns a small
//! `det((A-a)^{-1} + (J+a)^{-1})` into a quantitative statement about
//! `A + J`.

use serde::{Deserialize, Serialize};

use crate::eigen;
use crate::error::{Error, Result};
use crate::lu;
use crate::matrix::{HermitianMatrix, IndexSet};

/// Validity ceiling for the count comparisons: `eps` strictly below 1/2 for
/// the sandwich, at most 1/2 for the Schur chain.
pub const EPS0: f64 = 0.5;

/// Slack accepted on norm preconditions, to absorb eigensolve roundoff on
/// instances sitting exactly at the boundary (e.g. `B = I`).
const NORM_SLACK: f64 = 1e-10;

/// Output of [`reduce`]: the shift, the transformed matrix, and the scales
/// entering the two-sided count comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReduction {
    /// Integer shift with `3 <= |a| <= L + 3` and `dist(spec(B2), -a) >= 2`.
    pub a: i64,
    /// Dimension of the pair (written `L` in the scale formulas).
    pub l: usize,
    /// `|(B1 - a)^{-1}|`; always within `[1/(L+4), 1/2]`.
    pub nu: f64,
    /// `(B1 - a)^{-1} + (B2 + a)^{-1}`; operator norm at most 1.
    pub b_hat: HermitianMatrix,
    /// `225 L^4` — the lower comparison shrinks `eps` by this factor.
    pub lower_scale: f64,
    /// `7 L^2` — the upper comparison dilates `eps` by this factor.
    pub upper_scale: f64,
}

/// First integer shift `a` in the scan `3, -3, 4, -4, ..., L+3, -(L+3)`
/// whose negation stays at distance `>= 2` from the spectrum of `B2`.
///
/// The small-magnitude-first order is deliberate: downstream determinant
/// thresholds degrade like `1/(16|a|)`, so the least aggressive admissible
/// shift is the most useful one. `L` must equal `dim(B2)`. The scan can
/// exhaust only when the spectrum blocks every candidate; that surfaces as
/// [`Error::NoAdmissibleShift`] rather than a silent bad choice.
pub fn choose_shift(b2: &HermitianMatrix, l: usize) -> Result<i64> {
    if l == 0 || l != b2.dim() {
        return Err(Error::invalid(format!(
            "L must equal dim(B2); got L = {l}, dim = {}",
            b2.dim()
        )));
    }
    let eigs = eigen::eigenvalues(b2);
    let max = (l + 3) as i64;
    for magnitude in 3..=max {
        for a in [magnitude, -magnitude] {
            let neg_a = -(a as f64);
            let dist = eigs
                .iter()
                .map(|&lam| (lam - neg_a).abs())
                .fold(f64::INFINITY, f64::min);
            if dist >= 2.0 {
                return Ok(a);
            }
        }
    }
    Err(Error::NoAdmissibleShift { max })
}

/// Build the shift-and-invert transform of the pair `(B1, B2)`.
///
/// Requires `|B1| <= 1` (within a `1e-10` slack) and equal dimensions. The
/// returned [`ShiftReduction`] satisfies, up to the same slack:
/// `max(|(B1-a)^{-1}|, |(B2+a)^{-1}|) <= 1/2` and
/// `1/(L+4) <= nu <= 1/2`.
pub fn reduce(b1: &HermitianMatrix, b2: &HermitianMatrix) -> Result<ShiftReduction> {
    let l = b1.dim();
    if b2.dim() != l {
        return Err(Error::invalid(format!(
            "B1 and B2 must have equal dimensions; got {l} and {}",
            b2.dim()
        )));
    }
    let eigs_b1 = eigen::eigenvalues(b1);
    let norm_b1 = eigs_b1
        .iter()
        .map(|&lam| lam.abs())
        .fold(0.0_f64, f64::max);
    if norm_b1 > 1.0 + NORM_SLACK {
        return Err(Error::NormTooLarge {
            what: "B1".into(),
            norm: norm_b1,
        });
    }
    let a = choose_shift(b2, l)?;
    let af = a as f64;

    let inv1 = invert_shifted(b1, af, "B1 - a*I")?;
    let inv2 = invert_shifted(b2, -af, "B2 + a*I")?;
    let b_hat = inv1.add(&inv2)?;

    let dist_b1 = eigs_b1
        .iter()
        .map(|&lam| (lam - af).abs())
        .fold(f64::INFINITY, f64::min);
    let nu = 1.0 / dist_b1;
    let lf = l as f64;
    debug_assert!(nu <= 0.5 + NORM_SLACK, "resolvent norm bound violated: nu = {nu}");
    debug_assert!(
        nu >= 1.0 / (lf + 4.0) - NORM_SLACK,
        "resolvent norm floor violated: nu = {nu}, L = {l}"
    );

    Ok(ShiftReduction {
        a,
        l,
        nu,
        b_hat,
        lower_scale: 225.0 * lf.powi(4),
        upper_scale: 7.0 * lf * lf,
    })
}

fn invert_shifted(m: &HermitianMatrix, shift: f64, factor: &'static str) -> Result<HermitianMatrix> {
    let shifted = m.shifted(shift);
    let f = lu::factor(shifted.inner());
    if !f.is_invertible() {
        return Err(Error::SingularFactor {
            factor: factor.into(),
        });
    }
    HermitianMatrix::from_nearly_hermitian(&f.inverse(factor)?)
}

/// The three counts entering the reduction comparison, for one `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    /// `C_{eps/(225 L^4)}(B_hat)`.
    pub low: usize,
    /// `C_eps(B1 + B2)` — the quantity being bracketed.
    pub mid: usize,
    /// `C_{7 L^2 eps}(B_hat)`.
    pub high: usize,
    /// Shift used by the underlying reduction.
    pub a: i64,
    /// `|(B1 - a)^{-1}|` of the underlying reduction.
    pub nu: f64,
}

impl SandwichCheck {
    /// Whether `low <= mid <= high` held on this instance.
    pub fn holds(&self) -> bool {
        self.low <= self.mid && self.mid <= self.high
    }
}

/// Evaluate all three counts of the reduction comparison at `eps`
/// (`0 < eps < 1/2`). The comparison is a theorem on the admissible domain,
/// so [`SandwichCheck::holds`] failing indicates a numerical problem; the
/// verification suites treat it as a hard failure.
pub fn count_sandwich_check(
    b1: &HermitianMatrix,
    b2: &HermitianMatrix,
    eps: f64,
) -> Result<SandwichCheck> {
    if !(eps > 0.0 && eps < EPS0) {
        return Err(Error::invalid(format!(
            "eps must lie in (0, {EPS0}); got {eps}"
        )));
    }
    let red = reduce(b1, b2)?;
    let sum = b1.add(b2)?;
    let hat_eigs = eigen::eigenvalues(&red.b_hat);
    let check = SandwichCheck {
        low: eigen::count_in_sorted(&hat_eigs, 0.0, eps / red.lower_scale),
        mid: eigen::count_in_interval(&sum, 0.0, eps),
        high: eigen::count_in_sorted(&hat_eigs, 0.0, red.upper_scale * eps),
        a: red.a,
        nu: red.nu,
    };
    debug_assert!(check.holds(), "count sandwich violated: {check:?}");
    Ok(check)
}

/// Count stability under a perturbation of norm at most `eps`:
/// returns `C_eps(D) <= C_{2 eps}(Dtilde)`, which is a theorem under the
/// precondition (verified here; violation is [`Error::PerturbationTooLarge`]).
pub fn weyl_count_stability(
    d: &HermitianMatrix,
    dtilde: &HermitianMatrix,
    eps: f64,
) -> Result<bool> {
    if d.dim() != dtilde.dim() {
        return Err(Error::invalid("D and Dtilde must have equal dimensions"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    let diff_norm = eigen::operator_norm(&d.sub(dtilde)?);
    if diff_norm > eps {
        return Err(Error::PerturbationTooLarge {
            norm: diff_norm,
            eps,
        });
    }
    Ok(eigen::count_in_interval(d, 0.0, eps) <= eigen::count_in_interval(dtilde, 0.0, 2.0 * eps))
}

/// Count monotonicity under contractive conjugation: returns
/// `C_eps(A) <= C_eps(B A B)` for Hermitian `B` with `|B| <= 1`.
pub fn sandwich_count_conjugation(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    eps: f64,
) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("A and B must have equal dimensions"));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    let norm_b = eigen::operator_norm(b);
    if norm_b > 1.0 + NORM_SLACK {
        return Err(Error::NormTooLarge {
            what: "B".into(),
            norm: norm_b,
        });
    }
    let bab = HermitianMatrix::from_nearly_hermitian(
        &b.to_complex().mul(&a.to_complex()).mul(&b.to_complex()),
    )?;
    Ok(eigen::count_in_interval(a, 0.0, eps) <= eigen::count_in_interval(&bab, 0.0, eps))
}

/// The two-sided Schur complement count comparison, evaluated at one `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchurCountBounds {
    /// `C_eps(D/B)` where `B = D[alpha^c]` is the pivot block.
    pub schur_count: usize,
    /// `C_eps(D)`.
    pub full_count: usize,
    /// `C_{beta eps}(D/B)`.
    pub beta_scaled_count: usize,
    /// `beta = 2 (|B^{-1}| + 1)^2`.
    pub beta: f64,
}

impl SchurCountBounds {
    /// Whether `schur_count <= full_count <= beta_scaled_count` held.
    pub fn holds(&self) -> bool {
        self.schur_count <= self.full_count && self.full_count <= self.beta_scaled_count
    }
}

/// Evaluate `C_eps(D/B) <= C_eps(D) <= C_{beta eps}(D/B)` for the partition
/// `D = [[A, V], [V*, B]]` with `A = D[alpha]`, `B = D[alpha^c]`.
///
/// Hypotheses, each reported by name on failure: `eps <= 1/2`;
/// `|V| <= 1/2`; `B` has no eigenvalues in `(-2 eps, 2 eps)` (which also
/// makes it safely invertible).
pub fn schur_count_bounds(
    d: &HermitianMatrix,
    alpha: &IndexSet,
    eps: f64,
) -> Result<SchurCountBounds> {
    if alpha.universe() != d.dim() {
        return Err(Error::invalid("alpha must index the dimension of D"));
    }
    if alpha.is_empty() || alpha.len() == d.dim() {
        return Err(Error::invalid(
            "alpha must be a nonempty proper subset so both blocks exist",
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("eps must be positive"));
    }
    if eps > EPS0 {
        return Err(Error::PreconditionViolation {
            hypothesis: format!("eps <= 1/2 (got {eps})"),
        });
    }
    let comp = alpha.complement();
    let v_norm = eigen::singular_norm(&d.submatrix(alpha, &comp)?);
    if v_norm > 0.5 + NORM_SLACK {
        return Err(Error::PreconditionViolation {
            hypothesis: format!("off-diagonal block norm <= 1/2 (got {v_norm})"),
        });
    }
    let b = d.principal(&comp)?;
    if eigen::count_in_interval(&b, 0.0, 2.0 * eps) != 0 {
        return Err(Error::PreconditionViolation {
            hypothesis: format!("pivot block must have no eigenvalues in (-{0}, {0})", 2.0 * eps),
        });
    }
    let b_inv_norm = 1.0 / eigen::spectrum(&b).min_abs;
    let beta = 2.0 * (b_inv_norm + 1.0) * (b_inv_norm + 1.0);
    let schur = crate::schur::schur_complement(d, &comp)?;
    let schur_eigs = eigen::eigenvalues(&schur);
    let out = SchurCountBounds {
        schur_count: eigen::count_in_sorted(&schur_eigs, 0.0, eps),
        full_count: eigen::count_in_interval(d, 0.0, eps),
        beta_scaled_count: eigen::count_in_sorted(&schur_eigs, 0.0, beta * eps),
        beta,
    };
    debug_assert!(out.holds(), "Schur count chain violated: {out:?}");
    Ok(out)
}

/// Which conclusion of the determinant dichotomy applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DichotomyBranch {
    /// `(2(|a|+1)^2)^{-k} |det(A+J)| <= |det((A-a)^{-1} + (J+a)^{-1})|`.
    DetBound,
    /// `(16|a|)^{-1} (2(|a|+1)^2 |(A+J)^{-1}|)^{1-k} <= |det(...)|`.
    NormBound,
    /// The determinant exceeded the threshold, so no bound is asserted.
    NotApplicable,
}

/// Result of [`determinant_dichotomy`]. For `DetBound`/`NormBound`, `lhs` is
/// the asserted lower bound and `rhs` the determinant magnitude; for
/// `NotApplicable`, `lhs` is the determinant and `rhs` the threshold it
/// exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DichotomyOutcome {
    pub branch: DichotomyBranch,
    pub lhs: f64,
    pub rhs: f64,
    /// `|det((A-a)^{-1} + (J+a)^{-1})|`.
    pub det_value: f64,
    /// `(16|a|)^{-1} ((|a|-1) / (2(|a|+1)^2))^{k-1}`.
    pub threshold: f64,
}

impl DichotomyOutcome {
    /// Whether the dichotomy's guarantee held on this instance: vacuously
    /// for `NotApplicable`, otherwise `lhs <= rhs`.
    pub fn conclusion_holds(&self) -> bool {
        match self.branch {
            DichotomyBranch::NotApplicable => true,
            _ => self.lhs <= self.rhs,
        }
    }
}

/// The small-determinant dichotomy for Hermitian `k x k` pairs.
///
/// Requires `|A| <= 1`, `|a| >= 2`, and `A - a`, `J + a`, `A + J` all
/// invertible. When `|det((A-a)^{-1} + (J+a)^{-1})|` is at most the
/// threshold, at least one of the two lower bounds on it must hold; the
/// determinant branch is tried first, and the returned record reports the
/// inequality actually evaluated.
pub fn determinant_dichotomy(
    a_mat: &HermitianMatrix,
    j: &HermitianMatrix,
    a: f64,
) -> Result<DichotomyOutcome> {
    let k = a_mat.dim();
    if j.dim() != k {
        return Err(Error::invalid("A and J must have equal dimensions"));
    }
    if !(a.abs() >= 2.0) {
        return Err(Error::invalid(format!(
            "shift magnitude must be at least 2; got {a}"
        )));
    }
    let norm_a = eigen::operator_norm(a_mat);
    if norm_a > 1.0 + NORM_SLACK {
        return Err(Error::NormTooLarge {
            what: "A".into(),
            norm: norm_a,
        });
    }
    let sum = a_mat.add(j)?;
    let f_sum = lu::factor(sum.inner());
    if !f_sum.is_invertible() {
        return Err(Error::SingularFactor {
            factor: "A + J".into(),
        });
    }
    let inv_a = invert_shifted(a_mat, a, "A - a*I")?;
    let inv_j = invert_shifted(j, -a, "J + a*I")?;
    let mid = inv_a.add(&inv_j)?;
    let det_value = lu::factor(mid.inner()).det().norm();

    let abs_a = a.abs();
    let weight = 2.0 * (abs_a + 1.0) * (abs_a + 1.0);
    let threshold = 1.0 / (16.0 * abs_a) * ((abs_a - 1.0) / weight).powi(k as i32 - 1);

    if det_value > threshold {
        return Ok(DichotomyOutcome {
            branch: DichotomyBranch::NotApplicable,
            lhs: det_value,
            rhs: threshold,
            det_value,
            threshold,
        });
    }

    let det_bound_lhs = weight.powi(-(k as i32)) * f_sum.det().norm();
    if det_bound_lhs <= det_value {
        return Ok(DichotomyOutcome {
            branch: DichotomyBranch::DetBound,
            lhs: det_bound_lhs,
            rhs: det_value,
            det_value,
            threshold,
        });
    }

    let sum_inv_norm = 1.0 / eigen::spectrum(&sum).min_abs;
    let norm_bound_lhs = 1.0 / (16.0 * abs_a) * (weight * sum_inv_norm).powi(1 - k as i32);
    Ok(DichotomyOutcome {
        branch: DichotomyBranch::NormBound,
        lhs: norm_bound_lhs,
        rhs: det_value,
        det_value,
        threshold,
    })
}
