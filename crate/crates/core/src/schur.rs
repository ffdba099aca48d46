//! Schur complements and the shifted-resolvent sum identity.

use crate::error::{Error, Result};
use crate::lu;
use crate::matrix::{HermitianMatrix, IndexSet};

/// Schur complement `A / A[alpha]`, living on the complement of `alpha`:
///
/// ```text
/// A[a^c] - A[a^c, a] (A[a])^{-1} A[a, a^c]
/// ```
///
/// An empty `alpha` returns `A` unchanged; `alpha` must be a proper subset so
/// the result is at least 1x1.
pub fn schur_complement(a: &HermitianMatrix, alpha: &IndexSet) -> Result<HermitianMatrix> {
    if alpha.universe() != a.dim() {
        return Err(Error::invalid(format!(
            "index set over {{1..{}}} used with a {}-dimensional matrix",
            alpha.universe(),
            a.dim()
        )));
    }
    if alpha.is_empty() {
        return Ok(a.clone());
    }
    if alpha.len() == a.dim() {
        return Err(Error::invalid(
            "Schur complement over the full index set leaves an empty matrix",
        ));
    }
    let comp = alpha.complement();
    let block = a.submatrix(alpha, alpha)?;
    let cross = a.submatrix(alpha, &comp)?; // A[alpha, alpha^c]
    let f = lu::factor(&block);
    f.require_invertible("pivot block of Schur complement")?;
    let solved = f.solve(&cross, "pivot block of Schur complement")?; // (A[a])^{-1} A[a, a^c]
    let corner = a.submatrix(&comp, &comp)?;
    let correction = cross.adjoint().mul(&solved);
    HermitianMatrix::from_nearly_hermitian(&corner.sub(&correction))
}

/// Resolvent-sum form of the inverse of `A + J`:
///
/// ```text
/// (A+J)^{-1} = (A-a)^{-1} - (A-a)^{-1} [ (A-a)^{-1} + (J+a)^{-1} ]^{-1} (A-a)^{-1}
/// ```
///
/// valid for any real shift `a` making the three named factors invertible.
/// Returns the right-hand side; callers verify it against a direct inverse.
/// Each factor that fails the pivot threshold is reported by name, `A + J`
/// included since the identity is vacuous without it.
pub fn woodbury_resolvent(
    a: &HermitianMatrix,
    j: &HermitianMatrix,
    shift: f64,
) -> Result<HermitianMatrix> {
    if a.dim() != j.dim() {
        return Err(Error::invalid(format!(
            "dimension mismatch: A is {}x{0}, J is {1}x{1}",
            a.dim(),
            j.dim()
        )));
    }
    let sum = a.add(j)?;
    if !lu::factor(sum.inner()).is_invertible() {
        return Err(Error::SingularBlock { factor: "A + J" });
    }
    let a_shift = lu::factor(a.shifted(shift).inner());
    if !a_shift.is_invertible() {
        return Err(Error::SingularBlock { factor: "A - a*I" });
    }
    let j_shift = lu::factor(j.shifted(-shift).inner());
    if !j_shift.is_invertible() {
        return Err(Error::SingularBlock { factor: "J + a*I" });
    }
    let ra = a_shift.inverse("A - a*I")?;
    let rj = j_shift.inverse("J + a*I")?;
    let middle = ra.add(&rj);
    let mf = lu::factor(&middle);
    if !mf.is_invertible() {
        return Err(Error::SingularBlock {
            factor: "(A-a)^{-1} + (J+a)^{-1}",
        });
    }
    let inner = mf.inverse("(A-a)^{-1} + (J+a)^{-1}")?;
    let rhs = ra.sub(&ra.mul(&inner).mul(&ra));
    HermitianMatrix::from_nearly_hermitian(&rhs)
}
