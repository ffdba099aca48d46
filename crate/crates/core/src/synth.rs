//! Seeded generators for structured test matrices: random Hermitian and
//! unitary matrices, matrices with planted spectra, and ready-made instances
//! for the property suites (planted small-eigenvalue counts, norm-bounded
//! matrix pairs, gapped-pivot blocks).
//!
//! Everything draws from a caller-supplied [`Stream`], so instances are
//! reproducible and independent across streams. Planted constructions
//! conjugate a chosen diagonal by a Haar-ish random unitary (Gram-Schmidt of
//! a Gaussian matrix), which preserves the spectrum exactly up to roundoff.

use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix, IndexSet};
use crate::rng::Stream;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("matrix dimension must be >= 1"));
    }
    if n > eigen::MAX_DIM {
        return Err(Error::invalid(format!(
            "dimension {n} exceeds the supported maximum {}",
            eigen::MAX_DIM
        )));
    }
    Ok(())
}

/// Dense random Hermitian matrix: real Gaussian diagonal, complex Gaussian
/// off-diagonal entries, all scaled by `scale`.
pub fn random_hermitian(n: usize, scale: f64, stream: &mut Stream) -> Result<HermitianMatrix> {
    check_dim(n)?;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(scale * stream.normal(), 0.0);
        for j in (i + 1)..n {
            let (re, im) = stream.normal_pair();
            let z = Complex64::new(re, im) * (scale / std::f64::consts::SQRT_2);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_complex(&m)
}

/// Random unitary matrix: modified Gram-Schmidt applied to a complex
/// Gaussian matrix. Columns are orthonormal to machine precision.
pub fn random_unitary(n: usize, stream: &mut Stream) -> Result<ComplexMatrix> {
    check_dim(n)?;
    // columns as vectors
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let (re, im) = stream.normal_pair();
                    Complex64::new(re, im)
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        // two passes of orthogonalization keep orthonormality tight
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                for r in 0..n {
                    let correction = proj * cols[i][r];
                    cols[j][r] -= correction;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            // astronomically unlikely; redraw deterministically from the stream
            for r in 0..n {
                let (re, im) = stream.normal_pair();
                cols[j][r] = Complex64::new(re, im);
            }
            return random_unitary_fixup(cols, j, n, stream);
        }
        for r in 0..n {
            cols[j][r] /= norm;
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| cols[c][r]))
}

// Cold path: restart orthogonalization from column `j` after a redraw.
fn random_unitary_fixup(
    mut cols: Vec<Vec<Complex64>>,
    start: usize,
    n: usize,
    stream: &mut Stream,
) -> Result<ComplexMatrix> {
    for j in start..n {
        loop {
            for _ in 0..2 {
                for i in 0..j {
                    let proj: Complex64 = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
                    for r in 0..n {
                        let correction = proj * cols[i][r];
                        cols[j][r] -= correction;
                    }
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm >= 1e-8 {
                for r in 0..n {
                    cols[j][r] /= norm;
                }
                break;
            }
            for r in 0..n {
                let (re, im) = stream.normal_pair();
                cols[j][r] = Complex64::new(re, im);
            }
        }
    }
    Ok(ComplexMatrix::from_fn(n, n, |r, c| cols[c][r]))
}

/// Hermitian matrix with exactly the given spectrum (up to eigensolver
/// roundoff): a random unitary conjugation of `diag(eigenvalues)`.
pub fn hermitian_with_spectrum(
    eigenvalues: &[f64],
    stream: &mut Stream,
) -> Result<HermitianMatrix> {
    let n = eigenvalues.len();
    check_dim(n)?;
    if eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("planted eigenvalues must be finite"));
    }
    let u = random_unitary(n, stream)?;
    let scaled = ComplexMatrix::from_fn(n, n, |r, c| u[(r, c)] * eigenvalues[c]);
    let m = scaled.mul(&u.adjoint());
    HermitianMatrix::from_nearly_hermitian(&m)
}

/// Positive-definite matrix with eigenvalues drawn uniformly from
/// `[lambda_min, lambda_max]`.
pub fn random_positive_definite(
    n: usize,
    lambda_min: f64,
    lambda_max: f64,
    stream: &mut Stream,
) -> Result<HermitianMatrix> {
    if !(lambda_min > 0.0 && lambda_max >= lambda_min && lambda_max.is_finite()) {
        return Err(Error::invalid(format!(
            "eigenvalue range must satisfy 0 < lambda_min <= lambda_max; got [{lambda_min}, {lambda_max}]"
        )));
    }
    let eigs: Vec<f64> = (0..n).map(|_| stream.uniform(lambda_min, lambda_max)).collect();
    hermitian_with_spectrum(&eigs, stream)
}

/// Random complex matrix with operator norm at most `cap` (uniformly drawn
/// in `[cap/2, cap]`), for exercising contraction hypotheses.
pub fn random_contraction(n: usize, cap: f64, stream: &mut Stream) -> Result<ComplexMatrix> {
    check_dim(n)?;
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::invalid(format!("norm cap must be positive; got {cap}")));
    }
    let raw = ComplexMatrix::from_fn(n, n, |_, _| {
        let (re, im) = stream.normal_pair();
        Complex64::new(re, im)
    });
    let norm = eigen::singular_norm(&raw);
    let target = cap * stream.uniform(0.5, 1.0);
    // a zero Gaussian draw has probability zero; guard against it anyway
    let scale = if norm > 0.0 { target / norm } else { 0.0 };
    Ok(raw.scale(Complex64::new(scale, 0.0)))
}

/// Invertible Hermitian matrix with exactly `m` eigenvalues in the open
/// interval `(-eps, eps)`. The small eigenvalues have magnitudes in
/// `[0.1 eps, 0.8 eps]` (never zero, so the matrix stays invertible); the
/// remaining ones sit at magnitudes in `[1.5 eps, 10 eps]`, both with
/// random signs.
pub fn planted_count_instance(
    n: usize,
    m: usize,
    eps: f64,
    stream: &mut Stream,
) -> Result<HermitianMatrix> {
    check_dim(n)?;
    if m > n {
        return Err(Error::invalid(format!(
            "cannot plant {m} small eigenvalues in dimension {n}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive; got {eps}")));
    }
    let mut eigs = Vec::with_capacity(n);
    for _ in 0..m {
        let mag = stream.uniform(0.1 * eps, 0.8 * eps);
        let sign = if stream.next_f64() < 0.5 { -1.0 } else { 1.0 };
        eigs.push(sign * mag);
    }
    for _ in m..n {
        let mag = stream.uniform(1.5 * eps, 10.0 * eps);
        let sign = if stream.next_f64() < 0.5 { -1.0 } else { 1.0 };
        eigs.push(sign * mag);
    }
    hermitian_with_spectrum(&eigs, stream)
}

/// Pair `(B1, B2)` of Hermitian matrices of dimension `l` with operator
/// norms at most `0.95`: inputs on which the shift-based reduction is
/// guaranteed to find an admissible integer shift.
pub fn shift_reduction_pair(
    l: usize,
    stream: &mut Stream,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    check_dim(l)?;
    let draw = |stream: &mut Stream| -> Result<HermitianMatrix> {
        let eigs: Vec<f64> = (0..l).map(|_| stream.uniform(-0.95, 0.95)).collect();
        hermitian_with_spectrum(&eigs, stream)
    };
    Ok((draw(stream)?, draw(stream)?))
}

/// Hermitian matrix together with a pivot index set `alpha` such that the
/// pivot block has no eigenvalues in `(-2.5 eps, 2.5 eps)` and the
/// off-diagonal block has operator norm at most `0.45`: an instance meeting
/// the gapped-pivot preconditions with margin to spare.
pub fn pivot_gap_instance(
    n: usize,
    pivot: usize,
    eps: f64,
    stream: &mut Stream,
) -> Result<(HermitianMatrix, IndexSet)> {
    check_dim(n)?;
    if pivot == 0 || pivot >= n {
        return Err(Error::invalid(format!(
            "pivot size must lie strictly between 0 and {n}; got {pivot}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be positive; got {eps}")));
    }
    // choose a random pivot subset by reservoir-free selection
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..pivot {
        let j = i + (stream.next_u64() as usize) % (n - i);
        indices.swap(i, j);
    }
    let mut alpha: Vec<usize> = indices[..pivot].to_vec();
    alpha.sort_unstable();
    let rest: Vec<usize> = (0..n).filter(|i| !alpha.contains(i)).collect();

    // pivot block: spectrum bounded away from zero by 2.5 eps
    let b_eigs: Vec<f64> = (0..pivot)
        .map(|_| {
            let mag = stream.uniform(2.5 * eps, 8.0 * eps);
            if stream.next_f64() < 0.5 { -mag } else { mag }
        })
        .collect();
    let b = hermitian_with_spectrum(&b_eigs, stream)?;
    let c = random_hermitian(n - pivot, 3.0 * eps, stream)?;
    let v = random_contraction_rect(pivot, n - pivot, 0.45, stream);

    let mut full = ComplexMatrix::zeros(n, n);
    for (bi, &gi) in alpha.iter().enumerate() {
        for (bj, &gj) in alpha.iter().enumerate() {
            full[(gi, gj)] = b.inner()[(bi, bj)];
        }
    }
    for (ci, &gi) in rest.iter().enumerate() {
        for (cj, &gj) in rest.iter().enumerate() {
            full[(gi, gj)] = c.inner()[(ci, cj)];
        }
    }
    for (bi, &gi) in alpha.iter().enumerate() {
        for (cj, &gj) in rest.iter().enumerate() {
            full[(gi, gj)] = v[(bi, cj)];
            full[(gj, gi)] = v[(bi, cj)].conj();
        }
    }
    let d = HermitianMatrix::from_complex(&full)?;
    // IndexSet members are 1-based; the assembly above used 0-based offsets
    let set = IndexSet::new(n, alpha.iter().map(|&i| i + 1).collect())?;
    Ok((d, set))
}

// Rectangular Gaussian block scaled to operator norm at most `cap`.
fn random_contraction_rect(rows: usize, cols: usize, cap: f64, stream: &mut Stream) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(rows, cols, |_, _| {
        let (re, im) = stream.normal_pair();
        Complex64::new(re, im)
    });
    let norm = eigen::singular_norm(&raw);
    let target = cap * stream.uniform(0.5, 1.0);
    let scale = if norm > 0.0 { target / norm } else { 0.0 };
    raw.scale(Complex64::new(scale, 0.0))
}
