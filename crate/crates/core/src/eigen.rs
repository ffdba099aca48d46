//! Hermitian eigensolver and eigenvalue counting.
//!
//! The solver is the classical two-stage dense path: unitary Householder
//! reflections reduce the matrix to real symmetric tridiagonal form (a
//! diagonal phase pass makes the subdiagonal real non-negative), then
//! implicit-shift QL iterations chase the subdiagonal to zero. Eigenvector
//! accumulation is optional and costs the usual extra O(n^3).
//!
//! Counting semantics are pinned and used verbatim everywhere else:
//!
//! * [`count_in_interval`]: eigenvalues with `|lambda - e| < eps`, *strict*
//!   open interval, no hidden tolerance margin;
//! * [`count_at_least`]: eigenvalues with `lambda >= a`, closed;
//! * [`inertia`]: three-way split at `±zero_tol`.
//!
//! Dimension is capped at [`MAX_DIM`]; this is a verification tool for
//! desk-scale matrices, not a LAPACK replacement.

use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, HermitianMatrix};

/// Hard cap on matrix dimension for the eigensolver.
pub const MAX_DIM: usize = 512;
/// Deflation tolerance factor: an off-diagonal dies when it drops below
/// `QL_TOL_FACTOR * frobenius_norm`.
pub const QL_TOL_FACTOR: f64 = 1e-13;
/// Sweep limit per eigenvalue in the QL stage.
pub const QL_MAX_SWEEPS: usize = 50;
/// Default inertia zero-band factor (times the Frobenius norm).
pub const ZERO_TOL_FACTOR: f64 = 1e-10;

/// Ascending eigenvalues plus the two magnitudes most queries need.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSummary {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalue magnitude (distance of the spectrum to zero).
    pub min_abs: f64,
    /// Largest eigenvalue magnitude (the operator norm).
    pub max_abs: f64,
}

/// Signs of the spectrum relative to a zero band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

/// All eigenvalues, ascending. Infallible for any Hermitian input within the
/// dimension cap.
pub fn eigenvalues(a: &HermitianMatrix) -> Vec<f64> {
    solve(a, false).0
}

/// Eigenvalues (ascending) and a unitary matrix of eigenvectors as columns,
/// aligned with the eigenvalue order.
pub fn eigen_decomposition(a: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (vals, vecs) = solve(a, true);
    (vals, vecs.expect("vectors requested"))
}

pub fn spectrum(a: &HermitianMatrix) -> SpectrumSummary {
    let eigenvalues = self::eigenvalues(a);
    let min_abs = eigenvalues
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    let max_abs = eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max);
    SpectrumSummary {
        eigenvalues,
        min_abs,
        max_abs,
    }
}

/// Count eigenvalues in the open interval `(e - eps, e + eps)`.
pub fn count_in_interval(a: &HermitianMatrix, e: f64, eps: f64) -> usize {
    count_in_sorted(&eigenvalues(a), e, eps)
}

/// The same count from an already-computed ascending eigenvalue list; the
/// Monte Carlo sweeps reuse one solve across a whole grid this way.
pub fn count_in_sorted(sorted: &[f64], e: f64, eps: f64) -> usize {
    if eps <= 0.0 {
        return 0;
    }
    let hi = sorted.partition_point(|&v| v < e + eps);
    let lo = sorted.partition_point(|&v| v <= e - eps);
    hi - lo
}

/// Count eigenvalues `>= a` (closed at the endpoint).
pub fn count_at_least(m: &HermitianMatrix, a: f64) -> usize {
    let sorted = eigenvalues(m);
    sorted.len() - sorted.partition_point(|&v| v < a)
}

/// Three-way eigenvalue signs with a zero band of half-width `zero_tol`
/// (default `1e-10 * frobenius_norm`).
pub fn inertia(a: &HermitianMatrix, zero_tol: Option<f64>) -> Inertia {
    let tol = zero_tol.unwrap_or(ZERO_TOL_FACTOR * a.frobenius_norm());
    let mut out = Inertia {
        negative: 0,
        zero: 0,
        positive: 0,
    };
    for v in eigenvalues(a) {
        if v < -tol {
            out.negative += 1;
        } else if v > tol {
            out.positive += 1;
        } else {
            out.zero += 1;
        }
    }
    out
}

/// Operator (spectral) norm of a Hermitian matrix.
pub fn operator_norm(a: &HermitianMatrix) -> f64 {
    spectrum(a).max_abs
}

pub fn min_eigenvalue(a: &HermitianMatrix) -> f64 {
    eigenvalues(a)[0]
}

pub fn max_eigenvalue(a: &HermitianMatrix) -> f64 {
    *eigenvalues(a).last().expect("dim >= 1")
}

/// Largest singular value of a general rectangular complex matrix, via the
/// Gram matrix on the smaller side.
pub fn singular_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    let gram = if m.rows() <= m.cols() {
        m.mul(&m.adjoint())
    } else {
        m.adjoint().mul(m)
    };
    let h = HermitianMatrix::from_complex(&gram).expect("gram matrix is square");
    max_eigenvalue(&h).max(0.0).sqrt()
}

fn solve(a: &HermitianMatrix, with_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = a.dim();
    assert!(n <= MAX_DIM, "dimension {n} exceeds the {MAX_DIM} cap");
    let tol = QL_TOL_FACTOR * a.frobenius_norm();

    let mut work = a.to_complex();
    let mut q = if with_vectors {
        ComplexMatrix::identity(n)
    } else {
        ComplexMatrix::zeros(0, 0)
    };

    let (mut d, mut e) = tridiagonalize(&mut work, &mut q);
    ql_implicit(&mut d, &mut e, &mut q, tol);

    // sort ascending, permuting eigenvector columns along
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&i, &j| d[i].total_cmp(&d[j]));
    let vals: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vecs = if with_vectors {
        let sorted = ComplexMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
        Some(sorted)
    } else {
        None
    };
    (vals, vecs)
}

/// Reduce `work` (Hermitian, destroyed) to real tridiagonal `(d, e)` while
/// accumulating the unitary transform into `q` (skipped when `q` is 0x0).
/// `e[i]` couples positions `i` and `i+1`; `e[n-1]` is unused and zero.
fn tridiagonalize(work: &mut ComplexMatrix, q: &mut ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = work.rows();
    let track_q = q.rows() == n;

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let norm_x = {
            let mut s = 0.0;
            for i in 0..m {
                s += work[(k + 1 + i, k)].norm_sqr();
            }
            s.sqrt()
        };
        if norm_x == 0.0 {
            continue;
        }
        let x0 = work[(k + 1, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;

        // Householder vector v = x - alpha*e1; |v| > 0 since |v[0]| = |x0| + |x|
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        v[0] = x0 - alpha;
        for i in 1..m {
            v[i] = work[(k + 1 + i, k)];
        }
        let vsq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let beta = 2.0 / vsq;

        // trailing block update: B <- B - v w* - w v*  with
        // p = beta B v, w = p - (beta/2) Re(v* p) v
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += work[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = beta * acc;
        }
        let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let tau = 0.5 * beta * vp.re;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - tau * vi).collect();
        for i in 0..m {
            for j in 0..m {
                let delta = v[i] * w[j].conj() + w[i] * v[j].conj();
                work[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }

        // column k collapses to the single subdiagonal entry alpha
        work[(k + 1, k)] = alpha;
        work[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            work[(i, k)] = Complex64::new(0.0, 0.0);
            work[(k, i)] = Complex64::new(0.0, 0.0);
        }

        if track_q {
            // Q <- Q (I - beta v v*), touching columns k+1..n
            for r in 0..n {
                let mut t = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    t += q[(r, k + 1 + j)] * v[j];
                }
                let t = beta * t;
                for j in 0..m {
                    let sub = t * v[j].conj();
                    q[(r, k + 1 + j)] -= sub;
                }
            }
        }
    }

    // phase pass: rotate each subdiagonal entry onto the positive real axis
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 0..n {
        d[i] = work[(i, i)].re;
    }
    let mut phi = vec![Complex64::new(1.0, 0.0); n];
    for j in 0..n.saturating_sub(1) {
        let t = work[(j + 1, j)];
        let mag = t.norm();
        e[j] = mag;
        phi[j + 1] = if mag > 0.0 { phi[j] * (t / mag) } else { phi[j] };
    }
    if track_q {
        for c in 0..n {
            for r in 0..n {
                let scaled = q[(r, c)] * phi[c];
                q[(r, c)] = scaled;
            }
        }
    }
    (d, e)
}

/// Implicit-shift QL on a real symmetric tridiagonal, rotating the (complex)
/// eigenvector columns of `q` along (skipped when `q` is 0x0).
fn ql_implicit(d: &mut [f64], e: &mut [f64], q: &mut ComplexMatrix, tol: f64) {
    let n = d.len();
    let qrows = q.rows();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                if e[m].abs() <= tol {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            assert!(
                sweeps <= QL_MAX_SWEEPS,
                "implicit-shift QL failed to converge within {QL_MAX_SWEEPS} sweeps"
            );

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g == 0.0 { 1.0 } else { g }));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + 2.0 * c * b;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;

                for k in 0..qrows {
                    let fk = q[(k, i + 1)];
                    let qi = q[(k, i)];
                    q[(k, i + 1)] = s * qi + c * fk;
                    q[(k, i)] = c * qi - s * fk;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
