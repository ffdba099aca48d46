//! Cross-validation of the dense linear algebra against independent,
//! test-local implementations: a cyclic complex Jacobi eigensolver and a
//! Gaussian-elimination determinant. The library uses Householder
//! tridiagonalization + QL and an LU factorization, so agreement here is
//! between genuinely different algorithms.

use num_complex::Complex64;

use spectral_count::matrix::{ComplexMatrix, HermitianMatrix};
use spectral_count::rng::SampleSeed;
use spectral_count::{eigen, lu, synth};

// ---------------------------------------------------------------------------
// Oracle: determinant by Gaussian elimination with partial pivoting
// ---------------------------------------------------------------------------

fn oracle_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// Oracle: Hermitian eigenvalues by cyclic complex Jacobi rotations
// ---------------------------------------------------------------------------

fn off_diagonal_norm(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i][j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn oracle_eigenvalues(m: &HermitianMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| m.inner()[(i, j)]).collect())
        .collect();
    let scale = m.frobenius_norm().max(1.0);

    for _sweep in 0..100 {
        if off_diagonal_norm(&a) <= 1e-13 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a[p][q];
                let mag = alpha.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // phase pass: make the (p, q) entry real positive
                let e = alpha / mag; // e^{i phi}
                for k in 0..n {
                    a[k][q] *= e.conj();
                }
                for k in 0..n {
                    a[q][k] *= e;
                }
                // real rotation zeroing the now-real (p, q) entry
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + tau.hypot(1.0))
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * c - akq * s;
                    a[k][q] = akp * s + akq * c;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = apk * c - aqk * s;
                    a[q][k] = apk * s + aqk * c;
                }
            }
        }
    }
    assert!(
        off_diagonal_norm(&a) <= 1e-10 * scale,
        "jacobi oracle failed to converge"
    );
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

fn stream_for(case: u64) -> spectral_count::rng::Stream {
    SampleSeed {
        master: 0x0eac1e,
        trial: case,
    }
    .stream("oracle", 0)
}

// ---------------------------------------------------------------------------
// Oracle self-checks on closed forms
// ---------------------------------------------------------------------------

#[test]
fn jacobi_oracle_matches_two_by_two_closed_form() {
    // eigs of [[a, b], [conj(b), d]] = (a+d)/2 +- sqrt(((a-d)/2)^2 + |b|^2)
    let cases = [
        (1.0, Complex64::new(0.5, -0.25), -2.0),
        (0.0, Complex64::new(0.0, 3.0), 0.0),
        (4.0, Complex64::new(1.0, 0.0), 4.0),
    ];
    for (a, b, d) in cases {
        let m = HermitianMatrix::from_complex(&ComplexMatrix::from_fn(2, 2, |i, j| {
            match (i, j) {
                (0, 0) => Complex64::new(a, 0.0),
                (0, 1) => b,
                (1, 0) => b.conj(),
                _ => Complex64::new(d, 0.0),
            }
        }))
        .unwrap();
        let mid = (a + d) / 2.0;
        let rad = ((a - d) / 2.0).hypot(b.norm());
        let got = oracle_eigenvalues(&m);
        assert!((got[0] - (mid - rad)).abs() < 1e-12);
        assert!((got[1] - (mid + rad)).abs() < 1e-12);
    }
}

#[test]
fn determinant_oracle_matches_triangular_product() {
    let m = ComplexMatrix::from_fn(3, 3, |i, j| {
        if i <= j {
            Complex64::new((i + 2 * j) as f64 + 1.0, (j - i) as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let expect = m[(0, 0)] * m[(1, 1)] * m[(2, 2)];
    assert!((oracle_det(&m) - expect).norm() < 1e-12 * expect.norm());
}

// ---------------------------------------------------------------------------
// Library vs oracle
// ---------------------------------------------------------------------------

#[test]
fn eigenvalues_match_jacobi_oracle_on_random_instances() {
    for case in 0..60u64 {
        let mut stream = stream_for(case);
        let n = 1 + (case as usize) % 12;
        let a = synth::random_hermitian(n, 2.0, &mut stream).unwrap();
        let lib = eigen::eigenvalues(&a);
        let oracle = oracle_eigenvalues(&a);
        let scale = a.frobenius_norm().max(1.0);
        for (l, o) in lib.iter().zip(&oracle) {
            assert!(
                (l - o).abs() <= 1e-9 * scale,
                "case {case} dim {n}: {l} vs oracle {o}"
            );
        }
    }
}

#[test]
fn eigenvalues_match_oracle_on_clustered_spectra() {
    // near-degenerate and zero eigenvalues exercise deflation paths
    let spectra: [&[f64]; 4] = [
        &[0.0, 0.0, 1.0],
        &[1e-9, -1e-9, 2.0, 2.0 + 1e-8],
        &[5.0, 5.0, 5.0, 5.0],
        &[-3.0, -3.0 + 1e-7, 4.0, 7.0, 7.0],
    ];
    for (case, eigs) in spectra.into_iter().enumerate() {
        let mut stream = stream_for(1000 + case as u64);
        let a = synth::hermitian_with_spectrum(eigs, &mut stream).unwrap();
        let lib = eigen::eigenvalues(&a);
        let oracle = oracle_eigenvalues(&a);
        for (l, o) in lib.iter().zip(&oracle) {
            assert!((l - o).abs() <= 1e-8, "case {case}: {l} vs oracle {o}");
        }
    }
}

#[test]
fn determinants_match_elimination_oracle() {
    for case in 0..40u64 {
        let mut stream = stream_for(2000 + case);
        let n = 1 + (case as usize) % 9;
        // general complex matrix for the LU path
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            let (x, y) = stream.normal_pair();
            Complex64::new(x, y)
        });
        let lib = lu::factor(&g).det();
        let oracle = oracle_det(&g);
        let scale = oracle.norm().max(1e-6);
        assert!(
            (lib - oracle).norm() <= 1e-9 * scale,
            "case {case} dim {n}: {lib} vs oracle {oracle}"
        );

        // Hermitian path: determinant is real
        let h = synth::random_hermitian(n, 1.5, &mut stream).unwrap();
        let lib_h = lu::hermitian_determinant(&h).value;
        let oracle_h = oracle_det(h.inner());
        assert!(oracle_h.im.abs() <= 1e-9 * oracle_h.norm().max(1.0));
        assert!(
            (lib_h - oracle_h.re).abs() <= 1e-9 * oracle_h.norm().max(1e-6),
            "case {case} dim {n}: {lib_h} vs oracle {}",
            oracle_h.re
        );
    }
}

#[test]
fn counts_and_inertia_match_oracle_spectra() {
    for case in 0..40u64 {
        let mut stream = stream_for(3000 + case);
        let n = 2 + (case as usize) % 10;
        let a = synth::random_hermitian(n, 1.0, &mut stream).unwrap();
        let oracle = oracle_eigenvalues(&a);

        let eps = stream.uniform(0.05, 1.5);
        let center = stream.uniform(-0.5, 0.5);
        let expect = oracle
            .iter()
            .filter(|&&v| (v - center).abs() < eps)
            .count();
        assert_eq!(eigen::count_in_interval(&a, center, eps), expect);

        let inertia = eigen::inertia(&a, Some(1e-12));
        let neg = oracle.iter().filter(|&&v| v < -1e-12).count();
        let pos = oracle.iter().filter(|&&v| v > 1e-12).count();
        assert_eq!(inertia.negative, neg, "case {case}");
        assert_eq!(inertia.positive, pos, "case {case}");
        assert_eq!(inertia.zero, n - neg - pos, "case {case}");
    }
}

#[test]
fn operator_norm_matches_oracle_extremes() {
    for case in 0..20u64 {
        let mut stream = stream_for(4000 + case);
        let n = 1 + (case as usize) % 8;
        let a = synth::random_hermitian(n, 3.0, &mut stream).unwrap();
        let oracle = oracle_eigenvalues(&a);
        let expect = oracle
            .iter()
            .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
        assert!((eigen::operator_norm(&a) - expect).abs() <= 1e-9 * expect.max(1.0));
        assert!((eigen::min_eigenvalue(&a) - oracle[0]).abs() <= 1e-9);
        assert!((eigen::max_eigenvalue(&a) - oracle[n - 1]).abs() <= 1e-9);
    }
}
