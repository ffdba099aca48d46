//! Dense complex matrices, Hermitian matrices, and index sets.
//!
//! Everything downstream — counting, witness searches, reductions, samplers —
//! works on these three types. Storage is dense row-major `Complex64`; the
//! tool targets desk-scale verification (dimension <= 512), so no sparse or
//! banded formats exist on purpose.
//!
//! [`HermitianMatrix`] enforces its symmetry at construction: whatever you
//! hand it is replaced by `(M + M*)/2`, so `a[(i,j)] == conj(a[(j,i)])` holds
//! exactly (bit for bit) afterwards, and diagonals are exactly real.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense row-major complex matrix, possibly rectangular.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| s * self[(i, j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Square complex matrix with `A = A*` enforced at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: ComplexMatrix,
}

impl HermitianMatrix {
    /// Symmetrize an arbitrary square matrix: `(M + M*) / 2`.
    ///
    /// This is the only constructor path, so a `HermitianMatrix` is Hermitian
    /// by construction, not by convention.
    pub fn from_complex(m: &ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::invalid(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if m.rows() == 0 {
            return Err(Error::invalid("Hermitian matrix dimension must be >= 1"));
        }
        let n = m.rows();
        let mut h = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                h[(i, j)] = avg;
                h[(j, i)] = avg.conj();
            }
        }
        Ok(HermitianMatrix { m: h })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        HermitianMatrix::from_complex(&ComplexMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Result<Self> {
        HermitianMatrix::from_complex(&ComplexMatrix::identity(n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        HermitianMatrix::from_complex(&ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn inner(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        self.m.clone()
    }

    /// `A - shift * I`. Real shifts preserve Hermiticity exactly.
    pub fn shifted(&self, shift: f64) -> HermitianMatrix {
        let mut m = self.m.clone();
        for i in 0..self.dim() {
            m[(i, i)] -= Complex64::new(shift, 0.0);
        }
        HermitianMatrix { m }
    }

    pub fn add(&self, rhs: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch in sum: {} vs {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(HermitianMatrix {
            m: self.m.add(&rhs.m),
        })
    }

    pub fn sub(&self, rhs: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != rhs.dim() {
            return Err(Error::invalid(format!(
                "dimension mismatch in difference: {} vs {}",
                self.dim(),
                rhs.dim()
            )));
        }
        Ok(HermitianMatrix {
            m: self.m.sub(&rhs.m),
        })
    }

    /// Real scaling preserves Hermiticity exactly.
    pub fn scaled(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix {
            m: self.m.scale(Complex64::new(s, 0.0)),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.frobenius_norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.m.max_abs_entry()
    }

    /// Rectangular submatrix `A[rows, cols]` (general complex).
    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<ComplexMatrix> {
        self.check_universe(rows)?;
        self.check_universe(cols)?;
        let r: Vec<usize> = rows.offsets().collect();
        let c: Vec<usize> = cols.offsets().collect();
        Ok(ComplexMatrix::from_fn(r.len(), c.len(), |i, j| {
            self.m[(r[i], c[j])]
        }))
    }

    /// Principal submatrix `A[s]`; Hermitian without re-symmetrization.
    pub fn principal(&self, s: &IndexSet) -> Result<HermitianMatrix> {
        self.check_universe(s)?;
        if s.is_empty() {
            return Err(Error::invalid("principal submatrix of empty index set"));
        }
        let idx: Vec<usize> = s.offsets().collect();
        let m = ComplexMatrix::from_fn(idx.len(), idx.len(), |i, j| self.m[(idx[i], idx[j])]);
        Ok(HermitianMatrix { m })
    }

    fn check_universe(&self, s: &IndexSet) -> Result<()> {
        if s.universe() != self.dim() {
            return Err(Error::invalid(format!(
                "index set over {{1..{}}} used with a {}-dimensional matrix",
                s.universe(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Wrap a matrix known to be Hermitian up to rounding (e.g. a Schur
    /// complement of a Hermitian matrix); symmetrizes to make it exact.
    pub(crate) fn from_nearly_hermitian(m: &ComplexMatrix) -> Result<Self> {
        HermitianMatrix::from_complex(m)
    }

    pub fn to_json(&self) -> String {
        let doc = MatrixDocument::from_matrix(self);
        serde_json::to_string_pretty(&doc).expect("matrix document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_str(text)?;
        doc.into_matrix()
    }
}

/// On-disk matrix format: `{"dim": N, "re": [[...]], "im": [[...]]}`,
/// row-major. `im` may be omitted for real matrices. Symmetrization is
/// applied on load, so slightly asymmetric inputs are accepted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixDocument {
    pub fn from_matrix(a: &HermitianMatrix) -> Self {
        let n = a.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| a.inner()[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| a.inner()[(i, j)].im).collect())
            .collect();
        MatrixDocument {
            dim: n,
            re,
            im: Some(im),
        }
    }

    pub fn into_matrix(&self) -> Result<HermitianMatrix> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::Config {
                what: "matrix dim must be >= 1".into(),
            });
        }
        let check_shape = |name: &str, rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Config {
                    what: format!("'{name}' must be a {n}x{n} array"),
                });
            }
            Ok(())
        };
        check_shape("re", &self.re)?;
        if let Some(im) = &self.im {
            check_shape("im", im)?;
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            Complex64::new(
                self.re[i][j],
                self.im.as_ref().map_or(0.0, |im| im[i][j]),
            )
        });
        HermitianMatrix::from_complex(&m)
    }
}

/// Strictly increasing subset of `{1..N}` (1-based, like the reports that
/// reference matrix positions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IndexSetRepr", into = "IndexSetRepr")]
pub struct IndexSet {
    universe: usize,
    members: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct IndexSetRepr {
    universe: usize,
    members: Vec<usize>,
}

impl TryFrom<IndexSetRepr> for IndexSet {
    type Error = Error;
    fn try_from(r: IndexSetRepr) -> Result<Self> {
        IndexSet::new(r.universe, r.members)
    }
}

impl From<IndexSet> for IndexSetRepr {
    fn from(s: IndexSet) -> Self {
        IndexSetRepr {
            universe: s.universe,
            members: s.members,
        }
    }
}

impl IndexSet {
    /// Members must be strictly increasing and within `1..=universe`.
    pub fn new(universe: usize, members: Vec<usize>) -> Result<Self> {
        for w in members.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::invalid(format!(
                    "index set members must be strictly increasing, got {:?}",
                    members
                )));
            }
        }
        if let Some(&first) = members.first() {
            if first == 0 {
                return Err(Error::invalid("index set members are 1-based; 0 is not a member"));
            }
        }
        if let Some(&last) = members.last() {
            if last > universe {
                return Err(Error::invalid(format!(
                    "index {last} outside universe {{1..{universe}}}"
                )));
            }
        }
        Ok(IndexSet { universe, members })
    }

    pub fn empty(universe: usize) -> Self {
        IndexSet {
            universe,
            members: Vec::new(),
        }
    }

    pub fn full(universe: usize) -> Self {
        IndexSet {
            universe,
            members: (1..=universe).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// 0-based row/column offsets, in increasing order.
    pub fn offsets(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&i| i - 1)
    }

    pub fn complement(&self) -> IndexSet {
        let members = (1..=self.universe)
            .filter(|i| !self.contains(*i))
            .collect();
        IndexSet {
            universe: self.universe,
            members,
        }
    }

    pub fn union(&self, other: &IndexSet) -> Result<IndexSet> {
        if self.universe != other.universe {
            return Err(Error::invalid("index set union over different universes"));
        }
        let mut members: Vec<usize> = self
            .members
            .iter()
            .chain(other.members.iter())
            .copied()
            .collect();
        members.sort_unstable();
        members.dedup();
        Ok(IndexSet {
            universe: self.universe,
            members,
        })
    }

    pub fn intersects(&self, other: &IndexSet) -> bool {
        self.members.iter().any(|i| other.contains(*i))
    }

    /// Interpret members as block indices and expand each block `b` to the
    /// `block_size` consecutive entry indices it covers. The universe scales
    /// accordingly: blocks over `{1..NB}` expand to entries over
    /// `{1..NB*block_size}`.
    pub fn expand_blocks(&self, block_size: usize) -> Result<IndexSet> {
        if block_size == 0 {
            return Err(Error::invalid("block size must be >= 1"));
        }
        let members = self
            .members
            .iter()
            .flat_map(|&b| {
                let start = (b - 1) * block_size + 1;
                start..start + block_size
            })
            .collect();
        Ok(IndexSet {
            universe: self.universe * block_size,
            members,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetrization_is_exact() {
        let m = ComplexMatrix::from_fn(4, 4, |i, j| c((i * 7 + j) as f64, (i as f64) - 2.0 * j as f64));
        let h = HermitianMatrix::from_complex(&m).unwrap();
        for i in 0..4 {
            assert_eq!(h.inner()[(i, i)].im, 0.0);
            for j in 0..4 {
                let a = h.inner()[(i, j)];
                let b = h.inner()[(j, i)].conj();
                assert_eq!(a.re, b.re);
                assert_eq!(a.im, b.im);
            }
        }
    }

    #[test]
    fn symmetrization_averages() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(3.0, 0.0);
        let h = HermitianMatrix::from_complex(&m).unwrap();
        assert_eq!(h.inner()[(0, 1)], c(2.0, 0.0));
        assert_eq!(h.inner()[(1, 0)], c(2.0, 0.0));
    }

    #[test]
    fn json_round_trip() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| c(1.0 + (i + j) as f64, i as f64 - j as f64));
        let h = HermitianMatrix::from_complex(&m).unwrap();
        let back = HermitianMatrix::from_json(&h.to_json()).unwrap();
        assert_eq!(h, back);
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let text = r#"{"dim": 1, "re": [[1.0]], "banana": 3}"#;
        assert!(HermitianMatrix::from_json(text).is_err());
    }

    #[test]
    fn json_accepts_missing_im() {
        let text = r#"{"dim": 2, "re": [[1.0, 0.5], [0.5, 2.0]]}"#;
        let h = HermitianMatrix::from_json(text).unwrap();
        assert_eq!(h.inner()[(0, 1)], c(0.5, 0.0));
    }

    #[test]
    fn json_rejects_bad_shape() {
        let text = r#"{"dim": 2, "re": [[1.0, 0.5]]}"#;
        assert!(HermitianMatrix::from_json(text).is_err());
    }

    #[test]
    fn index_set_contract() {
        assert!(IndexSet::new(5, vec![2, 2]).is_err());
        assert!(IndexSet::new(5, vec![3, 2]).is_err());
        assert!(IndexSet::new(5, vec![0, 2]).is_err());
        assert!(IndexSet::new(5, vec![2, 6]).is_err());
        let s = IndexSet::new(5, vec![1, 4]).unwrap();
        assert_eq!(s.complement().members(), &[2, 3, 5]);
        assert_eq!(s.offsets().collect::<Vec<_>>(), vec![0, 3]);
    }

    #[test]
    fn block_expansion() {
        let blocks = IndexSet::new(4, vec![1, 3]).unwrap();
        let entries = blocks.expand_blocks(2).unwrap();
        assert_eq!(entries.universe(), 8);
        assert_eq!(entries.members(), &[1, 2, 5, 6]);
    }

    #[test]
    fn submatrix_picks_rows_and_cols() {
        let h = HermitianMatrix::from_complex(&ComplexMatrix::from_fn(4, 4, |i, j| {
            c((10 * (i + 1) + j + 1) as f64, 0.0)
        }))
        .unwrap();
        let rows = IndexSet::new(4, vec![1, 3]).unwrap();
        let cols = IndexSet::new(4, vec![2, 4]).unwrap();
        let s = h.submatrix(&rows, &cols).unwrap();
        assert_eq!(s.rows(), 2);
        assert_eq!(s.cols(), 2);
        // symmetrized entries of a real symmetric-ized matrix
        let expect_00 = h.inner()[(0, 1)];
        assert_eq!(s[(0, 0)], expect_00);
    }
}
