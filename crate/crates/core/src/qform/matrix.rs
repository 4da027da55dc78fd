use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Serialize, Serializer};

use super::tensor::{canonical_len, CanonicalIndex, SymTensor3};
use crate::{Error, Result};

/// A quadratic form on fully symmetric 3-tensors in canonical coordinates.
///
/// For the canonical coordinate vector `v` of a tensor `h`, `vᵀ M v` equals
/// the form written as sums over ordered index triples; the ordered-index
/// multiplicities are absorbed into `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct QFormMatrix {
    n: usize,
    mat: DMatrix<f64>,
}

impl Serialize for QFormMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QFormMatrix", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("mat", &crate::sympl::matrix_rows(&self.mat))?;
        st.end()
    }
}

impl QFormMatrix {
    pub fn zeros(n: usize) -> Self {
        let m = canonical_len(n);
        QFormMatrix { n, mat: DMatrix::zeros(m, m) }
    }

    pub fn from_matrix(n: usize, mat: DMatrix<f64>) -> Result<Self> {
        let m = canonical_len(n);
        if mat.shape() != (m, m) {
            return Err(Error::invalid(format!("expected a {m}x{m} matrix for n = {n}")));
        }
        let q = QFormMatrix { n, mat };
        if q.asymmetry() > 1e-12 {
            return Err(Error::invalid("quadratic form matrix is not symmetric"));
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Adds `c · h_p h_q` for canonical coordinates `p`, `q`, keeping `M` symmetric.
    #[inline]
    pub(crate) fn add_product(&mut self, c: f64, p: usize, q: usize) {
        let half = 0.5 * c;
        self.mat[(p, q)] += half;
        self.mat[(q, p)] += half;
    }

    pub fn eval(&self, h: &SymTensor3) -> f64 {
        let v = h.coeffs();
        let mut s = 0.0;
        for c in 0..self.dim() {
            let mut row = 0.0;
            for r in 0..self.dim() {
                row += self.mat[(r, c)] * v[r];
            }
            s += row * v[c];
        }
        s
    }

    /// Max-entry norm of `M − Mᵀ`.
    pub fn asymmetry(&self) -> f64 {
        (&self.mat - self.mat.transpose()).amax()
    }

    pub fn max_abs_diff(&self, other: &QFormMatrix) -> f64 {
        (&self.mat - &other.mat).amax()
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        self.mat.clone().symmetric_eigenvalues().min()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.mat.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Coordinates on which the form acts (nonzero row).
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&r| self.mat.row(r).iter().any(|x| *x != 0.0)).collect()
    }

    /// Splits the support into groups of coordinates that never interact,
    /// returning each group with the restricted matrix. Groups are ordered by
    /// their smallest coordinate.
    pub fn irreducible_blocks(&self) -> Vec<(Vec<usize>, DMatrix<f64>)> {
        let support = self.support();
        let mut group = vec![usize::MAX; self.dim()];
        let mut blocks = Vec::new();
        for &s in &support {
            if group[s] != usize::MAX {
                continue;
            }
            let g = blocks.len();
            let mut members = vec![s];
            group[s] = g;
            let mut head = 0;
            while head < members.len() {
                let r = members[head];
                head += 1;
                for c in 0..self.dim() {
                    if self.mat[(r, c)] != 0.0 && group[c] == usize::MAX {
                        group[c] = g;
                        members.push(c);
                    }
                }
            }
            members.sort_unstable();
            blocks.push(members);
        }
        blocks
            .into_iter()
            .map(|m| {
                let sub = DMatrix::from_fn(m.len(), m.len(), |a, b| self.mat[(m[a], m[b])]);
                (m, sub)
            })
            .collect()
    }

    /// Smallest eigenvalue of the form restricted to its support, or `None`
    /// for the zero form.
    pub fn smallest_eigenvalue_on_support(&self) -> Option<f64> {
        let s = self.support();
        if s.is_empty() {
            return None;
        }
        let sub = DMatrix::from_fn(s.len(), s.len(), |a, b| self.mat[(s[a], s[b])]);
        Some(sub.symmetric_eigenvalues().min())
    }
}

impl std::ops::Add for &QFormMatrix {
    type Output = QFormMatrix;
    fn add(self, rhs: &QFormMatrix) -> QFormMatrix {
        assert_eq!(self.n, rhs.n, "forms over different dimensions");
        QFormMatrix { n: self.n, mat: &self.mat + &rhs.mat }
    }
}

/// Accumulates products of tensor components given by ordered index triples.
pub(crate) struct FormBuilder<'a> {
    pub idx: &'a CanonicalIndex,
    pub form: QFormMatrix,
}

impl<'a> FormBuilder<'a> {
    pub fn new(n: usize, idx: &'a CanonicalIndex) -> Self {
        FormBuilder { idx, form: QFormMatrix::zeros(n) }
    }

    /// Adds `c · h_{a} h_{b}` for ordered triples `a`, `b` (0-based).
    #[inline]
    pub fn term(&mut self, c: f64, a: [usize; 3], b: [usize; 3]) {
        let p = self.idx.id(a[0], a[1], a[2]);
        let q = self.idx.id(b[0], b[1], b[2]);
        self.form.add_product(c, p, q);
    }

    /// Adds `c · h²_{a}`.
    #[inline]
    pub fn square(&mut self, c: f64, a: [usize; 3]) {
        self.term(c, a, a);
    }

    pub fn finish(self) -> QFormMatrix {
        self.form
    }
}
