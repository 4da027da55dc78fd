use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of canonical triples `i ≤ j ≤ k` over `2n` indices.
pub fn canonical_len(n: usize) -> usize {
    let d = 2 * n;
    d * (d + 1) * (d + 2) / 6
}

/// Lookup from ordered index triples to canonical coordinates.
///
/// Canonical triples are listed lexicographically, so for `n = 1` the order is
/// `(1,1,1), (1,1,2), (1,2,2), (2,2,2)` in the 1-based notation.
#[derive(Debug, Clone)]
pub struct CanonicalIndex {
    d: usize,
    triples: Vec<[usize; 3]>,
    lookup: Vec<usize>,
}

impl CanonicalIndex {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "n must be at least 1");
        let d = 2 * n;
        let mut triples = Vec::with_capacity(canonical_len(n));
        let mut lookup = vec![usize::MAX; d * d * d];
        for i in 0..d {
            for j in i..d {
                for k in j..d {
                    let id = triples.len();
                    triples.push([i, j, k]);
                    for [a, b, c] in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                        lookup[(a * d + b) * d + c] = id;
                    }
                }
            }
        }
        CanonicalIndex { d, triples, lookup }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Canonical coordinate of the (0-based) ordered triple `(a, b, c)`.
    #[inline]
    pub fn id(&self, a: usize, b: usize, c: usize) -> usize {
        self.lookup[(a * self.d + b) * self.d + c]
    }

    pub fn triple(&self, id: usize) -> [usize; 3] {
        self.triples[id]
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    /// Number of ordered triples represented by a canonical coordinate: 1, 3 or 6.
    pub fn multiplicity(&self, id: usize) -> usize {
        let [i, j, k] = self.triples[id];
        if i == k {
            1
        } else if i == j || j == k {
            3
        } else {
            6
        }
    }
}

/// A fully symmetric 3-tensor `h_{ijk}` over `2n` indices, stored by its
/// canonical coordinates only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTensor3 {
    n: usize,
    coeffs: Vec<f64>,
}

impl SymTensor3 {
    pub fn zeros(n: usize) -> Self {
        SymTensor3 { n, coeffs: vec![0.0; canonical_len(n)] }
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        if coeffs.len() != canonical_len(n) {
            return Err(Error::invalid(format!(
                "expected {} canonical coefficients for n = {n}, got {}",
                canonical_len(n),
                coeffs.len()
            )));
        }
        Ok(SymTensor3 { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Sets the component for any ordering of the 0-based indices.
    pub fn set(&mut self, index: &CanonicalIndex, a: usize, b: usize, c: usize, value: f64) {
        self.coeffs[index.id(a, b, c)] = value;
    }

    pub fn get(&self, index: &CanonicalIndex, a: usize, b: usize, c: usize) -> f64 {
        self.coeffs[index.id(a, b, c)]
    }

    /// Dense `d × d × d` array, row-major in `(a, b, c)`.
    pub fn to_full(&self, index: &CanonicalIndex) -> Vec<f64> {
        let d = index.dim();
        let mut out = vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    out[(a * d + b) * d + c] = self.coeffs[index.id(a, b, c)];
                }
            }
        }
        out
    }

    /// `Σ_{i,j,k} h²_{ijk}` over ordered triples.
    pub fn ordered_norm_sq(&self, index: &CanonicalIndex) -> f64 {
        self.coeffs.iter().enumerate().map(|(id, h)| index.multiplicity(id) as f64 * h * h).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_counts() {
        assert_eq!(canonical_len(1), 4);
        assert_eq!(canonical_len(2), 20);
        assert_eq!(canonical_len(3), 56);
        for n in 1..4 {
            let idx = CanonicalIndex::new(n);
            assert_eq!(idx.len(), canonical_len(n));
            let total: usize = (0..idx.len()).map(|id| idx.multiplicity(id)).sum();
            assert_eq!(total, (2 * n).pow(3));
        }
    }

    #[test]
    fn lookup_is_permutation_invariant() {
        let idx = CanonicalIndex::new(2);
        assert_eq!(idx.id(0, 1, 3), idx.id(3, 0, 1));
        assert_eq!(idx.id(2, 2, 1), idx.id(1, 2, 2));
        assert_eq!(idx.triple(idx.id(3, 1, 0)), [0, 1, 3]);
        let one = CanonicalIndex::new(1);
        let ids: Vec<_> = one.triples().to_vec();
        assert_eq!(ids, vec![[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 1, 1]]);
    }

    #[test]
    fn ordered_norm_counts_placements() {
        let idx = CanonicalIndex::new(1);
        let mut h = SymTensor3::zeros(1);
        h.set(&idx, 0, 1, 1, 1.0);
        assert_eq!(h.ordered_norm_sq(&idx), 3.0);
        assert!(SymTensor3::from_coeffs(1, vec![0.0; 3]).is_err());
    }
}
