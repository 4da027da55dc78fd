//! Symplectic linear algebra on `ℝ²ⁿ` with the standard complex structure.
//!
//! Matrices act on column vectors; `J` is block diagonal with `n` copies of
//! `[[0, -1], [1, 0]]`, so that `J e₂ᵢ₋₁ = e₂ᵢ`. A matrix `L` is symplectic
//! when `LᵀJL = J`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, DEFAULT_TOL};

/// Smallest eigenvalue of `LᵀL` relative to the largest before the polar
/// factor is refused.
const GRAM_RELATIVE_FLOOR: f64 = 1e-14;
/// Absolute clamp applied to eigenvalues of `LᵀL` before inversion.
const GRAM_CLAMP: f64 = 1e-300;
/// Relative gap under which singular values share a singular subspace.
pub const CLUSTER_REL_GAP: f64 = 1e-8;

/// The standard complex structure on `ℝ²ⁿ`.
pub fn standard_j(n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::invalid("half-dimension n must be at least 1"));
    }
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for b in 0..n {
        j[(2 * b, 2 * b + 1)] = -1.0;
        j[(2 * b + 1, 2 * b)] = 1.0;
    }
    Ok(j)
}

fn half_dim(m: &DMatrix<f64>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::invalid(format!("matrix must be square, got {r}x{c}")));
    }
    if r == 0 || r % 2 != 0 {
        return Err(Error::invalid(format!("matrix size must be even and positive, got {r}")));
    }
    Ok(r / 2)
}

/// Max-entry norm of `MᵀJM − J`.
pub fn symplectic_residual(m: &DMatrix<f64>) -> Result<f64> {
    let n = half_dim(m)?;
    let j = standard_j(n)?;
    let r = m.transpose() * &j * m - j;
    Ok(r.amax())
}

/// True iff `‖MᵀJM − J‖_max ≤ tol`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    Ok(symplectic_residual(m)? <= tol)
}

/// A real `2n × 2n` matrix verified to satisfy `LᵀJL = J`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    n: usize,
    entries: DMatrix<f64>,
}

impl SymplecticMap {
    /// Wraps `entries` after checking the symplectic condition at `tol`.
    pub fn new(entries: DMatrix<f64>, tol: f64) -> Result<Self> {
        let n = half_dim(&entries)?;
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("matrix has non-finite entries"));
        }
        let residual = symplectic_residual(&entries)?;
        if !(residual <= tol) {
            return Err(Error::NotSymplectic { residual, tol });
        }
        Ok(SymplecticMap { n, entries })
    }

    /// Builds from row-major rows, as read from JSON.
    pub fn from_rows(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != r) {
            return Err(Error::invalid("matrix rows must all have length equal to the row count"));
        }
        let m = DMatrix::from_fn(r, r, |i, j| rows[i][j]);
        Self::new(m, tol)
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("half-dimension n must be at least 1"));
        }
        Ok(SymplecticMap { n, entries: DMatrix::identity(2 * n, 2 * n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        matrix_rows(&self.entries)
    }

    /// `L⁻¹ = −J Lᵀ J`, exact for symplectic `L`.
    pub fn inverse(&self) -> SymplecticMap {
        let j = standard_j(self.n).expect("n >= 1");
        SymplecticMap { n: self.n, entries: -(&j * self.entries.transpose() * &j) }
    }

    pub fn transpose(&self) -> SymplecticMap {
        SymplecticMap { n: self.n, entries: self.entries.transpose() }
    }
}

pub(crate) fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Singular values arranged in pairs `λ₂ᵢ₋₁ λ₂ᵢ = 1` (0-based: `lambda[2i] * lambda[2i+1] = 1`).
///
/// The type only enforces positivity and reciprocity. The canonical order
/// (`λ₂ᵢ₋₁ ≥ 1`, pairs descending) is what [`paired_singular_values`] returns;
/// quadratic-form evaluation also needs the flipped orientation, which is why
/// it is not a type invariant. See [`SingularSpectrum::is_canonical`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    n: usize,
    lambda: Vec<f64>,
}

impl SingularSpectrum {
    /// Validates positivity and pair reciprocity (relative `tol`).
    pub fn new(lambda: Vec<f64>, tol: f64) -> Result<Self> {
        if lambda.is_empty() || lambda.len() % 2 != 0 {
            return Err(Error::invalid(format!(
                "spectrum must have a positive even length, got {}",
                lambda.len()
            )));
        }
        if let Some(x) = lambda.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::invalid(format!("singular values must be positive and finite, got {x}")));
        }
        for (i, pair) in lambda.chunks(2).enumerate() {
            let prod = pair[0] * pair[1];
            if (prod - 1.0).abs() > tol {
                return Err(Error::invalid(format!(
                    "pair {} = ({}, {}) has product {prod}, expected 1",
                    i + 1,
                    pair[0],
                    pair[1]
                )));
            }
        }
        Ok(SingularSpectrum { n: lambda.len() / 2, lambda })
    }

    /// All singular values equal to one.
    pub fn ones(n: usize) -> Self {
        assert!(n >= 1, "n must be at least 1");
        SingularSpectrum { n, lambda: vec![1.0; 2 * n] }
    }

    /// Pairs `(e^{tᵢ}, e^{-tᵢ})`, reciprocal by construction.
    pub fn from_log_pairs(t: &[f64]) -> Self {
        assert!(!t.is_empty(), "need at least one pair");
        let lambda = t.iter().flat_map(|&x| [x.exp(), (-x).exp()]).collect();
        SingularSpectrum { n: t.len(), lambda }
    }

    /// Pairs `(λ, 1/λ)` from the leading entry of each pair.
    pub fn from_leading(leading: &[f64]) -> Result<Self> {
        if leading.is_empty() {
            return Err(Error::invalid("need at least one pair"));
        }
        if let Some(x) = leading.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::invalid(format!("singular values must be positive and finite, got {x}")));
        }
        let lambda = leading.iter().flat_map(|&x| [x, 1.0 / x]).collect();
        Ok(SingularSpectrum { n: leading.len(), lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.lambda
    }

    /// `λ_{i'}` for a 0-based index `i`.
    pub fn partner(&self, i: usize) -> f64 {
        self.lambda[i ^ 1]
    }

    pub fn max(&self) -> f64 {
        self.lambda.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn is_canonical(&self) -> bool {
        self.lambda.chunks(2).all(|p| p[0] >= p[1])
            && self.lambda.chunks(2).zip(self.lambda.chunks(2).skip(1)).all(|(a, b)| a[0] >= b[0])
    }

    /// Same multiset, reordered canonically.
    pub fn canonicalize(&self) -> Self {
        let mut pairs: Vec<(f64, f64)> = self
            .lambda
            .chunks(2)
            .map(|p| if p[0] >= p[1] { (p[0], p[1]) } else { (p[1], p[0]) })
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        SingularSpectrum { n: self.n, lambda: pairs.into_iter().flat_map(|(a, b)| [a, b]).collect() }
    }
}

/// Eigen-decomposition of `LᵀL`: singular values (descending) and the
/// matching orthonormal right singular vectors as columns.
pub fn singular_vectors(l: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    half_dim(l)?;
    let gram = l.transpose() * l;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let largest = eig.eigenvalues[order[0]];
    let smallest = eig.eigenvalues[*order.last().unwrap()];
    if !(largest > 0.0) || smallest < GRAM_RELATIVE_FLOOR * largest {
        return Err(Error::SingularGram { smallest, largest });
    }
    let sigma = order.iter().map(|&k| eig.eigenvalues[k].max(GRAM_CLAMP).sqrt()).collect();
    let vecs = DMatrix::from_fn(l.nrows(), l.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((sigma, vecs))
}

/// `E = L (LᵀL)^{-1/2}`, the orthogonal factor of the polar decomposition.
///
/// For symplectic `L` it commutes with the standard complex structure and is
/// itself symplectic.
pub fn polar_isometry(l: &SymplecticMap) -> Result<DMatrix<f64>> {
    let (sigma, v) = singular_vectors(l.matrix())?;
    let inv_sqrt = DVector::from_iterator(sigma.len(), sigma.iter().map(|s| 1.0 / s));
    let p_inv = &v * DMatrix::from_diagonal(&inv_sqrt) * v.transpose();
    Ok(l.matrix() * p_inv)
}

fn pairing_tol(sigma_max: f64) -> f64 {
    // Small singular values from the Gram matrix carry error ~ eps * σ_max².
    DEFAULT_TOL * sigma_max.powi(2).max(1.0)
}

/// Singular values of `L` in canonical reciprocal pairs.
///
/// Pairs `σ₁ ≥ … ≥ σ₂ₙ` as `(σ_k, σ_{2n+1-k})`; a pair whose product deviates
/// from one by more than the conditioning-scaled tolerance is reported as a
/// pairing failure.
pub fn paired_singular_values(l: &SymplecticMap) -> Result<SingularSpectrum> {
    let (sigma, _) = singular_vectors(l.matrix())?;
    let m = sigma.len();
    let tol = pairing_tol(sigma[0]);
    let mut lambda = Vec::with_capacity(m);
    for k in 0..m / 2 {
        let (big, small) = (sigma[k], sigma[m - 1 - k]);
        if (big * small - 1.0).abs() > tol {
            return Err(Error::Pairing(format!(
                "σ = {big} and σ = {small} have product {}",
                big * small
            )));
        }
        lambda.push(big);
        lambda.push(small);
    }
    Ok(SingularSpectrum { n: m / 2, lambda })
}

/// Orthonormal source basis `A` putting `J` in standard form and
/// diagonalising `LᵀL`, with the image basis `Ã = E A`.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    /// Columns `a₁ … a₂ₙ`, with `a₂ᵢ = J a₂ᵢ₋₁`.
    pub a: DMatrix<f64>,
    /// Columns `ãᵢ = E aᵢ`.
    pub a_tilde: DMatrix<f64>,
    pub spectrum: SingularSpectrum,
}

impl AdaptedBasis {
    /// Max-entry norm of `L A − Ã diag(λ)`.
    pub fn diagonal_residual(&self, l: &SymplecticMap) -> f64 {
        let lam = DVector::from_column_slice(self.spectrum.values());
        (l.matrix() * &self.a - &self.a_tilde * DMatrix::from_diagonal(&lam)).amax()
    }

    /// Max-entry norm of `AᵀJA − J` (`A` is orthogonal, so this is `A⁻¹JA − J`).
    pub fn complex_structure_residual(&self) -> f64 {
        let j = standard_j(self.spectrum.n()).expect("n >= 1");
        (self.a.transpose() * &j * &self.a - j).amax()
    }
}

fn gram_schmidt_against(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(v);
            v.axpy(-c, b, 1.0);
        }
    }
}

/// Builds the adapted basis: for each singular value `α > 1` an orthonormal
/// basis `u₁…u_k` of `V(α)` is paired with `Ju₁…Ju_k ⊂ V(1/α)`; inside `V(1)`
/// vectors are drawn one at a time together with their `J` image.
///
/// Eigenvalues whose relative gap is below [`CLUSTER_REL_GAP`] are treated as
/// one singular subspace.
pub fn adapted_basis(l: &SymplecticMap) -> Result<AdaptedBasis> {
    let n = l.n();
    let dim = 2 * n;
    let j = standard_j(n)?;
    let (sigma, v) = singular_vectors(l.matrix())?;
    let e = polar_isometry(l)?;

    // Clusters over the descending singular values.
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=dim {
        if k == dim || (sigma[k - 1] - sigma[k]) > CLUSTER_REL_GAP * sigma[k - 1] {
            clusters.push((start, k));
            start = k;
        }
    }
    let is_one = |s: f64| (s - 1.0).abs() <= CLUSTER_REL_GAP.max(pairing_tol(sigma[0]));

    let mut cols: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut large_dims = 0usize;
    let mut small_dims = 0usize;
    let mut unit: Vec<DVector<f64>> = Vec::new();
    for &(lo, hi) in &clusters {
        let centre = sigma[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        if is_one(centre) {
            unit.extend((lo..hi).map(|k| v.column(k).into_owned()));
        } else if centre > 1.0 {
            // Partner cluster V(1/α) must have the same dimension.
            let partner = clusters.iter().find(|&&(plo, phi)| {
                let c = sigma[plo..phi].iter().sum::<f64>() / (phi - plo) as f64;
                (c * centre - 1.0).abs() <= 1e3 * CLUSTER_REL_GAP.max(pairing_tol(sigma[0]))
            });
            match partner {
                Some(&(plo, phi)) if phi - plo == hi - lo => {}
                _ => return Err(Error::Cluster { value: centre, dim: hi - lo }),
            }
            large_dims += hi - lo;
            for k in lo..hi {
                let u = v.column(k).into_owned();
                let ju = &j * &u;
                cols.push(u);
                cols.push(ju);
            }
        } else {
            small_dims += hi - lo;
        }
    }
    if large_dims != small_dims || unit.len() % 2 != 0 {
        let value = if unit.len() % 2 != 0 { 1.0 } else { sigma[0] };
        return Err(Error::Cluster { value, dim: unit.len() });
    }

    // V(1): pick u, append (u, Ju), remove both from the remaining span.
    let remaining = unit;
    let mut chosen: Vec<DVector<f64>> = Vec::new();
    while chosen.len() < remaining.len() {
        let mut best: Option<DVector<f64>> = None;
        for r in &remaining {
            let mut c = r.clone();
            gram_schmidt_against(&mut c, &chosen);
            if best.as_ref().map_or(true, |b| c.norm() > b.norm()) {
                best = Some(c);
            }
        }
        let mut u = best.expect("remaining unit subspace is nonempty");
        let un = u.norm();
        if un < 1e-6 {
            return Err(Error::Cluster { value: 1.0, dim: remaining.len() });
        }
        u /= un;
        let mut ju = &j * &u;
        gram_schmidt_against(&mut ju, &chosen);
        ju -= &u * u.dot(&ju);
        let jn = ju.norm();
        ju /= jn;
        chosen.push(u);
        chosen.push(ju);
    }
    cols.extend(chosen);

    let a = DMatrix::from_columns(&cols);
    let lambda: Vec<f64> = cols.iter().map(|c| (l.matrix() * c).norm()).collect();
    let spectrum = SingularSpectrum { n, lambda };
    let a_tilde = &e * &a;
    Ok(AdaptedBasis { a, a_tilde, spectrum })
}

/// `exp(J S)` for a symmetric `S` with entries uniform in `[-spread, spread]`,
/// drawn deterministically from `seed`.
pub fn random_symplectic(n: usize, seed: u64, spread: f64) -> Result<SymplecticMap> {
    let j = standard_j(n)?;
    let dim = 2 * n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in r..dim {
            let x = spread * rng.random_range(-1.0..=1.0);
            s[(r, c)] = x;
            s[(c, r)] = x;
        }
    }
    let entries = (j * s).exp();
    Ok(SymplecticMap { n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(a: f64, b: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, b])
    }

    #[test]
    fn standard_j_blocks() {
        let j1 = standard_j(1).unwrap();
        assert_eq!(j1, DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let j2 = standard_j(2).unwrap();
        assert_eq!(j2[(0, 1)], -1.0);
        assert_eq!(j2[(1, 0)], 1.0);
        assert_eq!(j2[(2, 3)], -1.0);
        assert_eq!(j2[(3, 2)], 1.0);
        assert_eq!(j2.iter().filter(|x| **x != 0.0).count(), 4);
        for n in 1..5 {
            let j = standard_j(n).unwrap();
            assert_eq!(&j * &j, -DMatrix::identity(2 * n, 2 * n));
        }
        assert!(standard_j(0).is_err());
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&DMatrix::identity(4, 4), 1e-12).unwrap());
        assert!(is_symplectic(&diag(2.0, 0.5), 1e-12).unwrap());
        assert!(!is_symplectic(&diag(2.0, 2.0), 1e-12).unwrap());
        assert!(is_symplectic(&DMatrix::identity(3, 3), 1e-12).is_err());
        assert!(SymplecticMap::new(diag(2.0, 2.0), 1e-10).is_err());
    }

    #[test]
    fn polar_of_simple_maps() {
        let id = SymplecticMap::identity(2).unwrap();
        assert_abs_diff_eq!(polar_isometry(&id).unwrap(), DMatrix::identity(4, 4), epsilon = 1e-14);
        let d = SymplecticMap::new(diag(2.0, 0.5), 1e-12).unwrap();
        assert_abs_diff_eq!(polar_isometry(&d).unwrap(), DMatrix::identity(2, 2), epsilon = 1e-14);
    }

    #[test]
    fn paired_values_of_simple_maps() {
        let id = SymplecticMap::identity(3).unwrap();
        assert_eq!(paired_singular_values(&id).unwrap().values(), &[1.0; 6]);
        let d = SymplecticMap::new(diag(2.0, 0.5), 1e-12).unwrap();
        let s = paired_singular_values(&d).unwrap();
        assert_abs_diff_eq!(s.values()[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.values()[1], 0.5, epsilon = 1e-14);
        assert!(s.is_canonical());
    }

    #[test]
    fn adapted_basis_of_diagonal_map() {
        let d = SymplecticMap::new(diag(2.0, 0.5), 1e-12).unwrap();
        let b = adapted_basis(&d).unwrap();
        assert_abs_diff_eq!(b.a.abs(), DMatrix::identity(2, 2), epsilon = 1e-14);
        assert_abs_diff_eq!(b.a_tilde.abs(), DMatrix::identity(2, 2), epsilon = 1e-14);
        assert_abs_diff_eq!(b.spectrum.values()[0], 2.0, epsilon = 1e-14);
        assert!(b.diagonal_residual(&d) < 1e-14);
        assert!(b.complex_structure_residual() < 1e-14);
    }

    #[test]
    fn adapted_basis_of_identity_is_exact() {
        let id = SymplecticMap::identity(3).unwrap();
        let b = adapted_basis(&id).unwrap();
        assert_eq!(b.spectrum.values(), &[1.0; 6]);
        assert!(b.complex_structure_residual() < 1e-14);
        assert!(b.diagonal_residual(&id) < 1e-14);
        assert_abs_diff_eq!(b.a.transpose() * &b.a, DMatrix::identity(6, 6), epsilon = 1e-14);
    }

    #[test]
    fn adapted_basis_with_mixed_unit_and_stretched_blocks() {
        // diag(3, 1/3) ⊕ rotation-free identity block ⊕ diag(3, 1/3): repeated α and a V(1).
        let mut m = DMatrix::identity(6, 6);
        m[(0, 0)] = 3.0;
        m[(1, 1)] = 1.0 / 3.0;
        m[(4, 4)] = 3.0;
        m[(5, 5)] = 1.0 / 3.0;
        let l = SymplecticMap::new(m, 1e-12).unwrap();
        let b = adapted_basis(&l).unwrap();
        assert!(b.complex_structure_residual() < 1e-12);
        assert!(b.diagonal_residual(&l) < 1e-12);
        let v = b.spectrum.values();
        assert_abs_diff_eq!(v[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[4], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn random_symplectic_generator() {
        assert_eq!(random_symplectic(2, 3, 0.0).unwrap().matrix(), &DMatrix::identity(4, 4));
        let a = random_symplectic(3, 11, 0.7).unwrap();
        let b = random_symplectic(3, 11, 0.7).unwrap();
        assert_eq!(a, b);
        let l = random_symplectic(2, 7, 0.5).unwrap();
        assert!(is_symplectic(l.matrix(), 1e-10).unwrap());
    }

    #[test]
    fn spectrum_validation() {
        assert!(SingularSpectrum::new(vec![2.0, 0.5], 1e-12).is_ok());
        assert!(SingularSpectrum::new(vec![2.0, 0.4], 1e-12).is_err());
        assert!(SingularSpectrum::new(vec![2.0], 1e-12).is_err());
        assert!(SingularSpectrum::new(vec![-2.0, -0.5], 1e-12).is_err());
        let s = SingularSpectrum::from_log_pairs(&[-0.3, 0.5]);
        assert!(!s.is_canonical());
        let c = s.canonicalize();
        assert!(c.is_canonical());
        assert_abs_diff_eq!(c.values()[0], 0.5f64.exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.values()[2], 0.3f64.exp(), epsilon = 1e-15);
    }
}
