//! Assembly of `Q(λ, h)`, `Q̃(λ, h)` and the norms on tensor space.
//!
//! Indices are 0-based here: the leading index of each pair (1-based odd) is
//! even, and the partner of `i` is `i ^ 1`. The sign `(-1)^{i+j}` is
//! unchanged by the shift.

use super::matrix::{FormBuilder, QFormMatrix};
use super::tensor::CanonicalIndex;
use crate::sympl::SingularSpectrum;

#[inline]
fn p(i: usize) -> usize {
    i ^ 1
}

/// `Σ h²_{ijk} − 2 Σ_k Σ_{i odd} (h_{iik} h_{i'i'k} − h²_{ii'k})`, shared by both routes.
fn common_terms(b: &mut FormBuilder<'_>) {
    let d = b.idx.dim();
    for id in 0..b.idx.len() {
        let m = b.idx.multiplicity(id) as f64;
        b.form.add_product(m, id, id);
    }
    for k in 0..d {
        for i in (0..d).step_by(2) {
            let ip = p(i);
            b.term(-2.0, [i, i, k], [ip, ip, k]);
            b.square(2.0, [i, ip, k]);
        }
    }
}

/// `Q(λ, ·)` in its regrouped form, with the λ-dependence collected over
/// pairs of pairs `i odd < j odd`.
pub fn assemble_q(spectrum: &SingularSpectrum) -> QFormMatrix {
    let n = spectrum.n();
    let idx = CanonicalIndex::new(n);
    let mut b = FormBuilder::new(n, &idx);
    common_terms(&mut b);
    let l = spectrum.values();
    let d = 2 * n;
    for k in 0..d {
        for i in (0..d).step_by(2) {
            for j in (i + 2..d).step_by(2) {
                let (ip, jp) = (p(i), p(j));
                let gap = (l[i] - l[ip]) * (l[j] - l[jp]);
                b.term(-2.0 * gap, [ip, i, k], [jp, j, k]);
                b.term(2.0 * (l[i] * l[j] + l[ip] * l[jp]), [ip, j, k], [jp, i, k]);
                b.term(-2.0 * (l[ip] * l[j] + l[i] * l[jp]), [i, j, k], [jp, ip, k]);
            }
        }
    }
    b.finish()
}

/// `Q(λ, ·)` as it arises in the evolution of `*Ω`: the sum over all
/// `i < j`, `j ≠ i'`, weighted by `(-1)^{i+j} λᵢ λⱼ`.
pub fn assemble_q_evolution_form(spectrum: &SingularSpectrum) -> QFormMatrix {
    let n = spectrum.n();
    let idx = CanonicalIndex::new(n);
    let mut b = FormBuilder::new(n, &idx);
    common_terms(&mut b);
    let l = spectrum.values();
    let d = 2 * n;
    for k in 0..d {
        for i in 0..d {
            for j in i + 1..d {
                if j == p(i) {
                    continue;
                }
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let w = -2.0 * sign * l[i] * l[j];
                b.term(w, [p(i), i, k], [p(j), j, k]);
                b.term(-w, [p(i), j, k], [p(j), i, k]);
            }
        }
    }
    b.finish()
}

/// The gradient term `Σ_k [Σ_{i odd} (λᵢ − λ_{i'}) h_{ii'k}]²` on its own.
pub fn gradient_term(spectrum: &SingularSpectrum) -> QFormMatrix {
    let n = spectrum.n();
    let idx = CanonicalIndex::new(n);
    let mut b = FormBuilder::new(n, &idx);
    let l = spectrum.values();
    let d = 2 * n;
    for k in 0..d {
        for i in (0..d).step_by(2) {
            for j in (0..d).step_by(2) {
                let c = (l[i] - l[p(i)]) * (l[j] - l[p(j)]);
                b.term(c, [i, p(i), k], [j, p(j), k]);
            }
        }
    }
    b.finish()
}

/// `Q̃ = Q + Σ_k [Σ_{i odd} (λᵢ − λ_{i'}) h_{ii'k}]²`, the form in the
/// evolution of `ln *Ω`.
pub fn assemble_qtilde(spectrum: &SingularSpectrum) -> QFormMatrix {
    &assemble_q(spectrum) + &gradient_term(spectrum)
}

/// `‖h‖² = Σᵢ h²_{iii} + Σ_{i≠j} h²_{ijj} + Σ_{i<j<k} h²_{ijk}`: every
/// canonical coordinate once, i.e. the identity.
pub fn norm_matrix(n: usize) -> QFormMatrix {
    let idx = CanonicalIndex::new(n);
    let mut q = QFormMatrix::zeros(n);
    for id in 0..idx.len() {
        q.add_product(1.0, id, id);
    }
    q
}

/// `Σ_{i,j,k} h²_{ijk}` over ordered triples: diagonal with multiplicities 1, 3, 6.
pub fn ordered_sum_matrix(n: usize) -> QFormMatrix {
    let idx = CanonicalIndex::new(n);
    let mut q = QFormMatrix::zeros(n);
    for id in 0..idx.len() {
        q.add_product(idx.multiplicity(id) as f64, id, id);
    }
    q
}
