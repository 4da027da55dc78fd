//! Block splitting of `Q` at `λ = (1, …, 1)`.
//!
//! The space of symmetric tensors splits by how many distinct index pairs
//! `{i, i'}` a component touches: one, two or three. The form at `λ = 1`
//! has no cross terms between these groups, and inside each group it breaks
//! further into identical small forms (2×2, 3×3 and 4×4).

use super::matrix::{FormBuilder, QFormMatrix};
use super::tensor::CanonicalIndex;

/// `Q(1, ·) = q1 + q2 + q3`, each acting on one coordinate group.
#[derive(Debug, Clone)]
pub struct UnitBlocks {
    /// Components with indices from a single pair `{i, i'}`.
    pub q1: QFormMatrix,
    /// Components spanning two pairs `{i, i', j, j'}`.
    pub q2: QFormMatrix,
    /// Components spanning three pairs.
    pub q3: QFormMatrix,
}

impl UnitBlocks {
    pub fn sum(&self) -> QFormMatrix {
        &(&self.q1 + &self.q2) + &self.q3
    }
}

/// Builds the three summands from their explicit expressions.
pub fn block_decomposition_at_one(n: usize) -> UnitBlocks {
    let idx = CanonicalIndex::new(n);
    let d = 2 * n;
    let odd: Vec<usize> = (0..d).step_by(2).collect();

    let mut b1 = FormBuilder::new(n, &idx);
    for &i in &odd {
        let ip = i + 1;
        b1.square(1.0, [i, i, i]);
        b1.square(1.0, [ip, ip, ip]);
        b1.square(5.0, [i, ip, ip]);
        b1.square(5.0, [ip, i, i]);
        b1.term(-2.0, [i, i, i], [ip, ip, i]);
        b1.term(-2.0, [i, i, ip], [ip, ip, ip]);
    }

    let mut b2 = FormBuilder::new(n, &idx);
    for (a, &i) in odd.iter().enumerate() {
        for &j in &odd[a + 1..] {
            let (ip, jp) = (i + 1, j + 1);
            for t in [
                [i, j, j],
                [i, jp, jp],
                [ip, j, j],
                [ip, jp, jp],
                [j, i, i],
                [jp, i, i],
                [j, ip, ip],
                [jp, ip, ip],
            ] {
                b2.square(3.0, t);
            }
            for t in [[i, ip, j], [i, ip, jp], [i, j, jp], [ip, j, jp]] {
                b2.square(8.0, t);
            }
            b2.term(-2.0, [i, i, j], [ip, ip, j]);
            b2.term(-2.0, [i, i, jp], [ip, ip, jp]);
            b2.term(-2.0, [j, j, i], [jp, jp, i]);
            b2.term(-2.0, [j, j, ip], [jp, jp, ip]);
            // 4(h_{i'jm} h_{j'im} − h_{ijm} h_{j'i'm}) for m ∈ {i, i', j, j'}
            for m in [i, ip, j, jp] {
                b2.term(4.0, [ip, j, m], [jp, i, m]);
                b2.term(-4.0, [i, j, m], [jp, ip, m]);
            }
        }
    }

    let mut b3 = FormBuilder::new(n, &idx);
    for (a, &i) in odd.iter().enumerate() {
        for (bb, &j) in odd.iter().enumerate().skip(a + 1) {
            for &k in &odd[bb + 1..] {
                let (ip, jp, kp) = (i + 1, j + 1, k + 1);
                for x in [i, ip] {
                    for y in [j, jp] {
                        for z in [k, kp] {
                            b3.square(6.0, [x, y, z]);
                        }
                    }
                }
                // One cross family per choice of the "spectator" pair.
                for (r, s, m) in [(j, k, i), (i, k, j), (i, j, k)] {
                    let (rp, sp, mp) = (r + 1, s + 1, m + 1);
                    b3.term(4.0, [rp, s, m], [sp, r, m]);
                    b3.term(-4.0, [r, s, m], [sp, rp, m]);
                    b3.term(4.0, [rp, s, mp], [sp, r, mp]);
                    b3.term(-4.0, [r, s, mp], [sp, rp, mp]);
                }
            }
        }
    }

    UnitBlocks { q1: b1.finish(), q2: b2.finish(), q3: b3.finish() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qform::assemble::assemble_q;
    use crate::sympl::SingularSpectrum;
    use approx::assert_abs_diff_eq;

    #[test]
    fn blocks_sum_to_unit_form() {
        for n in 1..=3 {
            let blocks = block_decomposition_at_one(n);
            let q = assemble_q(&SingularSpectrum::ones(n));
            assert!(blocks.sum().max_abs_diff(&q) <= 1e-12, "n = {n}");
        }
    }

    #[test]
    fn n1_first_block_is_two_copies_of_a_2x2_form() {
        let blocks = block_decomposition_at_one(1);
        assert!(blocks.q2.support().is_empty());
        assert!(blocks.q3.support().is_empty());
        let parts = blocks.q1.irreducible_blocks();
        assert_eq!(parts.len(), 2);
        // canonical order: 0 = h111, 1 = h112, 2 = h122, 3 = h222
        assert_eq!(parts[0].0, vec![0, 2]);
        assert_eq!(parts[1].0, vec![1, 3]);
        let expected = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 5.0]);
        assert_eq!(parts[0].1, expected);
        // listed as (h112, h222); reorder to (h222, h112)
        let swapped = nalgebra::DMatrix::from_fn(2, 2, |a, b| parts[1].1[(1 - a, 1 - b)]);
        assert_eq!(swapped, expected);
        let ev = blocks.q1.eigenvalues();
        let r5 = 5f64.sqrt();
        assert_abs_diff_eq!(ev[0], 3.0 - r5, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[3], 3.0 + r5, epsilon = 1e-12);
    }

    #[test]
    fn n2_second_block_splits_into_four_identical_three_variable_forms() {
        let blocks = block_decomposition_at_one(2);
        assert!(blocks.q3.support().is_empty());
        let parts = blocks.q2.irreducible_blocks();
        assert_eq!(parts.len(), 4);
        let mut spectra: Vec<Vec<f64>> = parts
            .iter()
            .map(|(m, sub)| {
                assert_eq!(m.len(), 3);
                let mut ev: Vec<f64> = sub.clone().symmetric_eigenvalues().iter().copied().collect();
                ev.sort_by(f64::total_cmp);
                ev
            })
            .collect();
        spectra.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-12));
        assert_eq!(spectra.len(), 1);
        assert_abs_diff_eq!(blocks.q2.smallest_eigenvalue_on_support().unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn n3_third_block_smallest_eigenvalue() {
        let blocks = block_decomposition_at_one(3);
        let parts = blocks.q3.irreducible_blocks();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|(m, _)| m.len() == 4));
        assert_abs_diff_eq!(blocks.q3.smallest_eigenvalue_on_support().unwrap(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(blocks.q1.smallest_eigenvalue_on_support().unwrap(), 3.0 - 5f64.sqrt(), epsilon = 1e-12);
    }
}
