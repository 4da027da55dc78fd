//! Quadratic forms on symmetric 3-tensors and the pinching constant.

mod assemble;
mod blocks;
mod matrix;
mod search;
mod tensor;

pub use assemble::{assemble_q, assemble_q_evolution_form, assemble_qtilde, gradient_term, norm_matrix, ordered_sum_matrix};
pub use blocks::{block_decomposition_at_one, UnitBlocks};
pub use matrix::QFormMatrix;
pub use search::{
    delta_box, lambda0, min_eig_ratio, smallest_ratio_ordered, DeltaBox, Lambda0, DEFAULT_GRID_STEPS,
    DEFAULT_LAMBDA0_CAP, DEFAULT_LAMBDA0_TOL,
};
pub use tensor::{canonical_len, CanonicalIndex, SymTensor3};
