//! Numerics for mean curvature flow of graphs of symplectomorphisms of ℂPⁿ.
//!
//! * [`sympl`]: symplectic linear algebra (polar isometry, paired singular
//!   values, adapted orthonormal bases).
//! * [`qform`]: the quadratic form `Q(λ, h)` on fully symmetric 3-tensors,
//!   its block structure at `λ = 1`, the box minimum `δ_Λ` and the pinching
//!   constant `Λ₀(n)`.
//! * [`pinch`]: scalar pinching arithmetic, the ℂPⁿ curvature term and the
//!   comparison ODE for the second fundamental form.
//! * [`flow`]: an equivariant mean curvature flow simulator for graphs of
//!   twist maps of S² inside S² × S², with monitors.
//! * [`cli`]: the `sympflow` command line driver.

pub mod cli;
pub mod error;
pub mod flow;
pub mod pinch;
pub mod qform;
pub mod sympl;

pub use error::{Error, Result};
pub use nalgebra;

/// Tolerance used wherever a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;
