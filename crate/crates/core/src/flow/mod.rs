//! Mean curvature flow of graphs of equivariant area-preserving maps of the
//! sphere inside `S² × S²`.
//!
//! The map `(θ, φ) ↦ (Θ(θ), φ + g(θ))` commutes with rotations about the
//! polar axis, and so does the flow, which reduces it to the two profiles
//! `Θ`, `g` on a θ-grid.

mod geometry;
mod interp;
mod monitor;
mod run;
mod state;
mod step;

pub use geometry::{df_matrix, embed, geometry, mean_curvature, singular_2x2, star_omega_from, Pair, SliceGeometry};
pub use interp::{pchip_eval, pchip_slopes};
pub use monitor::{
    evolution_residual, evolution_residual_profile, gaussian_density, monitor, report_from, total_area, MonitorReport,
    DEFAULT_PHI_POINTS, MONITOR_CSV_HEADER,
};
pub use run::{run, run_from, write_monitor_csv, FlowConfig, RunOutput};
pub use state::{init_twist, uniform_grid, FlowState, Profile, CHECKPOINT_FORMAT_VERSION, MIN_GRID};
pub use step::{stable_dt, step, DEFAULT_CFL};
