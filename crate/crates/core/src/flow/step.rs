use std::f64::consts::PI;

use super::geometry::{embed_all, frames, Pair};
use super::interp::pchip_eval;
use super::state::FlowState;
use crate::{Error, Result};

pub const DEFAULT_CFL: f64 = 0.1;

/// `x` wrapped into `(−π, π]`.
#[inline]
fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Spherical angles `(colatitude, longitude)` of a unit vector.
#[inline]
fn angles(v: &nalgebra::Vector3<f64>) -> (f64, f64) {
    (v.x.hypot(v.y).atan2(v.z), v.y.atan2(v.x))
}

/// One explicit Euler step of mean curvature flow.
///
/// Interior samples move by `dt·H` in `ℝ⁶`, each factor is pulled back to
/// its unit sphere, and `(Θ, g)` are read off at the moved parameters and
/// interpolated back to the uniform grid. Poles stay fixed; the pole twist
/// is reset so its one-sided slope vanishes to second order.
pub fn step(s: &FlowState, dt: f64) -> Result<FlowState> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let fail = |reason: String| Error::Flow { t: s.t, reason };
    s.check_graph().map_err(fail)?;
    let n = s.n();
    let pts = embed_all(s);
    let fr = frames(s, &pts);

    let mut x = Vec::with_capacity(n + 1);
    let mut big = Vec::with_capacity(n + 1);
    let mut g = Vec::with_capacity(n + 1);
    x.push(0.0);
    big.push(0.0);
    g.push(s.g[0]);
    for k in 1..n {
        let moved: Pair = pts[k].axpy(dt, &fr[k - 1].mean);
        let p = moved.p / moved.p.norm();
        let q = moved.q / moved.q.norm();
        let (th1, psi1) = angles(&p);
        let (th2, psi2) = angles(&q);
        x.push(th1);
        big.push(th2);
        g.push(s.g[k] + wrap(psi2 - psi1 - s.g[k]));
    }
    x.push(PI);
    big.push(PI);
    g.push(s.g[n]);

    if x.iter().chain(&big).chain(&g).any(|v| !v.is_finite()) {
        return Err(fail("non-finite value after the update".into()));
    }
    if let Some(k) = (0..n).find(|&k| x[k + 1] <= x[k]) {
        return Err(fail(format!("sample points crossed near theta = {}", s.theta_grid[k])));
    }
    if let Some(k) = (0..n).find(|&k| big[k + 1] <= big[k]) {
        return Err(fail(format!("graph condition lost near theta = {}", s.theta_grid[k])));
    }

    let mut new_big = pchip_eval(&x, &big, &s.theta_grid);
    let mut new_g = pchip_eval(&x, &g, &s.theta_grid);
    new_big[0] = 0.0;
    new_big[n] = PI;
    new_g[0] = (4.0 * new_g[1] - new_g[2]) / 3.0;
    new_g[n] = (4.0 * new_g[n - 1] - new_g[n - 2]) / 3.0;
    let out = FlowState { t: s.t + dt, theta_grid: s.theta_grid.clone(), big_theta: new_big, g: new_g };
    out.check_graph().map_err(|reason| Error::Flow { t: out.t, reason })?;
    Ok(out)
}

/// `dt = cfl · Δθ²`.
pub fn stable_dt(n: usize, cfl: f64) -> f64 {
    let h = PI / n as f64;
    cfl * h * h
}
