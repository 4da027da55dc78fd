use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geometry::{area_density, derivatives, embed_all, frames, geometry, sff_tensor, SliceGeometry};
use super::state::FlowState;
use crate::qform::{assemble_q, SymTensor3};
use crate::sympl::SingularSpectrum;
use crate::{Error, Result};

pub const DEFAULT_PHI_POINTS: usize = 64;

/// Scalar summaries of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub t: f64,
    pub min_star_omega: f64,
    pub max_sff_norm: f64,
    pub max_lambda_dev: f64,
    pub total_area: f64,
    pub max_symplectic_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gaussian_density: Option<f64>,
}

pub const MONITOR_CSV_HEADER: [&str; 6] =
    ["t", "min_star_omega", "max_sff_norm", "max_lambda_dev", "total_area", "max_symplectic_residual"];

impl MonitorReport {
    pub fn csv_row(&self) -> [String; 6] {
        [
            format!("{:?}", self.t),
            format!("{:?}", self.min_star_omega),
            format!("{:?}", self.max_sff_norm),
            format!("{:?}", self.max_lambda_dev),
            format!("{:?}", self.total_area),
            format!("{:?}", self.max_symplectic_residual),
        ]
    }
}

fn fold_max(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// `2π ∫ √det g dθ` by the trapezoid rule (the density vanishes at the poles).
pub fn total_area(s: &FlowState) -> f64 {
    let (dt, dg) = derivatives(s);
    let h = s.h();
    let sum: f64 = (1..s.n()).map(|k| area_density(s.theta_grid[k], s.big_theta[k], dt[k], dg[k])).sum();
    2.0 * PI * h * sum
}

pub fn report_from(s: &FlowState, geo: &SliceGeometry) -> MonitorReport {
    MonitorReport {
        t: s.t,
        min_star_omega: geo.star_omega.iter().cloned().fold(f64::INFINITY, f64::min),
        max_sff_norm: fold_max(&geo.sff_norm),
        max_lambda_dev: geo.lambda.iter().map(|l| (l - 1.0).abs()).fold(0.0, f64::max),
        total_area: total_area(s),
        max_symplectic_residual: fold_max(&geo.symplectic_residual),
        gaussian_density: None,
    }
}

pub fn monitor(s: &FlowState) -> Result<MonitorReport> {
    Ok(report_from(s, &geometry(s)?))
}

/// `∫_Σ (4π(t₀ − t))⁻¹ exp(−|F − y₀|²/(4(t₀ − t))) dμ`, trapezoid in θ on the
/// state grid and periodic trapezoid with `phi_points` nodes in φ.
pub fn gaussian_density(s: &FlowState, center: [f64; 6], t0: f64, phi_points: usize) -> Result<f64> {
    let tau = t0 - s.t;
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("t0 = {t0} must exceed the state time {}", s.t)));
    }
    if phi_points < 4 {
        return Err(Error::invalid("need at least 4 points in phi"));
    }
    let pts = embed_all(s);
    let (dt, dg) = derivatives(s);
    let h = s.h();
    let dphi = 2.0 * PI / phi_points as f64;
    let trig: Vec<(f64, f64)> = (0..phi_points).map(|j| (j as f64 * dphi).sin_cos()).collect();
    let norm = 1.0 / (4.0 * PI * tau);
    let mut total = 0.0;
    for k in 1..s.n() {
        let w = area_density(s.theta_grid[k], s.big_theta[k], dt[k], dg[k]);
        let f = pts[k].as_array();
        let mut ring = 0.0;
        for &(sn, cs) in &trig {
            let r = [
                cs * f[0] - sn * f[1],
                sn * f[0] + cs * f[1],
                f[2],
                cs * f[3] - sn * f[4],
                sn * f[3] + cs * f[4],
                f[5],
            ];
            let d2: f64 = r.iter().zip(center.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
            ring += (-d2 / (4.0 * tau)).exp();
        }
        total += w * ring * dphi;
    }
    Ok(norm * h * total)
}

/// Residual of `d/dt *Ω = Δ*Ω + *Ω [Q(λ, h) + (1 − λ²)²/(1 + λ²)²]` at the
/// interior nodes of the middle state, with the time derivative by central
/// differences. The grid parametrization keeps the first factor fixed, so
/// the derivative along the normal motion picks up `⟨H_p, e_θ⟩ ∂_θ *Ω`.
pub fn evolution_residual_profile(prev: &FlowState, cur: &FlowState, next: &FlowState) -> Result<Vec<f64>> {
    let n = cur.n();
    if prev.n() != n || next.n() != n {
        return Err(Error::invalid("states must share the same grid"));
    }
    let dt = cur.t - prev.t;
    let dt2 = next.t - cur.t;
    if !(dt > 0.0) || (dt2 - dt).abs() > 1e-9 * dt {
        return Err(Error::invalid("states must be equally spaced and increasing in time"));
    }
    let wp = geometry(prev)?.star_omega;
    let wn = geometry(next)?.star_omega;
    let w = geometry(cur)?.star_omega;
    let pts = embed_all(cur);
    let fr = frames(cur, &pts);
    let (d_big, dg) = derivatives(cur);
    let h = cur.h();
    let qm = assemble_q(&SingularSpectrum::ones(1));

    let flux = |j: usize| -> f64 {
        let th = 0.5 * (cur.theta_grid[j] + cur.theta_grid[j + 1]);
        let b = 0.5 * (cur.big_theta[j] + cur.big_theta[j + 1]);
        let db = (cur.big_theta[j + 1] - cur.big_theta[j]) / h;
        let dgm = (cur.g[j + 1] - cur.g[j]) / h;
        let sb2 = b.sin().powi(2);
        let gpp = th.sin().powi(2) + sb2;
        let root = area_density(th, b, db, dgm);
        gpp / root * (w[j + 1] - w[j]) / h
    };

    let mut out = vec![0.0; n + 1];
    for k in 1..n {
        let f = &fr[k - 1];
        let th = cur.theta_grid[k];
        let e_theta = nalgebra::Vector3::new(th.cos(), 0.0, -th.sin());
        let drift = f.mean.p.dot(&e_theta) * (w[k + 1] - w[k - 1]) / (2.0 * h);
        let w_t = (wn[k] - wp[k]) / (2.0 * dt);
        let root = area_density(th, cur.big_theta[k], d_big[k], dg[k]);
        let lap = (flux(k) - flux(k - 1)) / (h * root);
        let (hh, s1, _) = sff_tensor(cur, f, k, d_big[k], dg[k]);
        let sym = |a: usize, b: usize, c: usize| (hh[a][b][c] + hh[b][c][a] + hh[c][a][b] + hh[a][c][b] + hh[b][a][c] + hh[c][b][a]) / 6.0;
        let tensor = SymTensor3::from_coeffs(1, vec![sym(0, 0, 0), sym(0, 0, 1), sym(0, 1, 1), sym(1, 1, 1)])?;
        let q = qm.eval(&tensor);
        let l2 = s1 * s1;
        let curv = ((1.0 - l2) / (1.0 + l2)).powi(2);
        out[k] = (w_t + drift - lap - w[k] * (q + curv)).abs();
    }
    Ok(out)
}

/// Maximum of [`evolution_residual_profile`].
pub fn evolution_residual(prev: &FlowState, cur: &FlowState, next: &FlowState) -> Result<f64> {
    Ok(fold_max(&evolution_residual_profile(prev, cur, next)?))
}
