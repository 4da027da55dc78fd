//! Generalized smallest eigenvalues, the box minimum `δ_Λ` and the pinching
//! constant `Λ₀(n)`.
//!
//! The box is `1/Λ ≤ λᵢ ≤ Λ` on the singular values, parametrized by
//! `λ_{2i-1} = e^{tᵢ}`, `tᵢ ∈ [−ln Λ, ln Λ]`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::assemble::assemble_q;
use super::matrix::QFormMatrix;
use super::tensor::CanonicalIndex;
use crate::sympl::SingularSpectrum;
use crate::{Error, Result};

pub const DEFAULT_GRID_STEPS: usize = 33;
pub const DEFAULT_LAMBDA0_TOL: f64 = 1e-4;
pub const DEFAULT_LAMBDA0_CAP: f64 = 16.0;

const GOLDEN_ITERS: usize = 48;
const REFINE_SWEEPS: usize = 3;

/// `min_{v≠0} vᵀQv / vᵀNv` through the Cholesky factor of `N`.
pub fn min_eig_ratio(qm: &QFormMatrix, nm: &QFormMatrix) -> Result<f64> {
    if qm.dim() != nm.dim() {
        return Err(Error::invalid("forms act on different spaces"));
    }
    let chol = nm.matrix().clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let l = chol.l();
    let m = qm.dim();
    // C = L⁻¹ Q L⁻ᵀ
    let x = l
        .solve_lower_triangular(qm.matrix())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&x.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = DMatrix::from_fn(m, m, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    Ok(c.symmetric_eigenvalues().min())
}

/// Smallest eigenvalue of `Q(λ, ·)` relative to the ordered-sum norm.
///
/// The norm is diagonal, so the generalized problem reduces to a
/// symmetric one after scaling by `1/√multiplicity`.
pub fn smallest_ratio_ordered(spectrum: &SingularSpectrum) -> f64 {
    let idx = CanonicalIndex::new(spectrum.n());
    let scale: Vec<f64> = (0..idx.len()).map(|id| 1.0 / (idx.multiplicity(id) as f64).sqrt()).collect();
    let q = assemble_q(spectrum);
    let m = q.dim();
    let s = DMatrix::from_fn(m, m, |i, j| q.matrix()[(i, j)] * scale[i] * scale[j]);
    s.symmetric_eigenvalues().min()
}

/// Result of a box search.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaBox {
    pub delta: f64,
    /// Spectrum at which `delta` is attained.
    pub minimizing_lambda: Vec<f64>,
    /// Log-coordinates `tᵢ` of the minimizer.
    pub t: Vec<f64>,
}

fn eval_t(t: &[f64]) -> f64 {
    smallest_ratio_ordered(&SingularSpectrum::from_log_pairs(t))
}

fn axis(steps: usize, half: f64) -> Vec<f64> {
    if steps == 1 || half == 0.0 {
        return vec![0.0];
    }
    (0..steps).map(|k| -half + 2.0 * half * k as f64 / (steps - 1) as f64).collect()
}

/// Golden-section search of `f` on `[a, b]`, returning the best abscissa.
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Upper estimate of `δ_Λ`: exhaustive grid with `grid_steps` points per
/// axis (endpoints included), then coordinate-wise golden-section
/// refinement from the best grid point.
pub fn delta_box(n: usize, lambda: f64, grid_steps: usize) -> Result<DeltaBox> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(lambda >= 1.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("Lambda must be a finite number >= 1, got {lambda}")));
    }
    if grid_steps == 0 {
        return Err(Error::invalid("grid_steps must be positive"));
    }
    let half = lambda.ln();
    let ax = axis(grid_steps, half);
    let k = ax.len();
    let total = k.checked_pow(n as u32).ok_or_else(|| Error::invalid("grid too large"))?;
    let point = |mut code: usize| -> Vec<f64> {
        let mut t = vec![0.0; n];
        for ti in t.iter_mut() {
            *ti = ax[code % k];
            code /= k;
        }
        t
    };
    let (best_val, best_code) = (0..total)
        .into_par_iter()
        .map(|code| (eval_t(&point(code)), code))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| match a.0.total_cmp(&b.0) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    if a.1 <= b.1 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    let mut t = point(best_code);
    let mut best = best_val;
    if half > 0.0 {
        for _ in 0..REFINE_SWEEPS {
            let before = best;
            for i in 0..n {
                let (x, v) = golden(
                    |x| {
                        let mut tt = t.clone();
                        tt[i] = x;
                        eval_t(&tt)
                    },
                    -half,
                    half,
                );
                if v < best {
                    best = v;
                    t[i] = x;
                }
            }
            if best >= before {
                break;
            }
        }
    }
    let spectrum = SingularSpectrum::from_log_pairs(&t);
    Ok(DeltaBox { delta: best, minimizing_lambda: spectrum.values().to_vec(), t })
}

/// Outcome of the `Λ₀` bisection.
#[derive(Debug, Clone, Serialize)]
pub struct Lambda0 {
    pub n: usize,
    /// `None` when `δ` stays positive on the whole bracket.
    pub lambda0: Option<f64>,
    pub exceeds_cap: bool,
    pub cap: f64,
    pub tol: f64,
    pub grid_steps: usize,
    /// Final bracket `[lo, hi]` with `δ(lo) > 0 ≥ δ(hi)`.
    pub bracket: [f64; 2],
    /// Minimizer of the box search at the upper bracket end.
    pub minimizing_lambda: Vec<f64>,
    pub delta_at_hi: f64,
}

/// Bisection on the sign of `δ_Λ` over `[1, cap]`.
pub fn lambda0(n: usize, tol: f64, cap: f64, grid_steps: usize) -> Result<Lambda0> {
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tol must be positive, got {tol}")));
    }
    if !(cap > 1.0) || !cap.is_finite() {
        return Err(Error::invalid(format!("cap must be a finite number > 1, got {cap}")));
    }
    let at_cap = delta_box(n, cap, grid_steps)?;
    if at_cap.delta > 0.0 {
        return Ok(Lambda0 {
            n,
            lambda0: None,
            exceeds_cap: true,
            cap,
            tol,
            grid_steps,
            bracket: [cap, cap],
            minimizing_lambda: at_cap.minimizing_lambda,
            delta_at_hi: at_cap.delta,
        });
    }
    let (mut lo, mut hi) = (1.0, cap);
    let mut hi_box = at_cap;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let d = delta_box(n, mid, grid_steps)?;
        if d.delta > 0.0 {
            lo = mid;
        } else {
            hi = mid;
            hi_box = d;
        }
    }
    Ok(Lambda0 {
        n,
        lambda0: Some(0.5 * (lo + hi)),
        exceeds_cap: false,
        cap,
        tol,
        grid_steps,
        bracket: [lo, hi],
        minimizing_lambda: hi_box.minimizing_lambda,
        delta_at_hi: hi_box.delta,
    })
}
