//! Scalar pinching arithmetic, the ℂPⁿ curvature term and the comparison ODE.
//!
//! Pinching here is on the metric: `Λ`-pinched means every singular value
//! lies in `[1/√Λ, √Λ]`.

use rand::Rng;
use serde::Serialize;

use crate::sympl::SingularSpectrum;
use crate::{Error, Result};

pub const DEFAULT_K1: f64 = 4.0;
pub const DEFAULT_K2: f64 = 8.0;
pub const DEFAULT_LOG_GRID: usize = 10_001;
pub const LOG_MARGIN_TOL: f64 = -1e-12;

fn two_pow_neg(n: usize) -> f64 {
    0.5f64.powi(n as i32)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    Ok(())
}

/// `√Λ + 1/√Λ`.
fn sum_root(lambda: f64) -> f64 {
    let s = lambda.sqrt();
    s + 1.0 / s
}

/// `*Ω = 1/∏_{i odd}(λᵢ + λ_{i'})`.
pub fn star_omega(spectrum: &SingularSpectrum) -> f64 {
    1.0 / spectrum.values().chunks(2).map(|p| p[0] + p[1]).product::<f64>()
}

/// `ε = 2⁻ⁿ − (√Λ + 1/√Λ)⁻ⁿ`: `Λ`-pinched spectra have `*Ω ≥ 2⁻ⁿ − ε`.
pub fn eps_from_lambda(n: usize, lambda: f64) -> Result<f64> {
    check_n(n)?;
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("Lambda must be a finite number > 1, got {lambda}")));
    }
    Ok(two_pow_neg(n) - sum_root(lambda).powi(-(n as i32)))
}

/// `Λ' = (r + √(r² − 1))²` with `r = 2⁻ⁿ/(2⁻ⁿ − ε)`: `*Ω ≥ 2⁻ⁿ − ε` forces
/// `Λ'`-pinching.
pub fn lambda_from_eps(n: usize, eps: f64) -> Result<f64> {
    check_n(n)?;
    let top = two_pow_neg(n);
    if !(eps > 0.0 && eps < top) {
        return Err(Error::invalid(format!("eps must lie in (0, 2^-{n}) = (0, {top}), got {eps}")));
    }
    let r = top / (top - eps);
    Ok((r + (r * r - 1.0).sqrt()).powi(2))
}

/// `ε = 2⁻ⁿ(1 − 2/(√Λ + 1/√Λ))`, the lower-bound gap used along the flow.
/// [`lambda_from_eps`] inverts it exactly.
pub fn preservation_eps(n: usize, lambda: f64) -> Result<f64> {
    check_n(n)?;
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("Lambda must be a finite number > 1, got {lambda}")));
    }
    Ok(two_pow_neg(n) * (1.0 - 2.0 / sum_root(lambda)))
}

fn lambda1_formula(n: usize, lambda0: f64) -> f64 {
    let s = 0.5 * sum_root(lambda0);
    let a = s.powf(1.0 / n as f64);
    let b = s.powf(2.0 / n as f64);
    (a + (b - 1.0).sqrt()).powi(2)
}

/// Initial pinching `Λ₁` whose flow keeps `Λ₀`-pinching.
pub fn lambda1_from_lambda0(n: usize, lambda0: f64) -> Result<f64> {
    if n == 1 {
        return Err(Error::invalid(
            "n = 1 needs no pinching: every area-preserving map of the sphere flows to a minimal graph",
        ));
    }
    check_n(n)?;
    if !(lambda0 > 1.0) || !lambda0.is_finite() {
        return Err(Error::invalid(format!("Lambda0 must be a finite number > 1, got {lambda0}")));
    }
    Ok(lambda1_formula(n, lambda0))
}

/// `Σ_{k odd} (1 − λₖ²)²/(1 + λₖ²)²`.
pub fn curvature_sum(spectrum: &SingularSpectrum) -> f64 {
    spectrum
        .values()
        .iter()
        .step_by(2)
        .map(|&l| {
            let l2 = l * l;
            ((1.0 - l2) / (1.0 + l2)).powi(2)
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct LogComparison {
    pub c: f64,
    pub inequality_holds: bool,
    pub worst_margin: f64,
    /// Where the smallest margin occurs.
    pub worst_x: f64,
    pub x_max: f64,
}

/// Checks `(x − 4)/x ≥ c(½ ln x − ln 2)` on `[4, (√Λ₀ + 1/√Λ₀)²]` with
/// `c = 8/(√Λ₀ + 1/√Λ₀)²`.
pub fn log_comparison(lambda0: f64, grid_steps: usize) -> Result<LogComparison> {
    if !(lambda0 > 1.0) || !lambda0.is_finite() {
        return Err(Error::invalid(format!("Lambda0 must be a finite number > 1, got {lambda0}")));
    }
    if grid_steps < 2 {
        return Err(Error::invalid("grid_steps must be at least 2"));
    }
    let x_max = sum_root(lambda0).powi(2);
    let c = 8.0 / x_max;
    let ln2 = std::f64::consts::LN_2;
    let (mut worst_margin, mut worst_x) = (f64::INFINITY, 4.0);
    for k in 0..grid_steps {
        let x = if k + 1 == grid_steps { x_max } else { 4.0 + (x_max - 4.0) * k as f64 / (grid_steps - 1) as f64 };
        let margin = (x - 4.0) / x - c * (0.5 * x.ln() - ln2);
        if margin < worst_margin {
            worst_margin = margin;
            worst_x = x;
        }
    }
    Ok(LogComparison { c, inequality_holds: worst_margin >= LOG_MARGIN_TOL, worst_margin, worst_x, x_max })
}

/// Coefficients of `y' = −βy² + K₂y`, `β = δC₀ − εK₁`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComparisonOde {
    pub k1: f64,
    pub k2: f64,
    pub delta: f64,
    pub c0: f64,
    pub eps: f64,
}

impl ComparisonOde {
    pub fn new(k1: f64, k2: f64, delta: f64, c0: f64, eps: f64) -> Result<Self> {
        for (name, v) in [("K1", k1), ("K2", k2), ("delta", delta), ("C0", c0), ("eps", eps)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} must be a positive finite number, got {v}")));
            }
        }
        let ode = ComparisonOde { k1, k2, delta, c0, eps };
        if !(ode.beta() > 0.0) {
            return Err(Error::invalid(format!(
                "delta*C0 - eps*K1 = {} must be positive",
                ode.beta()
            )));
        }
        Ok(ode)
    }

    pub fn beta(&self) -> f64 {
        self.delta * self.c0 - self.eps * self.k1
    }

    /// Limit `K₂/β`, also the constant solution.
    pub fn equilibrium(&self) -> f64 {
        self.k2 / self.beta()
    }

    pub fn rhs(&self, y: f64) -> f64 {
        -self.beta() * y * y + self.k2 * y
    }

    /// Closed-form `y(t)` with `y(0) = y0`.
    pub fn solve(&self, y0: f64, t: f64) -> Result<f64> {
        if !(y0 > 0.0) || !y0.is_finite() {
            return Err(Error::invalid(format!("y0 must be positive, got {y0}")));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("t must be nonnegative, got {t}")));
        }
        let a = self.equilibrium();
        if y0 == a {
            return Ok(a);
        }
        let k = y0 / (y0 - a);
        Ok(a / (1.0 - (-self.k2 * t).exp() / k))
    }
}

/// `y(t)` for the comparison ODE; see [`ComparisonOde::solve`].
pub fn comparison_ode(k1: f64, k2: f64, delta: f64, c0: f64, eps: f64, y0: f64, t: f64) -> Result<f64> {
    ComparisonOde::new(k1, k2, delta, c0, eps)?.solve(y0, t)
}

/// The constants of the pinching argument for one dimension.
#[derive(Debug, Clone, Serialize)]
pub struct PinchingParams {
    pub n: usize,
    /// `None` stands for `Λ₀ = ∞`.
    pub lambda0: Option<f64>,
    pub lambda1: Option<f64>,
    pub delta: f64,
    pub eps: Option<f64>,
    pub c: Option<f64>,
    pub k1: f64,
    pub k2: f64,
    pub c0: f64,
}

impl PinchingParams {
    /// Derives `Λ₁`, `ε` (flow-preservation gap at `Λ₀`) and `c` from `Λ₀`.
    pub fn new(n: usize, lambda0: Option<f64>, delta: f64, c0: f64, k1: f64, k2: f64) -> Result<Self> {
        check_n(n)?;
        if !(delta > 0.0) {
            return Err(Error::invalid(format!("delta must be positive, got {delta}")));
        }
        if !(c0 > 0.0 && c0 <= two_pow_neg(n)) {
            return Err(Error::invalid(format!("C0 must lie in (0, 2^-{n}], got {c0}")));
        }
        if !(k1 > 0.0 && k2 > 0.0) {
            return Err(Error::invalid("K1 and K2 must be positive"));
        }
        let (lambda1, eps, c) = match lambda0 {
            None => (None, None, None),
            Some(l0) => {
                let l1 = lambda1_from_lambda0(n, l0)?;
                (Some(l1), Some(preservation_eps(n, l0)?), Some(8.0 / sum_root(l0).powi(2)))
            }
        };
        Ok(PinchingParams { n, lambda0, lambda1, delta, eps, c, k1, k2, c0 })
    }
}

/// Random `Λ`-pinched spectrum: `tᵢ` uniform in `[−½ ln Λ, ½ ln Λ]`.
pub fn sample_pinched_spectrum<R: Rng + ?Sized>(n: usize, lambda: f64, rng: &mut R) -> SingularSpectrum {
    let half = 0.5 * lambda.ln();
    let t: Vec<f64> = (0..n).map(|_| if half > 0.0 { rng.random_range(-half..=half) } else { 0.0 }).collect();
    SingularSpectrum::from_log_pairs(&t)
}
