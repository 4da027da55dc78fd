use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;
pub const MIN_GRID: usize = 16;

/// Initial twist families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `g ≡ a`: a rotation about the polar axis.
    Constant,
    /// `g(θ) = a(1 − cos θ)`.
    SmoothTwist,
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Profile::Constant),
            "smooth_twist" | "smooth-twist" => Ok(Profile::SmoothTwist),
            other => Err(Error::invalid(format!("unknown profile {other:?}; expected constant or smooth_twist"))),
        }
    }
}

/// The equivariant map `(θ, φ) ↦ (Θ(θ), φ + g(θ))` sampled on a uniform
/// θ-grid, together with the flow time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub t: f64,
    pub theta_grid: Vec<f64>,
    #[serde(rename = "Theta")]
    pub big_theta: Vec<f64>,
    pub g: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    format_version: u32,
    #[serde(flatten)]
    state: FlowState,
}

/// Uniform grid `θₖ = kπ/N`, `k = 0..=N`, with exact endpoints.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|k| if k == n { PI } else { PI * k as f64 / n as f64 }).collect()
}

/// Builds `Θ = θ` and the twist from a named family.
pub fn init_twist(n: usize, profile: Profile, amplitude: f64) -> Result<FlowState> {
    if n < MIN_GRID {
        return Err(Error::invalid(format!("grid size N must be at least {MIN_GRID}, got {n}")));
    }
    if !amplitude.is_finite() {
        return Err(Error::invalid("amplitude must be finite"));
    }
    let theta_grid = uniform_grid(n);
    let g = theta_grid
        .iter()
        .map(|&th| match profile {
            Profile::Constant => amplitude,
            Profile::SmoothTwist => amplitude * (1.0 - th.cos()),
        })
        .collect();
    let state = FlowState { t: 0.0, big_theta: theta_grid.clone(), theta_grid, g };
    state.validate()?;
    Ok(state)
}

impl FlowState {
    /// Number of intervals `N`.
    pub fn n(&self) -> usize {
        self.theta_grid.len() - 1
    }

    pub fn h(&self) -> f64 {
        PI / self.n() as f64
    }

    /// Checks shapes, pole values and the graph condition.
    pub fn validate(&self) -> Result<()> {
        let len = self.theta_grid.len();
        if len < MIN_GRID + 1 || self.big_theta.len() != len || self.g.len() != len {
            return Err(Error::invalid(format!(
                "state arrays must share a length of at least {}; got {}, {}, {}",
                MIN_GRID + 1,
                len,
                self.big_theta.len(),
                self.g.len()
            )));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::invalid(format!("flow time must be finite and nonnegative, got {}", self.t)));
        }
        let grid = uniform_grid(len - 1);
        if self.theta_grid.iter().zip(&grid).any(|(a, b)| (a - b).abs() > 1e-12) {
            return Err(Error::invalid("theta_grid must be the uniform grid on [0, pi]"));
        }
        self.check_graph().map_err(|reason| Error::invalid(reason))
    }

    pub(crate) fn check_graph(&self) -> std::result::Result<(), String> {
        if self.big_theta.iter().chain(&self.g).any(|x| !x.is_finite()) {
            return Err("non-finite value in Theta or g".into());
        }
        let n = self.n();
        if self.big_theta[0] != 0.0 || self.big_theta[n] != PI {
            return Err("Theta must fix the poles: Theta(0) = 0, Theta(pi) = pi".into());
        }
        if let Some(k) = (0..n).find(|&k| self.big_theta[k + 1] <= self.big_theta[k]) {
            return Err(format!("graph condition lost: Theta not increasing at theta = {}", self.theta_grid[k]));
        }
        Ok(())
    }

    pub fn write_checkpoint(&self, path: &Path) -> Result<()> {
        let ck = Checkpoint { format_version: CHECKPOINT_FORMAT_VERSION, state: self.clone() };
        let text = serde_json::to_string_pretty(&ck).map_err(|e| Error::Json { path: path.display().to_string(), source: e })?;
        std::fs::write(path, text + "\n").map_err(|e| Error::Io { path: path.display().to_string(), source: e })
    }

    pub fn read_checkpoint(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        let ck: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::Json { path: path.display().to_string(), source: e })?;
        if ck.format_version != CHECKPOINT_FORMAT_VERSION {
            return Err(Error::invalid(format!(
                "{}: unsupported checkpoint format_version {}",
                path.display(),
                ck.format_version
            )));
        }
        ck.state.validate()?;
        Ok(ck.state)
    }
}
