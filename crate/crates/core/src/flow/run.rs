use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::monitor::{monitor, MonitorReport, MONITOR_CSV_HEADER};
use super::state::{init_twist, FlowState, Profile};
use super::step::{stable_dt, step, DEFAULT_CFL};
use crate::{Error, Result};

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

/// Flat run configuration. Intervals are in flow time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(rename = "T_final")]
    pub t_final: f64,
    pub profile: Profile,
    pub amplitude: f64,
    pub report_every: f64,
    #[serde(default)]
    pub checkpoint_every: Option<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl FlowConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
        let cfg: FlowConfig =
            serde_json::from_str(&text).map_err(|e| Error::Json { path: path.display().to_string(), source: e })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 0.25) {
            return Err(Error::invalid(format!("cfl must lie in (0, 0.25], got {}", self.cfl)));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::invalid(format!("T_final must be finite and nonnegative, got {}", self.t_final)));
        }
        if !(self.report_every > 0.0) {
            return Err(Error::invalid("report_every must be positive"));
        }
        if let Some(c) = self.checkpoint_every {
            if !(c > 0.0) {
                return Err(Error::invalid("checkpoint_every must be positive"));
            }
        }
        Ok(())
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub reports: Vec<MonitorReport>,
    pub final_state: FlowState,
    pub steps: usize,
    pub dt: f64,
    pub checkpoints: Vec<PathBuf>,
}

/// Event times `k·every` in `(0, t_final]`, always ending at `t_final`.
fn schedule(every: f64, t_final: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 1usize;
    loop {
        let t = k as f64 * every;
        if t >= t_final * (1.0 - 1e-12) {
            break;
        }
        out.push(t);
        k += 1;
    }
    if t_final > 0.0 {
        out.push(t_final);
    }
    out
}

pub fn write_monitor_csv(path: &Path, reports: &[MonitorReport]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), source: e };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    w.write_record(MONITOR_CSV_HEADER).map_err(|e| io(e.into()))?;
    for r in reports {
        w.write_record(r.csv_row()).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

/// Integrates from the configured initial twist to `T_final`.
pub fn run(cfg: &FlowConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let state = init_twist(cfg.n, cfg.profile, cfg.amplitude)?;
    run_from(cfg, state)
}

/// Integrates from a given state; times in `cfg` are relative to `state.t`.
pub fn run_from(cfg: &FlowConfig, start: FlowState) -> Result<RunOutput> {
    cfg.validate()?;
    start.validate()?;
    if let Some(dir) = &cfg.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.display().to_string(), source: e })?;
    }
    let t_start = start.t;
    let dt = stable_dt(start.n(), cfg.cfl);
    let reports_at = schedule(cfg.report_every, cfg.t_final);
    let ckpt_at = cfg.checkpoint_every.map(|c| schedule(c, cfg.t_final)).unwrap_or_default();
    let mut events: Vec<f64> = reports_at.iter().chain(&ckpt_at).copied().collect();
    events.sort_by(f64::total_cmp);
    events.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * cfg.t_final.max(1.0));

    let mut reports = vec![monitor(&start)?];
    let mut checkpoints = Vec::new();
    let mut state = start;
    let mut steps = 0usize;
    let (mut ri, mut ci) = (0usize, 0usize);
    let snap = 1e-9 * dt;
    for ev in events {
        let target = t_start + ev;
        while state.t < target - snap {
            let h = dt.min(target - state.t);
            let next = match step(&state, h) {
                Ok(s) => s,
                Err(e) => return Err(fail_with_checkpoint(cfg, &state, e)),
            };
            state = next;
            steps += 1;
        }
        state.t = target;
        if ri < reports_at.len() && (reports_at[ri] - ev).abs() <= 1e-12 * cfg.t_final.max(1.0) {
            reports.push(monitor(&state)?);
            ri += 1;
        }
        if ci < ckpt_at.len() && (ckpt_at[ci] - ev).abs() <= 1e-12 * cfg.t_final.max(1.0) {
            if let Some(dir) = &cfg.out_dir {
                let path = dir.join(format!("checkpoint_{:05}.json", ci + 1));
                state.write_checkpoint(&path)?;
                checkpoints.push(path);
            }
            ci += 1;
        }
    }
    if let Some(dir) = &cfg.out_dir {
        write_monitor_csv(&dir.join("monitor.csv"), &reports)?;
        state.write_checkpoint(&dir.join("final_state.json"))?;
    }
    Ok(RunOutput { reports, final_state: state, steps, dt, checkpoints })
}

fn fail_with_checkpoint(cfg: &FlowConfig, last_good: &FlowState, err: Error) -> Error {
    let (t, reason) = match err {
        Error::Flow { t, reason } => (t, reason),
        other => return other,
    };
    match &cfg.out_dir {
        Some(dir) => {
            let path = dir.join("last_good.json");
            match last_good.write_checkpoint(&path) {
                Ok(()) => Error::Flow { t, reason: format!("{reason}; last good state written to {}", path.display()) },
                Err(_) => Error::Flow { t, reason },
            }
        }
        None => Error::Flow { t, reason },
    }
}
