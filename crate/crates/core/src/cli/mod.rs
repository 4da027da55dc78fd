//! The `sympflow` command line driver.
//!
//! Every subcommand produces a [`CommandResult`] which is written as one JSON
//! document, or as CSV for tabular results. Exit codes: 0 on success, 2 for
//! usage and validation errors, 3 for numerical failures.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use output::{emit, render, CommandResult, Format, Table, SCHEMA_VERSION};

use crate::qform::{DEFAULT_GRID_STEPS, DEFAULT_LAMBDA0_CAP, DEFAULT_LAMBDA0_TOL};
use crate::Result;

#[derive(Debug, Parser)]
#[command(name = "sympflow", version, about = "Symplectic singular values, pinching forms and graph mean curvature flow")]
pub struct Cli {
    /// Output format; csv only for tabular results.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Record wall time in `elapsed_seconds` (otherwise null).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polar isometry, paired singular values and adapted basis of a symplectic matrix.
    Svd(SvdArgs),
    /// Assemble Q (or Q̃) at a spectrum and analyse its eigenvalues.
    Qform(QformArgs),
    /// Box minimum δ_Λ of the normalized form.
    Delta(DeltaArgs),
    /// Bisect for the pinching constant Λ₀(n).
    Lambda0(Lambda0Args),
    /// Pinching arithmetic.
    Pinch {
        #[command(subcommand)]
        op: PinchOp,
    },
    /// Equivariant mean curvature flow on S² × S².
    Flow {
        #[command(subcommand)]
        op: FlowOp,
    },
    /// Closed-form solution of the comparison ODE.
    Ode(OdeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SvdArgs {
    /// JSON file holding a row-major 2n×2n matrix.
    #[arg(long, conflicts_with = "random_dim", required_unless_present = "random_dim")]
    pub matrix: Option<PathBuf>,
    /// Draw `exp(JS)` with this n instead of reading a file.
    #[arg(long)]
    pub random_dim: Option<usize>,
    /// Entry range of S for `--random-dim`.
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    /// Symplecticity tolerance for the input.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct QformArgs {
    /// Full spectrum λ₁,…,λ₂ₙ (reciprocal pairs).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "blocks")]
    pub lambda: Option<Vec<f64>>,
    /// Use Q̃ (with the gradient term) instead of Q.
    #[arg(long)]
    pub tilde: bool,
    /// Include the Gram matrix in the output.
    #[arg(long)]
    pub with_matrix: bool,
    /// Dimension for `--blocks`.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Block decomposition at λ = 1.
    #[arg(long, requires = "dim")]
    pub blocks: bool,
    /// Relative tolerance for the reciprocal pairing of `--lambda`.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DeltaArgs {
    #[arg(long)]
    pub dim: usize,
    /// Box half-width in λ: each λᵢ ranges over [1/Λ, Λ].
    #[arg(long = "box")]
    #[serde(rename = "box")]
    pub lambda_box: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_STEPS)]
    pub grid: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct Lambda0Args {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = DEFAULT_LAMBDA0_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_LAMBDA0_CAP)]
    pub cap: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_STEPS)]
    pub grid: usize,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum PinchOp {
    /// *Ω of a spectrum.
    StarOmega {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
    },
    /// ε with *Ω ≥ 2⁻ⁿ − ε on Λ-pinched spectra.
    EpsFromLambda {
        #[arg(long)]
        dim: usize,
        #[arg(long = "Lambda")]
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
    /// Pinching forced by *Ω ≥ 2⁻ⁿ − ε.
    LambdaFromEps {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        eps: f64,
    },
    /// Lower-bound gap ε preserved along the flow at Λ.
    PreservationEps {
        #[arg(long)]
        dim: usize,
        #[arg(long = "Lambda")]
        #[serde(rename = "Lambda")]
        big_lambda: f64,
    },
    /// Initial pinching Λ₁ for a given Λ₀.
    Lambda1 {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        lambda0: f64,
    },
    /// Σ (1 − λₖ²)²/(1 + λₖ²)² over the leading singular values.
    CurvatureSum {
        #[arg(long, value_delimiter = ',', required = true)]
        lambda: Vec<f64>,
    },
    /// The logarithmic comparison inequality on its interval.
    LogComparison {
        #[arg(long)]
        lambda0: f64,
        #[arg(long, default_value_t = crate::pinch::DEFAULT_LOG_GRID)]
        grid: usize,
    },
    /// Constants Λ₁, ε, c of the pinching argument.
    Params {
        #[arg(long)]
        dim: usize,
        /// Omit for Λ₀ = ∞.
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Lower bound C₀ of *Ω; defaults to 2⁻ⁿ/2.
        #[arg(long)]
        c0: Option<f64>,
        #[arg(long, default_value_t = crate::pinch::DEFAULT_K1)]
        k1: f64,
        #[arg(long, default_value_t = crate::pinch::DEFAULT_K2)]
        k2: f64,
    },
    /// Seeded random Λ-pinched spectra (tabular).
    Sample {
        #[arg(long)]
        dim: usize,
        #[arg(long = "Lambda")]
        #[serde(rename = "Lambda")]
        big_lambda: f64,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum FlowOp {
    /// Run from a JSON config; the table is the monitor series.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Per-node geometry of a checkpoint, or of an initial twist.
    Geometry {
        #[arg(long, conflicts_with_all = ["n", "profile", "amplitude"])]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value = "smooth_twist")]
        profile: crate::flow::Profile,
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct OdeArgs {
    #[arg(long, default_value_t = crate::pinch::DEFAULT_K1)]
    pub k1: f64,
    #[arg(long, default_value_t = crate::pinch::DEFAULT_K2)]
    pub k2: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub c0: f64,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub y0: f64,
    /// Evaluation time; with `--steps` the end of a series on [0, t].
    #[arg(long)]
    pub t: f64,
    /// Emit a series of this many intervals.
    #[arg(long)]
    pub steps: Option<usize>,
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<CommandResult> {
    let start = Instant::now();
    let mut result = commands::run(&cli.command, cli.seed)?;
    if let serde_json::Value::Object(map) = &mut result.inputs_echo {
        map.insert("seed".into(), cli.seed.into());
    }
    if cli.timing {
        result.elapsed_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(result)
}

/// Parses `argv`, runs the command, writes its output and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|r| emit(&r, cli.format, cli.output.as_deref()));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("sympflow").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn star_omega_equality_case() {
        let r = execute(&parse(&["pinch", "star-omega", "--lambda", "1,1,1,1"])).unwrap();
        assert_eq!(r.outputs["star_omega"].as_f64().unwrap(), 0.25);
        assert_eq!(r.command, "pinch star-omega");
        assert_eq!(r.inputs_echo["seed"], 0);
        assert!(r.elapsed_seconds.is_none());
    }

    #[test]
    fn csv_needs_a_table() {
        let r = execute(&parse(&["pinch", "star-omega", "--lambda", "1,1"])).unwrap();
        let err = render(&r, Format::Csv).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(dispatch(["sympflow", "bogus"]), 2);
        assert_eq!(dispatch(["sympflow", "lambda0"]), 2);
        assert_eq!(dispatch(["sympflow", "--help"]), 0);
    }

    #[test]
    fn validation_and_numerical_codes() {
        let bad = execute(&parse(&["pinch", "eps-from-lambda", "--dim", "2", "--Lambda", "0.5"])).unwrap_err();
        assert_eq!(bad.exit_code(), 2);
        let r = execute(&parse(&["qform", "--lambda", "2,0.5,1,1"])).unwrap();
        assert_eq!(r.outputs["n"], 2);
    }
}
