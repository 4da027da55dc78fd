use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::output::{CommandResult, Table, SCHEMA_VERSION};
use super::{Command, DeltaArgs, FlowOp, Lambda0Args, OdeArgs, PinchOp, QformArgs, SvdArgs};
use crate::flow::{self, FlowConfig, FlowState, MONITOR_CSV_HEADER};
use crate::pinch::{self, ComparisonOde, PinchingParams};
use crate::qform::{self, assemble_q, assemble_qtilde, norm_matrix, QFormMatrix};
use crate::sympl::{self, SingularSpectrum, SymplecticMap};
use crate::{Error, Result};

fn echo<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn result(command: &str, inputs_echo: Value, outputs: Value, table: Option<Table>) -> CommandResult {
    CommandResult {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        inputs_echo,
        outputs,
        elapsed_seconds: None,
        table,
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), source: e })?;
    serde_json::from_str(&text).map_err(|e| Error::Json { path: path.display().to_string(), source: e })
}

pub(super) fn run(cmd: &Command, seed: u64) -> Result<CommandResult> {
    match cmd {
        Command::Svd(a) => svd(a, seed),
        Command::Qform(a) => qform_cmd(a),
        Command::Delta(a) => delta(a),
        Command::Lambda0(a) => lambda0(a),
        Command::Pinch { op } => pinch_cmd(op, seed),
        Command::Flow { op } => flow_cmd(op),
        Command::Ode(a) => ode(a),
    }
}

fn svd(a: &SvdArgs, seed: u64) -> Result<CommandResult> {
    let l = match (&a.matrix, a.random_dim) {
        (Some(path), _) => {
            let m: Vec<Vec<f64>> = read_json(path)?;
            SymplecticMap::from_rows(&m, a.tol)?
        }
        (None, Some(n)) => sympl::random_symplectic(n, seed, a.spread)?,
        (None, None) => return Err(Error::invalid("give --matrix or --random-dim")),
    };
    let n = l.n();
    let j = sympl::standard_j(n)?;
    let e = sympl::polar_isometry(&l)?;
    let spectrum = sympl::paired_singular_values(&l)?;
    let basis = sympl::adapted_basis(&l)?;
    let id = DMatrix::<f64>::identity(2 * n, 2 * n);
    let lam = basis.spectrum.values();
    let mut lemma = 0.0f64;
    for p in 0..2 * n {
        for q in 0..2 * n {
            if (lam[p] * lam[q] - 1.0).abs() > crate::DEFAULT_TOL {
                let v = basis.a.column(p).dot(&(&j * basis.a.column(q)));
                lemma = lemma.max(v.abs());
            }
        }
    }
    let pairing = spectrum.values().chunks(2).map(|p| (p[0] * p[1] - 1.0).abs()).fold(0.0, f64::max);
    let outputs = json!({
        "n": n,
        "matrix": l.to_rows(),
        "symplectic_residual": sympl::symplectic_residual(l.matrix())?,
        "singular_values": spectrum.values(),
        "pairing_residual": pairing,
        "polar_isometry": rows(&e),
        "orthogonality_residual": (e.transpose() * &e - &id).amax(),
        "intertwining_residual": (&e * &j - &j * &e).amax(),
        "polar_symplectic_residual": sympl::symplectic_residual(&e)?,
        "adapted_basis": {
            "a": rows(&basis.a),
            "a_tilde": rows(&basis.a_tilde),
            "spectrum": basis.spectrum.values(),
            "diagonal_residual": basis.diagonal_residual(&l),
            "complex_structure_residual": basis.complex_structure_residual(),
            "orthogonality_residual": (basis.a.transpose() * &basis.a - &id).amax(),
            "orthogonal_pairs_residual": lemma,
        },
    });
    Ok(result("svd", echo(a), outputs, None))
}

fn form_summary(q: &QFormMatrix, with_matrix: bool) -> Result<Value> {
    let nm = norm_matrix(q.n());
    let mut v = json!({
        "dim": q.dim(),
        "eigenvalues": q.eigenvalues(),
        "smallest_eigenvalue": q.smallest_eigenvalue(),
        "min_eig_ratio": qform::min_eig_ratio(q, &nm)?,
    });
    if with_matrix {
        v["matrix"] = json!(rows(q.matrix()));
    }
    Ok(v)
}

fn qform_cmd(a: &QformArgs) -> Result<CommandResult> {
    if a.blocks {
        let n = a.dim.ok_or_else(|| Error::invalid("--blocks needs --dim"))?;
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let b = qform::block_decomposition_at_one(n);
        let q1 = assemble_qtilde(&SingularSpectrum::ones(n));
        let block = |m: &QFormMatrix| -> Value {
            let parts: Vec<Value> = m
                .irreducible_blocks()
                .into_iter()
                .map(|(support, mat)| json!({"support": support, "smallest_eigenvalue": mat.symmetric_eigenvalues().min()}))
                .collect();
            json!({"smallest_eigenvalue_on_support": m.smallest_eigenvalue_on_support(), "blocks": parts})
        };
        let outputs = json!({
            "n": n,
            "q1": block(&b.q1),
            "q2": block(&b.q2),
            "q3": block(&b.q3),
            "sum_residual": b.sum().max_abs_diff(&q1),
            "min_eig_ratio": qform::min_eig_ratio(&q1, &norm_matrix(n))?,
        });
        return Ok(result("qform", echo(a), outputs, None));
    }
    let lambda = a.lambda.clone().ok_or_else(|| Error::invalid("give --lambda or --dim with --blocks"))?;
    let spectrum = SingularSpectrum::new(lambda, a.tol)?;
    let q = if a.tilde { assemble_qtilde(&spectrum) } else { assemble_q(&spectrum) };
    let mut outputs = form_summary(&q, a.with_matrix)?;
    outputs["n"] = json!(spectrum.n());
    outputs["form"] = json!(if a.tilde { "qtilde" } else { "q" });
    outputs["smallest_ratio_ordered"] = json!(qform::smallest_ratio_ordered(&spectrum));
    Ok(result("qform", echo(a), outputs, None))
}

fn delta(a: &DeltaArgs) -> Result<CommandResult> {
    let d = qform::delta_box(a.dim, a.lambda_box, a.grid)?;
    Ok(result("delta", echo(a), serde_json::to_value(&d).expect("serializes"), None))
}

fn lambda0(a: &Lambda0Args) -> Result<CommandResult> {
    let r = qform::lambda0(a.dim, a.tol, a.cap, a.grid)?;
    let outputs = json!({
        "status": if r.exceeds_cap { "exceeds cap" } else { "found" },
        "n": r.n,
        "lambda0": r.lambda0,
        "lambda0_metric": r.lambda0.map(|l| l * l),
        "tol": r.tol,
        "cap": r.cap,
        "grid_steps": r.grid_steps,
        "bracket": r.bracket,
        "minimizing_lambda": r.minimizing_lambda,
        "delta_at_hi": r.delta_at_hi,
    });
    Ok(result("lambda0", echo(a), outputs, None))
}

fn spectrum_arg(lambda: &[f64]) -> Result<SingularSpectrum> {
    SingularSpectrum::new(lambda.to_vec(), crate::DEFAULT_TOL)
}

fn pinch_cmd(op: &PinchOp, seed: u64) -> Result<CommandResult> {
    let (name, outputs, table) = match op {
        PinchOp::StarOmega { lambda } => {
            ("star-omega", json!({"star_omega": pinch::star_omega(&spectrum_arg(lambda)?)}), None)
        }
        PinchOp::EpsFromLambda { dim, big_lambda } => {
            ("eps-from-lambda", json!({"eps": pinch::eps_from_lambda(*dim, *big_lambda)?}), None)
        }
        PinchOp::LambdaFromEps { dim, eps } => {
            ("lambda-from-eps", json!({"Lambda": pinch::lambda_from_eps(*dim, *eps)?}), None)
        }
        PinchOp::PreservationEps { dim, big_lambda } => {
            ("preservation-eps", json!({"eps": pinch::preservation_eps(*dim, *big_lambda)?}), None)
        }
        PinchOp::Lambda1 { dim, lambda0 } => {
            ("lambda1", json!({"lambda1": pinch::lambda1_from_lambda0(*dim, *lambda0)?}), None)
        }
        PinchOp::CurvatureSum { lambda } => {
            ("curvature-sum", json!({"curvature_sum": pinch::curvature_sum(&spectrum_arg(lambda)?)}), None)
        }
        PinchOp::LogComparison { lambda0, grid } => {
            let r = pinch::log_comparison(*lambda0, *grid)?;
            ("log-comparison", serde_json::to_value(&r).expect("serializes"), None)
        }
        PinchOp::Params { dim, lambda0, delta, c0, k1, k2 } => {
            if *dim == 0 {
                return Err(Error::invalid("n must be at least 1"));
            }
            let c0 = c0.unwrap_or(0.5f64.powi(*dim as i32 + 1));
            let p = PinchingParams::new(*dim, *lambda0, *delta, c0, *k1, *k2)?;
            ("params", serde_json::to_value(&p).expect("serializes"), None)
        }
        PinchOp::Sample { dim, big_lambda, count } => {
            if *dim == 0 || !(*big_lambda >= 1.0) || !big_lambda.is_finite() {
                return Err(Error::invalid("need n ≥ 1 and a finite Lambda ≥ 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut columns: Vec<String> = (1..=2 * dim).map(|i| format!("lambda_{i}")).collect();
            columns.push("star_omega".into());
            columns.push("curvature_sum".into());
            let mut data = Vec::with_capacity(*count);
            let mut min_star = f64::INFINITY;
            for _ in 0..*count {
                let s = pinch::sample_pinched_spectrum(*dim, *big_lambda, &mut rng);
                let w = pinch::star_omega(&s);
                min_star = min_star.min(w);
                let mut row = s.values().to_vec();
                row.push(w);
                row.push(pinch::curvature_sum(&s));
                data.push(row);
            }
            let outputs = json!({
                "count": count,
                "min_star_omega": if *count > 0 { Some(min_star) } else { None },
                "lower_bound": 0.5f64.powi(*dim as i32) - pinch::eps_from_lambda(*dim, *big_lambda).unwrap_or(0.0),
            });
            ("sample", outputs, Some(Table { columns, rows: data }))
        }
    };
    Ok(result(&format!("pinch {name}"), echo(op), outputs, table))
}

fn flow_cmd(op: &FlowOp) -> Result<CommandResult> {
    match op {
        FlowOp::Run { config } => {
            let cfg = FlowConfig::load(config)?;
            let out = flow::run(&cfg)?;
            let columns = MONITOR_CSV_HEADER.iter().map(|s| s.to_string()).collect();
            let data = out
                .reports
                .iter()
                .map(|r| vec![r.t, r.min_star_omega, r.max_sff_norm, r.max_lambda_dev, r.total_area, r.max_symplectic_residual])
                .collect();
            let last = out.reports.last().expect("initial report");
            let outputs = json!({
                "steps": out.steps,
                "dt": out.dt,
                "final": last,
                "reports": out.reports,
                "checkpoints": out.checkpoints,
            });
            let mut inputs = echo(op);
            inputs["config_contents"] = serde_json::to_value(&cfg).expect("serializes");
            Ok(result("flow run", inputs, outputs, Some(Table { columns, rows: data })))
        }
        FlowOp::Geometry { checkpoint, n, profile, amplitude } => {
            let s = match checkpoint {
                Some(p) => FlowState::read_checkpoint(p)?,
                None => flow::init_twist(*n, *profile, *amplitude)?,
            };
            let g = flow::geometry(&s)?;
            let report = flow::report_from(&s, &g);
            let columns = ["theta", "Theta", "g", "lambda", "star_omega", "sff_norm", "mean_curvature_norm", "area_element", "symplectic_residual"]
                .iter()
                .map(|c| c.to_string())
                .collect();
            let data = (0..=s.n())
                .map(|k| {
                    vec![
                        s.theta_grid[k],
                        s.big_theta[k],
                        s.g[k],
                        g.lambda[k],
                        g.star_omega[k],
                        g.sff_norm[k],
                        g.mean_curvature_norm[k],
                        g.area_element[k],
                        g.symplectic_residual[k],
                    ]
                })
                .collect();
            let outputs = json!({"t": s.t, "N": s.n(), "summary": report});
            Ok(result("flow geometry", echo(op), outputs, Some(Table { columns, rows: data })))
        }
    }
}

fn ode(a: &OdeArgs) -> Result<CommandResult> {
    let ode = ComparisonOde::new(a.k1, a.k2, a.delta, a.c0, a.eps)?;
    let base = json!({"beta": ode.beta(), "equilibrium": ode.equilibrium()});
    match a.steps {
        None => {
            let mut outputs = base;
            outputs["y"] = json!(ode.solve(a.y0, a.t)?);
            Ok(result("ode", echo(a), outputs, None))
        }
        Some(steps) => {
            if steps == 0 {
                return Err(Error::invalid("--steps must be positive"));
            }
            let mut data = Vec::with_capacity(steps + 1);
            for k in 0..=steps {
                let t = a.t * k as f64 / steps as f64;
                data.push(vec![t, ode.solve(a.y0, t)?]);
            }
            let mut outputs = base;
            outputs["y_final"] = json!(data.last().map(|r| r[1]));
            let table = Table { columns: vec!["t".into(), "y".into()], rows: data };
            Ok(result("ode", echo(a), outputs, Some(table)))
        }
    }
}
