use fanomode::dynamics::{
    build_discretized, decay_rate, solve_amplitudes, solve_amplitudes_from, solve_discretized, solve_qme, solve_volterra,
    DensityMatrix3, Method, Trajectory, VolterraOptions,
};
use fanomode::embedding::{embed_from_model, is_lindblad};
use fanomode::fanodiag::{fano_lambda, verify_lambda_identity};
use fanomode::spectral::pole_residue_from_model;
use fanomode::{FanoModel, ReducedForm};
use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use std::f64::consts::TAU;

use crate::config::{InitialChoice, RunConfig, SolverConfig};
use crate::error::CliError;
use crate::output::{Body, Document, Table};

/// Trace drift and eigenvalue floor for the positivity checks.
pub const STATE_TOL: f64 = 1e-10;
/// Largest tolerated decrease of the jump probability per step.
pub const JUMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::Subcommand)]
pub enum Command {
    /// Reduced spectral function 2 pi J(eps) / gamma for a set of (eta, |q|, dphi) curves
    Spectrum,
    /// Memory kernel F(tau), optionally against the numerical Fourier integral
    Kernel,
    /// Integrate the dynamics with one method
    Evolve,
    /// Run two methods and compare |c1(t)|
    Compare,
    /// Kossakowski matrix, eigenvalues and Lindblad verdict
    LindbladCheck,
    /// Eigenmode coupling 2 pi |Lambda|^2 against 2 pi J (eta = 1 only)
    Fanodiag,
    /// Fitted decay rate against the golden-rule prediction 2 pi J(omega_A)
    DecayRate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Kernel => "kernel",
            Command::Evolve => "evolve",
            Command::Compare => "compare",
            Command::LindbladCheck => "lindblad-check",
            Command::Fanodiag => "fanodiag",
            Command::DecayRate => "decay-rate",
        }
    }
}

/// A command's document plus the properties it found violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Document,
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

pub fn run_command(command: Command, config: &RunConfig) -> Result<Outcome, CliError> {
    let mut outcome = match command {
        Command::Spectrum => cmd_spectrum(config),
        Command::Kernel => cmd_kernel(config),
        Command::Evolve => cmd_evolve(config),
        Command::Compare => cmd_compare(config),
        Command::LindbladCheck => cmd_lindblad_check(config),
        Command::Fanodiag => cmd_fanodiag(config),
        Command::DecayRate => cmd_decay_rate(config),
    }?;
    let mut metadata = vec![
        ("fanomode".to_string(), json!(env!("CARGO_PKG_VERSION"))),
        ("command".to_string(), json!(command.name())),
        ("units".to_string(), json!("frequencies and rates in units of kappa; presets set kappa = 1")),
        ("config".to_string(), json!(recorded_config(config))),
    ];
    metadata.append(&mut outcome.document.metadata);
    outcome.document.metadata = metadata;
    if !outcome.violations.is_empty() {
        outcome.document.summary.push(("violations".into(), json!(outcome.violations.join("; "))));
    }
    if !outcome.warnings.is_empty() {
        outcome.document.summary.push(("warnings".into(), json!(outcome.warnings.join("; "))));
    }
    Ok(outcome)
}

/// The config as recorded in the header; the output path is left out so that
/// the same run written to two files gives identical bytes.
fn recorded_config(config: &RunConfig) -> String {
    let mut c = config.clone();
    c.output.path = None;
    serde_json::to_string(&c).expect("config serializes")
}

fn kv(k: &str, v: Value) -> (String, Value) {
    (k.to_string(), v)
}

fn table(columns: &[&str], rows: Vec<Vec<f64>>) -> Body {
    Body::Table(Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows })
}

fn grid(lo: f64, hi: f64, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(CliError::Usage(format!("{what}: need a finite range lo < hi and at least 2 points")));
    }
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

pub fn cmd_spectrum(config: &RunConfig) -> Result<Outcome, CliError> {
    let s = &config.spectrum;
    let eps = grid(s.eps_min, s.eps_max, s.n_points, "spectrum")?;
    if s.curves.is_empty() {
        return Err(CliError::Usage("spectrum: no curves configured".into()));
    }
    let mut forms = Vec::new();
    let mut names = vec!["eps".to_string()];
    for c in &s.curves {
        if !(c.eta >= 0.0 && c.q_abs >= 0.0 && c.delta_phi.is_finite()) {
            return Err(CliError::Usage(format!("spectrum: invalid curve {c:?}")));
        }
        forms.push(ReducedForm { gamma: 1.0, q: C64::from_polar(c.q_abs, c.delta_phi), eta: c.eta });
        names.push(format!("eta{}_q{}_dphi{}", c.eta, c.q_abs, c.delta_phi));
    }
    let rows = eps
        .iter()
        .map(|&e| std::iter::once(e).chain(forms.iter().map(|f| f.two_pi_j(e))).collect())
        .collect();
    let cols: Vec<&str> = names.iter().map(String::as_str).collect();
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("columns", json!("eps, then 2 pi J(eps) / gamma per (eta, |q|, dphi) curve"))],
            body: table(&cols, rows),
            summary: vec![],
        },
        violations: vec![],
        warnings: vec![],
    })
}

pub fn cmd_kernel(config: &RunConfig) -> Result<Outcome, CliError> {
    let k = &config.kernel;
    let spec = pole_residue_from_model(&config.model)?;
    let taus = grid(0.0, k.tau_max, k.n_points, "kernel")?;
    let delta_weight = spec.memory_kernel(0.0)?.delta_weight;
    let mut rows = Vec::with_capacity(taus.len());
    let mut max_diff: f64 = 0.0;
    for &tau in &taus {
        let f = spec.memory_kernel(tau)?.regular;
        let mut row = vec![tau, f.re, f.im, f.norm()];
        if k.quadrature {
            let q = spec.kernel_by_quadrature(tau, k.window, k.quadrature_points)?;
            // at tau = 0 the symmetric integral is the mean of F(0+) and F(0-) = conj F(0+)
            let reference = if tau == 0.0 { C64::new(f.re, 0.0) } else { f };
            let d = (q.value - reference).norm();
            max_diff = max_diff.max(d);
            row.extend([q.value.re, q.value.im, q.error_estimate, d]);
        }
        rows.push(row);
    }
    let mut cols = vec!["tau", "re_f", "im_f", "abs_f"];
    let mut summary = vec![kv("delta_weight", json!(delta_weight))];
    if k.quadrature {
        cols.extend(["quad_re", "quad_im", "quad_error_estimate", "abs_diff"]);
        summary.push(kv("max_abs_diff", json!(max_diff)));
    }
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("columns", json!("regular part of F(tau); the delta part has weight delta_weight"))],
            body: table(&cols, rows),
            summary,
        },
        violations: vec![],
        warnings: vec![],
    })
}

/// Runs one solver as configured.
pub fn run_method(model: &FanoModel, solver: &SolverConfig, method: Method) -> Result<Trajectory, CliError> {
    model.validate()?;
    let c1_0 = solver.c1_0;
    let pseudomode_start = |q: &fanomode::EmbeddedQme| -> Result<(C64, C64, C64), CliError> {
        match solver.initial {
            InitialChoice::Atom => {
                let p = c1_0.norm_sqr();
                if p > 1.0 {
                    return Err(CliError::Usage(format!("solver.c1_0: |c1|^2 = {p} exceeds 1")));
                }
                Ok((C64::new((1.0 - p).sqrt(), 0.0), c1_0, C64::new(0.0, 0.0)))
            }
            InitialChoice::LowestEigenvector => {
                let v = q.kossakowski().lowest_eigenvector();
                Ok((C64::new(0.0, 0.0), v[0], v[1]))
            }
        }
    };
    let reservoir_only = || {
        if solver.initial != InitialChoice::Atom {
            return Err(CliError::Usage(format!("solver.initial: {method} has no pseudomode to initialize")));
        }
        Ok(())
    };
    let traj = match method {
        Method::Volterra => {
            reservoir_only()?;
            let spec = pole_residue_from_model(model)?;
            let options = VolterraOptions { history: solver.history, richardson: solver.richardson };
            solve_volterra(&spec, model.omega_a, c1_0, solver.t_max, solver.h, options)?
        }
        Method::Discretized => {
            reservoir_only()?;
            let spec = pole_residue_from_model(model)?;
            let res = build_discretized(&spec, solver.window * model.kappa, solver.n_modes)?;
            solve_discretized(&res, model.omega_a, c1_0, solver.t_max, solver.h)?
        }
        Method::Amplitudes => {
            let q = embed_from_model(model)?;
            match solver.initial {
                InitialChoice::Atom => solve_amplitudes(&q, c1_0, solver.t_max, solver.h)?,
                InitialChoice::LowestEigenvector => {
                    let (c0, c1, b1) = pseudomode_start(&q)?;
                    solve_amplitudes_from(&q, c0, c1, b1, solver.t_max, solver.h)?
                }
            }
        }
        Method::Qme => {
            let q = embed_from_model(model)?;
            let (c0, c1, b1) = pseudomode_start(&q)?;
            solve_qme(&q, &DensityMatrix3::pure(c0, c1, b1)?, solver.t_max, solver.h)?
        }
    };
    Ok(traj)
}

/// Trace, positivity and jump-monotonicity checks on a trajectory.
pub fn trajectory_checks(traj: &Trajectory) -> (Vec<(String, Value)>, Vec<String>) {
    let obs = traj.observables();
    let drift = obs.iter().map(|o| (o.trace - 1.0).abs()).fold(0.0, f64::max);
    let min_eig = obs.iter().map(|o| o.min_eigenvalue).fold(f64::INFINITY, f64::min);
    let mut summary = vec![kv("max_trace_drift", json!(drift)), kv("min_eigenvalue", json!(min_eig))];
    let mut violations = vec![];
    if drift > STATE_TOL {
        violations.push(format!("trace drift {drift:.3e} exceeds {STATE_TOL:e}"));
    }
    if min_eig < -STATE_TOL {
        violations.push(format!("state lost positivity: min eigenvalue {min_eig:.3e}"));
    }
    // the reservoir population of the reservoir solvers may legitimately flow back
    if matches!(traj.method(), Method::Amplitudes | Method::Qme) {
        let min_inc = traj.jump_increments().into_iter().fold(f64::INFINITY, f64::min);
        summary.push(kv("min_jump_increment", json!(min_inc)));
        if min_inc < -JUMP_TOL {
            violations.push(format!("jump probability decreased by {:.3e} in one step", -min_inc));
        }
    }
    (summary, violations)
}

pub fn cmd_evolve(config: &RunConfig) -> Result<Outcome, CliError> {
    let method = config.solver.method;
    let traj = run_method(&config.model, &config.solver, method)?;
    let rows = traj
        .observables()
        .iter()
        .map(|o| vec![o.t, o.atom, o.cavity, o.pi_j, o.trace, o.min_eigenvalue])
        .collect();
    let (summary, violations) = trajectory_checks(&traj);
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("method", json!(method.name()))],
            body: table(&["t", "atom", "cavity", "pi_j", "trace", "min_eigenvalue"], rows),
            summary,
        },
        violations,
        warnings: vec![],
    })
}

pub fn cmd_compare(config: &RunConfig) -> Result<Outcome, CliError> {
    let [a, b] = config.compare.methods;
    let ta = run_method(&config.model, &config.solver, a)?;
    let tb = run_method(&config.model, &config.solver, b)?;
    let (xa, xb) = (ta.atom_amplitude(), tb.atom_amplitude());
    let mut max: f64 = 0.0;
    let rows = ta
        .times()
        .into_iter()
        .zip(xa.iter().zip(&xb))
        .map(|(t, (&u, &v))| {
            max = max.max((u - v).abs());
            vec![t, u, v, (u - v).abs()]
        })
        .collect();
    let col_a = format!("abs_c1_{a}");
    let col_b = format!("abs_c1_{b}");
    let mut violations = vec![];
    if max > config.compare.tolerance {
        violations.push(format!("max residual {max:.3e} exceeds tolerance {:e}", config.compare.tolerance));
    }
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("methods", json!(format!("{a} vs {b}")))],
            body: table(&["t", &col_a, &col_b, "residual"], rows),
            summary: vec![kv("max_residual", json!(max)), kv("tolerance", json!(config.compare.tolerance))],
        },
        violations,
        warnings: vec![],
    })
}

pub fn cmd_lindblad_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let m = &config.model;
    let q = embed_from_model(m)?;
    let report = is_lindblad(&q);
    let g = report.kossakowski.entries;
    let verdict = if report.is_lindblad { "PASS" } else { "FAIL" };
    let items = vec![
        kv("gamma_11", json!(g[0][0].re)),
        kv("gamma_12_re", json!(g[0][1].re)),
        kv("gamma_12_im", json!(g[0][1].im)),
        kv("gamma_22", json!(g[1][1].re)),
        kv("eigenvalue_min", json!(report.eigenvalues[0])),
        kv("eigenvalue_max", json!(report.eigenvalues[1])),
        kv("det", json!(report.det)),
        kv("det_expected", json!(m.gamma * m.kappa * (1.0 - m.eta))),
        kv("scalar_condition", json!(report.scalar_condition)),
        kv("j0", json!(m.gamma / TAU)),
        kv("repair_threshold_j0", json!(report.repair_threshold_j0)),
        kv("verdict", json!(verdict)),
    ];
    let violations = if report.is_lindblad {
        vec![]
    } else {
        vec![format!("Kossakowski matrix has a negative eigenvalue {:.3e}", report.eigenvalues[0])]
    };
    Ok(Outcome {
        document: Document { metadata: vec![], body: Body::Report(items), summary: vec![kv("verdict", json!(verdict))] },
        violations,
        warnings: vec![],
    })
}

pub fn cmd_fanodiag(config: &RunConfig) -> Result<Outcome, CliError> {
    let m = &config.model;
    let f = &config.fanodiag;
    let omegas = grid(m.omega_c - f.half_width * m.kappa, m.omega_c + f.half_width * m.kappa, f.n_points, "fanodiag")?;
    let max_error = verify_lambda_identity(m, &omegas)?;
    let spec = pole_residue_from_model(m)?;
    let rows = omegas
        .iter()
        .map(|&w| {
            let lhs = TAU * fano_lambda(m, w, f.psi).norm_sqr();
            let rhs = TAU * spec.evaluate(w);
            vec![w, lhs, rhs, (lhs - rhs).abs()]
        })
        .collect();
    let violations = if max_error > f.tolerance {
        vec![format!("max relative error {max_error:.3e} exceeds {:e}", f.tolerance)]
    } else {
        vec![]
    };
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("psi", json!(f.psi))],
            body: table(&["omega", "two_pi_lambda_sq", "two_pi_j", "abs_diff"], rows),
            summary: vec![kv("max_relative_error", json!(max_error))],
        },
        violations,
        warnings: vec![],
    })
}

pub fn cmd_decay_rate(config: &RunConfig) -> Result<Outcome, CliError> {
    let d = &config.decay;
    let model = d.preset.map(|p| p.model()).unwrap_or(config.model);
    let solver = SolverConfig { h: d.h, t_max: d.t_max, initial: InitialChoice::Atom, ..config.solver.clone() };
    let traj = run_method(&model, &solver, d.method)?;
    let fit = decay_rate(&traj, d.fit_window)?;
    let spec = pole_residue_from_model(&model)?;
    let predicted = TAU * spec.evaluate(model.omega_a);

    let mut warnings = vec![];
    if let Some(w) = &fit.warning {
        warnings.push(w.clone());
    }
    let limit = d.weak_fraction * model.kappa;
    if model.gamma > limit || predicted > limit {
        warnings.push(format!(
            "outside the golden-rule regime: gamma = {}, 2 pi J(omega_A) = {predicted:.4e}, kappa = {}",
            model.gamma, model.kappa
        ));
    }
    let relative = if predicted > 0.0 { (fit.rate - predicted) / predicted } else { f64::NAN };
    let items = vec![
        kv("fitted_rate", json!(fit.rate)),
        kv("predicted_rate", json!(predicted)),
        kv("relative_deviation", json!(relative)),
        kv("bare_gamma", json!(model.gamma)),
        kv("suppression", json!(model.gamma / fit.rate)),
        kv("rms_residual", json!(fit.rms_residual)),
        kv("n_points", json!(fit.n_points)),
        kv("status", json!(if warnings.is_empty() { "ok" } else { "warning" })),
    ];
    Ok(Outcome {
        document: Document {
            metadata: vec![kv("model", json!(serde_json::to_string(&model).expect("model serializes")))],
            body: Body::Report(items),
            summary: vec![],
        },
        violations: vec![],
        warnings,
    })
}
