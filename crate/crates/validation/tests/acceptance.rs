//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails.

use fanomode::dynamics::{
    build_discretized, solve_amplitudes, solve_amplitudes_from, solve_discretized, solve_qme, solve_volterra,
    DensityMatrix3, Trajectory, VolterraOptions,
};
use fanomode::embedding::{embed_from_model, is_lindblad, repair_threshold_j0};
use fanomode::fanodiag::verify_lambda_identity;
use fanomode::spectral::pole_residue_from_model;
use fanomode::{EmbeddedQme, FanoModel};
use fanomode_cli::config::DecayPreset;
use fanomode_cli::output::Body;
use fanomode_cli::{run_command, Command, RunConfig};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

struct Check {
    passed: bool,
    detail: String,
}

fn check(passed: bool, detail: impl Into<String>) -> Check {
    Check { passed, detail: detail.into() }
}

fn random_model(rng: &mut ChaCha8Rng, eta: Option<f64>) -> FanoModel {
    FanoModel {
        omega_a: rng.gen_range(-2.0..2.0),
        omega_c: 0.0,
        gamma: rng.gen_range(0.01..=1.0),
        kappa: 1.0,
        g_abs: rng.gen_range(0.0..=2.0),
        phi: rng.gen_range(-PI..PI),
        eta: eta.unwrap_or_else(|| rng.gen_range(0.0..=1.0)),
        theta_a: rng.gen_range(-PI..PI),
        theta_c: rng.gen_range(-PI..PI),
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn fig2_reproduction() -> Check {
    let start = Instant::now();
    let outcome = run_command(Command::Spectrum, &RunConfig::default()).unwrap();
    let elapsed = start.elapsed();
    let Body::Table(t) = outcome.document.body else { unreachable!() };
    let at = |eps: f64, col: usize| t.rows.iter().find(|r| (r[0] - eps).abs() < 1e-12).map(|r| r[col]).unwrap();
    let (solid, dashed, dotted) = (at(-2.0, 1), at(0.0, 2), at(0.0, 3));
    let err = solid.abs().max((dashed - 5.0).abs()).max(dotted.abs());
    check(
        err < 1e-12 && within(elapsed, Duration::from_secs(1)),
        format!("solid(-2) = {solid:.3e}, dashed(0) = {dashed}, dotted(0) = {dotted:.3e}; {elapsed:.2?}"),
    )
}

fn cross_solver_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let m = random_model(&mut rng, None);
        let spec = pole_residue_from_model(&m).unwrap();
        let q = embed_from_model(&m).unwrap();
        let v = solve_volterra(&spec, m.omega_a, ONE, 20.0, 1e-3, VolterraOptions::default()).unwrap();
        let a = solve_amplitudes(&q, ONE, 20.0, 1e-3).unwrap();
        worst = worst.max(max_abs_diff(&v.atom_amplitude(), &a.atom_amplitude()));
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-6 && within(elapsed, Duration::from_secs(60)),
        format!("max | |c1|_volterra - |c1|_amplitudes | = {worst:.3e} over 20 models; {elapsed:.2?}"),
    )
}

fn oracle_error(m: &FanoModel, window: f64, n_modes: usize, t_max: f64, h: f64) -> f64 {
    let spec = pole_residue_from_model(m).unwrap();
    let res = build_discretized(&spec, window, n_modes).unwrap();
    let d = solve_discretized(&res, m.omega_a, ONE, t_max, h).unwrap();
    let v = solve_volterra(&spec, m.omega_a, ONE, t_max, h, VolterraOptions::default()).unwrap();
    max_abs_diff(&d.atom_amplitude(), &v.atom_amplitude())
}

fn brute_force_oracle() -> Check {
    let start = Instant::now();
    let m = FanoModel::from_reduced(0.25, 1.0, 2.0, 0.0);
    let err = oracle_error(&m, 40.0, 4001, 5.0, 1e-3);
    let elapsed = start.elapsed();
    check(
        err < 1e-3 && within(elapsed, Duration::from_secs(60)),
        format!("max |d|c1|| = {err:.3e} (window 40 kappa, 4001 modes, t <= 5); {elapsed:.2?}"),
    )
}

fn qme_consistency() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut amp_err, mut drift, mut min_eig): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for _ in 0..3 {
        let m = random_model(&mut rng, None);
        let q = embed_from_model(&m).unwrap();
        let a = solve_amplitudes(&q, ONE, 20.0, 1e-3).unwrap();
        let r = solve_qme(&q, &DensityMatrix3::pure(ZERO, ONE, ZERO).unwrap(), 20.0, 1e-3).unwrap();
        for (s, (_, rho)) in a.amplitudes().unwrap().iter().zip(r.densities().unwrap()) {
            let x = rho.matrix();
            amp_err = amp_err
                .max((x[(1, 1)].re - s.c1.norm_sqr()).abs())
                .max((x[(2, 2)].re - s.b1.norm_sqr()).abs())
                .max((x[(1, 2)] - s.c1 * s.b1.conj()).norm());
            drift = drift.max((rho.trace() - 1.0).abs());
            min_eig = min_eig.min(rho.min_eigenvalue());
        }
    }
    check(
        amp_err < 1e-8 && drift < 1e-10 && min_eig > -1e-10,
        format!(
            "amplitude mismatch {amp_err:.3e}, trace drift {drift:.3e}, min eigenvalue {min_eig:.3e}; {:.2?}",
            start.elapsed()
        ),
    )
}

fn lindblad_boundary() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut det_err: f64 = 0.0;
    let mut verdicts_ok = true;
    for k in 0..200 {
        let eta = if k % 4 == 0 { [0.0, 1.0, 1.2, 1.5][k / 4 % 4] } else { rng.gen_range(0.0..1.5) };
        let m = random_model(&mut rng, Some(eta));
        let report = is_lindblad(&embed_from_model(&m).unwrap());
        let scale = m.gamma * m.kappa;
        det_err = det_err.max((report.det - scale * (1.0 - m.eta)).abs() / scale);
        verdicts_ok &= report.is_lindblad == (m.eta <= 1.0);
    }
    let mut repair_err: f64 = 0.0;
    for _ in 0..20 {
        let base = EmbeddedQme {
            omega_a: 0.0,
            omega_c: 0.0,
            mu: C64::new(0.5, 0.0),
            gamma: 0.0,
            kappa: rng.gen_range(0.2..3.0),
            gamma_f: C64::from_polar(rng.gen_range(0.05..2.0), rng.gen_range(-PI..PI)),
        };
        let with_j0 = |j0: f64| EmbeddedQme { gamma: TAU * j0, ..base };
        let (mut lo, mut hi) = (0.0, 10.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if is_lindblad(&with_j0(mid)).is_lindblad {
                hi = mid
            } else {
                lo = mid
            }
        }
        let expect = base.nu().norm_sqr() / (PI * 0.5 * base.kappa);
        repair_err = repair_err.max((hi - expect).abs()).max((repair_threshold_j0(&base) - expect).abs());
    }
    check(
        det_err < 1e-12 && verdicts_ok && repair_err < 1e-10,
        format!("det relative error {det_err:.3e}, verdicts {verdicts_ok}, repair threshold error {repair_err:.3e}"),
    )
}

fn fano_identity() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let mut m = random_model(&mut rng, Some(1.0));
        m.kappa = rng.gen_range(0.5..2.0);
        m.omega_c = rng.gen_range(-1.0..1.0);
        if k == 0 {
            m.phi = PI / 3.0 + m.theta_a - m.theta_c;
        }
        let grid: Vec<f64> = (0..4001).map(|i| m.omega_c - 20.0 * m.kappa + 0.01 * m.kappa * i as f64).collect();
        worst = worst.max(verify_lambda_identity(&m, &grid).unwrap());
    }
    let elapsed = start.elapsed();
    check(
        worst < 1e-12 && within(elapsed, Duration::from_secs(1)),
        format!("max relative |2 pi |Lambda|^2 - 2 pi J| = {worst:.3e} over 10 models; {elapsed:.2?}"),
    )
}

fn transition_rate() -> Check {
    let report = |preset: DecayPreset| {
        let mut config = RunConfig::default();
        config.decay.preset = Some(preset);
        let outcome = run_command(Command::DecayRate, &config).unwrap();
        let Body::Report(items) = outcome.document.body else { unreachable!() };
        move |key: &str| items.iter().find(|(k, _)| k == key).and_then(|(_, v)| v.as_f64()).unwrap()
    };
    let weak = report(DecayPreset::WeakCoupling);
    let anti = report(DecayPreset::AntiResonance);
    let deviation = weak("relative_deviation");
    let suppression = anti("suppression");
    check(
        deviation.abs() < 0.1 && suppression >= 10.0,
        format!(
            "weak coupling: fitted {:.5e} vs 2 pi J(omega_A) = {:.5e} ({:+.2}%); anti-resonance suppression {suppression:.3e}x",
            weak("fitted_rate"),
            weak("predicted_rate"),
            100.0 * deviation
        ),
    )
}

fn min_increment(t: &Trajectory) -> f64 {
    t.jump_increments().into_iter().fold(f64::INFINITY, f64::min)
}

fn jump_monotonicity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut valid_min = f64::INFINITY;
    for k in 0..10 {
        let m = random_model(&mut rng, if k < 2 { Some(k as f64) } else { None });
        let q = embed_from_model(&m).unwrap();
        let v = q.kossakowski().lowest_eigenvector();
        valid_min = valid_min.min(min_increment(&solve_amplitudes(&q, ONE, 20.0, 1e-3).unwrap()));
        valid_min = valid_min.min(min_increment(&solve_amplitudes_from(&q, ZERO, v[0], v[1], 20.0, 1e-3).unwrap()));
    }
    let q = embed_from_model(&FanoModel { eta: 1.2, ..FanoModel::default() }).unwrap();
    let v = q.kossakowski().lowest_eigenvector();
    let bad_min = min_increment(&solve_amplitudes_from(&q, ZERO, v[0], v[1], 20.0, 1e-3).unwrap());
    check(
        valid_min > -1e-12 && bad_min < 0.0,
        format!("Lindblad runs: min increment {valid_min:.3e}; eta = 1.2: min increment {bad_min:.3e}"),
    )
}

/// Not an acceptance criterion: how the oracle error depends on the mode
/// count at fixed window, and on the window at fixed spacing.
fn oracle_study() -> Vec<String> {
    let m = FanoModel::from_reduced(0.25, 1.0, 2.0, 0.0);
    let by_n: Vec<f64> = [500, 1000, 2000, 4000].into_iter().map(|n| oracle_error(&m, 40.0, n, 5.0, 1e-3)).collect();
    let monotone = by_n.windows(2).all(|w| w[1] < w[0]);
    let by_window: Vec<String> = [40.0, 80.0, 160.0]
        .into_iter()
        .map(|w| format!("W={w}: {:.4e}", oracle_error(&m, w, (100.0 * w) as usize + 1, 5.0, 1e-3)))
        .collect();
    vec![
        format!(
            "oracle error vs n at window 40 kappa: {} (strictly decreasing: {monotone})",
            by_n.iter().zip([500, 1000, 2000, 4000]).map(|(e, n)| format!("n={n}: {e:.10e}")).collect::<Vec<_>>().join(", ")
        ),
        format!("oracle error vs window at spacing 0.01 kappa: {}", by_window.join(", ")),
    ]
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 reference spectral curves", fig2_reproduction),
        ("2 Volterra vs amplitudes", cross_solver_equivalence),
        ("3 discretized-reservoir oracle", brute_force_oracle),
        ("4 QME consistency", qme_consistency),
        ("5 Lindblad boundary", lindblad_boundary),
        ("6 Fano diagonalization identity", fano_identity),
        ("7 transition rate", transition_rate),
        ("8 jump-probability monotonicity", jump_monotonicity),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let c = run();
        println!("[{}] {name}: {}", if c.passed { "PASS" } else { "FAIL" }, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    for line in oracle_study() {
        println!("[INFO] {line}");
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
