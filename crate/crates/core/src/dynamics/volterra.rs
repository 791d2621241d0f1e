//! Memory-kernel integro-differential equation
//!
//! ```text
//! dc1/dt = -i omega_a c1 - ∫_0^t F(t - s) c1(s) ds
//! ```
//!
//! The delta part of `F` contributes exactly half its weight at the upper
//! endpoint, `-pi J0 c1(t)`, and is applied analytically. The regular part is
//! convolved with the trapezoidal rule and the time step is the trapezoidal
//! (implicit, second order) rule. Optional Richardson extrapolation over
//! `h` and `h/2` raises the global order to four.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{ground_amplitude, lab_phase, AmplitudeState, Generator, InitialState, Method, Records, RunMetadata, Trajectory};
use crate::error::{require_positive_step, Error, Result};
use crate::spectral::PoleSpectral;

/// Largest accepted `h * max|F|`.
pub const STEP_LIMIT: f64 = 0.1;

/// How the trapezoidal history sum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HistoryConvolution {
    /// Explicit `O(n)` sum over sampled kernel values at every step.
    Direct,
    /// Same sum, updated in `O(1)` using `F(tau + h) = exp(-i z1 h) F(tau)`.
    Recursive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolterraOptions {
    pub history: HistoryConvolution,
    /// Combine runs at `h` and `h/2` as `(4 y_{h/2} - y_h) / 3`.
    pub richardson: bool,
}

impl Default for VolterraOptions {
    fn default() -> Self {
        Self { history: HistoryConvolution::Recursive, richardson: true }
    }
}

impl VolterraOptions {
    /// Plain second-order trapezoidal scheme.
    pub fn trapezoid() -> Self {
        Self { richardson: false, ..Self::default() }
    }
}

/// Integrates the memory-kernel equation for `c1(t)` on `[0, t_max]`.
pub fn solve_volterra(
    spec: &PoleSpectral,
    omega_a: f64,
    c1_0: C64,
    t_max: f64,
    h: f64,
    options: VolterraOptions,
) -> Result<Trajectory> {
    let steps = require_positive_step(h, t_max)?;
    crate::error::require_finite("omega_a", omega_a)?;
    let c0 = ground_amplitude(c1_0)?;
    let kernel_max = spec.kernel_scale().max(spec.memory_kernel(0.0)?.delta_weight);
    let product = h * kernel_max;
    if product > STEP_LIMIT {
        return Err(Error::StepSize { product, limit: STEP_LIMIT });
    }

    let coarse = trapezoid_run(spec, omega_a, c1_0, steps, h, options.history);
    let rotating = if options.richardson {
        let fine = trapezoid_run(spec, omega_a, c1_0, 2 * steps, 0.5 * h, options.history);
        coarse
            .iter()
            .enumerate()
            .map(|(n, y)| (4.0 * fine[2 * n] - y) / 3.0)
            .collect()
    } else {
        coarse
    };

    let records = rotating
        .into_iter()
        .enumerate()
        .map(|(n, y)| {
            let t = n as f64 * h;
            let c1 = y * lab_phase(omega_a, t);
            AmplitudeState {
                t,
                c0,
                c1,
                b1: C64::new(0.0, 0.0),
                pi_j: 1.0 - c0.norm_sqr() - c1.norm_sqr(),
            }
        })
        .collect();

    Ok(Trajectory {
        metadata: RunMetadata {
            method: Method::Volterra,
            h,
            t_max,
            generator: Generator::Spectral { spec: *spec, omega_a },
            initial: InitialState::Amplitudes { c0, c1: c1_0, b1: C64::new(0.0, 0.0) },
            volterra: Some(options),
        },
        records: Records::Amplitudes(records),
    })
}

/// Rotating-frame solution `y(t) = exp(i omega_a t) c1(t)` on `steps + 1` points.
fn trapezoid_run(
    spec: &PoleSpectral,
    omega_a: f64,
    y0: C64,
    steps: usize,
    h: f64,
    history: HistoryConvolution,
) -> Vec<C64> {
    // rotating-frame kernel K(tau) = F_reg(tau) exp(i omega_a tau)
    let kernel = |tau: f64| spec.regular_kernel(tau) * C64::from_polar(1.0, omega_a * tau);
    let damping = 0.5 * spec.memory_kernel(0.0).map(|k| k.delta_weight).unwrap_or(0.0);
    let k0 = kernel(0.0);
    let implicit = 1.0 + 0.5 * h * (damping + 0.5 * h * k0);

    let mut y = Vec::with_capacity(steps + 1);
    y.push(y0);
    let mut f_prev = -damping * y0;

    match history {
        HistoryConvolution::Direct => {
            let samples: Vec<C64> = (0..=steps).map(|m| kernel(m as f64 * h)).collect();
            for n in 0..steps {
                // h [K_{n+1} y_0 / 2 + sum_{j=1}^{n} K_{n+1-j} y_j]
                let mut sum = 0.5 * samples[n + 1] * y0;
                for j in 1..=n {
                    sum += samples[n + 1 - j] * y[j];
                }
                let explicit = -h * sum;
                let next = (y[n] + 0.5 * h * (f_prev + explicit)) / implicit;
                f_prev = explicit - (damping + 0.5 * h * k0) * next;
                y.push(next);
            }
        }
        HistoryConvolution::Recursive => {
            let ratio = (-C64::i() * (spec.z1() - omega_a) * h).exp();
            // running sum P_n = sum_{j=0}^{n} K_{n-j} y_j
            let mut running = k0 * y0;
            for n in 0..steps {
                let shifted = ratio * running;
                let explicit = -h * (shifted - 0.5 * kernel((n + 1) as f64 * h) * y0);
                let next = (y[n] + 0.5 * h * (f_prev + explicit)) / implicit;
                f_prev = explicit - (damping + 0.5 * h * k0) * next;
                running = shifted + k0 * next;
                y.push(next);
            }
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{pole_residue_from_model, FanoModel};

    #[test]
    fn markovian_limit_is_exponential() {
        let m = FanoModel { g_abs: 0.0, eta: 0.0, gamma: 0.3, omega_a: 2.0, ..FanoModel::default() };
        let spec = pole_residue_from_model(&m).unwrap();
        let traj = solve_volterra(&spec, m.omega_a, C64::new(1.0, 0.0), 10.0, 1e-3, VolterraOptions::trapezoid()).unwrap();
        for s in traj.amplitudes().unwrap() {
            let exact = C64::from_polar((-0.5 * m.gamma * s.t).exp(), -m.omega_a * s.t);
            assert!((s.c1 - exact).norm() < 1e-8, "t = {}: {}", s.t, (s.c1 - exact).norm());
        }
    }

    #[test]
    fn closed_system_keeps_modulus() {
        let spec = PoleSpectral::new(0.0, C64::new(0.0, -0.5), C64::new(0.0, 0.0)).unwrap();
        let traj = solve_volterra(&spec, 1.0, C64::new(0.6, 0.0), 5.0, 1e-2, VolterraOptions::default()).unwrap();
        for s in traj.amplitudes().unwrap() {
            assert!((s.c1.norm() - 0.6).abs() < 1e-14);
            assert!((s.total_probability() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn direct_and_recursive_histories_agree() {
        let m = FanoModel { omega_a: 0.3, phi: 0.7, ..FanoModel::from_reduced(0.5, 0.8, 1.5, 0.0) };
        let spec = pole_residue_from_model(&m).unwrap();
        let run = |history| {
            solve_volterra(&spec, m.omega_a, C64::new(1.0, 0.0), 4.0, 2e-3, VolterraOptions { history, richardson: true })
                .unwrap()
                .atom_amplitude()
        };
        let a = run(HistoryConvolution::Direct);
        let b = run(HistoryConvolution::Recursive);
        let max = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(max < 1e-12, "max difference {max}");
    }

    #[test]
    fn step_size_guard() {
        let m = FanoModel { g_abs: 3.0, ..FanoModel::default() };
        let spec = pole_residue_from_model(&m).unwrap();
        let err = solve_volterra(&spec, 0.0, C64::new(1.0, 0.0), 1.0, 0.05, VolterraOptions::default()).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }

    #[test]
    fn rejects_bad_grid() {
        let spec = pole_residue_from_model(&FanoModel::default()).unwrap();
        assert!(solve_volterra(&spec, 0.0, C64::new(1.0, 0.0), 1.0, 0.0, VolterraOptions::default()).is_err());
        assert!(solve_volterra(&spec, 0.0, C64::new(1.0, 0.0), 1.0, 0.3, VolterraOptions::default()).is_err());
        assert!(solve_volterra(&spec, 0.0, C64::new(1.5, 0.0), 1.0, 0.1, VolterraOptions::default()).is_err());
    }
}
