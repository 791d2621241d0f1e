//! Brute-force reservoir: the atom coupled to a finite comb of modes whose
//! squared couplings sample `J(omega)`.
//!
//! ```text
//! dc1/dt = -i omega_a c1 - i sum_k g_k c_k
//! dc_k/dt = -i omega_k c_k - i g_k c1
//! ```
//!
//! The couplings are taken real (`g_k = sqrt(J(omega_k) d_omega)`); only
//! `|g_k|^2` enters the reduced dynamics, so this is a gauge choice.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{ground_amplitude, lab_phase, AmplitudeState, Generator, InitialState, Method, Records, RunMetadata, Trajectory};
use crate::error::{require_finite, require_positive_step, Error, Result};
use crate::spectral::PoleSpectral;

/// Minimum number of reservoir modes.
pub const MIN_MODES: usize = 100;
/// Minimum half-width of the frequency window, in units of the pole width `kappa`.
pub const MIN_WINDOW_KAPPA: f64 = 20.0;
/// Relative tolerance below which a negative `J(omega_k)` is treated as roundoff.
const NEGATIVE_J_TOL: f64 = 1e-12;

/// Finite set of reservoir modes on a uniform midpoint grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedReservoir {
    pub center: f64,
    pub window: f64,
    pub spacing: f64,
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
}

impl DiscretizedReservoir {
    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    /// Poincaré recurrence time `2 pi / d_omega` of the comb.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    /// `sum_k g_k^2`, the discrete counterpart of `∫ J` over the window.
    pub fn total_weight(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }
}

/// Samples `spec` on `n_modes` cells covering `[Re z1 - window, Re z1 + window]`.
pub fn build_discretized(spec: &PoleSpectral, window: f64, n_modes: usize) -> Result<DiscretizedReservoir> {
    require_finite("window", window)?;
    if n_modes < MIN_MODES {
        return Err(Error::Parameter { name: "n_modes", reason: format!("need at least {MIN_MODES}, got {n_modes}") });
    }
    let kappa = -2.0 * spec.z1().im;
    if window < MIN_WINDOW_KAPPA * kappa {
        return Err(Error::Parameter {
            name: "window",
            reason: format!("must cover at least {MIN_WINDOW_KAPPA} kappa = {}, got {window}", MIN_WINDOW_KAPPA * kappa),
        });
    }
    let center = spec.z1().re;
    let spacing = 2.0 * window / n_modes as f64;
    let tol = NEGATIVE_J_TOL * spec.magnitude();
    let mut frequencies = Vec::with_capacity(n_modes);
    let mut couplings = Vec::with_capacity(n_modes);
    for k in 0..n_modes {
        let omega = center - window + (k as f64 + 0.5) * spacing;
        let j = spec.evaluate(omega);
        if j < -tol {
            return Err(Error::NegativeSpectrum { omega, value: j });
        }
        frequencies.push(omega);
        couplings.push((j.max(0.0) * spacing).sqrt());
    }
    Ok(DiscretizedReservoir { center, window, spacing, frequencies, couplings })
}

/// Schrödinger evolution of the atom + comb from the reservoir vacuum.
pub fn solve_discretized(res: &DiscretizedReservoir, omega_a: f64, c1_0: C64, t_max: f64, h: f64) -> Result<Trajectory> {
    let steps = require_positive_step(h, t_max)?;
    require_finite("omega_a", omega_a)?;
    let guard = 0.5 * res.recurrence_time();
    if t_max >= guard {
        return Err(Error::Recurrence { t_max, guard });
    }
    let c0 = ground_amplitude(c1_0)?;

    let n = res.n_modes();
    // rotating frame at omega_a
    let detuning: Vec<f64> = res.frequencies.iter().map(|w| w - omega_a).collect();
    let g = &res.couplings;
    let rhs = |y: &[C64], out: &mut [C64]| {
        let c1 = y[0];
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            let ck = y[k + 1];
            acc += g[k] * ck;
            out[k + 1] = C64::new(ck.im * detuning[k] + g[k] * c1.im, -(ck.re * detuning[k] + g[k] * c1.re));
        }
        out[0] = C64::new(acc.im, -acc.re);
    };

    let dim = n + 1;
    let mut y = vec![C64::new(0.0, 0.0); dim];
    y[0] = c1_0;
    let mut k1 = vec![C64::new(0.0, 0.0); dim];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();

    let record = |step: usize, y: &[C64]| {
        let t = step as f64 * h;
        let c1 = y[0] * lab_phase(omega_a, t);
        let reservoir: f64 = y[1..].iter().map(|c| c.norm_sqr()).sum();
        AmplitudeState { t, c0, c1, b1: C64::new(0.0, 0.0), pi_j: reservoir }
    };
    let mut records = Vec::with_capacity(steps + 1);
    records.push(record(0, &y));
    for step in 1..=steps {
        rhs(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        records.push(record(step, &y));
    }

    Ok(Trajectory {
        metadata: RunMetadata {
            method: Method::Discretized,
            h,
            t_max,
            generator: Generator::Reservoir { center: res.center, window: res.window, n_modes: n, omega_a },
            initial: InitialState::Amplitudes { c0, c1: c1_0, b1: C64::new(0.0, 0.0) },
            volterra: None,
        },
        records: Records::Amplitudes(records),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{pole_residue_from_model, FanoModel};
    use std::f64::consts::TAU;

    #[test]
    fn flat_spectrum_gives_equal_couplings() {
        let m = FanoModel { g_abs: 0.0, eta: 0.0, gamma: 0.3, ..FanoModel::default() };
        let spec = pole_residue_from_model(&m).unwrap();
        let res = build_discretized(&spec, 25.0, 500).unwrap();
        let g0 = res.couplings[0];
        assert!(res.couplings.iter().all(|g| (g - g0).abs() < 1e-16));
        assert!((res.total_weight() - 0.3 / TAU * 50.0).abs() < 1e-12);
    }

    #[test]
    fn coupling_vanishes_at_anti_resonance() {
        let m = FanoModel::from_reduced(0.25, 1.0, 2.0, 0.0);
        let spec = pole_residue_from_model(&m).unwrap();
        // odd n puts a cell centre on the pole frequency; spacing 0.01 puts another on eps = -2
        let res = build_discretized(&spec, 20.005, 4001).unwrap();
        let zero = m.frequency_at(-2.0);
        let k = res.frequencies.iter().position(|w| (w - zero).abs() < 1e-9).unwrap();
        assert!(res.couplings[k] < 1e-8);
    }

    #[test]
    fn doubling_modes_doubles_recurrence() {
        let spec = pole_residue_from_model(&FanoModel::default()).unwrap();
        let a = build_discretized(&spec, 30.0, 1000).unwrap();
        let b = build_discretized(&spec, 30.0, 2000).unwrap();
        assert!((b.spacing - 0.5 * a.spacing).abs() < 1e-15);
        assert!((b.recurrence_time() - 2.0 * a.recurrence_time()).abs() < 1e-9);
    }

    #[test]
    fn preconditions() {
        let spec = pole_residue_from_model(&FanoModel::default()).unwrap();
        assert!(build_discretized(&spec, 40.0, 50).is_err());
        assert!(build_discretized(&spec, 10.0, 1000).is_err());
        let res = build_discretized(&spec, 20.0, 200).unwrap();
        // pi / d_omega = 31.4
        let err = solve_discretized(&res, 0.0, C64::new(1.0, 0.0), 40.0, 0.01).unwrap_err();
        assert!(matches!(err, Error::Recurrence { .. }));
    }

    #[test]
    fn unitary_evolution_conserves_norm() {
        let m = FanoModel { omega_a: 0.4, ..FanoModel::default() };
        let spec = pole_residue_from_model(&m).unwrap();
        let res = build_discretized(&spec, 20.0, 400).unwrap();
        let traj = solve_discretized(&res, m.omega_a, C64::new(0.8, 0.0), 3.0, 1e-3).unwrap();
        for s in traj.amplitudes().unwrap() {
            assert!((s.total_probability() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn negative_spectrum_is_rejected() {
        let spec = PoleSpectral::new(0.0, C64::new(0.0, -0.5), C64::new(0.0, -0.1)).unwrap();
        assert!(matches!(build_discretized(&spec, 20.0, 200), Err(Error::NegativeSpectrum { .. })));
    }
}
