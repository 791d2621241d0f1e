//! Exponential decay rate of the atomic population.

use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// Least-squares slope of `-ln |c1|^2` against `t`.
    pub rate: f64,
    pub intercept: f64,
    /// RMS residual of the linear fit, in units of `ln |c1|^2`.
    pub rms_residual: f64,
    pub n_points: usize,
    /// Set when the population is not monotonically decreasing on the window.
    pub warning: Option<String>,
}

/// Fits `|c1(t)|^2 ~ exp(-rate t)` over samples with `t_a <= t <= t_b`.
pub fn decay_rate(traj: &Trajectory, window: (f64, f64)) -> Result<DecayFit> {
    let (t_a, t_b) = window;
    if !(t_a.is_finite() && t_b.is_finite() && t_a < t_b) {
        return Err(Error::Parameter { name: "fit_window", reason: format!("need t_a < t_b, got ({t_a}, {t_b})") });
    }
    let samples: Vec<(f64, f64)> = traj
        .times()
        .into_iter()
        .zip(traj.atom_population())
        .filter(|(t, _)| *t >= t_a - 1e-12 && *t <= t_b + 1e-12)
        .collect();
    if samples.len() < 2 {
        return Err(Error::Fit(format!("only {} samples in [{t_a}, {t_b}]", samples.len())));
    }
    if let Some((t, p)) = samples.iter().find(|(_, p)| !(*p > 0.0)) {
        return Err(Error::Fit(format!("population {p} at t = {t} is not positive")));
    }

    let n = samples.len() as f64;
    let ys: Vec<f64> = samples.iter().map(|(_, p)| -p.ln()).collect();
    let t_mean = samples.iter().map(|(t, _)| t).sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for ((t, _), y) in samples.iter().zip(&ys) {
        sxx += (t - t_mean) * (t - t_mean);
        sxy += (t - t_mean) * (y - y_mean);
    }
    let rate = sxy / sxx;
    let intercept = y_mean - rate * t_mean;
    let rms_residual = (samples
        .iter()
        .zip(&ys)
        .map(|((t, _), y)| (y - intercept - rate * t).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();

    let rises = samples.windows(2).filter(|w| w[1].1 > w[0].1).count();
    let warning = (rises > 0).then(|| {
        format!("population increases on {rises} of {} intervals; the fit may not describe a single exponential", samples.len() - 1)
    });
    Ok(DecayFit { rate, intercept, rms_residual, n_points: samples.len(), warning })
}
