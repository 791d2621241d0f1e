//! Diagonalization of the cavity mode coupled to a flat continuum.
//!
//! The eigenmodes are `B_w = alpha(w) a + ∫ dw' beta(w, w') b_w'`, and the
//! atom couples to them with strength `Lambda(w)`. For `eta = 1` the
//! resulting coupling reproduces the spectral function:
//! `2 pi |Lambda(w)|^2 = 2 pi J(w)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::spectral::{pole_residue_from_model, FanoModel};

/// Eigenmode coefficients for a given gauge phase `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanoDiagCoefficients {
    pub omega_c: f64,
    pub kappa: f64,
    pub theta_c: f64,
    pub psi: f64,
}

/// `beta(w, w') = principal * P/(w - w') + delta * delta(w - w')`, kept as
/// its two coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaWeights {
    pub principal: C64,
    pub delta: C64,
}

impl FanoDiagCoefficients {
    pub fn new(model: &FanoModel, psi: f64) -> Self {
        Self { omega_c: model.omega_c, kappa: model.kappa, theta_c: model.theta_c, psi }
    }

    /// Cavity weight of the eigenmode at `omega`.
    pub fn alpha(&self, omega: f64) -> C64 {
        let den = C64::new(omega - self.omega_c, -0.5 * self.kappa);
        (self.kappa / TAU).sqrt() * C64::from_polar(1.0, self.psi - self.theta_c) / den
    }

    pub fn beta_weights(&self, omega: f64) -> BetaWeights {
        let x = omega - self.omega_c;
        let den = C64::new(x, -0.5 * self.kappa);
        let phase = C64::from_polar(1.0, self.psi);
        BetaWeights { principal: self.kappa / TAU / den * phase, delta: x / den * phase }
    }
}

pub fn fano_alpha(model: &FanoModel, omega: f64, psi: f64) -> C64 {
    FanoDiagCoefficients::new(model, psi).alpha(omega)
}

pub fn fano_beta(model: &FanoModel, omega: f64, psi: f64) -> BetaWeights {
    FanoDiagCoefficients::new(model, psi).beta_weights(omega)
}

/// Atom coupling to the eigenmode at `omega`.
pub fn fano_lambda(model: &FanoModel, omega: f64, psi: f64) -> C64 {
    let x = omega - model.omega_c;
    let cavity = model.coupling() * (model.kappa / TAU).sqrt() * C64::from_polar(1.0, model.theta_c);
    let background = x * (model.gamma / TAU).sqrt() * C64::from_polar(1.0, model.theta_a);
    C64::from_polar(1.0, -psi) / C64::new(x, 0.5 * model.kappa) * (cavity + background)
}

/// Largest `|2 pi |Lambda|^2 - 2 pi J|` on `grid`, relative to the largest
/// `2 pi J` there. Only defined for `eta = 1`.
pub fn verify_lambda_identity(model: &FanoModel, grid: &[f64]) -> Result<f64> {
    model.validate()?;
    if model.eta != 1.0 {
        return Err(Error::Unsupported(format!(
            "the eigenmode coupling reproduces J only for eta = 1, got eta = {}",
            model.eta
        )));
    }
    if grid.is_empty() {
        return Err(Error::Parameter { name: "omega_grid", reason: "empty grid".into() });
    }
    let spec = pole_residue_from_model(model)?;
    let mut max_diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &omega in grid {
        let lhs = TAU * fano_lambda(model, omega, 0.0).norm_sqr();
        let rhs = TAU * spec.evaluate(omega);
        max_diff = max_diff.max((lhs - rhs).abs());
        scale = scale.max(rhs.abs());
    }
    Ok(if scale > 0.0 { max_diff / scale } else { max_diff })
}
