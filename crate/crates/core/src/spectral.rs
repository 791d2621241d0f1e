//! Spectral function of the atom–reservoir coupling.
//!
//! The spectral function is a flat background plus one Lorentzian-type pole
//! pair,
//!
//! ```text
//! J(w) = J0 + r1 / (w - z1) + conj(r1) / (w - conj(z1)),   Im z1 < 0,
//! ```
//!
//! and the memory kernel `F(tau) = ∫ dw J(w) exp(-i w tau)` splits into a
//! delta term of weight `2 pi J0` and the regular part
//! `-2 pi i r1 exp(-i z1 tau)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{require_finite, Error, Result};
use crate::special::sine_cosine_integrals;

/// Physical parameters of the atom–cavity–reservoir model.
///
/// All frequencies and rates share one (arbitrary) unit. `eta` outside
/// `[0, 1]` is accepted so that non-Lindblad generators can be studied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FanoModel {
    pub omega_a: f64,
    pub omega_c: f64,
    /// Atomic loss rate.
    pub gamma: f64,
    /// Cavity loss rate.
    pub kappa: f64,
    /// `|g|`, magnitude of the atom–cavity coupling.
    pub g_abs: f64,
    /// Phase of the atom–cavity coupling.
    pub phi: f64,
    /// Strength of the Fano interference.
    pub eta: f64,
    pub theta_a: f64,
    pub theta_c: f64,
}

impl Default for FanoModel {
    fn default() -> Self {
        Self {
            omega_a: 0.0,
            omega_c: 0.0,
            gamma: 0.25,
            kappa: 1.0,
            g_abs: 0.5,
            phi: 0.0,
            eta: 1.0,
            theta_a: 0.0,
            theta_c: 0.0,
        }
    }
}

impl FanoModel {
    /// Checks finiteness and the sign constraints on the rates.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_a", self.omega_a),
            ("omega_c", self.omega_c),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("g_abs", self.g_abs),
            ("phi", self.phi),
            ("eta", self.eta),
            ("theta_a", self.theta_a),
            ("theta_c", self.theta_c),
        ];
        for (name, value) in fields {
            require_finite(name, value)?;
        }
        let non_negative = |name: &'static str, v: f64| {
            if v < 0.0 {
                Err(Error::Parameter { name, reason: format!("must be non-negative, got {v}") })
            } else {
                Ok(())
            }
        };
        non_negative("gamma", self.gamma)?;
        non_negative("g_abs", self.g_abs)?;
        non_negative("eta", self.eta)?;
        if self.kappa <= 0.0 {
            return Err(Error::Parameter {
                name: "kappa",
                reason: format!("must be positive, got {}", self.kappa),
            });
        }
        Ok(())
    }

    /// Whether `eta` lies in the range that yields a Lindblad generator.
    pub fn has_lindblad_eta(&self) -> bool {
        (0.0..=1.0).contains(&self.eta)
    }

    /// Complex atom–cavity coupling `g = |g| e^{i phi}`.
    pub fn coupling(&self) -> C64 {
        C64::from_polar(self.g_abs, self.phi)
    }

    /// Fano rate `gamma_F = sqrt(eta gamma kappa) e^{i(theta_A - theta_C)}`.
    pub fn gamma_f(&self) -> C64 {
        C64::from_polar((self.eta * self.gamma * self.kappa).sqrt(), self.theta_a - self.theta_c)
    }

    /// `phi - theta_A + theta_C`.
    pub fn delta_phi(&self) -> f64 {
        self.phi - self.theta_a + self.theta_c
    }

    /// Fano parameter `q = 2|g| e^{i dphi} / sqrt(gamma kappa)`. Requires `gamma > 0`.
    pub fn fano_q(&self) -> Result<C64> {
        if self.gamma <= 0.0 {
            return Err(Error::Parameter {
                name: "gamma",
                reason: "the Fano parameter is undefined for gamma = 0".into(),
            });
        }
        Ok(C64::from_polar(
            2.0 * self.g_abs / (self.gamma * self.kappa).sqrt(),
            self.delta_phi(),
        ))
    }

    /// Reduced detuning `eps = 2 (omega - omega_C) / kappa`.
    pub fn reduced_detuning(&self, omega: f64) -> f64 {
        2.0 * (omega - self.omega_c) / self.kappa
    }

    /// Inverse of [`FanoModel::reduced_detuning`].
    pub fn frequency_at(&self, epsilon: f64) -> f64 {
        self.omega_c + 0.5 * self.kappa * epsilon
    }

    pub fn reduced_form(&self) -> Result<ReducedForm> {
        self.validate()?;
        Ok(ReducedForm { gamma: self.gamma, q: self.fano_q()?, eta: self.eta })
    }

    /// Builds a model with `kappa = 1`, `omega_C = 0` and the given reduced
    /// parameters. The phase difference is carried entirely by `phi`.
    pub fn from_reduced(gamma: f64, eta: f64, q_abs: f64, delta_phi: f64) -> Self {
        Self {
            omega_a: 0.0,
            omega_c: 0.0,
            gamma,
            kappa: 1.0,
            g_abs: 0.5 * q_abs * gamma.sqrt(),
            phi: delta_phi,
            eta,
            theta_a: 0.0,
            theta_c: 0.0,
        }
    }
}

/// `J(w) = J0 + f(w)` with a single lower-half-plane pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleSpectral {
    j0: f64,
    z1: C64,
    r1: C64,
}

impl PoleSpectral {
    pub fn new(j0: f64, z1: C64, r1: C64) -> Result<Self> {
        for (name, v) in [("j0", j0), ("z1.re", z1.re), ("z1.im", z1.im), ("r1.re", r1.re), ("r1.im", r1.im)] {
            require_finite(name, v)?;
        }
        if j0 < 0.0 {
            return Err(Error::Parameter { name: "j0", reason: format!("must be non-negative, got {j0}") });
        }
        if z1.im >= 0.0 {
            return Err(Error::Parameter {
                name: "z1",
                reason: format!("pole must lie in the lower half plane, got Im z1 = {}", z1.im),
            });
        }
        Ok(Self { j0, z1, r1 })
    }

    pub fn j0(&self) -> f64 {
        self.j0
    }

    pub fn z1(&self) -> C64 {
        self.z1
    }

    pub fn r1(&self) -> C64 {
        self.r1
    }

    /// Pole-pair part `f(w)`, written in real arithmetic.
    pub fn f(&self, omega: f64) -> f64 {
        let x = omega - self.z1.re;
        let y = self.z1.im;
        2.0 * (self.r1.re * x - y * self.r1.im) / (x * x + y * y)
    }

    /// `J(w)`.
    pub fn evaluate(&self, omega: f64) -> f64 {
        self.j0 + self.f(omega)
    }

    /// Memory kernel at `tau >= 0`, with the delta term reported as a weight.
    pub fn memory_kernel(&self, tau: f64) -> Result<KernelValue> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("memory kernel needs tau >= 0, got {tau}")));
        }
        Ok(KernelValue { delta_weight: TAU * self.j0, regular: self.regular_kernel(tau) })
    }

    /// `-2 pi i r1 exp(-i z1 tau)`, without any domain check.
    pub(crate) fn regular_kernel(&self, tau: f64) -> C64 {
        -C64::i() * TAU * self.r1 * (-C64::i() * self.z1 * tau).exp()
    }

    /// Magnitude of the regular kernel at `tau = 0`, its maximum.
    pub fn kernel_scale(&self) -> f64 {
        TAU * self.r1.norm()
    }

    /// A scale for `J`: the flat part plus the peak height of `|f|`.
    pub fn magnitude(&self) -> f64 {
        self.j0 + 2.0 * self.r1.norm() / self.z1.im.abs()
    }

    /// Trapezoidal quadrature of `∫ f(w) exp(-i w tau) dw` over
    /// `[Re z1 - window, Re z1 + window]`, plus the analytic contribution of
    /// the `1/x` and `1/x^2` tails outside the window.
    ///
    /// The error estimate combines the difference to a half-resolution
    /// quadrature and a bound on the neglected `1/x^3` tail.
    pub fn kernel_by_quadrature(&self, tau: f64, window: f64, n_points: usize) -> Result<QuadratureEstimate> {
        if !(window > 0.0) || !window.is_finite() {
            return Err(Error::Parameter { name: "window", reason: format!("must be positive, got {window}") });
        }
        if n_points < 2 {
            return Err(Error::Parameter { name: "n_points", reason: format!("need at least 2, got {n_points}") });
        }
        require_finite("tau", tau)?;

        let center = self.z1.re;
        let trapezoid = |n: usize| -> C64 {
            let dw = 2.0 * window / (n - 1) as f64;
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                let x = -window + k as f64 * dw;
                let weight = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
                acc += weight * self.f(center + x) * C64::from_polar(1.0, -x * tau);
            }
            acc * dw
        };
        let body = trapezoid(n_points);
        let coarse = if n_points >= 3 { trapezoid(n_points.div_ceil(2)) } else { body };

        let d = -self.z1.im;
        let a = self.r1.re;
        let b = d * self.r1.im;
        let tail = self.tail_integral(tau.abs(), window, a, b);
        let tail = if tau < 0.0 { tail.conj() } else { tail };

        let phase = C64::from_polar(1.0, -center * tau);
        let value = phase * (body + tail);
        let next_tail = 2.0 * a.abs() * d * d / (window * window) + 2.0 * b.abs() * d * d / (3.0 * window.powi(3));
        let resolution = ((body - coarse).norm() / 3.0).max(f64::EPSILON * body.norm());
        Ok(QuadratureEstimate { value, error_estimate: resolution + next_tail })
    }

    /// `∫_{|x|>W} (2a/x + 2b/x^2) exp(-i x tau) dx` for `tau >= 0`.
    fn tail_integral(&self, tau: f64, window: f64, a: f64, b: f64) -> C64 {
        let wt = window * tau;
        // ∫_W^∞ sin(x tau)/x dx = pi/2 - Si(W tau)
        let sin_tail = if wt == 0.0 { FRAC_PI_2 } else { FRAC_PI_2 - sine_cosine_integrals(wt).0 };
        // odd part: only the sine survives on the symmetric domain
        let odd = if tau == 0.0 { C64::new(0.0, 0.0) } else { C64::new(0.0, -2.0 * sin_tail) };
        // ∫_{|x|>W} cos(x tau)/x^2 = 2 [cos(W tau)/W - tau (pi/2 - Si(W tau))]
        let even = 2.0 * (wt.cos() / window - tau * sin_tail);
        2.0 * a * odd + C64::new(2.0 * b * even, 0.0)
    }
}

/// Memory kernel value split into its distributional and regular parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    /// Weight of `delta(tau)`, i.e. `2 pi J0`.
    pub delta_weight: f64,
    pub regular: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: C64,
    pub error_estimate: f64,
}

/// Pole and residue of a [`FanoModel`]'s spectral function.
pub fn pole_residue_from_model(model: &FanoModel) -> Result<PoleSpectral> {
    model.validate()?;
    let j0 = model.gamma / TAU;
    let z1 = C64::new(model.omega_c, -0.5 * model.kappa);
    let rate = model.eta * model.gamma * model.kappa;
    let bracket = C64::new(
        model.g_abs * model.g_abs - 0.25 * rate,
        -model.g_abs * rate.sqrt() * model.delta_phi().cos(),
    );
    let r1 = C64::i() / TAU * bracket;
    PoleSpectral::new(j0, z1, r1)
}

/// Reduced parameterization `(gamma, q, eta)` of the spectral function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub gamma: f64,
    pub q: C64,
    pub eta: f64,
}

impl ReducedForm {
    /// `2 pi J(eps) = gamma / (eps^2 + 1) [ |eps + sqrt(eta) q|^2 + (1 - eta)(1 + |q|^2) ]`.
    pub fn two_pi_j(&self, epsilon: f64) -> f64 {
        let shifted = C64::new(epsilon, 0.0) + self.eta.sqrt() * self.q;
        let background = (1.0 - self.eta) * (1.0 + self.q.norm_sqr());
        self.gamma / (epsilon * epsilon + 1.0) * (shifted.norm_sqr() + background)
    }

    /// `J(eps)`.
    pub fn evaluate(&self, epsilon: f64) -> f64 {
        self.two_pi_j(epsilon) / TAU
    }
}

/// `J(w)` evaluated through the pole/residue representation.
pub fn evaluate_j(spec: &PoleSpectral, omega: f64) -> f64 {
    spec.evaluate(omega)
}

/// `J(eps)` evaluated through the reduced form.
pub fn evaluate_reduced_j(rf: &ReducedForm, epsilon: f64) -> f64 {
    rf.evaluate(epsilon)
}

pub fn memory_kernel(spec: &PoleSpectral, tau: f64) -> Result<KernelValue> {
    spec.memory_kernel(tau)
}

pub fn kernel_by_quadrature(spec: &PoleSpectral, tau: f64, window: f64, n_points: usize) -> Result<QuadratureEstimate> {
    spec.kernel_by_quadrature(tau, window, n_points)
}
