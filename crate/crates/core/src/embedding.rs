//! Pseudomode embedding: from a pole/residue spectral function to the
//! atom + pseudomode Lindblad generator, and back.
//!
//! The residue is factorized as `2 pi i r1 = -g~_- conj(g~_+)` with
//! `g~_± = mu ± i nu`. `mu` becomes the coherent atom–pseudomode coupling and
//! `2 nu` the cross-dissipation rate between the atom and the pseudomode.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{require_finite, Error, Result};
use crate::spectral::{pole_residue_from_model, FanoModel, PoleSpectral};

/// Relative tolerance accepted by [`embed`] for the residue factorization.
pub const FACTORIZATION_TOL: f64 = 1e-10;

/// Relative (to the trace) eigenvalue tolerance for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-12;

/// Generator of the atom + pseudomode master equation in the single-excitation
/// sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedQme {
    pub omega_a: f64,
    /// Pseudomode frequency, `Re z1`.
    pub omega_c: f64,
    /// Coherent atom–pseudomode coupling.
    pub mu: C64,
    /// Atomic decay rate, `2 pi J0`.
    pub gamma: f64,
    /// Pseudomode decay rate, `-2 Im z1`.
    pub kappa: f64,
    /// Cross-dissipation (Fano) rate, `2 nu`.
    pub gamma_f: C64,
}

impl EmbeddedQme {
    pub fn nu(&self) -> C64 {
        0.5 * self.gamma_f
    }

    pub fn g_tilde_minus(&self) -> C64 {
        self.mu - C64::i() * self.nu()
    }

    pub fn g_tilde_plus(&self) -> C64 {
        self.mu + C64::i() * self.nu()
    }

    /// `-g~_- conj(g~_+)`, which equals `2 pi i r1`.
    pub fn factorized_residue(&self) -> C64 {
        -self.g_tilde_minus() * self.g_tilde_plus().conj()
    }

    /// Pole of the embedded spectral function.
    pub fn z1(&self) -> C64 {
        C64::new(self.omega_c, -0.5 * self.kappa)
    }

    /// Non-Hermitian effective Hamiltonian on `(|1>_A|0>_C, |0>_A|1>_C)`.
    pub fn effective_hamiltonian(&self) -> [[C64; 2]; 2] {
        [
            [C64::new(self.omega_a, -0.5 * self.gamma), self.g_tilde_minus()],
            [self.g_tilde_plus().conj(), self.z1()],
        ]
    }

    pub fn kossakowski(&self) -> KossakowskiMatrix {
        kossakowski(self)
    }

    pub fn lindblad_report(&self) -> LindbladReport {
        is_lindblad(self)
    }
}

/// Embeds `spec` with a caller-chosen factorization `g~_± = mu ± i nu`.
pub fn embed(spec: &PoleSpectral, omega_a: f64, mu: C64, nu: C64) -> Result<EmbeddedQme> {
    require_finite("omega_a", omega_a)?;
    for (name, v) in [("mu.re", mu.re), ("mu.im", mu.im), ("nu.re", nu.re), ("nu.im", nu.im)] {
        require_finite(name, v)?;
    }
    let qme = EmbeddedQme {
        omega_a,
        omega_c: spec.z1().re,
        mu,
        gamma: TAU * spec.j0(),
        kappa: -2.0 * spec.z1().im,
        gamma_f: 2.0 * nu,
    };
    let target = C64::i() * TAU * spec.r1();
    let got = qme.factorized_residue();
    let scale = target.norm().max(got.norm());
    if scale > 0.0 {
        let residual = (got - target).norm() / scale;
        if residual > FACTORIZATION_TOL {
            return Err(Error::Factorization { residual });
        }
    }
    Ok(qme)
}

/// Embeds a model with the factorization `mu = g`, `nu = gamma_F / 2`.
pub fn embed_from_model(model: &FanoModel) -> Result<EmbeddedQme> {
    let spec = pole_residue_from_model(model)?;
    embed(&spec, model.omega_a, model.coupling(), 0.5 * model.gamma_f())
}

/// Recovers the pole/residue spectral function encoded by a generator.
pub fn spectral_from_qme(qme: &EmbeddedQme) -> Result<PoleSpectral> {
    let r1 = qme.factorized_residue() / (C64::i() * TAU);
    PoleSpectral::new(qme.gamma / TAU, qme.z1(), r1)
}

/// Hermitian 2×2 coefficient matrix of the dissipator in the basis
/// `(sigma, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KossakowskiMatrix {
    pub entries: [[C64; 2]; 2],
}

impl KossakowskiMatrix {
    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn det(&self) -> f64 {
        self.entries[0][0].re * self.entries[1][1].re - self.entries[0][1].norm_sqr()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + self.entries[0][1].norm_sqr()).sqrt();
        let upper = mean + radius;
        // the small eigenvalue from det / upper avoids cancellation near the PSD boundary
        let lower = if upper > 0.0 { self.det() / upper } else { mean - radius };
        [lower, upper]
    }

    /// Unit eigenvector of the smallest eigenvalue.
    pub fn lowest_eigenvector(&self) -> [C64; 2] {
        let [lower, _] = self.eigenvalues();
        let b = self.entries[0][1];
        let a = self.entries[0][0].re;
        let d = self.entries[1][1].re;
        let v = if b.norm() > 0.0 {
            [b, C64::new(lower - a, 0.0)]
        } else if a <= d {
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
        } else {
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
        };
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    }

    /// `sum_mn Gamma_mn v_m conj(v_n)`: the rate of jump probability for the
    /// amplitudes `v = (c1, b1)`.
    pub fn jump_rate(&self, v: [C64; 2]) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for m in 0..2 {
            for n in 0..2 {
                acc += self.entries[m][n] * v[m] * v[n].conj();
            }
        }
        acc.re
    }
}

/// `Gamma = [[gamma, conj(gamma_F)], [gamma_F, kappa]]`.
pub fn kossakowski(qme: &EmbeddedQme) -> KossakowskiMatrix {
    KossakowskiMatrix {
        entries: [
            [C64::new(qme.gamma, 0.0), qme.gamma_f.conj()],
            [qme.gamma_f, C64::new(qme.kappa, 0.0)],
        ],
    }
}

/// Outcome of the Lindblad-form test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladReport {
    pub is_lindblad: bool,
    pub eigenvalues: [f64; 2],
    pub det: f64,
    /// `(-Im z1) pi J0 - |nu|^2`; negative values rule out the Lindblad form.
    pub scalar_condition: f64,
    /// Smallest `J0` for which the generator is Lindblad at fixed `z1`, `nu`.
    pub repair_threshold_j0: f64,
    pub kossakowski: KossakowskiMatrix,
}

pub fn is_lindblad(qme: &EmbeddedQme) -> LindbladReport {
    let k = kossakowski(qme);
    let eigenvalues = k.eigenvalues();
    let tol = PSD_TOL * k.trace().abs();
    let j0 = qme.gamma / TAU;
    let im_z1 = -0.5 * qme.kappa;
    LindbladReport {
        is_lindblad: eigenvalues[0] >= -tol,
        eigenvalues,
        det: k.det(),
        scalar_condition: -im_z1 * PI * j0 - qme.nu().norm_sqr(),
        repair_threshold_j0: repair_threshold_j0(qme),
        kossakowski: k,
    }
}

/// `|nu|^2 / (pi (-Im z1))`, the background level at which `Gamma` becomes
/// positive semidefinite.
pub fn repair_threshold_j0(qme: &EmbeddedQme) -> f64 {
    qme.nu().norm_sqr() / (PI * 0.5 * qme.kappa)
}
