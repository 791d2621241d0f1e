//! Master equation on the single-excitation subspace,
//!
//! ```text
//! drho/dt = -i [H_AC, rho] + sum_mn Gamma_mn (X_m rho X_n^† - {X_n^† X_m, rho} / 2),
//! ```
//!
//! with `X_1 = sigma`, `X_2 = a`. Written as `-i (K rho - rho K^†) + jumps`
//! where `K = H_AC - (i/2) sum_mn Gamma_mn X_n^† X_m` is the effective
//! Hamiltonian.

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;

use super::{DensityMatrix3, Generator, InitialState, Method, Records, RunMetadata, Trajectory};
use crate::embedding::EmbeddedQme;
use crate::error::{require_finite, require_positive_step, Result};

/// Generator `L` of the master equation in the frame rotating at `frame`.
pub struct QmeGenerator {
    effective: Matrix3<C64>,
    effective_adj: Matrix3<C64>,
    lowering: [Matrix3<C64>; 2],
    gamma: [[C64; 2]; 2],
}

impl QmeGenerator {
    pub fn apply(&self, rho: &Matrix3<C64>) -> Matrix3<C64> {
        let mi = -C64::i();
        let mut out = (self.effective * rho - rho * self.effective_adj) * mi;
        for m in 0..2 {
            for n in 0..2 {
                let g = self.gamma[m][n];
                if g != C64::new(0.0, 0.0) {
                    out += self.lowering[m] * rho * self.lowering[n].adjoint() * g;
                }
            }
        }
        out
    }

    fn step(&self, rho: &Matrix3<C64>, h: f64) -> Matrix3<C64> {
        let half = C64::new(0.5 * h, 0.0);
        let full = C64::new(h, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + k1 * half));
        let k3 = self.apply(&(rho + k2 * half));
        let k4 = self.apply(&(rho + k3 * full));
        rho + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
    }
}

/// Builds the master-equation generator, rotating at frequency `frame`.
pub fn qme_generator(qme: &EmbeddedQme, frame: f64) -> QmeGenerator {
    let one = C64::new(1.0, 0.0);
    let mut sigma = Matrix3::zeros();
    sigma[(0, 1)] = one;
    let mut a = Matrix3::zeros();
    a[(0, 2)] = one;

    let mut hamiltonian = Matrix3::zeros();
    hamiltonian[(1, 1)] = C64::new(qme.omega_a - frame, 0.0);
    hamiltonian[(2, 2)] = C64::new(qme.omega_c - frame, 0.0);
    hamiltonian[(1, 2)] = qme.mu;
    hamiltonian[(2, 1)] = qme.mu.conj();

    let gamma = qme.kossakowski().entries;
    let lowering = [sigma, a];
    let mut anti = Matrix3::zeros();
    for m in 0..2 {
        for n in 0..2 {
            anti += lowering[n].adjoint() * lowering[m] * gamma[m][n];
        }
    }
    let effective = hamiltonian - anti * C64::new(0.0, 0.5);
    QmeGenerator { effective, effective_adj: effective.adjoint(), lowering, gamma }
}

/// Integrates the master equation with RK4 from `rho_0`.
pub fn solve_qme(qme: &EmbeddedQme, rho_0: &DensityMatrix3, t_max: f64, h: f64) -> Result<Trajectory> {
    let steps = require_positive_step(h, t_max)?;
    for (name, v) in [("omega_a", qme.omega_a), ("omega_c", qme.omega_c), ("gamma", qme.gamma), ("kappa", qme.kappa)] {
        require_finite(name, v)?;
    }
    // revalidate: a deserialized or hand-built value must still be a state
    let rho_0 = DensityMatrix3::new(*rho_0.matrix())?;

    let frame = qme.omega_a;
    let generator = qme_generator(qme, frame);
    let mut rho = *rho_0.matrix();
    let mut records = Vec::with_capacity(steps + 1);
    let to_lab = |t: f64, m: &Matrix3<C64>| {
        // the ground/excited coherences rotate at omega_a
        let phase = C64::from_polar(1.0, frame * t);
        let mut lab = *m;
        for j in 1..3 {
            lab[(0, j)] *= phase;
            lab[(j, 0)] *= phase.conj();
        }
        DensityMatrix3::from_matrix_unchecked(lab)
    };
    records.push((0.0, to_lab(0.0, &rho)));
    for n in 1..=steps {
        rho = generator.step(&rho, h);
        let t = n as f64 * h;
        records.push((t, to_lab(t, &rho)));
    }

    Ok(Trajectory {
        metadata: RunMetadata {
            method: Method::Qme,
            h,
            t_max,
            generator: Generator::Qme(*qme),
            initial: InitialState::Density(rho_0),
            volterra: None,
        },
        records: Records::Density(records),
    })
}
