//! Single-excitation dynamics of the atom, integrated four ways:
//!
//! - [`solve_volterra`]: the exact memory-kernel equation for `c1(t)`;
//! - [`solve_amplitudes`]: the coupled atom/pseudomode amplitudes under the
//!   non-Hermitian effective Hamiltonian, with the jump probability;
//! - [`solve_qme`]: the full master equation on the 3-dimensional subspace;
//! - [`solve_discretized`]: Schrödinger evolution of the atom coupled to a
//!   finite comb of reservoir modes.
//!
//! All solvers use a fixed step and work in a frame rotating at `omega_a`;
//! recorded amplitudes are in the lab frame.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

mod amplitudes;
mod density;
mod discretized;
mod qme;
mod rate;
mod volterra;

pub use amplitudes::{norm_loss_rate, solve_amplitudes, solve_amplitudes_from};
pub use density::{DensityMatrix3, DENSITY_TOL};
pub use discretized::{build_discretized, solve_discretized, DiscretizedReservoir};
pub use qme::{qme_generator, solve_qme};
pub use rate::{decay_rate, DecayFit};
pub use volterra::{solve_volterra, HistoryConvolution, VolterraOptions, STEP_LIMIT};

use crate::embedding::EmbeddedQme;
use crate::spectral::PoleSpectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Volterra,
    Amplitudes,
    Qme,
    Discretized,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Volterra, Method::Amplitudes, Method::Qme, Method::Discretized];

    pub fn name(self) -> &'static str {
        match self {
            Method::Volterra => "volterra",
            Method::Amplitudes => "amplitudes",
            Method::Qme => "qme",
            Method::Discretized => "discretized",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected volterra, amplitudes, qme or discretized)"))
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Single-excitation amplitudes at one instant.
///
/// For the reservoir-picture solvers (Volterra and discretized) there is no
/// pseudomode: `b1` is zero and `pi_j` holds the whole reservoir population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeState {
    pub t: f64,
    pub c0: C64,
    pub c1: C64,
    pub b1: C64,
    pub pi_j: f64,
}

impl AmplitudeState {
    /// `|c0|^2 + |c1|^2 + |b1|^2 + pi_j`, one up to integration error.
    pub fn total_probability(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr() + self.b1.norm_sqr() + self.pi_j
    }

    /// The density matrix `|psi><psi| + pi_j |0><0|`.
    pub fn density(&self) -> DensityMatrix3 {
        let psi = nalgebra::Vector3::new(self.c0, self.c1, self.b1);
        let mut m = psi * psi.adjoint();
        m[(0, 0)] += C64::new(self.pi_j, 0.0);
        DensityMatrix3::from_matrix_unchecked(m)
    }
}

/// Time-ordered samples produced by a solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "samples", rename_all = "lowercase")]
pub enum Records {
    Amplitudes(Vec<AmplitudeState>),
    Density(Vec<(f64, DensityMatrix3)>),
}

/// The generator a trajectory was produced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Spectral { spec: PoleSpectral, omega_a: f64 },
    Qme(EmbeddedQme),
    Reservoir { center: f64, window: f64, n_modes: usize, omega_a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Amplitudes { c0: C64, c1: C64, b1: C64 },
    Density(DensityMatrix3),
}

/// Everything needed to rerun a solver bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub method: Method,
    pub h: f64,
    pub t_max: f64,
    pub generator: Generator,
    pub initial: InitialState,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volterra: Option<VolterraOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub metadata: RunMetadata,
    pub records: Records,
}

/// Per-sample quantities shared by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub t: f64,
    /// Atomic excited population `|c1|^2` (or `rho_11`).
    pub atom: f64,
    /// Pseudomode population `|b1|^2` (or `rho_22`); zero for reservoir solvers.
    pub cavity: f64,
    /// Jump probability; for reservoir solvers the reservoir population.
    pub pi_j: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn method(&self) -> Method {
        self.metadata.method
    }

    pub fn len(&self) -> usize {
        match &self.records {
            Records::Amplitudes(v) => v.len(),
            Records::Density(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn times(&self) -> Vec<f64> {
        match &self.records {
            Records::Amplitudes(v) => v.iter().map(|s| s.t).collect(),
            Records::Density(v) => v.iter().map(|(t, _)| *t).collect(),
        }
    }

    /// `|c1(t)|` (or `sqrt(rho_11)`) per sample.
    pub fn atom_amplitude(&self) -> Vec<f64> {
        match &self.records {
            Records::Amplitudes(v) => v.iter().map(|s| s.c1.norm()).collect(),
            Records::Density(v) => v.iter().map(|(_, r)| r.population(1).max(0.0).sqrt()).collect(),
        }
    }

    /// `|c1(t)|^2` (or `rho_11`) per sample.
    pub fn atom_population(&self) -> Vec<f64> {
        match &self.records {
            Records::Amplitudes(v) => v.iter().map(|s| s.c1.norm_sqr()).collect(),
            Records::Density(v) => v.iter().map(|(_, r)| r.population(1)).collect(),
        }
    }

    pub fn amplitudes(&self) -> Option<&[AmplitudeState]> {
        match &self.records {
            Records::Amplitudes(v) => Some(v),
            Records::Density(_) => None,
        }
    }

    pub fn densities(&self) -> Option<&[(f64, DensityMatrix3)]> {
        match &self.records {
            Records::Density(v) => Some(v),
            Records::Amplitudes(_) => None,
        }
    }

    pub fn observables(&self) -> Vec<Observables> {
        match &self.records {
            Records::Amplitudes(v) => {
                let with_pseudomode = matches!(self.metadata.method, Method::Amplitudes);
                v.iter()
                    .map(|s| {
                        let min_eigenvalue = if with_pseudomode {
                            s.density().min_eigenvalue()
                        } else {
                            reduced_atom_min_eigenvalue(s)
                        };
                        Observables {
                            t: s.t,
                            atom: s.c1.norm_sqr(),
                            cavity: s.b1.norm_sqr(),
                            pi_j: s.pi_j,
                            trace: s.total_probability(),
                            min_eigenvalue,
                        }
                    })
                    .collect()
            }
            Records::Density(v) => {
                let ground0 = v.first().map(|(_, r)| r.population(0)).unwrap_or(0.0);
                v.iter()
                    .map(|(t, r)| Observables {
                        t: *t,
                        atom: r.population(1),
                        cavity: r.population(2),
                        pi_j: r.population(0) - ground0,
                        trace: r.trace(),
                        min_eigenvalue: r.min_eigenvalue(),
                    })
                    .collect()
            }
        }
    }

    /// Per-step increments of `pi_j`; the minimum is negative exactly when
    /// the jump probability decreases somewhere.
    pub fn jump_increments(&self) -> Vec<f64> {
        let obs = self.observables();
        obs.windows(2).map(|w| w[1].pi_j - w[0].pi_j).collect()
    }
}

/// Smallest eigenvalue of the atom's reduced state when the remainder of the
/// excitation sits in the reservoir.
fn reduced_atom_min_eigenvalue(s: &AmplitudeState) -> f64 {
    let p1 = s.c1.norm_sqr();
    let p0 = 1.0 - p1;
    let coh = (s.c0 * s.c1.conj()).norm_sqr();
    let mean = 0.5;
    let radius = (0.25 * (p0 - p1) * (p0 - p1) + coh).sqrt();
    mean - radius
}

/// `c0` fixed by normalization for an initial atomic amplitude.
pub(crate) fn ground_amplitude(c1_0: C64) -> crate::Result<C64> {
    let p = c1_0.norm_sqr();
    if !p.is_finite() || p > 1.0 + 1e-12 {
        return Err(crate::Error::Parameter {
            name: "c1_0",
            reason: format!("|c1(0)|^2 = {p} must lie in [0, 1]"),
        });
    }
    Ok(C64::new((1.0 - p).max(0.0).sqrt(), 0.0))
}

/// Lab-frame phase `exp(-i omega t)`.
pub(crate) fn lab_phase(omega: f64, t: f64) -> C64 {
    C64::from_polar(1.0, -omega * t)
}
