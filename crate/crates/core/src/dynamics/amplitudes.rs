//! Atom + pseudomode amplitudes under the non-Hermitian effective Hamiltonian
//!
//! ```text
//! dc1/dt = -(i omega_a + gamma/2) c1 - i g~_- b1
//! db1/dt = -i z1 b1 - i conj(g~_+) c1
//! ```
//!
//! integrated with classical RK4. The jump probability is integrated
//! alongside from its rate `sum_mn Gamma_mn v_m conj(v_n)`, `v = (c1, b1)`,
//! so `|c0|^2 + |c1|^2 + |b1|^2 + pi_j = 1` is a check, not an input.

use num_complex::Complex64 as C64;

use super::{ground_amplitude, lab_phase, AmplitudeState, Generator, InitialState, Method, Records, RunMetadata, Trajectory};
use crate::embedding::{EmbeddedQme, KossakowskiMatrix};
use crate::error::{require_finite, require_positive_step, Error, Result};

#[derive(Debug, Clone, Copy)]
struct State {
    c1: C64,
    b1: C64,
    pi_j: f64,
}

impl State {
    fn axpy(&self, a: f64, d: &State) -> State {
        State { c1: self.c1 + a * d.c1, b1: self.b1 + a * d.b1, pi_j: self.pi_j + a * d.pi_j }
    }
}

struct Rhs {
    m: [[C64; 2]; 2],
    gamma: KossakowskiMatrix,
}

impl Rhs {
    /// `-i (H_eff - omega_a)` acting on `(c1, b1)`, plus the jump rate.
    fn new(qme: &EmbeddedQme) -> Self {
        let mut h = qme.effective_hamiltonian();
        h[0][0] -= qme.omega_a;
        h[1][1] -= qme.omega_a;
        let mi = -C64::i();
        Self {
            m: [[mi * h[0][0], mi * h[0][1]], [mi * h[1][0], mi * h[1][1]]],
            gamma: qme.kossakowski(),
        }
    }

    fn eval(&self, s: &State) -> State {
        State {
            c1: self.m[0][0] * s.c1 + self.m[0][1] * s.b1,
            b1: self.m[1][0] * s.c1 + self.m[1][1] * s.b1,
            pi_j: self.gamma.jump_rate([s.c1, s.b1]),
        }
    }

    fn step(&self, s: &State, h: f64) -> State {
        let k1 = self.eval(s);
        let k2 = self.eval(&s.axpy(0.5 * h, &k1));
        let k3 = self.eval(&s.axpy(0.5 * h, &k2));
        let k4 = self.eval(&s.axpy(h, &k3));
        State {
            c1: s.c1 + h / 6.0 * (k1.c1 + 2.0 * k2.c1 + 2.0 * k3.c1 + k4.c1),
            b1: s.b1 + h / 6.0 * (k1.b1 + 2.0 * k2.b1 + 2.0 * k3.b1 + k4.b1),
            pi_j: s.pi_j + h / 6.0 * (k1.pi_j + 2.0 * k2.pi_j + 2.0 * k3.pi_j + k4.pi_j),
        }
    }
}

/// `-d/dt (|c1|^2 + |b1|^2)` evaluated from the equations of motion; equal
/// to the jump rate `sum_mn Gamma_mn v_m conj(v_n)`.
pub fn norm_loss_rate(qme: &EmbeddedQme, c1: C64, b1: C64) -> f64 {
    let h = qme.effective_hamiltonian();
    let dc1 = -C64::i() * (h[0][0] * c1 + h[0][1] * b1);
    let db1 = -C64::i() * (h[1][0] * c1 + h[1][1] * b1);
    -2.0 * ((c1.conj() * dc1).re + (b1.conj() * db1).re)
}

/// Integrates the amplitudes from the reservoir vacuum, `b1(0) = 0`.
pub fn solve_amplitudes(qme: &EmbeddedQme, c1_0: C64, t_max: f64, h: f64) -> Result<Trajectory> {
    let c0 = ground_amplitude(c1_0)?;
    solve_amplitudes_from(qme, c0, c1_0, C64::new(0.0, 0.0), t_max, h)
}

/// Integrates the amplitudes from an arbitrary normalized initial state.
pub fn solve_amplitudes_from(qme: &EmbeddedQme, c0: C64, c1_0: C64, b1_0: C64, t_max: f64, h: f64) -> Result<Trajectory> {
    let steps = require_positive_step(h, t_max)?;
    for (name, v) in [("omega_a", qme.omega_a), ("omega_c", qme.omega_c), ("gamma", qme.gamma), ("kappa", qme.kappa)] {
        require_finite(name, v)?;
    }
    let norm = c0.norm_sqr() + c1_0.norm_sqr() + b1_0.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter { name: "initial state", reason: format!("norm is {norm}, expected 1") });
    }

    let rhs = Rhs::new(qme);
    let mut state = State { c1: c1_0, b1: b1_0, pi_j: 0.0 };
    let mut records = Vec::with_capacity(steps + 1);
    let record = |n: usize, s: &State| {
        let t = n as f64 * h;
        let phase = lab_phase(qme.omega_a, t);
        AmplitudeState { t, c0, c1: s.c1 * phase, b1: s.b1 * phase, pi_j: s.pi_j }
    };
    records.push(record(0, &state));
    for n in 1..=steps {
        state = rhs.step(&state, h);
        records.push(record(n, &state));
    }

    Ok(Trajectory {
        metadata: RunMetadata {
            method: Method::Amplitudes,
            h,
            t_max,
            generator: Generator::Qme(*qme),
            initial: InitialState::Amplitudes { c0, c1: c1_0, b1: b1_0 },
            volterra: None,
        },
        records: Records::Amplitudes(records),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::embed_from_model;
    use crate::spectral::FanoModel;

    #[test]
    fn uncoupled_atom_rotates() {
        let q = EmbeddedQme {
            omega_a: 1.7,
            omega_c: 0.0,
            mu: C64::new(0.0, 0.0),
            gamma: 0.0,
            kappa: 1.0,
            gamma_f: C64::new(0.0, 0.0),
        };
        let traj = solve_amplitudes(&q, C64::new(1.0, 0.0), 5.0, 1e-3).unwrap();
        for s in traj.amplitudes().unwrap() {
            assert!((s.c1 - C64::from_polar(1.0, -1.7 * s.t)).norm() < 1e-12);
            assert_eq!(s.b1, C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn jump_rate_equals_norm_loss() {
        let m = FanoModel { phi: 0.4, theta_a: 1.3, omega_a: 0.2, ..FanoModel::from_reduced(0.6, 0.7, 1.3, 0.0) };
        let q = embed_from_model(&m).unwrap();
        let k = q.kossakowski();
        let traj = solve_amplitudes(&q, C64::new(1.0, 0.0), 10.0, 1e-3).unwrap();
        for s in traj.amplitudes().unwrap() {
            let a = k.jump_rate([s.c1, s.b1]);
            let b = norm_loss_rate(&q, s.c1, s.b1);
            assert!((a - b).abs() < 1e-10, "t = {}: {a} vs {b}", s.t);
        }
    }

    #[test]
    fn total_probability_is_conserved() {
        let m = FanoModel { g_abs: 1.2, phi: 2.0, ..FanoModel::default() };
        let q = embed_from_model(&m).unwrap();
        let traj = solve_amplitudes(&q, C64::new(0.8, 0.0), 20.0, 1e-3).unwrap();
        for s in traj.amplitudes().unwrap() {
            assert!((s.total_probability() - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_unnormalized_start() {
        let q = embed_from_model(&FanoModel::default()).unwrap();
        let r = solve_amplitudes_from(&q, C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), 1.0, 0.1);
        assert!(r.is_err());
    }
}
