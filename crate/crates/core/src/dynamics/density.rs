use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on trace and eigenvalues accepted by [`DensityMatrix3::new`].
pub const DENSITY_TOL: f64 = 1e-10;

/// Density matrix on the single-excitation subspace, ordered as
/// `|0>_A|0>_C`, `|1>_A|0>_C`, `|0>_A|1>_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix3(Matrix3<C64>);

impl DensityMatrix3 {
    pub const GROUND: usize = 0;
    pub const ATOM: usize = 1;
    pub const CAVITY: usize = 2;

    /// Validates hermiticity, unit trace and positivity.
    pub fn new(m: Matrix3<C64>) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::DensityMatrix("non-finite entry".into()));
        }
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > DENSITY_TOL {
            return Err(Error::DensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let rho = Self(m);
        let tr = rho.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::DensityMatrix(format!("trace is {tr}")));
        }
        let min = rho.min_eigenvalue();
        if min < -DENSITY_TOL {
            return Err(Error::DensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(rho)
    }

    /// Wraps a matrix produced by an integrator without validating it.
    pub(crate) fn from_matrix_unchecked(m: Matrix3<C64>) -> Self {
        Self(m)
    }

    /// `|psi><psi|` for `psi = c0 |00> + c1 |10> + b1 |01>`; the amplitudes
    /// must be normalized.
    pub fn pure(c0: C64, c1: C64, b1: C64) -> Result<Self> {
        let psi = nalgebra::Vector3::new(c0, c1, b1);
        Self::new(psi * psi.adjoint())
    }

    pub fn ground() -> Self {
        let mut m = Matrix3::zeros();
        m[(0, 0)] = C64::new(1.0, 0.0);
        Self(m)
    }

    pub fn matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn population(&self, i: usize) -> f64 {
        self.0[(i, i)].re
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn to_array(&self) -> [[C64; 3]; 3] {
        let mut out = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.0[(i, j)];
            }
        }
        out
    }
}

impl Serialize for DensityMatrix3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[C64; 3]; 3]>::deserialize(deserializer)?;
        let m = Matrix3::from_fn(|i, j| rows[i][j]);
        Self::new(m).map_err(serde::de::Error::custom)
    }
}
