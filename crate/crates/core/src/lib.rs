//! Pseudomode treatment of Fano interference in dissipative cavity QED.
//!
//! An atom coupled to a reservoir whose spectral function is a flat
//! background plus a single pole is mapped onto an atom + damped bosonic mode
//! (pseudomode) governed by a Lindblad master equation with a cross
//! dissipator. The crate provides
//!
//! - [`spectral`]: the spectral function, its reduced Fano form and the memory kernel;
//! - [`embedding`]: the pole/residue ↔ master-equation correspondence and the Lindblad test;
//! - [`dynamics`]: four independent integrators of the single-excitation dynamics;
//! - [`fanodiag`]: the Fano-diagonalized atom–continuum coupling.

pub mod dynamics;
pub mod embedding;
pub mod error;
pub mod fanodiag;
mod special;
pub mod spectral;

pub use dynamics::{
    AmplitudeState, DecayFit, DensityMatrix3, DiscretizedReservoir, Method, Records, Trajectory,
    VolterraOptions,
};
pub use embedding::{EmbeddedQme, KossakowskiMatrix, LindbladReport};
pub use error::{Error, Result};
pub use spectral::{FanoModel, KernelValue, PoleSpectral, QuadratureEstimate, ReducedForm};
