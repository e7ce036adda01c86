//! Exact solutions of the Dirac equation in a traveling circularly polarized
//! wave superposed on a constant magnetic field, and the localization radius
//! of the resulting fermion states in the lab frame and in a rotating frame.
//!
//! All quantities are dimensionless: lengths in units of the reduced Compton
//! wavelength `ħ/mc`, times in `ħ/mc²`, energies in `mc²`, momenta in `mc`.
//!
//! Module map:
//!
//! - [`params`]: unit normalization and the assembled [`ModelParams`].
//! - [`dirac`]: 4×4 Dirac matrices, matrix exponential, boost operator.
//! - [`frame`]: rotating-frame coordinate map and its Jacobian.
//! - [`characteristic`]: cubic characteristic equation and the singular pair.
//! - [`wavefunction`]: lab-frame spinor, normalization and Dirac residual.
//! - [`logquad`]: log-domain scalars, scaled Bessel functions, quadrature.
//! - [`localization`]: lab and rotating-frame localization radii.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod characteristic;
mod dd;
pub mod dirac;
pub mod error;
pub mod frame;
pub mod localization;
pub mod logquad;
pub mod params;
pub mod wavefunction;

pub use characteristic::{CharInput, CharRoots, RootClass};
pub use dirac::{Matrix4C, Spinor4};
pub use error::{Error, Result};
pub use frame::CylindricalEvent;
pub use localization::{LocalizationReport, RotIntegrals, YConvention};
pub use logquad::LogValue;
pub use params::{Branch, ModelParams, PhysicalInput};
pub use wavefunction::{Convention, GroundSpinor, LabWavefunction};

/// Name of the Dirac matrix representation used throughout the crate.
pub const MATRIX_REPRESENTATION: &str = "dirac-pauli";
