//! Scalar wave-optics simulation of stimulated parametric down-conversion.
//!
//! The crate models a three-beam bench: a pump and an auxiliary laser overlap
//! in a nonlinear crystal, and the stimulated idler that leaves the crystal
//! carries the product of the pump field with the conjugated auxiliary field.
//! Propagating that product to a detection plane reproduces image transfer
//! between the beams, including the far-field inversion caused by phase
//! conjugation.
//!
//! Building blocks:
//! - [`grid`] / [`field`]: sampled complex fields on centered lattices
//! - [`propagation`]: Fresnel and Fraunhofer propagators plus a brute-force
//!   quadrature oracle
//! - [`elements`]: sources and amplitude masks (Gaussian beam, double slit,
//!   knife edge, thin lens in `propagation`)
//! - [`downconversion`]: the idler mixing engine
//! - [`analysis`]: profile metrics (fringe spacing, centroid, visibility,
//!   mirror correlation)
//! - [`config`] / [`experiment`] / [`presets`]: declarative bench descriptions
//!   and the runner behind the `sdc` command-line tool

pub mod analysis;
pub mod config;
pub mod downconversion;
pub mod elements;
pub mod error;
pub mod experiment;
pub mod field;
mod fft;
pub mod grid;
pub mod io;
pub mod presets;
pub mod propagation;

pub use error::{Error, Result};
pub use field::{ComplexField, IntensityMap, IntensityProfile};
pub use grid::GridSpec;
