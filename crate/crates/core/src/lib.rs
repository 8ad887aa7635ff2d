//! Partial-wave scattering evaluated at finite distance from the scatterer.
//!
//! The crate computes phase shifts for model potentials, the finite-distance
//! scattering amplitude and its derivatives, the wave function and probability
//! flux, cross sections measured on a sphere of finite radius, and the
//! wave-front surfaces traced by the scattered flux.

pub mod amplitude;
pub mod error;
pub mod field;
pub mod observables;
pub mod phases;
pub mod quadrature;
pub mod specfun;
pub mod wavefront;

pub use error::{Error, Result};
pub use num_complex::Complex64 as ComplexValue;
