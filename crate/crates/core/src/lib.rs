//! Generalized three-dimensional oscillator: the isotropic oscillator with
//! additional P/(2z²) and Q/(2ρ²) barriers.
//!
//! The crate evaluates the spherical and cylindrical eigenbases, the
//! interbasis coefficients between them (analytically continued
//! Clebsch-Gordan coefficients), the spheroidal separation constants and
//! expansion coefficients, their perturbation series in the interfocus
//! distance, and the Morse-system map of the z channel.

pub mod bases;
pub mod error;
pub mod interbasis;
pub mod model;
pub mod morse;
pub mod oracles;
pub mod perturbation;
pub mod specfun;
pub mod spheroidal;
pub mod tridiag;

pub use error::{Error, Result};
