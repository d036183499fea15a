//! Numerical toolkit for Lebesgue spaces of variable exponent on ℝ³ and the
//! localized energy estimates behind Liouville-type theorems for the
//! stationary Navier-Stokes equations.
//!
//! The crate is organised bottom-up:
//!
//! * [`regions`]: balls, annuli, the cylinder and cusp sets, boolean
//!   combinations, with membership, exact sampling envelopes and volumes.
//! * [`exponents`]: piecewise variable exponents with declared bounds,
//!   Hölder conjugates, the three theorem presets and a log-Hölder
//!   diagnostic.
//! * [`fields`]: smooth velocity/pressure fields and Navier-Stokes residuals.
//! * [`cutoff`]: the radial cutoff θ_R with closed-form derivatives.
//! * [`quadrature`] and [`norms`]: modulars, Luxemburg norms and executable
//!   lemma checks.
//! * [`estimates`]: α(R), β(R), decay fits and exact exponent certificates.
//! * [`cli`]: the batch runner behind the `varexp` binary.

pub mod cli;
pub mod cutoff;
pub mod error;
pub mod estimates;
pub mod exponents;
pub mod fields;
pub mod norms;
pub mod quadrature;
pub mod regions;

pub use error::{Error, Result};

/// A point (or vector) of ℝ³.
pub type Point = nalgebra::Vector3<f64>;

/// Shorthand constructor for [`Point`].
#[inline]
pub fn pt(x: f64, y: f64, z: f64) -> Point {
    Point::new(x, y, z)
}
