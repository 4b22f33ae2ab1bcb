//! Numerical laboratory for m-subharmonic functions on domains of `C^n`.
//!
//! The crate computes m-Lelong functions and Lelong numbers of simple
//! currents, mean-value and supremum growth ratios, Lelong–Jensen residuals
//! and integrability exponents for a catalog of model functions whose
//! complex Hessians are known in closed form.
//!
//! Module map:
//!
//! * [`hermitian`]: small dense Hermitian linear algebra (Jacobi eigenvalues,
//!   elementary symmetric functions, mixed discriminants).
//! * [`catalog`]: model functions, their Hessians, m-subharmonicity
//!   classification and the textual function-spec grammar.
//! * [`integrate`]: sphere/ball means, suprema and masses of wedge products
//!   over balls and annuli.
//! * [`lelong`]: Lelong profiles and numbers, Lelong–Jensen residuals,
//!   mean-value limits, negative currents and Hessian point masses.
//! * [`exponent`]: integrability exponents from sublevel volumes and from
//!   direct integral scans.

pub mod catalog;
pub mod error;
pub mod exponent;
pub mod fit;
pub mod hermitian;
pub mod integrate;
pub mod lelong;
mod setting;

pub use catalog::{ModelFunction, Point, Profile};
pub use error::{Error, Result};
pub use hermitian::{HermitianMatrix, Spectrum};
pub use integrate::{Estimate, MCConfig, Method, SimpleCurrent};
pub use setting::Setting;
