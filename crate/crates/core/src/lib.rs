//! Selberg zeta functions, scattering determinants and zero-counting
//! predictors for finite-volume hyperbolic surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`]: complex special functions, contour derivatives, quadrature.
//! * [`algebraic`]: exact quadratic irrationals for systole comparisons.
//! * [`groups`]: group catalog, element enumeration, systoles, modular census.
//! * [`dseries`]: general Dirichlet series algebra.
//! * [`scattering`]: scattering determinants and their K·H decomposition.
//! * [`selberg`]: Selberg zeta evaluation and the functional-equation ladder.
//! * [`counting`]: argument-principle zero counting on rectangles.
//! * [`predict`]: closed-form asymptotic counting laws.

pub mod algebraic;
pub mod counting;
pub mod dseries;
mod error;
pub mod groups;
pub mod numerics;
pub mod predict;
pub mod scattering;
pub mod selberg;
pub mod surface;

pub use error::{Error, Result};
pub use num_complex::Complex64;
