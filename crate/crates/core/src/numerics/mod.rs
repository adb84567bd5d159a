//! Complex special functions and numerical calculus primitives.
//!
//! All functions are pure. Tolerances live in [`EvalSettings`].

mod calculus;
mod elementary;
mod gamma;
mod zeta;

pub use calculus::{cauchy_derivative, gauss_legendre, line_integral};
pub use elementary::{cos_ratio, csc, ln_1m, log_sin, tan};
pub use gamma::{digamma, log_gamma};
pub use zeta::{hardy_theta, hardy_z, riemann_zeta, riemann_zeta_with};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type C64 = Complex64;

/// Numerical knobs shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    /// Minimum Euler–Maclaurin summation length for ζ.
    pub zeta_em_terms: usize,
    /// Number of Bernoulli correction terms for ζ.
    pub zeta_bernoulli_order: usize,
    /// Initial panels per rectangle edge in contour counting.
    pub quad_panels: usize,
    /// Default radius of Cauchy differentiation circles.
    pub cauchy_radius: f64,
    pub target_rel_tol: f64,
    /// Relative tolerance for truncation tails of Dirichlet series and
    /// Euler products (tails above it raise `DivergentTail`).
    pub tail_tol: f64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            zeta_em_terms: 50,
            zeta_bernoulli_order: 12,
            quad_panels: 8,
            cauchy_radius: 0.25,
            target_rel_tol: 1e-10,
            tail_tol: 0.05,
        }
    }
}

impl EvalSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_tol > 0.0 && self.target_rel_tol <= 1e-6) {
            return Err(Error::InvalidSettings(format!(
                "target_rel_tol {} outside (0, 1e-6]",
                self.target_rel_tol
            )));
        }
        if self.zeta_em_terms == 0 || self.zeta_bernoulli_order == 0 || self.quad_panels == 0 {
            return Err(Error::InvalidSettings("counts must be positive".into()));
        }
        if self.zeta_bernoulli_order > BERNOULLI_2K.len() {
            return Err(Error::InvalidSettings(format!(
                "zeta_bernoulli_order at most {}",
                BERNOULLI_2K.len()
            )));
        }
        if !(self.cauchy_radius > 0.0) || !(self.tail_tol > 0.0) {
            return Err(Error::InvalidSettings("radius and tail tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: C64,
    pub error: f64,
}

/// B_2, B_4, ..., B_30.
pub(crate) const BERNOULLI_2K: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Sum in a fixed binary-tree order, so results do not depend on how
/// the inputs were produced.
pub fn pairwise_sum(xs: &[C64]) -> C64 {
    match xs.len() {
        0 => C64::new(0.0, 0.0),
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

pub fn pairwise_sum_real(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        n if n <= 8 => xs.iter().sum(),
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum_real(l) + pairwise_sum_real(r)
        }
    }
}

pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
