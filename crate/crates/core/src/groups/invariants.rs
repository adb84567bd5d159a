use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::Systole;
use crate::algebraic::{QuadSurd, Rational};
use crate::scattering::ScatteringData;
use crate::{Error, Result};

/// Sign of e^{ℓ₀} − (𝔤₂/𝔤₁)².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trichotomy {
    GeodesicSmaller,
    ScatteringSmaller,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub systole_length: f64,
    pub systole_multiplicity: u32,
    /// e^{ℓ₀} when known exactly.
    pub systole_norm: Option<QuadSurd>,
    /// (𝔤₂/𝔤₁)², absent for compact surfaces.
    pub g_ratio_sq: Option<Rational>,
    pub trichotomy: Trichotomy,
    #[serde(rename = "A")]
    pub big_a: f64,
    /// log A, kept separately so that log e^{ℓ₀} = ℓ₀ holds exactly.
    pub log_a: f64,
    pub a: f64,
    pub a_k: BTreeMap<u32, f64>,
}

const LADDER_LEN: u32 = 4;

fn geodesic_term(ell0: f64, m0: u32) -> f64 {
    m0 as f64 * ell0 / (1.0 - (-ell0).exp())
}

fn ladder(a: f64, log_a: f64) -> BTreeMap<u32, f64> {
    (1..=LADDER_LEN).map(|k| (k, a_k(a, log_a, k))).collect()
}

/// a_k = (−1)^{k−1}·a·(log A)^{k−1}.
pub(crate) fn a_k(a: f64, log_a: f64, k: u32) -> f64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    sign * a * log_a.powi(k as i32 - 1)
}

impl SurfaceInvariants {
    pub fn a_k(&self, k: u32) -> f64 {
        a_k(self.a, self.log_a, k)
    }
}

/// Invariants of a surface with cusps. The trichotomy is decided exactly.
pub fn invariants(scat: &ScatteringData, systole: &Systole, m0: u32) -> Result<SurfaceInvariants> {
    if m0 == 0 {
        return Err(Error::InvalidInput("systole multiplicity must be positive".into()));
    }
    let ratio = scat.g_ratio_sq;
    let ratio_f = ratio.to_f64().unwrap_or(f64::NAN);
    let b = scat.b_series.coefficient_at(ratio_f).re;
    let geo = geodesic_term(systole.length, m0);
    let (trichotomy, big_a, log_a, a) = match systole.norm.cmp_rational(&ratio) {
        Ordering::Less => (Trichotomy::GeodesicSmaller, systole.norm.to_f64(), systole.length, geo),
        Ordering::Greater => (Trichotomy::ScatteringSmaller, ratio_f, ratio_f.ln(), b),
        Ordering::Equal => (Trichotomy::Equal, ratio_f, systole.length, geo + b),
    };
    if a == 0.0 {
        return Err(Error::ZeroACoefficient);
    }
    Ok(SurfaceInvariants {
        systole_length: systole.length,
        systole_multiplicity: m0,
        systole_norm: Some(systole.norm.clone()),
        g_ratio_sq: Some(ratio),
        trichotomy,
        big_a,
        log_a,
        a,
        a_k: ladder(a, log_a),
    })
}

/// Compact surfaces: H = 1, A = e^{ℓ₀}, a = m₀ℓ₀/(1 − e^{−ℓ₀}).
pub fn compact_invariants(ell0: f64, m0: u32) -> Result<SurfaceInvariants> {
    if !(ell0 > 0.0) || m0 == 0 {
        return Err(Error::InvalidInput("compact systole needs ℓ₀ > 0 and m₀ ≥ 1".into()));
    }
    let a = geodesic_term(ell0, m0);
    Ok(SurfaceInvariants {
        systole_length: ell0,
        systole_multiplicity: m0,
        systole_norm: None,
        g_ratio_sq: None,
        trichotomy: Trichotomy::GeodesicSmaller,
        big_a: ell0.exp(),
        log_a: ell0,
        a,
        a_k: ladder(a, ell0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compact_ladder() {
        let inv = compact_invariants(1.0, 2).unwrap();
        assert_eq!(inv.a_k[&1], inv.a);
        assert!((inv.a - 2.0 / (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((inv.a_k[&3] - inv.a).abs() < 1e-15);
        assert!((inv.a_k[&2] + inv.a).abs() < 1e-15);
        assert!(compact_invariants(0.0, 1).is_err());
    }
}
