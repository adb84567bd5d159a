//! Closed-form asymptotic predictors for the zero counts of (Z H)^{(k)}, of
//! H, and Weyl's law, together with the comparison identities between them.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::groups::{compact_invariants, Trichotomy};
use crate::surface::SurfaceData;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorClass {
    #[serde(rename = "littleO_T")]
    LittleOT,
    #[serde(rename = "bigO_logT")]
    BigOLogT,
    #[serde(rename = "bigO_T_over_logT")]
    BigOTOverLogT,
}

/// coeff_T2·T² + coeff_TlogT·T log T + coeff_T·T, up to `error_class`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticExpansion {
    #[serde(rename = "T2")]
    pub coeff_t2: f64,
    #[serde(rename = "TlogT")]
    pub coeff_tlogt: f64,
    #[serde(rename = "T")]
    pub coeff_t: f64,
    pub error_class: ErrorClass,
}

impl AsymptoticExpansion {
    pub fn eval(&self, t: f64) -> f64 {
        self.coeff_t2 * t * t + self.coeff_tlogt * t * t.ln() + self.coeff_t * t
    }

    fn zero(error_class: ErrorClass) -> Self {
        Self { coeff_t2: 0.0, coeff_tlogt: 0.0, coeff_t: 0.0, error_class }
    }
}

/// The numbers the predictors read off a surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceProfile {
    pub volume: f64,
    pub n1: u32,
    /// 𝔤₁ (1 when compact).
    pub g1: f64,
    /// |d(1)| (1 when compact).
    pub d1_abs: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    pub log_a: f64,
    pub a: f64,
    pub ell0: f64,
    pub m0: u32,
    pub trichotomy: Trichotomy,
}

impl From<&SurfaceData> for SurfaceProfile {
    fn from(s: &SurfaceData) -> Self {
        let inv = &s.invariants;
        Self {
            volume: s.volume,
            n1: s.n1(),
            g1: s.g1(),
            d1_abs: s.d1_abs(),
            big_a: inv.big_a,
            log_a: inv.log_a,
            a: inv.a,
            ell0: inv.systole_length,
            m0: inv.systole_multiplicity,
            trichotomy: inv.trichotomy,
        }
    }
}

impl SurfaceProfile {
    /// A co-compact surface of the given volume with systole ℓ₀ of multiplicity m₀.
    pub fn compact(volume: f64, ell0: f64, m0: u32) -> Result<Self> {
        if !(volume > 0.0) {
            return Err(Error::InvalidInput(format!("volume must be positive, got {volume}")));
        }
        let inv = compact_invariants(ell0, m0)?;
        Ok(Self {
            volume,
            n1: 0,
            g1: 1.0,
            d1_abs: 1.0,
            big_a: inv.big_a,
            log_a: inv.log_a,
            a: inv.a,
            ell0,
            m0,
            trichotomy: inv.trichotomy,
        })
    }

    /// Same volume, ℓ₀ and m₀ with no cusps.
    pub fn compact_twin(&self) -> Result<Self> {
        Self::compact(self.volume, self.ell0, self.m0)
    }

    fn half_n1(&self) -> f64 {
        0.5 * self.n1 as f64
    }

    /// log(𝔤₁/(π^{n₁/2}|d(1)|)).
    fn scattering_log(&self) -> f64 {
        self.g1.ln() - self.half_n1() * PI.ln() - self.d1_abs.ln()
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("derivative order k must be at least 1".into()));
    }
    Ok(())
}

fn check_a(p: &SurfaceProfile) -> Result<()> {
    if p.a == 0.0 {
        return Err(Error::ZeroACoefficient);
    }
    Ok(())
}

/// N_ver(T; (Z H)^{(k)}); the same expansion for every k ≥ 1.
pub fn predict_nver_deriv(p: &SurfaceProfile, k: u32) -> Result<AsymptoticExpansion> {
    check_k(k)?;
    check_a(p)?;
    Ok(AsymptoticExpansion {
        coeff_t2: p.volume / (4.0 * PI),
        coeff_tlogt: 0.0,
        coeff_t: -(p.log_a + 2.0 * p.n1 as f64 * LN_2 + 2.0 * p.g1.ln()) / (2.0 * PI),
        error_class: ErrorClass::LittleOT,
    })
}

/// N_hor(T; (Z H)^{(k)}).
pub fn predict_nhor_deriv(p: &SurfaceProfile, k: u32) -> Result<AsymptoticExpansion> {
    check_k(k)?;
    check_a(p)?;
    let h = p.half_n1();
    let mut e = AsymptoticExpansion {
        coeff_t2: 0.0,
        coeff_tlogt: (h + 1.0) / (2.0 * PI),
        coeff_t: ((p.volume * p.big_a.sqrt() / p.a.abs()).ln() - 1.0 + p.scattering_log() - h) / (2.0 * PI),
        error_class: ErrorClass::LittleOT,
    };
    if k >= 2 {
        if p.log_a == 0.0 {
            return Err(Error::UnitA);
        }
        let j = (k - 1) as f64;
        e.coeff_tlogt += j / (2.0 * PI);
        e.coeff_t += (j * (p.volume.ln() - 1.0) - (j * p.log_a).ln()) / (2.0 * PI);
    }
    Ok(e)
}

/// Weyl's law for the discrete plus continuous spectrum.
pub fn predict_weyl(p: &SurfaceProfile) -> AsymptoticExpansion {
    let n1 = p.n1 as f64;
    AsymptoticExpansion {
        coeff_t2: p.volume / (4.0 * PI),
        coeff_tlogt: -n1 / PI,
        coeff_t: n1 * (1.0 - LN_2) / PI,
        error_class: ErrorClass::BigOTOverLogT,
    }
}

/// Weyl's law restated as N_ver(T_n; Z H) along a sequence T_n → ∞.
pub fn predict_weyl_new(p: &SurfaceProfile) -> AsymptoticExpansion {
    let mut e = predict_weyl(p);
    e.coeff_t = (p.n1 as f64 * (1.0 - LN_2) - p.g1.ln()) / PI;
    e
}

/// Difference of the T coefficients, NewWeyl minus Weyl: −log 𝔤₁/π.
pub fn weyl_discrepancy(p: &SurfaceProfile) -> f64 {
    predict_weyl_new(p).coeff_t - predict_weyl(p).coeff_t
}

/// N_hor(T; H), one half-plane.
pub fn predict_hejhal_h(p: &SurfaceProfile) -> AsymptoticExpansion {
    if p.n1 == 0 {
        return AsymptoticExpansion::zero(ErrorClass::BigOLogT);
    }
    let h = p.half_n1();
    AsymptoticExpansion {
        coeff_t2: 0.0,
        coeff_tlogt: h / (2.0 * PI),
        coeff_t: -(h + h * PI.ln() + p.d1_abs.ln() - p.g1.ln()) / (2.0 * PI),
        error_class: ErrorClass::BigOLogT,
    }
}

/// T log T and T coefficients of N_hor(M) − N_hor(H_M) − N_hor(compact twin).
pub fn comparison_residual(p: &SurfaceProfile, k: u32) -> Result<(f64, f64)> {
    if p.trichotomy != Trichotomy::GeodesicSmaller {
        return Err(Error::WrongTrichotomy(format!("{:?}: A is not e^{{ℓ₀}}", p.trichotomy)));
    }
    let m = predict_nhor_deriv(p, k)?;
    let h = predict_hejhal_h(p);
    let c = predict_nhor_deriv(&p.compact_twin()?, k)?;
    Ok((m.coeff_tlogt - h.coeff_tlogt - c.coeff_tlogt, m.coeff_t - h.coeff_t - c.coeff_t))
}

/// Predicted Σ (σ − 1/2) over zeros of (Z H)′ with T < t ≤ T + U.
pub fn short_sum(p: &SurfaceProfile, t: f64, u: f64) -> Result<f64> {
    check_a(p)?;
    if !(u > 0.0 && u < t) {
        return Err(Error::InvalidInput(format!("short sum needs 0 < U < T, got U = {u}, T = {t}")));
    }
    let log_c = (p.g1 * p.volume * p.big_a.sqrt() / (PI.powf(p.half_n1()) * p.d1_abs * p.a.abs())).ln();
    Ok(((p.half_n1() + 1.0) * u * (t + u).ln() + log_c * u) / (2.0 * PI))
}

/// N_hor/N_ver for (Z H)^{(k)} at height T.
pub fn ratio_vanishing(p: &SurfaceProfile, k: u32, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(Error::InvalidInput(format!("T must exceed 1, got {t}")));
    }
    Ok(predict_nhor_deriv(p, k)?.eval(t) / predict_nver_deriv(p, k)?.eval(t))
}
