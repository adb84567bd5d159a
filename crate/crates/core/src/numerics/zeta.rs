use super::{log_gamma, log_sin, pairwise_sum, EvalSettings, Estimate, BERNOULLI_2K, C64};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Riemann ζ(s) with default settings.
pub fn riemann_zeta(s: C64) -> Result<C64> {
    riemann_zeta_with(s, &EvalSettings::default()).map(|e| e.value)
}

/// Riemann ζ(s): Euler–Maclaurin for Re s ≥ 0, reflection for Re s < 0.
pub fn riemann_zeta_with(s: C64, settings: &EvalSettings) -> Result<Estimate> {
    if s == C64::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if s.re >= 0.0 {
        return Ok(euler_maclaurin(s, settings));
    }
    if s.im == 0.0 && s.re.fract() == 0.0 && (s.re as i64) % 2 == 0 {
        return Ok(Estimate { value: C64::new(0.0, 0.0), error: 0.0 });
    }
    let r = euler_maclaurin(1.0 - s, settings);
    let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + log_sin(PI * s / 2.0) + log_gamma(1.0 - s)?;
    let f = log_factor.exp();
    Ok(Estimate { value: f * r.value, error: f.norm() * r.error })
}

fn euler_maclaurin(s: C64, settings: &EvalSettings) -> Estimate {
    let n = settings.zeta_em_terms.max((0.6 * s.norm()).ceil() as usize);
    let nf = n as f64;
    let ln_n = nf.ln();
    let terms: Vec<C64> = (1..n).map(|k| (-s * (k as f64).ln()).exp()).collect();
    let mut sum = pairwise_sum(&terms);
    let n_s = (-s * ln_n).exp();
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    let mut poch = s;
    let mut npow = n_s / nf;
    let mut fact = 2.0;
    let mut last = 0.0;
    for j in 1..=settings.zeta_bernoulli_order.min(BERNOULLI_2K.len()) {
        let term = BERNOULLI_2K[j - 1] / fact * poch * npow;
        sum += term;
        last = term.norm();
        let jf = j as f64;
        poch *= (s + 2.0 * jf - 1.0) * (s + 2.0 * jf);
        npow /= nf * nf;
        fact *= (2.0 * jf + 1.0) * (2.0 * jf + 2.0);
    }
    Estimate { value: sum, error: last + 1e-16 * sum.norm() * nf.sqrt() }
}

/// Riemann–Siegel theta: arg of Γ(1/4 + it/2) minus (t/2)·log π, continuous in t.
pub fn hardy_theta(t: f64) -> f64 {
    let lg = log_gamma(C64::new(0.25, 0.5 * t)).expect("Re = 1/4 is pole free");
    lg.im - 0.5 * t * PI.ln()
}

/// Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it), real for real t.
pub fn hardy_z(t: f64) -> Result<f64> {
    let z = riemann_zeta(C64::new(0.5, t))?;
    Ok((C64::from_polar(1.0, hardy_theta(t)) * z).re)
}
