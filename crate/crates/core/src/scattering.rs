//! Scattering determinants φ = K·H: closed forms, brute-force Dirichlet
//! ladders from group elements, and the K·H decomposition.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::Rational;
use crate::dseries::GeneralDirichletSeries;
use crate::groups::{divisors, prime_factors, GroupDescriptor, GroupKind};
use crate::numerics::{digamma, is_finite, log_gamma, riemann_zeta, C64};
use crate::{Error, Result};

/// One admissible lower-left entry c (as c²) and its residue count S(c).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScatteringTerm {
    pub c_sq: Rational,
    pub count: u64,
}

impl ScatteringTerm {
    pub fn c(&self) -> f64 {
        self.c_sq.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

/// One rung 𝔤ₙ (stored as 𝔤ₙ²) with coefficient d(n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub g_sq: Rational,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderSource {
    /// Residue counts S(c) from enumerated group elements.
    Series,
    /// Dirichlet expansion of the closed-form determinant.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringData {
    pub n1: u32,
    pub ladder: Vec<LadderEntry>,
    pub c1: f64,
    /// log |d(1)|; the sign of d(1) is in `d1_sign`.
    pub c2: f64,
    pub d1_sign: i8,
    pub g1: f64,
    pub g2: f64,
    pub g_ratio_sq: Rational,
    pub c_max: f64,
    pub source: LadderSource,
    pub h: GeneralDirichletSeries,
    pub b_series: GeneralDirichletSeries,
}

impl ScatteringData {
    pub fn d1(&self) -> f64 {
        self.d1_sign as f64 * self.c2.exp()
    }
}

fn level_of_series(g: &GroupDescriptor) -> Result<u64> {
    match g.kind {
        GroupKind::Modular => Ok(1),
        GroupKind::Gamma0 if g.level == 1 => Ok(1),
        GroupKind::Gamma0Plus => Ok(g.level),
        GroupKind::Gamma0 => Err(Error::UnsupportedGroup(format!(
            "{g}: multi-cusp determinants come from the closed form only"
        ))),
        GroupKind::AbstractCompact => Err(Error::UnsupportedGroup(format!("{g} has no cusps"))),
    }
}

/// Returns x with a·x ≡ 1 (mod m), if gcd(a, m) = 1.
fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// Admissible lower-left entries c ≤ `c_max` and their counts S(c): the number
/// of lower-right entries d mod c occurring in elements with lower-left c.
///
/// For Γ₀(f)⁺ an element with scale e has c = f·k/√e and d = e·d′, and the
/// determinant condition e·a′d′ − b·(fk/e) = 1 is solvable in a′, b exactly
/// when e·d′ is invertible modulo fk/e.
pub fn scattering_series(g: &GroupDescriptor, c_max: f64) -> Result<Vec<ScatteringTerm>> {
    let f = level_of_series(g)? as i64;
    let mut jobs = Vec::new();
    for e in divisors(f as u64) {
        let e = e as i64;
        let c_int_max = (c_max * (e as f64).sqrt() * (1.0 + 1e-12)).floor() as i64;
        let mut c = f;
        while c <= c_int_max {
            jobs.push((e, c));
            c += f;
        }
    }
    let counted: Vec<(Rational, u64)> = jobs
        .into_par_iter()
        .map(|(e, c)| {
            let m = c / e;
            let count = (0..m)
                .filter(|&dp| {
                    let Some(ap) = mod_inverse((e * dp).rem_euclid(m), m) else { return false };
                    // a′·e·d′ − 1 = b·m
                    debug_assert_eq!((ap as i128 * e as i128 * dp as i128 - 1).rem_euclid(m as i128), 0);
                    true
                })
                .count() as u64;
            (Ratio::new(c as i128 * c as i128, e as i128), count)
        })
        .collect();
    let mut merged: BTreeMap<Rational, u64> = BTreeMap::new();
    for (c_sq, n) in counted {
        if n > 0 {
            *merged.entry(c_sq).or_default() += n;
        }
    }
    Ok(merged.into_iter().map(|(c_sq, count)| ScatteringTerm { c_sq, count }).collect())
}

/// Default ladder range c_max = 10³·𝔤₁.
pub fn default_c_max(g: &GroupDescriptor) -> f64 {
    1e3 * first_frequency(g)
}

fn first_frequency(g: &GroupDescriptor) -> f64 {
    match g.kind {
        GroupKind::Gamma0Plus => (g.level as f64).sqrt(),
        GroupKind::Gamma0 => (g.level as f64).powf(g.n1() as f64 / 2.0),
        _ => 1.0,
    }
}

fn totients(n: usize) -> Vec<f64> {
    let mut phi: Vec<usize> = (0..=n).collect();
    for p in 2..=n {
        if phi[p] == p {
            let mut k = p;
            while k <= n {
                phi[k] -= phi[k] / p;
                k += p;
            }
        }
    }
    phi.into_iter().map(|x| x as f64).collect()
}

fn dirichlet_conv(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len() - 1;
    let mut out = vec![0.0; n + 1];
    for i in 1..=n {
        if a[i] == 0.0 {
            continue;
        }
        let mut j = 1;
        while i * j <= n {
            out[i * j] += a[i] * b[j];
            j += 1;
        }
    }
    out
}

/// Ladder read off the closed-form determinant, 𝔤ₙ ≤ `c_max`.
fn closed_form_ladder(g: &GroupDescriptor, c_max: f64) -> Result<Vec<LadderEntry>> {
    match g.kind {
        GroupKind::Modular | GroupKind::Gamma0 => {
            let n = g.level;
            let n1 = g.n1();
            let primes = prime_factors(n);
            let g1 = first_frequency(g);
            let m_max = (c_max / g1 * (1.0 + 1e-12)).floor() as usize;
            if m_max < 2 {
                return Err(Error::InsufficientTerms(format!("c_max {c_max} below 𝔤₂")));
            }
            let phi = totients(m_max);
            let mut coef = vec![0.0; m_max + 1];
            coef[1] = 1.0;
            for _ in 0..n1 {
                coef = dirichlet_conv(&coef, &phi);
            }
            // ((1 − p²x)/(1 − x))^{n₁/2} with x = p^{−2s}: 1 + Σ_k (1 − p²)·x^k
            for &p in &primes {
                let mut local = vec![0.0; m_max + 1];
                local[1] = 1.0;
                let mut pk = p as usize;
                while pk <= m_max {
                    local[pk] = 1.0 - (p * p) as f64;
                    pk *= p as usize;
                }
                for _ in 0..n1 / 2 {
                    coef = dirichlet_conv(&coef, &local);
                }
            }
            let sign = if (primes.len() as u32 * n1 / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let g1_sq = Ratio::from_integer((n as i128).pow(n1));
            Ok(coef
                .into_iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| *c != 0.0)
                .map(|(m, c)| LadderEntry { g_sq: g1_sq * Ratio::from_integer((m * m) as i128), d: sign * c })
                .collect())
        }
        GroupKind::Gamma0Plus if g.level == 5 => {
            // x(1 + 5x)/(1 + x)·Σ φ(n) n^{−2s}, x = 5^{−s}
            let lim = c_max * c_max * (1.0 + 1e-12);
            let n_max = (c_max / 5f64.sqrt()).floor() as usize;
            let phi = totients(n_max.max(1));
            let mut acc: BTreeMap<i128, f64> = BTreeMap::new();
            let mut five_pow = 5i128;
            let mut j = 0;
            while five_pow as f64 <= lim {
                let e_j = if j == 0 { 1.0 } else if j % 2 == 1 { 4.0 } else { -4.0 };
                for (n, ph) in phi.iter().enumerate().skip(1) {
                    let c_sq = five_pow * (n * n) as i128;
                    if c_sq as f64 > lim {
                        break;
                    }
                    *acc.entry(c_sq).or_default() += e_j * ph;
                }
                five_pow *= 5;
                j += 1;
            }
            Ok(acc
                .into_iter()
                .filter(|(_, d)| *d != 0.0)
                .map(|(c_sq, d)| LadderEntry { g_sq: Ratio::from_integer(c_sq), d })
                .collect())
        }
        _ => Err(Error::UnsupportedGroup(format!("{g} has no closed-form determinant"))),
    }
}

/// Builds the K·H decomposition from either ladder source.
pub fn decompose(g: &GroupDescriptor, source: LadderSource, c_max: f64) -> Result<ScatteringData> {
    let ladder = match source {
        LadderSource::Series => scattering_series(g, c_max)?
            .into_iter()
            .map(|t| LadderEntry { g_sq: t.c_sq, d: t.count as f64 })
            .collect(),
        LadderSource::ClosedForm => closed_form_ladder(g, c_max)?,
    };
    from_ladder(g.n1(), ladder, c_max, source)
}

fn from_ladder(n1: u32, ladder: Vec<LadderEntry>, c_max: f64, source: LadderSource) -> Result<ScatteringData> {
    if ladder.len() < 2 {
        return Err(Error::InsufficientTerms(format!("{} ladder terms below c_max = {c_max}", ladder.len())));
    }
    let g1_sq = ladder[0].g_sq;
    let d1 = ladder[0].d;
    let g1_sq_f = g1_sq.to_f64().unwrap_or(f64::NAN);
    let g_ratio_sq = ladder[1].g_sq / g1_sq;
    let q_max = c_max * c_max / g1_sq_f;
    let h = GeneralDirichletSeries::new(
        ladder.iter().map(|e| ((e.g_sq / g1_sq).to_f64().unwrap_or(f64::NAN), C64::new(e.d / d1, 0.0))),
        q_max,
    );
    debug_assert!(h.leading_unit());
    let b_series = h.log_derivative()?;
    Ok(ScatteringData {
        n1,
        c1: -g1_sq_f.ln(),
        c2: d1.abs().ln(),
        d1_sign: if d1 > 0.0 { 1 } else { -1 },
        g1: g1_sq_f.sqrt(),
        g2: ladder[1].g_sq.to_f64().unwrap_or(f64::NAN).sqrt(),
        g_ratio_sq,
        c_max,
        source,
        ladder,
        h,
        b_series,
    })
}

fn pole(s: C64) -> Error {
    Error::PoleHit(format!("s = {s}"))
}

fn zeta_ratio(s: C64) -> Result<C64> {
    let num = riemann_zeta(2.0 * s - 1.0).map_err(|_| pole(s))?;
    let den = riemann_zeta(2.0 * s).map_err(|_| pole(s))?;
    let r = num / den;
    if !is_finite(r) {
        return Err(pole(s));
    }
    Ok(r)
}

/// n₁·log(√π Γ(s − 1/2)/Γ(s)).
fn log_gamma_part(n1: u32, s: C64) -> Result<C64> {
    let lg = log_gamma(s - 0.5).map_err(|_| pole(s))? - log_gamma(s).map_err(|_| pole(s))?;
    Ok(n1 as f64 * (0.5 * PI.ln() + lg))
}

fn checked(v: C64, s: C64) -> Result<C64> {
    if is_finite(v) {
        Ok(v)
    } else {
        Err(pole(s))
    }
}

/// φ(s) from the printed closed forms (modular group, squarefree Γ₀(N), Γ₀(5)⁺).
pub fn phi_closed_form(g: &GroupDescriptor, s: C64) -> Result<C64> {
    match g.kind {
        GroupKind::Modular | GroupKind::Gamma0 => {
            let n1 = g.n1();
            let mut v = (log_gamma_part(n1, s)?).exp() * zeta_ratio(s)?.powu(n1);
            for p in prime_factors(g.level) {
                let p = p as f64;
                let num = 1.0 - (C64::new(p.ln(), 0.0) * (2.0 - 2.0 * s)).exp();
                let den = 1.0 - (C64::new(p.ln(), 0.0) * 2.0 * s).exp();
                v *= (num / den).powu(n1 / 2);
            }
            checked(v, s)
        }
        GroupKind::Gamma0Plus if g.level == 5 => {
            let five_s = (s * 5f64.ln()).exp();
            let v = log_gamma_part(1, s)?.exp() * (five_s + 5.0) / (five_s * (five_s + 1.0)) * zeta_ratio(s)?;
            checked(v, s)
        }
        _ => Err(Error::UnsupportedGroup(format!("{g} has no closed-form determinant"))),
    }
}

/// H(s) = φ(s)/K(s) in closed form, usable inside the critical strip.
pub fn h_closed_form(g: &GroupDescriptor, s: C64) -> Result<C64> {
    match g.kind {
        GroupKind::Modular | GroupKind::Gamma0 => {
            let n1 = g.n1();
            let mut v = zeta_ratio(s)?.powu(n1);
            for p in prime_factors(g.level) {
                let x = (-2.0 * s * (p as f64).ln()).exp();
                v *= ((1.0 - (p * p) as f64 * x) / (1.0 - x)).powu(n1 / 2);
            }
            checked(v, s)
        }
        GroupKind::Gamma0Plus if g.level == 5 => {
            let x = (-s * 5f64.ln()).exp();
            checked((1.0 + 5.0 * x) / (1.0 + x) * zeta_ratio(s)?, s)
        }
        _ => Err(Error::UnsupportedGroup(format!("{g} has no closed-form determinant"))),
    }
}

/// log K(s) = n₁ log(√π Γ(s−1/2)/Γ(s)) + c₁s + c₂ (without the sign of d(1)).
pub fn log_k_factor(sd: &ScatteringData, s: C64) -> Result<C64> {
    Ok(log_gamma_part(sd.n1, s)? + sd.c1 * s + sd.c2)
}

/// K(s) = π^{n₁/2}(Γ(s−1/2)/Γ(s))^{n₁}·e^{c₁s}·d(1).
pub fn k_factor(sd: &ScatteringData, s: C64) -> Result<C64> {
    checked(sd.d1_sign as f64 * log_k_factor(sd, s)?.exp(), s)
}

/// K′/K(s) = n₁(ψ(s−1/2) − ψ(s)) + c₁.
pub fn k_logderiv(sd: &ScatteringData, s: C64) -> Result<C64> {
    let v = sd.n1 as f64 * (digamma(s - 0.5).map_err(|_| pole(s))? - digamma(s).map_err(|_| pole(s))?) + sd.c1;
    checked(v, s)
}

/// K′/K for a bare cusp count and c₁ (used before a ladder exists).
pub fn k_logderiv_raw(n1: u32, c1: f64, s: C64) -> Result<C64> {
    if n1 == 0 {
        return Ok(C64::new(c1, 0.0));
    }
    let v = n1 as f64 * (digamma(s - 0.5).map_err(|_| pole(s))? - digamma(s).map_err(|_| pole(s))?) + c1;
    checked(v, s)
}

/// b₂ = π^{n₁/2}·𝔤₁⁻¹·d(1).
pub fn b2_constant(sd: &ScatteringData) -> f64 {
    PI.powf(sd.n1 as f64 / 2.0) / sd.g1 * sd.d1()
}
