use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forms::modular_class_count;
use crate::algebraic::Rational;
use crate::numerics::pairwise_sum_real;
use crate::{Error, Result};

/// Hyperbolic classes sharing one norm and one primitive root norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicClass {
    /// Squared real trace t²/e.
    pub trace_sq_scaled: Rational,
    pub norm: f64,
    pub length: f64,
    pub primitive: bool,
    pub primitive_norm: f64,
    /// k with P = P₀^k.
    pub power: u32,
    pub multiplicity: u64,
}

impl GeodesicClass {
    /// Λ(P) = log N(P₀)/(1 − N(P)⁻¹).
    pub fn lambda(&self) -> f64 {
        self.primitive_norm.ln() / (1.0 - 1.0 / self.norm)
    }
}

/// ((τ + √(τ² − 4))/2)².
pub fn norm_from_trace(tau: f64) -> f64 {
    let tau = tau.abs();
    let u = 0.5 * (tau + (tau * tau - 4.0).sqrt());
    u * u
}

fn class(t: i64, t0: i64, k: u32, mult: u64) -> GeodesicClass {
    let norm = norm_from_trace(t as f64);
    GeodesicClass {
        trace_sq_scaled: Ratio::from_integer(t as i128 * t as i128),
        norm,
        length: norm.ln(),
        primitive: k == 1,
        primitive_norm: norm_from_trace(t0 as f64),
        power: k,
        multiplicity: mult,
    }
}

/// Every hyperbolic class of PSL(2, ℤ) with N(P) ≤ x.
///
/// Class counts come from [`modular_class_count`]; a trace t is the trace of
/// a k-th power of a trace-t₀ class iff t = 2·T_k(t₀/2), and primitive counts
/// follow by subtracting those powers in increasing order of t.
pub fn modular_geodesic_census(x: f64) -> Result<Vec<GeodesicClass>> {
    let first = norm_from_trace(3.0);
    if !(x > first) {
        return Err(Error::CutoffTooSmall(format!("census cutoff {x} below smallest norm {first}")));
    }
    let mut t_max = 3i64;
    while norm_from_trace((t_max + 1) as f64) <= x {
        t_max += 1;
    }
    let counts: Vec<u64> = (3..=t_max).into_par_iter().map(modular_class_count).collect();
    let h = |t: i64| counts[(t - 3) as usize];

    let mut powers: BTreeMap<i64, Vec<(i64, u32)>> = BTreeMap::new();
    let mut primitive = vec![0u64; counts.len()];
    let mut out = Vec::new();
    for t in 3..=t_max {
        let mut p = h(t);
        if let Some(list) = powers.get(&t) {
            for &(t0, k) in list {
                let p0 = primitive[(t0 - 3) as usize];
                p -= p0;
                out.push(class(t, t0, k, p0));
            }
        }
        primitive[(t - 3) as usize] = p;
        if p > 0 {
            out.push(class(t, t, 1, p));
            // t_{k+1} = t·t_k − t_{k−1}, t_0 = 2, t_1 = t
            let (mut prev, mut cur, mut k) = (2i128, t as i128, 1u32);
            loop {
                let next = t as i128 * cur - prev;
                k += 1;
                if next > t_max as i128 {
                    break;
                }
                powers.entry(next as i64).or_default().push((t, k));
                prev = cur;
                cur = next;
            }
        }
    }
    out.retain(|c| c.multiplicity > 0);
    out.sort_by(|a, b| a.norm.total_cmp(&b.norm).then(a.primitive_norm.total_cmp(&b.primitive_norm)));
    Ok(out)
}

/// ψ(x) = Σ_{N(P) ≤ x} Λ(P) over a census.
pub fn psi_from_census(census: &[GeodesicClass], x: f64) -> f64 {
    let terms: Vec<f64> = census
        .iter()
        .take_while(|c| c.norm <= x)
        .map(|c| c.multiplicity as f64 * c.lambda())
        .collect();
    pairwise_sum_real(&terms)
}
