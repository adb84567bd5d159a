use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{is_finite, pairwise_sum, EvalSettings, Estimate, C64};
use crate::{Error, Result};

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

pub(crate) fn gl15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// k-th derivative of an analytic `f` at `s` by the trapezoidal rule on the
/// circle |z − s| = radius. Starts at 64 nodes and doubles (reusing samples)
/// until two consecutive estimates agree.
pub fn cauchy_derivative<F>(f: F, s: C64, k: u32, radius: f64, settings: &EvalSettings) -> Result<Estimate>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    if !(radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius {radius}")));
    }
    const MAX_NODES: usize = 4096;
    let sample = |n: usize, idx: Vec<usize>| -> Result<Vec<(usize, C64)>> {
        idx.into_par_iter()
            .map(|j| {
                let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
                let v = f(s + radius * w)?;
                if !is_finite(v) {
                    return Err(Error::PoleHit(format!("Cauchy circle around {s}")));
                }
                Ok((j, v))
            })
            .collect()
    };
    let mut n = 64;
    let mut values: Vec<C64> = sample(n, (0..n).collect())?.into_iter().map(|(_, v)| v).collect();
    let kf = factorial(k);
    let combine = |vals: &[C64]| -> C64 {
        let n = vals.len();
        let terms: Vec<C64> = vals
            .iter()
            .enumerate()
            .map(|(j, v)| v * C64::from_polar(1.0, -2.0 * PI * (j * k as usize % n) as f64 / n as f64))
            .collect();
        pairwise_sum(&terms) * kf / (n as f64 * radius.powi(k as i32))
    };
    let mut prev = combine(&values);
    loop {
        let fresh = sample(2 * n, (0..n).map(|j| 2 * j + 1).collect())?;
        let mut merged = vec![C64::new(0.0, 0.0); 2 * n];
        for (j, v) in values.iter().enumerate() {
            merged[2 * j] = *v;
        }
        for (j, v) in fresh {
            merged[j] = v;
        }
        values = merged;
        n *= 2;
        let cur = combine(&values);
        let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max) * kf / radius.powi(k as i32);
        let floor = 64.0 * f64::EPSILON * scale;
        let diff = (cur - prev).norm();
        if diff <= settings.target_rel_tol * cur.norm() + floor {
            return Ok(Estimate { value: cur, error: diff.max(floor) });
        }
        if n >= MAX_NODES {
            return Err(Error::NonConvergence(format!(
                "Cauchy derivative k={k} at {s}: refinements differ by {diff:e}"
            )));
        }
        prev = cur;
    }
}

/// ∫_a^b f(z) dz along the straight segment, adaptive Gauss–Legendre.
pub fn line_integral<F>(f: F, a: C64, b: C64, settings: &EvalSettings) -> Result<Estimate>
where
    F: Fn(C64) -> Result<C64>,
{
    let (x, w) = gl15();
    let rule = |lo: f64, hi: f64| -> Result<C64> {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(w) {
            let t = mid + half * xi;
            let v = f(a + (b - a) * t)?;
            if !is_finite(v) {
                return Err(Error::PoleHit(format!("integrand at {}", a + (b - a) * t)));
            }
            acc += *wi * v;
        }
        Ok(acc * half * (b - a))
    };
    let whole = rule(0.0, 1.0)?;
    let tol = settings.target_rel_tol * (1.0 + whole.norm());
    let mut stack = vec![(0.0, 1.0, whole, 0u32)];
    let mut pieces = Vec::new();
    let mut err = 0.0;
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule(lo, mid)?;
        let right = rule(mid, hi)?;
        let diff = (left + right - est).norm();
        if diff <= tol * (hi - lo) || diff < 1e-15 * (left + right).norm() {
            pieces.push((lo, left + right));
            err += diff;
        } else if depth >= 40 {
            return Err(Error::NonConvergence(format!("line integral from {a} to {b}")));
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    pieces.sort_by(|p, q| p.0.total_cmp(&q.0));
    let vals: Vec<C64> = pieces.into_iter().map(|p| p.1).collect();
    Ok(Estimate { value: pairwise_sum(&vals), error: err })
}
