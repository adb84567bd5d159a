//! Zero counting on rectangles: winding number and Littlewood's horizontal
//! moment from one pass of continuous argument tracking.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::groups::GroupDescriptor;
use crate::numerics::{gauss_legendre, hardy_z, EvalSettings, C64};
use crate::scattering::h_closed_form;
use crate::{Error, Result};

/// Samples with |f| below this on the boundary abort the count.
pub const BOUNDARY_MIN_MODULUS: f64 = 1e-8;
const MAX_DEPTH: u32 = 40;
/// Shift applied to T when the contour passes too close to a zero.
const T_NUDGE: f64 = 0.05;
const HARDY_STEP: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
}

impl Rectangle {
    pub fn new(x1: f64, x2: f64, y1: f64, y2: f64) -> Result<Self> {
        if !(x1 < x2 && y1 < y2) || ![x1, x2, y1, y2].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput(format!("degenerate rectangle [{x1}, {x2}]×[{y1}, {y2}]")));
        }
        Ok(Self { x1, x2, y1, y2 })
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re > self.x1 && z.re < self.x2 && z.im > self.y1 && z.im < self.y2
    }

    /// Counter-clockwise corners starting at the bottom-left one.
    fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.x1, self.y1),
            C64::new(self.x2, self.y1),
            C64::new(self.x2, self.y2),
            C64::new(self.x1, self.y2),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourResult {
    pub rect: Rectangle,
    /// Zeros minus poles inside.
    pub net_count: i64,
    /// ∫_{x1}^{x2} N(x) dx = Σ_zeros (σ − x1) − Σ_poles (σ − x1).
    pub horizontal_moment: f64,
    /// Distance of the raw winding number to the nearest integer.
    pub residual: f64,
    pub mesh_points: usize,
}

struct Walker<'a, F> {
    f: &'a F,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    tol: f64,
    points: usize,
}

struct Panel {
    integral: C64,
    arg_end: f64,
}

impl<F> Walker<'_, F>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    fn sample(&self, z: C64) -> Result<C64> {
        let v = (self.f)(z)?;
        if !(v.re.is_finite() && v.im.is_finite()) || v.norm() < BOUNDARY_MIN_MODULUS {
            return Err(Error::BoundaryTooClose(format!("|f({z})| = {}", v.norm())));
        }
        Ok(v)
    }

    /// log f at the Gauss nodes of [a, b] and at b, continued from `arg_a`.
    /// `None` when two consecutive samples differ in argument by π/2 or more.
    fn logs(&mut self, a: C64, b: C64, arg_a: f64) -> Result<Option<(Vec<C64>, f64)>> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut zs: Vec<C64> = self.nodes.iter().map(|x| mid + half * *x).collect();
        zs.push(b);
        let vals: Vec<Result<C64>> = zs.par_iter().map(|z| self.sample(*z)).collect();
        self.points += zs.len();
        let mut out = Vec::with_capacity(zs.len());
        let mut prev = arg_a;
        for v in vals {
            let v = v?;
            let raw = v.arg();
            let arg = prev + wrap(raw - prev);
            if (arg - prev).abs() >= 0.5 * PI {
                return Ok(None);
            }
            out.push(C64::new(v.norm().ln(), arg));
            prev = arg;
        }
        let arg_b = prev;
        out.pop();
        Ok(Some((out, arg_b)))
    }

    fn quad(&self, a: C64, b: C64, logs: &[C64]) -> C64 {
        let half = 0.5 * (b - a);
        logs.iter().zip(&self.weights).map(|(l, w)| l * *w).sum::<C64>() * half
    }

    fn panel(&mut self, a: C64, b: C64, arg_a: f64, depth: u32) -> Result<Panel> {
        if depth > MAX_DEPTH {
            return Err(Error::NonConvergence(format!("contour refinement near {a}")));
        }
        let m = 0.5 * (a + b);
        let Some((whole, arg_b)) = self.logs(a, b, arg_a)? else {
            return self.split(a, b, arg_a, depth);
        };
        let Some((left, arg_m)) = self.logs(a, m, arg_a)? else {
            return self.split(a, b, arg_a, depth);
        };
        let Some((right, arg_b2)) = self.logs(m, b, arg_m)? else {
            return self.split(a, b, arg_a, depth);
        };
        let iw = self.quad(a, b, &whole);
        let ih = self.quad(a, m, &left) + self.quad(m, b, &right);
        let len = (b - a).norm();
        if (arg_b - arg_b2).abs() < 1e-9 && (iw - ih).norm() <= self.tol * len * (1.0 + ih.norm() / len) {
            return Ok(Panel { integral: ih, arg_end: arg_b2 });
        }
        self.split(a, b, arg_a, depth)
    }

    fn split(&mut self, a: C64, b: C64, arg_a: f64, depth: u32) -> Result<Panel> {
        let m = 0.5 * (a + b);
        let l = self.panel(a, m, arg_a, depth + 1)?;
        let r = self.panel(m, b, l.arg_end, depth + 1)?;
        Ok(Panel { integral: l.integral + r.integral, arg_end: r.arg_end })
    }
}

fn wrap(d: f64) -> f64 {
    d - TAU * (d / TAU).round()
}

/// Zeros minus poles of `f` in `rect`, and the Littlewood moment
/// −(1/2π)·Im ∮ log f dz with log f continued from the bottom-left corner.
pub fn littlewood_count<F>(f: F, rect: &Rectangle, settings: &EvalSettings) -> Result<ContourResult>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    settings.validate()?;
    let (nodes, weights) = gauss_legendre(15);
    let mut w = Walker { f: &f, nodes, weights, tol: settings.target_rel_tol, points: 0 };
    let corners = rect.corners();
    let start = w.sample(corners[0])?;
    w.points += 1;
    let arg0 = start.arg();
    let mut arg = arg0;
    let mut integral = C64::new(0.0, 0.0);
    let panels = settings.quad_panels.max(1);
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        for p in 0..panels {
            let pa = a + (b - a) * (p as f64 / panels as f64);
            let pb = a + (b - a) * ((p + 1) as f64 / panels as f64);
            let r = w.panel(pa, pb, arg, 0)?;
            integral += r.integral;
            arg = r.arg_end;
        }
    }
    let winding = (arg - arg0) / TAU;
    let net = winding.round();
    Ok(ContourResult {
        rect: *rect,
        net_count: net as i64,
        horizontal_moment: -integral.im / TAU,
        residual: (winding - net).abs(),
        mesh_points: w.points,
    })
}

/// Ordinates 0 < γ ≤ t_max of sign changes of Hardy's Z, refined by bisection.
pub fn zeta_zero_ordinates(t_max: f64) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let n = (t_max / HARDY_STEP).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| (i as f64 * HARDY_STEP).min(t_max).max(1e-3)).collect();
    let vals: Vec<f64> = grid.par_iter().map(|&t| hardy_z(t)).collect::<Result<_>>()?;
    for i in 0..n {
        if vals[i] == 0.0 {
            out.push(grid[i]);
        } else if vals[i] * vals[i + 1] < 0.0 {
            let (mut lo, mut hi, flo) = (grid[i], grid[i + 1], vals[i]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if hardy_z(mid)? * flo > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HZeroCount {
    pub n_ver: i64,
    pub n_hor: f64,
    /// Height actually used after boundary nudges.
    pub height: f64,
    /// Poles of H (zeros of ζ(2s)) found inside the rectangle.
    pub poles_inside: usize,
    pub contour: ContourResult,
}

/// Left edge of the H counting rectangle.
pub const H_X1: f64 = 0.5;
/// Right edge; kept off Re s = 1 where the local factors of Γ₀(N) vanish.
pub const H_X2: f64 = 0.99;
/// Bottom edge; avoids the pole of ζ(2s − 1) at s = 1.
pub const H_Y1: f64 = 0.5;

/// Zeros of H in (1/2, 1) × (0, T): count and Σ (σ − 1/2).
pub fn h_zero_count(g: &GroupDescriptor, t: f64, settings: &EvalSettings) -> Result<HZeroCount> {
    if !(t > H_Y1) {
        return Err(Error::InvalidInput(format!("T must exceed {H_Y1}")));
    }
    h_closed_form(g, C64::new(2.0, 1.0))?;
    let mut height = t;
    for _ in 0..40 {
        let rect = Rectangle::new(H_X1, H_X2, H_Y1, height)?;
        match littlewood_count(|s| h_closed_form(g, s), &rect, settings) {
            Ok(contour) => {
                // poles of H sit at ρ/2 for zeros ρ of ζ
                let poles: Vec<C64> = zeta_zero_ordinates(2.0 * height)?
                    .into_iter()
                    .map(|gamma| C64::new(0.25, 0.5 * gamma))
                    .filter(|p| rect.contains(*p))
                    .collect();
                let pole_moment: f64 = poles.iter().map(|p| p.re - H_X1).sum();
                return Ok(HZeroCount {
                    n_ver: contour.net_count + poles.len() as i64,
                    n_hor: contour.horizontal_moment + pole_moment,
                    height,
                    poles_inside: poles.len(),
                    contour,
                });
            }
            Err(Error::BoundaryTooClose(_)) => height += T_NUDGE,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BoundaryTooClose(format!("no clean height found above T = {t}")))
}
