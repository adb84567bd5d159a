use std::collections::HashMap;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{divisors, GroupDescriptor, GroupKind};
use crate::algebraic::{QuadSurd, Rational};
use crate::{Error, Result};

/// The matrix (1/√e)·(a b; c d) with ad − bc = e.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

impl GroupElement {
    /// Builds an element after checking membership in `g`.
    pub fn new(g: &GroupDescriptor, a: i64, b: i64, c: i64, d: i64, e: i64) -> Result<Self> {
        let x = Self { a, b, c, d, e };
        if x.belongs_to(g) {
            Ok(x)
        } else {
            Err(Error::InvalidInput(format!("{x:?} is not an element of {g}")))
        }
    }

    pub fn belongs_to(&self, g: &GroupDescriptor) -> bool {
        let det = self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128;
        if det != self.e as i128 || self.e <= 0 {
            return false;
        }
        let n = g.level as i64;
        match g.kind {
            GroupKind::Modular | GroupKind::Gamma0 => self.e == 1 && self.c % n == 0,
            GroupKind::Gamma0Plus => {
                n % self.e == 0 && self.a % self.e == 0 && self.d % self.e == 0 && self.c % n == 0
            }
            GroupKind::AbstractCompact => false,
        }
    }

    pub fn trace_sq(&self) -> Rational {
        let t = (self.a + self.d) as i128;
        Ratio::new(t * t, self.e as i128)
    }

    pub fn real_trace(&self) -> f64 {
        (self.a + self.d) as f64 / (self.e as f64).sqrt()
    }

    pub fn real_c(&self) -> f64 {
        self.c as f64 / (self.e as f64).sqrt()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace_sq() > Ratio::from_integer(4)
    }

    /// Representative of ±γ with c > 0, or c = 0 and d > 0.
    pub fn normalized(self) -> Self {
        if self.c < 0 || (self.c == 0 && self.d < 0) {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d, e: self.e }
        } else {
            self
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a, e: self.e }
    }

    /// Product in PSL(2, ℝ). Scales combine as e₁e₂ = g²·e₃ with g = gcd(e₁, e₂).
    pub fn mul(&self, o: &Self) -> Option<Self> {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let (p, q, r, s) = (o.a as i128, o.b as i128, o.c as i128, o.d as i128);
        let m = [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s];
        let g = (self.e as i128).gcd(&(o.e as i128));
        if m.iter().any(|x| x % g != 0) {
            return None;
        }
        let e = self.e as i128 * o.e as i128 / (g * g);
        let conv = |x: i128| i64::try_from(x / g).ok();
        Some(Self { a: conv(m[0])?, b: conv(m[1])?, c: conv(m[2])?, d: conv(m[3])?, e: i64::try_from(e).ok()? })
    }

    pub fn conjugate_by(&self, h: &Self) -> Option<Self> {
        h.mul(self)?.mul(&h.inverse())
    }
}

fn scales(g: &GroupDescriptor) -> Vec<i64> {
    match g.kind {
        GroupKind::Gamma0Plus => divisors(g.level).into_iter().map(|e| e as i64).collect(),
        _ => vec![1],
    }
}

/// Elements of `g` with 0 < c/√e ≤ `c_bound` and |a + d|/√e ≤ `trace_bound`,
/// one per ± pair (sign fixed by c > 0).
///
/// Conjugating by the translation z ↦ z + 1 shifts a − d by 2c, so the search
/// keeps only the window |a − d| ≤ c; every element is conjugate to one in it.
/// Elements with c = 0 (translations) are omitted.
pub fn enumerate_elements(g: &GroupDescriptor, c_bound: f64, trace_bound: f64) -> Result<Vec<GroupElement>> {
    if !g.has_matrix_model() {
        return Err(Error::UnsupportedKind(format!("{g} has no matrix model")));
    }
    if !(c_bound > 0.0 && trace_bound > 0.0) {
        return Err(Error::InvalidInput("bounds must be positive".into()));
    }
    let step = g.level as i64;
    let mut out = Vec::new();
    for e in scales(g) {
        let ef = e as f64;
        let c_max = (c_bound * ef.sqrt() * (1.0 + 1e-12)).floor() as i64;
        let s_max = (trace_bound * ef.sqrt() * (1.0 + 1e-12)).floor() as i64;
        let mut c = step;
        while c <= c_max {
            let mut sigma = -s_max + s_max.rem_euclid(e);
            while sigma <= s_max {
                let lo = (sigma - c).div_euclid(2) + (sigma - c).rem_euclid(2);
                let hi = (sigma + c).div_euclid(2);
                for a in lo..=hi {
                    let d = sigma - a;
                    if a % e != 0 || d % e != 0 {
                        continue;
                    }
                    let num = a as i128 * d as i128 - e as i128;
                    if num % c as i128 != 0 {
                        continue;
                    }
                    let b = (num / c as i128) as i64;
                    let x = GroupElement { a, b, c, d, e };
                    debug_assert!(x.belongs_to(g));
                    out.push(x);
                }
                sigma += e;
            }
            c += step;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Systole {
    /// τ₀² as an exact rational.
    pub tau_sq: Rational,
    pub tau: f64,
    pub length: f64,
    /// e^{ℓ₀}, exact.
    pub norm: QuadSurd,
    pub witness: GroupElement,
}

/// Shortest closed geodesic of `g` among traces up to `trace_ceiling`.
///
/// Search box: c/√e ≤ level. For Γ₀(N) a class with trace t exists iff
/// a² − ta + 1 ≡ 0 (mod N) is solvable, and then c = N works; for Γ₀(f)⁺ the
/// same argument with modulus f/e gives c = f. The window |a − d| ≤ c covers
/// every residue of a, so the box is complete for the catalog groups.
pub fn systole_search(g: &GroupDescriptor, trace_ceiling: f64) -> Result<Systole> {
    if trace_ceiling <= 2.0 {
        return Err(Error::InvalidInput("trace ceiling must exceed 2".into()));
    }
    let els = enumerate_elements(g, g.level as f64, trace_ceiling)?;
    let best = els
        .into_iter()
        .filter(GroupElement::is_hyperbolic)
        .min_by(|x, y| x.trace_sq().cmp(&y.trace_sq()).then(x.cmp(y)))
        .ok_or(Error::NoHyperbolicFound(trace_ceiling))?;
    let tau_sq = best.trace_sq();
    let tau = best.real_trace().abs();
    Ok(Systole {
        tau_sq,
        tau,
        length: 2.0 * (tau / 2.0).acosh(),
        norm: QuadSurd::norm_from_trace_sq(tau_sq),
        witness: best,
    })
}

/// Number of conjugacy classes among elements of trace τ₀, estimated by
/// partitioning the elements found with c/√e ≤ `box_factor`·level under
/// conjugation by small group elements. Classes not connected inside the box
/// stay separate, so the result can only overcount.
pub fn estimate_systole_multiplicity(g: &GroupDescriptor, systole: &Systole, box_factor: f64) -> Result<u32> {
    let level = g.level as f64;
    let targets: Vec<GroupElement> = enumerate_elements(g, box_factor * level, systole.tau + 1e-9)?
        .into_iter()
        .filter(|x| x.trace_sq() == systole.tau_sq)
        .collect();
    let index: HashMap<GroupElement, usize> = targets.iter().enumerate().map(|(i, x)| (*x, i)).collect();
    let mut gens = enumerate_elements(g, level, 3.0)?;
    gens.push(GroupElement { a: 1, b: 1, c: 0, d: 1, e: 1 });
    let extra: Vec<GroupElement> = gens.iter().map(GroupElement::inverse).collect();
    gens.extend(extra);

    let mut parent: Vec<usize> = (0..targets.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for (i, x) in targets.iter().enumerate() {
        for h in &gens {
            if let Some(y) = x.conjugate_by(h) {
                if let Some(&j) = index.get(&y.normalized()) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
    }
    let roots = (0..targets.len()).filter(|&i| find(&mut parent, i) == i).count();
    Ok(roots as u32)
}
