//! Exact numbers of the form r + c·√m with rational r, c.
//!
//! Systole norms e^{ℓ₀} of arithmetic groups and the squared frequency
//! ratios of their scattering determinants live here, so trichotomy
//! decisions never depend on rounding.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSurd {
    pub rational: Rational,
    pub coeff: Rational,
    /// Squarefree and ≥ 2 whenever `coeff` is non-zero.
    pub radicand: i128,
}

fn split_square(m: i128) -> (i128, i128) {
    let mut outer = 1;
    let mut inner = m;
    let mut p = 2;
    while p * p <= inner {
        while inner % (p * p) == 0 {
            inner /= p * p;
            outer *= p;
        }
        p += 1;
    }
    (outer, inner)
}

impl QuadSurd {
    pub fn rational(r: Rational) -> Self {
        Self { rational: r, coeff: Rational::zero(), radicand: 1 }
    }

    /// r + c·√m for m ≥ 0, normalised so that m is squarefree.
    pub fn new(rational: Rational, coeff: Rational, radicand: i128) -> Self {
        assert!(radicand >= 0, "negative radicand");
        if radicand == 0 || coeff.is_zero() {
            return Self::rational(rational);
        }
        let (outer, inner) = split_square(radicand);
        let coeff = coeff * Rational::from_integer(outer);
        if inner == 1 {
            Self::rational(rational + coeff)
        } else {
            Self { rational, coeff, radicand: inner }
        }
    }

    /// √q for a non-negative rational q.
    pub fn sqrt_of(q: Rational) -> Self {
        let (n, d) = (*q.numer(), *q.denom());
        Self::new(Rational::zero(), Rational::new(1, d), n * d)
    }

    /// e^ℓ = ((τ + √(τ² − 4))/2)² for a hyperbolic element with τ² = `tau_sq`.
    pub fn norm_from_trace_sq(tau_sq: Rational) -> Self {
        let (p, q) = (*tau_sq.numer(), *tau_sq.denom());
        let two = Rational::from_integer(2);
        Self::new((tau_sq - two) / two, Rational::new(1, 2 * q), p * (p - 4 * q))
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.coeff.is_zero() {
            return r;
        }
        r + self.coeff.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }

    /// Sign of the number, decided exactly.
    pub fn signum(&self) -> Ordering {
        let a = &self.rational;
        let b = &self.coeff;
        let sa = a.cmp(&Rational::zero());
        let sb = b.cmp(&Rational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // opposite signs: compare a² with b²·m
                let a2 = a * a;
                let b2m = b * b * Rational::from_integer(self.radicand);
                match a2.cmp(&b2m) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                }
            }
        }
    }

    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        let shifted = Self { rational: &self.rational - r, ..self.clone() };
        shifted.signum()
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let den = self.rational.denom().lcm(self.coeff.denom());
        let p = self.rational.numer() * (den / self.rational.denom());
        let q = self.coeff.numer() * (den / self.coeff.denom());
        let root = if q.abs().is_one() {
            format!("√{}", self.radicand)
        } else {
            format!("{}√{}", q.abs(), self.radicand)
        };
        let body = match (p.is_zero(), q.is_negative()) {
            (true, false) => root,
            (true, true) => format!("-{root}"),
            (false, false) => format!("{p}+{root}"),
            (false, true) => format!("{p}-{root}"),
        };
        if den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn systole_norms_of_catalog_traces() {
        let u = QuadSurd::norm_from_trace_sq(q(9, 1));
        assert_eq!(u.to_string(), "(7+3√5)/2");
        assert!((u.to_f64() - ((3.0 + 5f64.sqrt()) / 2.0).powi(2)).abs() < 1e-13);
        let u = QuadSurd::norm_from_trace_sq(q(5, 1));
        assert_eq!(u.to_string(), "(3+√5)/2");
        let u = QuadSurd::norm_from_trace_sq(q(6, 1));
        assert_eq!(u.to_string(), "2+√3");
    }

    #[test]
    fn exact_comparisons() {
        let four = q(4, 1);
        assert_eq!(QuadSurd::norm_from_trace_sq(q(9, 1)).cmp_rational(&four), Ordering::Greater);
        assert_eq!(QuadSurd::norm_from_trace_sq(q(5, 1)).cmp_rational(&four), Ordering::Less);
        assert_eq!(QuadSurd::norm_from_trace_sq(q(6, 1)).cmp_rational(&q(2, 1)), Ordering::Greater);
        // 2+√3 vs 15/4 = 3.75 vs 3.732...
        assert_eq!(QuadSurd::norm_from_trace_sq(q(6, 1)).cmp_rational(&q(15, 4)), Ordering::Less);
        // perfect squares fold into the rational part
        assert_eq!(QuadSurd::new(q(1, 1), q(1, 1), 4), QuadSurd::rational(q(3, 1)));
        assert_eq!(QuadSurd::sqrt_of(q(9, 4)).cmp_rational(&q(3, 2)), Ordering::Equal);
    }

    #[test]
    fn signum_matches_float_on_grid() {
        for a in -6..=6 {
            for b in -6..=6 {
                for m in [2, 3, 5, 6, 7] {
                    let x = QuadSurd::new(q(a, 1), q(b, 1), m);
                    let f = a as f64 + b as f64 * (m as f64).sqrt();
                    let expect = f.partial_cmp(&0.0).unwrap();
                    assert_eq!(x.signum(), expect, "{a} {b} {m}");
                }
            }
        }
    }
}
