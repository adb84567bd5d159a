//! Group catalog, exact element arithmetic, systoles and the modular census.

mod census;
mod element;
mod forms;
mod invariants;

pub use census::{modular_geodesic_census, norm_from_trace, psi_from_census, GeodesicClass};
pub use element::{enumerate_elements, estimate_systole_multiplicity, systole_search, GroupElement, Systole};
pub use forms::{modular_class_count, reduced_forms};
pub use invariants::{compact_invariants, invariants, SurfaceInvariants, Trichotomy};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Modular,
    Gamma0,
    Gamma0Plus,
    AbstractCompact,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub genus: u32,
    pub elliptic_orders: Vec<u32>,
    pub cusps: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub kind: GroupKind,
    /// N for Γ₀(N), f for Γ₀(f)⁺, 1 otherwise.
    pub level: u64,
    pub signature: Signature,
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_squarefree(n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

impl GroupDescriptor {
    pub fn modular() -> Self {
        Self {
            kind: GroupKind::Modular,
            level: 1,
            signature: Signature { genus: 0, elliptic_orders: vec![2, 3], cusps: 1 },
        }
    }

    /// Γ₀(N) for squarefree N, with the signature from the standard index formulas.
    pub fn gamma0(n: u64) -> Result<Self> {
        if n == 0 || !is_squarefree(n) {
            return Err(Error::UnknownGroup(format!("gamma0:{n} (level must be squarefree)")));
        }
        let primes = prime_factors(n);
        let index: u64 = primes.iter().map(|p| p + 1).product();
        let nu2: u64 = primes
            .iter()
            .map(|&p| match p {
                2 => 1,
                p if p % 4 == 1 => 2,
                _ => 0,
            })
            .product();
        let nu3: u64 = primes
            .iter()
            .map(|&p| match p {
                3 => 1,
                p if p % 3 == 1 => 2,
                _ => 0,
            })
            .product();
        let cusps = 1u32 << primes.len();
        // 12g = 12 + μ − 3ν₂ − 4ν₃ − 6ν∞
        let twelve_g = 12 + index as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
        let mut elliptic = vec![2; nu2 as usize];
        elliptic.extend(std::iter::repeat_n(3, nu3 as usize));
        Ok(Self {
            kind: GroupKind::Gamma0,
            level: n,
            signature: Signature { genus: (twelve_g / 12) as u32, elliptic_orders: elliptic, cusps },
        })
    }

    /// Γ₀(f)⁺; the catalog carries f = 5 and f = 6, both of signature (0; 2,2,2; 1).
    pub fn gamma0_plus(f: u64) -> Result<Self> {
        match f {
            5 | 6 => Ok(Self {
                kind: GroupKind::Gamma0Plus,
                level: f,
                signature: Signature { genus: 0, elliptic_orders: vec![2, 2, 2], cusps: 1 },
            }),
            _ => Err(Error::UnknownGroup(format!("gamma0plus:{f} (catalog has f = 5, 6)"))),
        }
    }

    pub fn compact(genus: u32, elliptic_orders: Vec<u32>) -> Result<Self> {
        if elliptic_orders.iter().any(|&m| m < 2) {
            return Err(Error::InvalidSignature("elliptic orders must be at least 2".into()));
        }
        let g = Self {
            kind: GroupKind::AbstractCompact,
            level: 1,
            signature: Signature { genus, elliptic_orders, cusps: 0 },
        };
        g.volume()?;
        Ok(g)
    }

    pub fn n1(&self) -> u32 {
        self.signature.cusps
    }

    /// Modular group, whether spelled `psl2z` or `gamma0:1`.
    pub fn is_modular(&self) -> bool {
        self.kind == GroupKind::Modular || (self.kind == GroupKind::Gamma0 && self.level == 1)
    }

    pub fn has_matrix_model(&self) -> bool {
        self.kind != GroupKind::AbstractCompact
    }

    /// Gauss–Bonnet area 2π(2g − 2 + n₁ + Σ(1 − 1/mᵢ)).
    pub fn volume(&self) -> Result<f64> {
        let s = &self.signature;
        let ell: f64 = s.elliptic_orders.iter().map(|&m| 1.0 - 1.0 / m as f64).sum();
        let chi = 2.0 * s.genus as f64 - 2.0 + s.cusps as f64 + ell;
        if chi <= 1e-12 {
            return Err(Error::InvalidSignature(format!("non-positive area for {self}")));
        }
        Ok(2.0 * PI * chi)
    }

    pub fn id(&self) -> String {
        self.to_string()
    }
}

pub fn volume(g: &GroupDescriptor) -> Result<f64> {
    g.volume()
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::Modular => write!(f, "psl2z"),
            GroupKind::Gamma0 => write!(f, "gamma0:{}", self.level),
            GroupKind::Gamma0Plus => write!(f, "gamma0plus:{}", self.level),
            GroupKind::AbstractCompact => {
                write!(f, "compact:{}", self.signature.genus)?;
                if !self.signature.elliptic_orders.is_empty() {
                    let o: Vec<String> = self.signature.elliptic_orders.iter().map(u32::to_string).collect();
                    write!(f, ":{}", o.join(","))?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(id: &str) -> Result<Self> {
        let unknown = || Error::UnknownGroup(id.to_string());
        let parts: Vec<&str> = id.trim().split(':').collect();
        let num = |s: &str| s.parse::<u64>().map_err(|_| unknown());
        match parts.as_slice() {
            ["psl2z"] => Ok(Self::modular()),
            ["gamma0", n] => Self::gamma0(num(n)?),
            ["gamma0plus", f] => Self::gamma0_plus(num(f)?),
            ["compact", g] => Self::compact(num(g)? as u32, vec![]),
            ["compact", g, orders] => {
                let orders = orders
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<u32>().map_err(|_| unknown()))
                    .collect::<Result<Vec<_>>>()?;
                Self::compact(num(g)? as u32, orders)
            }
            _ => Err(unknown()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert!((GroupDescriptor::modular().volume().unwrap() - PI / 3.0).abs() < 1e-15);
        let g5 = GroupDescriptor::gamma0_plus(5).unwrap();
        assert!((g5.volume().unwrap() - PI).abs() < 1e-15);
        let c2 = GroupDescriptor::compact(2, vec![]).unwrap();
        assert!((c2.volume().unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!(GroupDescriptor::compact(0, vec![2, 3]).is_err());
    }

    #[test]
    fn gamma0_signatures_match_index() {
        // vol Γ₀(N) = (π/3)·∏(p+1)
        for n in [1u64, 2, 3, 5, 6, 7, 10, 11, 13, 30] {
            let g = GroupDescriptor::gamma0(n).unwrap();
            let index: u64 = prime_factors(n).iter().map(|p| p + 1).product();
            assert!((g.volume().unwrap() - PI / 3.0 * index as f64).abs() < 1e-12, "N={n}");
            assert_eq!(g.n1(), 1 << prime_factors(n).len());
        }
        let g = GroupDescriptor::gamma0(1).unwrap();
        assert_eq!(g.signature, GroupDescriptor::modular().signature);
        assert_eq!(GroupDescriptor::gamma0(11).unwrap().signature.genus, 1);
        assert!(GroupDescriptor::gamma0(12).is_err());
    }

    #[test]
    fn catalog_ids_round_trip() {
        for id in ["psl2z", "gamma0:6", "gamma0plus:5", "compact:2", "compact:0:2,3,7"] {
            let g: GroupDescriptor = id.parse().unwrap();
            assert_eq!(g.id(), id);
        }
        assert!(matches!("gamma0plus:7".parse::<GroupDescriptor>(), Err(Error::UnknownGroup(_))));
        assert!(matches!("sl3z".parse::<GroupDescriptor>(), Err(Error::UnknownGroup(_))));
    }
}
