//! General Dirichlet series Σ cᵢ qᵢ^{−s} with real frequencies qᵢ > 0.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::numerics::{pairwise_sum, Estimate, C64};
use crate::{Error, Result};

/// Two frequencies are identified when they differ by at most this relative amount.
pub const FREQ_TOL: f64 = 1e-9;

/// Finite, sorted list of (frequency, coefficient) pairs, complete up to `cutoff`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "SeriesJson", try_from = "SeriesJson")]
pub struct GeneralDirichletSeries {
    terms: Vec<(f64, C64)>,
    cutoff: f64,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    q: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    /// `null` for exact (untruncated) series.
    cutoff: Option<f64>,
    terms: Vec<TermJson>,
}

impl From<GeneralDirichletSeries> for SeriesJson {
    fn from(d: GeneralDirichletSeries) -> Self {
        SeriesJson {
            cutoff: d.cutoff.is_finite().then_some(d.cutoff),
            terms: d.terms.iter().map(|(q, c)| TermJson { q: *q, re: c.re, im: c.im }).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for GeneralDirichletSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        if j.terms.iter().any(|t| !(t.q > 0.0)) {
            return Err(Error::InvalidInput("frequencies must be positive".into()));
        }
        Ok(Self::new(
            j.terms.into_iter().map(|t| (t.q, C64::new(t.re, t.im))),
            j.cutoff.unwrap_or(f64::INFINITY),
        ))
    }
}

fn same_freq(a: f64, b: f64) -> bool {
    (a - b).abs() <= FREQ_TOL * a.max(b)
}

impl GeneralDirichletSeries {
    /// Sorts, merges equal frequencies, drops zero coefficients and terms above `cutoff`.
    pub fn new(terms: impl IntoIterator<Item = (f64, C64)>, cutoff: f64) -> Self {
        let mut v: Vec<(f64, C64)> = terms.into_iter().collect();
        assert!(v.iter().all(|(q, _)| *q > 0.0), "frequencies must be positive");
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, C64)> = Vec::with_capacity(v.len());
        for (q, c) in v {
            match merged.last_mut() {
                Some(last) if same_freq(last.0, q) => last.1 += c,
                _ => merged.push((q, c)),
            }
        }
        let lim = cutoff * (1.0 + FREQ_TOL);
        merged.retain(|(q, c)| *q <= lim && (c.re != 0.0 || c.im != 0.0));
        Self { terms: merged, cutoff }
    }

    pub fn unit() -> Self {
        Self::new([(1.0, C64::new(1.0, 0.0))], f64::INFINITY)
    }

    pub fn zero(cutoff: f64) -> Self {
        Self { terms: Vec::new(), cutoff }
    }

    pub fn terms(&self) -> &[(f64, C64)] {
        &self.terms
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_unit(&self) -> bool {
        matches!(self.terms.first(), Some((q, c)) if same_freq(*q, 1.0) && (c - 1.0).norm() < 1e-12)
    }

    pub fn coefficient_at(&self, q: f64) -> C64 {
        self.find(q).map(|i| self.terms[i].1).unwrap_or_default()
    }

    fn find(&self, q: f64) -> Option<usize> {
        let i = self.terms.partition_point(|(x, _)| *x < q * (1.0 - FREQ_TOL));
        (i < self.terms.len() && same_freq(self.terms[i].0, q)).then_some(i)
    }

    /// Same terms, truncated at a lower cutoff.
    pub fn truncate(&self, cutoff: f64) -> Self {
        Self::new(self.terms.iter().copied(), cutoff.min(self.cutoff))
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.terms.iter().map(|(q, c)| (*q, c * k)), self.cutoff)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.terms.iter().chain(&o.terms).copied(), self.cutoff.min(o.cutoff))
    }

    /// Partial sum Σ cᵢ qᵢ^{−s} over the retained terms.
    pub fn sum(&self, s: C64) -> C64 {
        let v: Vec<C64> = self.terms.iter().map(|(q, c)| c * (-s * q.ln()).exp()).collect();
        pairwise_sum(&v)
    }

    /// Estimate of Σ_{q > cutoff} |c| q^{−σ}: the sum over the last retained
    /// decade (Q/10, Q] continued geometrically with the ratio to the decade
    /// before it.
    pub fn tail_estimate(&self, sigma: f64) -> f64 {
        if !self.cutoff.is_finite() {
            return 0.0;
        }
        let q = self.cutoff;
        let decade = |lo: f64, hi: f64| -> f64 {
            self.terms
                .iter()
                .filter(|(x, _)| *x > lo && *x <= hi * (1.0 + FREQ_TOL))
                .map(|(x, c)| c.norm() * (-sigma * x.ln()).exp())
                .sum()
        };
        let s1 = decade(q / 10.0, q);
        let s0 = decade(q / 100.0, q / 10.0);
        if s1 == 0.0 {
            return 0.0;
        }
        if s0 == 0.0 {
            return 10.0 * s1;
        }
        let rho = s1 / s0;
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            s1 * rho / (1.0 - rho)
        }
    }

    /// Value at `s` with tail estimate; fails when the tail exceeds `tol·(1 + |value|)`.
    pub fn evaluate(&self, s: C64, tol: f64) -> Result<Estimate> {
        let value = self.sum(s);
        let tail = self.tail_estimate(s.re);
        if !(tail <= tol * (1.0 + value.norm())) {
            return Err(Error::DivergentTail { tail, tol });
        }
        Ok(Estimate { value, error: tail })
    }

    /// Dirichlet convolution with frequencies q₁q₂ ≤ `q_max`.
    pub fn multiply(&self, o: &Self, q_max: f64) -> Self {
        let cutoff = q_max.min(self.cutoff * o.terms.first().map_or(f64::INFINITY, |t| t.0)).min(
            o.cutoff * self.terms.first().map_or(f64::INFINITY, |t| t.0),
        );
        let lim = cutoff * (1.0 + FREQ_TOL);
        let mut out = Vec::new();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &o.terms {
                let q = q1 * q2;
                if q > lim {
                    break;
                }
                out.push((q, c1 * c2));
            }
        }
        Self::new(out, cutoff)
    }

    /// Termwise derivative: cᵢ ↦ −cᵢ·log qᵢ.
    pub fn differentiate(&self) -> Self {
        Self::new(self.terms.iter().map(|(q, c)| (*q, -c * q.ln())), self.cutoff)
    }

    /// Frequencies > 1 of the multiplicative semigroup generated by this
    /// series' frequencies > 1, up to the cutoff.
    fn semigroup(&self) -> Vec<f64> {
        let gens: Vec<f64> = self.terms.iter().map(|t| t.0).filter(|q| !same_freq(*q, 1.0) && *q > 1.0).collect();
        let lim = self.cutoff * (1.0 + FREQ_TOL);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let contains = |seen: &BTreeSet<u64>, y: f64| {
            seen.range((y * (1.0 - FREQ_TOL)).to_bits()..=(y * (1.0 + FREQ_TOL)).to_bits()).next().is_some()
        };
        let mut queue: VecDeque<f64> = VecDeque::new();
        for &g in &gens {
            if !contains(&seen, g) {
                seen.insert(g.to_bits());
                queue.push_back(g);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = x * g;
                if y > lim {
                    break;
                }
                if !contains(&seen, y) {
                    seen.insert(y.to_bits());
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().map(f64::from_bits).collect()
    }

    /// B = H′/H for H with leading term (1, 1), solving H′ = H·B term by term.
    /// Frequencies of B lie in the semigroup generated by those of H.
    pub fn log_derivative(&self) -> Result<Self> {
        if !self.leading_unit() {
            return Err(Error::NonUnitLeading);
        }
        if self.terms.iter().any(|(q, _)| *q < 1.0) {
            return Err(Error::NonUnitLeading);
        }
        require_finite_cutoff(self)?;
        let freqs = self.semigroup();
        let rest = &self.terms[1..];
        let mut b: Vec<C64> = Vec::with_capacity(freqs.len());
        for (i, &q) in freqs.iter().enumerate() {
            let mut acc = -self.coefficient_at(q) * q.ln();
            for (q1, h1) in rest {
                if *q1 >= q * (1.0 - FREQ_TOL) {
                    break;
                }
                let r = q / q1;
                let j = freqs[..i].partition_point(|x| *x < r * (1.0 - FREQ_TOL));
                if j < i && same_freq(freqs[j], r) {
                    acc -= h1 * b[j];
                }
            }
            b.push(acc);
        }
        Ok(Self::new(freqs.into_iter().zip(b), self.cutoff))
    }

    /// Inverse of [`log_derivative`](Self::log_derivative): the series H with
    /// leading term (1, 1) and H′/H = `b`, up to the cutoff of `b`.
    pub fn from_log_derivative(b: &Self) -> Result<Self> {
        if b.terms.iter().any(|(q, _)| *q <= 1.0) {
            return Err(Error::InvalidInput("log-derivative frequencies must exceed 1".into()));
        }
        require_finite_cutoff(b)?;
        let freqs = b.semigroup();
        let mut h: Vec<C64> = Vec::with_capacity(freqs.len());
        for (i, &q) in freqs.iter().enumerate() {
            // −h(q)·log q = Σ_{q₁ q₂ = q} h(q₁) b(q₂), with h(1) = 1
            let mut acc = b.coefficient_at(q);
            for (j, &q1) in freqs[..i].iter().enumerate() {
                let bc = b.coefficient_at(q / q1);
                if bc != C64::default() {
                    acc += h[j] * bc;
                }
            }
            h.push(-acc / q.ln());
        }
        Ok(Self::new(
            std::iter::once((1.0, C64::new(1.0, 0.0))).chain(freqs.into_iter().zip(h)),
            b.cutoff,
        ))
    }
}

/// The semigroup closure is infinite without a cutoff.
fn require_finite_cutoff(d: &GeneralDirichletSeries) -> Result<()> {
    if d.cutoff.is_finite() || d.terms.iter().all(|(q, _)| *q <= 1.0) {
        Ok(())
    } else {
        Err(Error::InvalidInput("log-derivative needs a finite cutoff".into()))
    }
}

/// 𝒟_k from 𝒟₁ via 𝒟_{k+1} = 𝒟_k·𝒟₁ + 𝒟_k′.
pub fn dk_series(d1: &GeneralDirichletSeries, k: u32, q_max: f64) -> GeneralDirichletSeries {
    assert!(k >= 1, "k must be positive");
    let d1 = d1.truncate(q_max);
    let mut d = d1.clone();
    for _ in 1..k {
        d = d.multiply(&d1, q_max).add(&d.differentiate());
    }
    d
}
