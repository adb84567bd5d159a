//! Selberg zeta function in the region of absolute convergence, its
//! logarithmic derivatives, the factors of the functional equation and the
//! Z̃ⱼ / X_{M,k} ladder.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::dseries::{dk_series, GeneralDirichletSeries};
use crate::groups::{modular_geodesic_census, psi_from_census, GeodesicClass, GroupDescriptor};
use crate::numerics::{
    cauchy_derivative, cos_ratio, csc, digamma, ln_1m, pairwise_sum, tan, EvalSettings, Estimate, C64,
};
use crate::scattering::{k_logderiv, ScatteringData};
use crate::surface::{surface_data, M0Source, SurfaceData, SurfaceOptions};
use crate::{Error, Result};

/// Agreement required between the full and half-cutoff 𝒟₁ when locating σ₀.
const SIGMA0_TOL: f64 = 1e-6;
const SIGMA0_STEP: f64 = 0.05;
const SIGMA0_MAX: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaOptions {
    /// Norm cutoff X of the geodesic census.
    pub census_cutoff: f64,
    /// Frequency cutoff Q of 𝒟₁; the effective cutoff is min(X, Q).
    pub series_cutoff: Option<f64>,
    pub surface: SurfaceOptions,
    pub settings: EvalSettings,
}

impl Default for ZetaOptions {
    fn default() -> Self {
        Self { census_cutoff: 1e4, series_cutoff: None, surface: SurfaceOptions::default(), settings: EvalSettings::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaContext {
    pub surface: SurfaceData,
    /// Sorted by norm.
    pub census: Vec<GeodesicClass>,
    pub census_cutoff: f64,
    pub settings: EvalSettings,
    /// 𝒟₁ = (ZH)′/(ZH) as a general Dirichlet series.
    pub d1: GeneralDirichletSeries,
    /// Empirical abscissa above which 𝒟₁ is cutoff-stable.
    pub sigma0: f64,
}

impl ZetaContext {
    /// Builds the context. A complete census is only available for PSL(2, ℤ).
    pub fn build(g: &GroupDescriptor, opts: &ZetaOptions) -> Result<Self> {
        opts.settings.validate()?;
        if !g.is_modular() {
            return Err(Error::UnsupportedGroup(format!("{g}: no geodesic census for this group")));
        }
        let surface = surface_data(g, &opts.surface)?;
        let census = modular_geodesic_census(opts.census_cutoff)?;
        Self::from_parts(surface, census, opts.census_cutoff, opts.series_cutoff, opts.settings.clone())
    }

    pub fn from_parts(
        surface: SurfaceData,
        census: Vec<GeodesicClass>,
        census_cutoff: f64,
        series_cutoff: Option<f64>,
        settings: EvalSettings,
    ) -> Result<Self> {
        let scat = surface
            .scattering
            .as_ref()
            .ok_or_else(|| Error::UnsupportedGroup(format!("{}: no scattering data", surface.group)))?;
        let q = series_cutoff.map_or(census_cutoff, |q| q.min(census_cutoff));
        let geo = GeneralDirichletSeries::new(
            census.iter().map(|c| (c.norm, C64::new(c.multiplicity as f64 * c.lambda(), 0.0))),
            census_cutoff,
        );
        let d1 = geo.truncate(q).add(&scat.b_series.truncate(q));
        let sigma0 = sigma0(&d1);
        Ok(Self { surface, census, census_cutoff, settings, d1, sigma0 })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.surface.group
    }

    pub fn scat(&self) -> &ScatteringData {
        self.surface.scattering.as_ref().expect("context always carries scattering data")
    }

    pub fn m0_source(&self) -> M0Source {
        self.surface.m0_source
    }

    /// log Z(s) = Σ_{P₀} Σ_{n≥0} log(1 − N(P₀)^{−(s+n)}), Re s > 1.
    ///
    /// The error is Σ_{N > X} N^{−σ} over primitive classes, approximated by
    /// X^{1−σ}/((σ−1) log X).
    pub fn selberg_log_z(&self, s: C64) -> Result<Estimate> {
        require_re_gt_one(s)?;
        let terms: Vec<C64> = self
            .census
            .iter()
            .filter(|c| c.primitive)
            .map(|c| {
                let ln_n = c.norm.ln();
                let mut acc = C64::new(0.0, 0.0);
                for n in 0.. {
                    let z = (-(s + n as f64) * ln_n).exp();
                    acc += ln_1m(z);
                    if z.norm() < 1e-18 * acc.norm().max(1e-300) {
                        break;
                    }
                }
                acc * c.multiplicity as f64
            })
            .collect();
        let value = pairwise_sum(&terms);
        let x = self.census_cutoff;
        let tail = x.powf(1.0 - s.re) / ((s.re - 1.0) * x.ln());
        self.check_tail(value, tail)
    }

    pub fn selberg_z(&self, s: C64) -> Result<Estimate> {
        let l = self.selberg_log_z(s)?;
        let v = l.value.exp();
        Ok(Estimate { value: v, error: v.norm() * l.error })
    }

    /// Z′/Z(s) = Σ_P Λ(P) N(P)^{−s} over all classes, with error X^{1−σ}/(σ−1).
    pub fn d_m(&self, s: C64) -> Result<Estimate> {
        require_re_gt_one(s)?;
        let value = d_m_of(&self.census, s);
        let x = self.census_cutoff;
        let tail = x.powf(1.0 - s.re) / (s.re - 1.0);
        self.check_tail(value, tail)
    }

    pub fn psi_m(&self, x: f64) -> Result<f64> {
        if x > self.census_cutoff {
            return Err(Error::CutoffTooSmall(format!("x = {x} exceeds the census cutoff {}", self.census_cutoff)));
        }
        Ok(psi_from_census(&self.census, x))
    }

    pub fn eta_logderiv(&self, s: C64) -> Result<C64> {
        eta_logderiv(self.group(), s)
    }

    pub fn f_m(&self, s: C64) -> Result<C64> {
        f_m(self.group(), s)
    }

    /// Z̃ⱼ(w) for Re w > 1; Z̃₀ = Z.
    pub fn z_tilde(&self, j: u32, w: C64) -> Result<C64> {
        require_re_gt_one(w)?;
        if j == 0 {
            return Ok(self.selberg_z(w)?.value);
        }
        let s = 1.0 - w;
        let mut num = (j - 1) as f64 * f_logderiv(s)? + self.eta_logderiv(s)? - k_logderiv(self.scat(), s)?;
        num -= self.d_m(w)?.value;
        for i in 1..j {
            num -= self.z_tilde_logderiv(i, w)?;
        }
        checked(num / self.f_m(s)?, s)
    }

    /// Z̃ᵢ′/Z̃ᵢ(w) by Cauchy differentiation on a disk inside Re > 1.
    fn z_tilde_logderiv(&self, i: u32, w: C64) -> Result<C64> {
        let r = self.settings.cauchy_radius.min(0.5 * (w.re - 1.0));
        let d = cauchy_derivative(|z| self.z_tilde(i, z), w, 1, r, &self.settings)?;
        Ok(d.value / self.z_tilde(i, w)?)
    }

    /// 𝒟_k over the context's frequency range.
    pub fn dk(&self, k: u32) -> GeneralDirichletSeries {
        dk_series(&self.d1, k, self.d1.cutoff())
    }

    /// (Z H)^{(k)}(s) = (Z H)(s)·𝒟_k(s), for Re s > σ₀.
    pub fn zh_and_derivatives(&self, k: u32, s: C64) -> Result<Estimate> {
        if s.re <= self.sigma0 {
            return Err(Error::DivergentTail { tail: f64::INFINITY, tol: self.settings.tail_tol });
        }
        let z = self.selberg_z(s)?;
        let h = self.scat().h.evaluate(s, self.settings.tail_tol)?;
        let zh = z.value * h.value;
        let zh_err = z.error * h.value.norm() + h.error * z.value.norm();
        if k == 0 {
            return Ok(Estimate { value: zh, error: zh_err });
        }
        let dk = self.dk(k).evaluate(s, self.settings.tail_tol)?;
        Ok(Estimate { value: zh * dk.value, error: zh_err * dk.value.norm() + zh.norm() * dk.error })
    }

    /// X_{M,k}(s) = A^s (Z H)^{(k)}(s)/a_k.
    pub fn x_mk(&self, k: u32, s: C64) -> Result<Estimate> {
        let inv = &self.surface.invariants;
        let ak = inv.a_k(k.max(1));
        if ak == 0.0 || k == 0 {
            return Err(Error::ZeroACoefficient);
        }
        let zh = self.zh_and_derivatives(k, s)?;
        let scale = (s * inv.log_a).exp() / ak;
        Ok(Estimate { value: zh.value * scale, error: zh.error * scale.norm() })
    }

    /// Re(−(Z H)′/(Z H)(σ + it)) for σ < 0, from the functional equation.
    pub fn nonvanishing_probe(&self, sigma: f64, t: f64) -> Result<f64> {
        if !(sigma < 0.0) {
            return Err(Error::InvalidInput(format!("nonvanishing probe needs σ < 0, got {sigma}")));
        }
        let s = C64::new(sigma, t);
        let v = -self.eta_logderiv(s)? + k_logderiv(self.scat(), s)? + self.d_m(1.0 - s)?.value;
        Ok(v.re)
    }

    fn check_tail(&self, value: C64, tail: f64) -> Result<Estimate> {
        let tol = self.settings.tail_tol;
        if !(tail <= tol * (1.0 + value.norm())) {
            return Err(Error::DivergentTail { tail, tol });
        }
        Ok(Estimate { value, error: tail })
    }
}

/// Σ mult·Λ(P)·N(P)^{−s} over a census.
pub fn d_m_of(census: &[GeodesicClass], s: C64) -> C64 {
    let terms: Vec<C64> =
        census.iter().map(|c| (-s * c.norm.ln()).exp() * (c.multiplicity as f64 * c.lambda())).collect();
    pairwise_sum(&terms)
}

fn require_re_gt_one(s: C64) -> Result<()> {
    if s.re > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("Re s must exceed 1, got {s}")))
    }
}

fn checked(v: C64, s: C64) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::PoleHit(format!("{s}")))
    }
}

/// Smallest σ on a grid where dropping the upper half of the frequencies
/// moves 𝒟₁(σ) by less than `SIGMA0_TOL` (relative).
fn sigma0(d1: &GeneralDirichletSeries) -> f64 {
    let half = 0.5 * d1.cutoff();
    let mut sigma = 1.0 + SIGMA0_STEP;
    while sigma < SIGMA0_MAX {
        let (mut upper, mut total) = (0.0, 0.0);
        for (q, c) in d1.terms() {
            let v = c.norm() * (-sigma * q.ln()).exp();
            total += v;
            if *q > half {
                upper += v;
            }
        }
        if upper <= SIGMA0_TOL * (1.0 + total) {
            return sigma;
        }
        sigma += SIGMA0_STEP;
    }
    SIGMA0_MAX
}

/// η′/η(s): volume, elliptic and parabolic contributions.
///
/// Every elliptic point of order m gives the m − 1 inconjugate rotations
/// with θ = kπ/m.
pub fn eta_logderiv(g: &GroupDescriptor, s: C64) -> Result<C64> {
    let vol = g.volume()?;
    let w = s - 0.5;
    let mut v = vol_term(vol, w)?;
    for &m in &g.signature.elliptic_orders {
        for k in 1..m {
            let theta = k as f64 * PI / m as f64;
            v -= PI / (m as f64 * theta.sin()) * cos_ratio(2.0 * theta - PI, PI, w);
        }
    }
    let n1 = g.n1() as f64;
    if n1 > 0.0 {
        let pole = |_| Error::PoleHit(format!("{s}"));
        v += 2.0 * n1 * LN_2 + n1 * (digamma(0.5 + s).map_err(pole)? + digamma(1.5 - s).map_err(pole)?);
    }
    checked(v, s)
}

/// vol·w·tan(πw), zero at w = 0; poles at real half-integers.
fn vol_term(vol: f64, w: C64) -> Result<C64> {
    if w.im == 0.0 && (w.re - 0.5).fract() == 0.0 {
        return Err(Error::PoleHit(format!("tan pole at {}", w + 0.5)));
    }
    if w.norm() == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(vol * w * tan(PI * w))
}

/// f(s) = vol·(1/2 − s)·tan(π(1/2 − s)).
pub fn f_m(g: &GroupDescriptor, s: C64) -> Result<C64> {
    checked(vol_term(g.volume()?, 0.5 - s)?, s)
}

/// f′/f(s) = −1/u − 2π csc(2πu), u = 1/2 − s; independent of the volume.
pub fn f_logderiv(s: C64) -> Result<C64> {
    let u = 0.5 - s;
    checked(-(1.0 / u) - 2.0 * PI * csc(2.0 * PI * u), s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Trichotomy;
    use std::sync::OnceLock;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ctx() -> &'static ZetaContext {
        static CTX: OnceLock<ZetaContext> = OnceLock::new();
        CTX.get_or_init(|| ZetaContext::build(&GroupDescriptor::modular(), &ZetaOptions::default()).unwrap())
    }

    fn st() -> EvalSettings {
        EvalSettings::default()
    }

    #[test]
    fn context_basics() {
        let z = ctx();
        assert!(z.census.windows(2).all(|w| w[0].norm <= w[1].norm));
        assert_eq!(z.surface.invariants.trichotomy, Trichotomy::ScatteringSmaller);
        assert!(z.sigma0 > 1.0 && z.sigma0 < 10.0, "σ₀ = {}", z.sigma0);
        let e = ZetaContext::build(&"gamma0plus:5".parse().unwrap(), &ZetaOptions::default()).unwrap_err();
        assert!(matches!(e, Error::UnsupportedGroup(_)));
    }

    #[test]
    fn log_z_far_right_is_first_term() {
        let z = ctx();
        let n0 = z.census[0].norm;
        let m0 = z.census[0].multiplicity as f64;
        let v = z.selberg_log_z(c(20.0, 0.0)).unwrap().value;
        // the n ≥ 1 factors of the same class add a geometric 1/(1 − 1/N₀)
        let bound = m0 * n0.powf(-20.0) / (1.0 - 1.0 / n0);
        // later classes are smaller by (N₀/N₁)^20 ≈ 10⁻⁶
        assert!(v.norm() <= bound * (1.0 + 1e-5));
        assert!((v.re + bound).abs() < 1e-5 * bound);
    }

    #[test]
    fn log_z_cutoff_stability() {
        let g = GroupDescriptor::modular();
        let big = ZetaContext::build(&g, &ZetaOptions { census_cutoff: 2e4, ..Default::default() }).unwrap();
        for s in [c(2.0, 0.0), c(2.0, 7.0), c(3.0, 0.0)] {
            let a = ctx().selberg_log_z(s).unwrap();
            let b = big.selberg_log_z(s).unwrap();
            assert!((a.value - b.value).norm() <= a.error, "s = {s}: {} vs {}", (a.value - b.value).norm(), a.error);
        }
        let a = ctx().selberg_log_z(c(3.0, 0.0)).unwrap().value;
        let b = big.selberg_log_z(c(3.0, 0.0)).unwrap().value;
        assert!((a - b).norm() < 1e-7);
    }

    #[test]
    fn d_m_is_derivative_of_log_z() {
        let z = ctx();
        let s = c(3.0, 0.0);
        let d = cauchy_derivative(|w| Ok(z.selberg_log_z(w)?.value), s, 1, 0.25, &st()).unwrap();
        assert!((d.value - z.d_m(s).unwrap().value).norm() < 1e-7);
    }

    #[test]
    fn d_m_leading_behavior_and_toy_census() {
        let z = ctx();
        let p = &z.census[0];
        let r = z.d_m(c(20.0, 0.0)).unwrap().value.re * p.norm.powf(20.0);
        assert!((r / (p.multiplicity as f64 * p.lambda()) - 1.0).abs() < 1e-3);
        let toy = GeodesicClass {
            trace_sq_scaled: 0.into(),
            norm: 4.0,
            length: 4f64.ln(),
            primitive: false,
            primitive_norm: 2.0,
            power: 2,
            multiplicity: 1,
        };
        let v = d_m_of(&[toy], c(1.0, 0.0));
        assert!((v.re - LN_2 * (4.0 / 3.0) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn psi_behaves() {
        let z = ctx();
        assert_eq!(z.psi_m(6.0).unwrap(), 0.0);
        let xs = [10.0, 100.0, 1e3, 5e3, 1e4];
        let v: Vec<f64> = xs.iter().map(|&x| z.psi_m(x).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert!(matches!(z.psi_m(2e4), Err(Error::CutoffTooSmall(_))));
    }

    #[test]
    fn eta_symmetry_and_centre() {
        let g = GroupDescriptor::modular();
        let s = c(0.3, 2.0);
        let a = eta_logderiv(&g, s).unwrap();
        let b = eta_logderiv(&g, 1.0 - s).unwrap();
        assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
        assert!(eta_logderiv(&g, c(0.5, 0.0)).unwrap().re.is_finite());
        let gc: GroupDescriptor = "compact:2".parse().unwrap();
        let vol = gc.volume().unwrap();
        let w = s - 0.5;
        assert!((eta_logderiv(&gc, s).unwrap() - vol * w * tan(PI * w)).norm() < 1e-12);
        for id in ["gamma0:6", "gamma0plus:5", "compact:1:2,3,7"] {
            let g: GroupDescriptor = id.parse().unwrap();
            let a = eta_logderiv(&g, s).unwrap();
            let b = eta_logderiv(&g, 1.0 - s).unwrap();
            assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()), "{id}");
        }
        assert!(matches!(eta_logderiv(&g, c(2.0, 0.0)), Err(Error::PoleHit(_))));
    }

    #[test]
    fn f_properties() {
        let g = GroupDescriptor::modular();
        assert_eq!(f_m(&g, c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        let s = c(0.2, 1.0);
        assert!((f_m(&g, s).unwrap() - f_m(&g, 1.0 - s).unwrap()).norm() < 1e-10);
        let vol = PI / 3.0;
        let r = f_m(&g, c(0.5, 50.0)).unwrap().norm() / (vol * 50.0);
        assert!((r - 1.0).abs() < 0.01);
        let s = c(0.8, 0.6);
        let d = cauchy_derivative(|z| f_m(&g, z), s, 1, 0.1, &st()).unwrap();
        assert!((d.value / f_m(&g, s).unwrap() - f_logderiv(s).unwrap()).norm() < 1e-9);
    }

    #[test]
    fn z_tilde_zero_is_z_and_one_decays() {
        let z = ctx();
        let s = c(1.5, 40.0);
        assert_eq!(z.z_tilde(0, s).unwrap(), z.selberg_z(s).unwrap().value);
        let dev: Vec<f64> = [40.0, 80.0, 160.0].iter().map(|&t| (z.z_tilde(1, c(1.5, t)).unwrap() - 1.0).norm()).collect();
        assert!(dev[0] > dev[1] && dev[1] > dev[2], "{dev:?}");
        assert!(dev[2] < 0.1, "{dev:?}");
        assert!(matches!(z.z_tilde(1, c(0.9, 3.0)), Err(Error::InvalidInput(_))));
    }

    /// (ZH)″/(ZH) = L² + L′ with L = η′/η − K′/K − D(1−s) must equal f²·Z̃₁Z̃₂(1−s).
    #[test]
    fn z_tilde_two_matches_second_log_derivative() {
        let z = ctx();
        let s = c(-1.3, 5.0);
        let l = |u: C64| -> Result<C64> {
            Ok(z.eta_logderiv(u)? - k_logderiv(z.scat(), u)? - z.d_m(1.0 - u)?.value)
        };
        let l1 = cauchy_derivative(l, s, 1, 0.2, &st()).unwrap().value;
        let direct = l(s).unwrap().powi(2) + l1;
        let f = z.f_m(s).unwrap();
        let first = f * z.z_tilde(1, 1.0 - s).unwrap();
        assert!((first - l(s).unwrap()).norm() < 1e-10 * first.norm());
        let recon = f * f * z.z_tilde(1, 1.0 - s).unwrap() * z.z_tilde(2, 1.0 - s).unwrap();
        assert!((recon - direct).norm() < 1e-5 * direct.norm(), "{recon} vs {direct}");
    }

    #[test]
    fn zh_derivatives_match_cauchy() {
        let z = ctx();
        let zh = |w: C64| Ok(z.zh_and_derivatives(0, w)?.value);
        assert!((zh(c(20.0, 0.0)).unwrap() - 1.0).norm() < 1e-9);
        let s = c(6.0, 0.0);
        let d1 = cauchy_derivative(zh, s, 1, 0.25, &st()).unwrap().value;
        assert!((z.zh_and_derivatives(1, s).unwrap().value - d1).norm() < 1e-8);
        let s = c(8.0, 0.0);
        let d3 = cauchy_derivative(zh, s, 3, 0.25, &st()).unwrap().value;
        assert!((z.zh_and_derivatives(3, s).unwrap().value - d3).norm() < 1e-6);
    }

    #[test]
    fn x_mk_tends_to_one() {
        let z = ctx();
        assert!((z.x_mk(1, c(20.0, 0.0)).unwrap().value - 1.0).norm() < 0.01);
        assert!((z.x_mk(2, c(25.0, 0.0)).unwrap().value - 1.0).norm() < 0.01);
        for k in 1..=3 {
            let d15 = (z.x_mk(k, c(15.0, 0.0)).unwrap().value - 1.0).norm();
            let d25 = (z.x_mk(k, c(25.0, 0.0)).unwrap().value - 1.0).norm();
            assert!(d25 < d15, "k = {k}");
        }
        assert!(matches!(z.x_mk(0, c(20.0, 0.0)), Err(Error::ZeroACoefficient)));
    }

    #[test]
    fn nonvanishing_probe_grows_like_volume_times_t() {
        let z = ctx();
        let vol = PI / 3.0;
        let p = z.nonvanishing_probe(-1.0, 50.0).unwrap();
        assert!(p > 0.0 && (p / (vol * 50.0) - 1.0).abs() < 0.2, "{p}");
        assert!((z.nonvanishing_probe(-1.0, -50.0).unwrap() - p).abs() < 1e-9 * p.abs());
        let r: Vec<f64> =
            [50.0, 100.0, 200.0].iter().map(|&t| (z.nonvanishing_probe(-1.0, t).unwrap() / t - vol).abs()).collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn schwarz_reflection() {
        let z = ctx();
        for s in [c(2.5, 3.0), c(4.0, -11.0)] {
            let a = z.selberg_log_z(s).unwrap().value;
            let b = z.selberg_log_z(s.conj()).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-13);
            let a = z.zh_and_derivatives(2, s + 4.0).unwrap().value;
            let b = z.zh_and_derivatives(2, (s + 4.0).conj()).unwrap().value;
            assert!((a - b.conj()).norm() < 1e-12 * (1.0 + a.norm()));
            let a = z.eta_logderiv(s - 3.0).unwrap();
            let b = z.eta_logderiv((s - 3.0).conj()).unwrap();
            assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()));
        }
    }
}
