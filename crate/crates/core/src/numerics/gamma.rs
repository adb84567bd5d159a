use super::{BERNOULLI_2K, C64};
use crate::{Error, Result};

const SHIFT_RE: f64 = 10.0;

fn check_pole(s: C64) -> Result<()> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::PoleAtNonPositiveInteger(s.re));
    }
    Ok(())
}

/// Principal branch of log Γ(s).
///
/// Shifts to Re s ≥ 10 via log Γ(s) = log Γ(s+n) − Σ log(s+k) and applies
/// Stirling's series there. Each log(s+k) is principal, which keeps the
/// result continuous off the negative real axis.
pub fn log_gamma(s: C64) -> Result<C64> {
    check_pole(s)?;
    let mut z = s;
    let mut shift = C64::new(0.0, 0.0);
    while z.re < SHIFT_RE {
        shift += z.ln();
        z += 1.0;
    }
    let half_log_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut acc = (z - 0.5) * z.ln() - z + half_log_2pi;
    let zinv = 1.0 / z;
    let zinv2 = zinv * zinv;
    let mut p = zinv;
    for (k, b) in BERNOULLI_2K.iter().take(10).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        acc += *b / (n * (n - 1.0)) * p;
        p *= zinv2;
    }
    Ok(acc - shift)
}

/// Γ′/Γ(s).
pub fn digamma(s: C64) -> Result<C64> {
    check_pole(s)?;
    let mut z = s;
    let mut shift = C64::new(0.0, 0.0);
    while z.re < SHIFT_RE {
        shift += 1.0 / z;
        z += 1.0;
    }
    let zinv = 1.0 / z;
    let zinv2 = zinv * zinv;
    let mut acc = z.ln() - 0.5 * zinv;
    let mut p = zinv2;
    for (k, b) in BERNOULLI_2K.iter().take(10).enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        acc -= *b / n * p;
        p *= zinv2;
    }
    Ok(acc - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn log_gamma_trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!((log_gamma(c(0.5, 0.0)).unwrap() - 0.5 * PI.ln()).norm() < 1e-14);
        assert!((log_gamma(c(5.0, 0.0)).unwrap() - 24f64.ln()).norm() < 1e-14);
    }

    #[test]
    fn log_gamma_poles() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(0.0)));
        assert!(log_gamma(c(-3.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn log_gamma_reflection_oracle() {
        // Γ(s)Γ(1−s) = π / sin(πs), checked on exponentials.
        for s in [c(0.3, 2.0), c(-2.7, 0.4), c(0.1, -15.0), c(-40.2, 3.0)] {
            let lhs = (log_gamma(s).unwrap() + log_gamma(1.0 - s).unwrap()).exp();
            let rhs = PI / (PI * s).sin();
            assert!((lhs - rhs).norm() <= 1e-11 * rhs.norm(), "{s}");
        }
    }

    #[test]
    fn log_gamma_stirling_large_imaginary() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 300.0;
        let lg = log_gamma(c(0.5, t)).unwrap();
        let expected = 0.5 * (PI.ln() - (PI * t - 2f64.ln()));
        assert!((lg.re - expected).abs() < 1e-10 * expected.abs());
    }

    #[test]
    fn log_gamma_branch_is_principal_on_real_axis() {
        let v = log_gamma(c(-0.5, 0.0)).unwrap();
        // Γ(−1/2) = −2√π; continuation from the upper half plane gives −iπ.
        assert!((v.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-14);
        assert!((v.im + PI).abs() < 1e-14);
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(c(1.0, 0.0)).unwrap() + EULER_GAMMA).norm() < 1e-14);
        let half = digamma(c(0.5, 0.0)).unwrap();
        assert!((half + EULER_GAMMA + 2.0 * 2f64.ln()).norm() < 1e-14);
        let d = digamma(c(3.5, 0.0)).unwrap() - digamma(c(2.5, 0.0)).unwrap();
        assert!((d - 0.4).norm() < 1e-14);
    }

    #[test]
    fn digamma_matches_difference_of_log_gamma() {
        let s = c(0.7, 4.0);
        let h = 1e-5;
        let fd = (log_gamma(s + h).unwrap() - log_gamma(s - h).unwrap()) / (2.0 * h);
        assert!((fd - digamma(s).unwrap()).norm() < 1e-8);
    }
}
