//! Overflow-safe trigonometric helpers for large imaginary parts.

use super::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// tan z, stable for any imaginary part.
pub fn tan(z: C64) -> C64 {
    if z.im >= 0.0 {
        let e = (2.0 * I * z).exp();
        -I * (e - 1.0) / (e + 1.0)
    } else {
        let e = (-2.0 * I * z).exp();
        -I * (1.0 - e) / (1.0 + e)
    }
}

/// 1/sin z, stable for any imaginary part.
pub fn csc(z: C64) -> C64 {
    if z.im >= 0.0 {
        let e = (I * z).exp();
        2.0 * I * e / (e * e - 1.0)
    } else {
        let e = (-I * z).exp();
        2.0 * I * e / (1.0 - e * e)
    }
}

/// A logarithm of sin z (branch unspecified), finite where |sin z| would overflow.
pub fn log_sin(z: C64) -> C64 {
    if z.im.abs() < 20.0 {
        z.sin().ln()
    } else if z.im > 0.0 {
        -I * z + (((2.0 * I * z).exp() - 1.0) / (2.0 * I)).ln()
    } else {
        I * z + ((1.0 - (-2.0 * I * z).exp()) / (2.0 * I)).ln()
    }
}

/// cos(αw)/cos(βw) for |α| ≤ β, stable for large |Im w|.
pub fn cos_ratio(alpha: f64, beta: f64, w: C64) -> C64 {
    let s = if w.im >= 0.0 { 1.0 } else { -1.0 };
    let num = (I * alpha * w).exp() + (-I * alpha * w).exp();
    let scale = (s * I * beta * w).exp();
    num * scale / ((2.0 * s * I * beta * w).exp() + 1.0)
}

/// log(1 − z), accurate for tiny |z|.
pub fn ln_1m(z: C64) -> C64 {
    if z.norm() < 1e-3 {
        let mut term = z;
        let mut acc = C64::new(0.0, 0.0);
        for k in 1..=8 {
            acc -= term / k as f64;
            term *= z;
        }
        acc
    } else {
        (1.0 - z).ln()
    }
}
