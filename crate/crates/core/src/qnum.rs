//! q-numbers `[x] = sin(xs)/sin(s)` for `q = exp(is)`, their complex and
//! hyperbolic variants.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SINGULAR_TOL: f64 = 1e-12;

/// The deformation angle `s` with `q = exp(is)` and cached trigonometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deformation {
    s: f64,
    sin_s: f64,
    cos_s: f64,
    eta_sq: f64,
}

impl Deformation {
    /// Rejects `s` within 1e-12 of a multiple of pi, where `sin s` vanishes.
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::SingularDeformation { s });
        }
        let k = (s / std::f64::consts::PI).round();
        if (s - k * std::f64::consts::PI).abs() < SINGULAR_TOL {
            return Err(Error::SingularDeformation { s });
        }
        let (sin_s, cos_s) = s.sin_cos();
        Ok(Self {
            s,
            sin_s,
            cos_s,
            eta_sq: -4.0 * sin_s * sin_s,
        })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn sin_s(&self) -> f64 {
        self.sin_s
    }

    pub fn cos_s(&self) -> f64 {
        self.cos_s
    }

    /// `eta^2` with `eta = 2i sin s`.
    pub fn eta_sq(&self) -> f64 {
        self.eta_sq
    }

    pub fn q(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.s)
    }

    /// `[x]`.
    pub fn q_num(&self, x: f64) -> f64 {
        (x * self.s).sin() / self.sin_s
    }

    /// `[2]/2 = cos s`.
    pub fn half_q2(&self) -> f64 {
        self.cos_s
    }

    /// `s / pi` as a reduced fraction `p/l` if one with `l <= max_den`
    /// matches to `tol`.
    pub fn rational_over_pi(&self, max_den: i64, tol: f64) -> Option<(i64, i64)> {
        rational_approx(self.s / std::f64::consts::PI, max_den, tol)
    }

    /// Rationality test used for root-of-unity detection: denominators up to
    /// 64, tolerance 1e-9.
    pub fn root_of_unity(&self) -> Option<(i64, i64)> {
        self.rational_over_pi(64, 1e-9)
    }
}

/// Best rational approximation by continued fractions with bounded
/// denominator.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some((h1, k1));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QKind {
    Trigonometric,
    Hyperbolic,
}

/// A q-number together with its undeformed argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QValue {
    pub value: Complex64,
    pub x: Complex64,
    pub kind: QKind,
}

impl QValue {
    pub fn trig(x: f64, d: &Deformation) -> Self {
        Self {
            value: Complex64::new(qnumber(x, d), 0.0),
            x: Complex64::new(x, 0.0),
            kind: QKind::Trigonometric,
        }
    }

    pub fn trig_complex(x: Complex64, d: &Deformation) -> Self {
        Self {
            value: qnumber_complex(x, d),
            x,
            kind: QKind::Trigonometric,
        }
    }

    pub fn hyperbolic(x: f64, t: f64) -> Result<Self> {
        Ok(Self {
            value: Complex64::new(qnumber_hyperbolic(x, t)?, 0.0),
            x: Complex64::new(x, 0.0),
            kind: QKind::Hyperbolic,
        })
    }
}

pub fn qnumber(x: f64, d: &Deformation) -> f64 {
    d.q_num(x)
}

pub fn qnumber_complex(x: Complex64, d: &Deformation) -> Complex64 {
    (x * d.s).sin() / d.sin_s
}

/// `sinh(xt)/sinh(t)`.
pub fn qnumber_hyperbolic(x: f64, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::ZeroHyperbolic { t });
    }
    if t.abs() < 1e-6 {
        // series keeps the small-t limit accurate
        let t2 = t * t;
        return Ok(x * (1.0 + (x * x - 1.0) * t2 / 6.0));
    }
    Ok((x * t).sinh() / t.sinh())
}

/// `[2m]` for each `m`.
pub fn bracket_sequence(m_values: &[f64], d: &Deformation) -> Vec<f64> {
    m_values.iter().map(|&m| d.q_num(2.0 * m)).collect()
}

/// Residuals of the two-term decomposition of `[alpha + i beta]` into real
/// and hyperbolic brackets, measured against the complex sine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionCheck {
    pub exact: Complex64,
    /// The decomposition read with `1 - [2]_{e^s}^2/4` under the first root.
    pub literal: Complex64,
    /// The same with the sign under the first root flipped, so that it
    /// becomes `cosh(beta s)`.
    pub corrected: Complex64,
    pub literal_residual: f64,
    pub corrected_residual: f64,
}

pub fn decomposition_check(alpha: f64, beta: f64, d: &Deformation) -> DecompositionCheck {
    let s = d.s;
    let exact = qnumber_complex(Complex64::new(alpha, beta), d);
    let qa = d.q_num(alpha);
    // [beta]_{e^s}, [2]_{e^s}, [i]
    let qb_h = if s.abs() > 0.0 { (beta * s).sinh() / s.sinh() } else { beta };
    let q2_h = 2.0 * s.cosh();
    let q2 = d.q_num(2.0);
    let qi = Complex64::new(0.0, s.sinh() / d.sin_s);
    let second = qi * qb_h * Complex64::new(1.0 - qa * qa * (1.0 - q2 * q2 / 4.0), 0.0).sqrt();
    let lit_rad = Complex64::new(1.0 + qb_h * qb_h * (1.0 - q2_h * q2_h / 4.0), 0.0);
    let cor_rad = Complex64::new(1.0 + qb_h * qb_h * (q2_h * q2_h / 4.0 - 1.0), 0.0);
    // the second root is |cos(alpha s)|; restore the sign of cos(alpha s)
    let sign = if (alpha * s).cos() < 0.0 { -1.0 } else { 1.0 };
    let literal = qa * lit_rad.sqrt() + sign * second;
    let corrected = qa * cor_rad.sqrt() + sign * second;
    DecompositionCheck {
        exact,
        literal,
        corrected,
        literal_residual: (literal - exact).norm(),
        corrected_residual: (corrected - exact).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn d(s: f64) -> Deformation {
        Deformation::new(s).unwrap()
    }

    #[test]
    fn rejects_multiples_of_pi() {
        assert!(Deformation::new(0.0).is_err());
        assert!(Deformation::new(PI).is_err());
        assert!(Deformation::new(-2.0 * PI + 1e-13).is_err());
        assert!(Deformation::new(1e-8).is_ok());
    }

    #[test]
    fn eta_sq_from_sine() {
        let dd = d(0.7);
        assert_eq!(dd.eta_sq(), -4.0 * dd.sin_s() * dd.sin_s());
    }

    #[test]
    fn small_values() {
        assert!((qnumber(1.0, &d(0.4)) - 1.0).abs() < 1e-15);
        assert!(qnumber(2.0, &d(PI / 2.0)).abs() < 1e-15);
        assert!((qnumber(2.0, &d(PI / 3.0)) - 1.0).abs() < 1e-15);
        assert!((qnumber(0.5, &d(1e-8)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complex_values() {
        let dd = d(1.0);
        let v = qnumber_complex(Complex64::new(0.0, 1.0), &dd);
        assert!((v - Complex64::new(0.0, 1f64.sinh() / 1f64.sin())).norm() < 1e-14);
        let v = qnumber_complex(Complex64::new(0.8, 0.0), &dd);
        assert!((v.re - qnumber(0.8, &dd)).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn continuous_series_modulus() {
        let s = 1.1;
        let dd = d(s);
        for k in -2..3 {
            for &sigma in &[0.0, 0.3, 1.7] {
                let x = Complex64::new(PI / s * (k as f64 + 0.5), sigma);
                let v = qnumber_complex(x, &dd);
                let want = (s * sigma).cosh().powi(2) / dd.sin_s().powi(2);
                assert!((v.norm_sqr() - want).abs() < 1e-10 * want);
            }
        }
    }

    #[test]
    fn hyperbolic_values() {
        assert_eq!(qnumber_hyperbolic(1.0, 0.3).unwrap(), 1.0);
        assert!((qnumber_hyperbolic(2.0, 2f64.ln()).unwrap() - 2.5).abs() < 1e-14);
        assert!((qnumber_hyperbolic(3.0, 1e-9).unwrap() - 3.0).abs() < 1e-12);
        assert!(qnumber_hyperbolic(3.0, 0.0).is_err());
    }

    #[test]
    fn bracket_limits() {
        let ms: Vec<f64> = (-5..=5).map(f64::from).collect();
        let near_pi = d(PI - 1e-9);
        for (m, v) in ms.iter().zip(bracket_sequence(&ms, &near_pi)) {
            assert!((v + 2.0 * m).abs() < 1e-5);
        }
        let half = d(PI / 2.0);
        for (m, v) in ms.iter().zip(bracket_sequence(&ms, &half)) {
            assert!(v.abs() < 1e-14, "m={m}");
        }
        let halves: Vec<f64> = ms.iter().map(|m| m + 0.5).collect();
        for v in bracket_sequence(&halves, &half) {
            assert!((v.abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn root_of_unity_period() {
        for k in 1..8 {
            let dd = d(PI / (k as f64 + 1.0));
            for m in -6..6 {
                let a = dd.q_num(2.0 * m as f64);
                let b = dd.q_num(2.0 * (m as f64 + k as f64 + 1.0));
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rationality() {
        assert_eq!(d(PI / 3.0).root_of_unity(), Some((1, 3)));
        assert_eq!(d(2.0 * PI / 7.0).root_of_unity(), Some((2, 7)));
        assert_eq!(d(1.0).root_of_unity(), None);
        assert_eq!(d(PI / 2.0).root_of_unity(), Some((1, 2)));
    }

    #[test]
    fn decomposition_residuals() {
        let dd = d(0.9);
        let chk = decomposition_check(0.7, 0.4, &dd);
        assert!(chk.corrected_residual < 1e-12);
        assert!(chk.literal_residual > 1e-3);
        let chk = decomposition_check(0.7, 0.0, &dd);
        assert!(chk.literal_residual < 1e-14);
    }
}
