//! Double-precision kernels for large truncated group sums.
//!
//! Group sums carry truncation errors far above 2^-53, so their inner loops run
//! in f64; every constant is prepared at high precision first.

use super::{bernoulli, from_c64, gamma::gamma, to_c64, two_pi, Complex, Float};
use crate::error::Result;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Principal power with arg(b) in (-π, π]; a zero imaginary part counts as +0.
pub fn cpow64(b: Complex64, e: Complex64) -> Complex64 {
    let b = if b.im == 0.0 { Complex64::new(b.re, 0.0) } else { b };
    if b.re == 0.0 && b.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (b.ln() * e).exp()
}

/// Euler–Maclaurin coefficients B_{2j}/(2j)! as f64.
pub(crate) fn em_coeffs() -> Vec<f64> {
    let mut out = Vec::new();
    let mut fact = rug::Integer::from(1);
    for j in 1..=30u32 {
        fact *= (2 * j - 1) * (2 * j);
        let b = bernoulli(2 * j as usize) / rug::Rational::from(fact.clone());
        out.push(b.to_f64());
    }
    out
}

/// ζ(s,a) in double precision for a off the non-positive axis.
pub fn hurwitz64(s: Complex64, a: Complex64, em: &[f64]) -> Complex64 {
    let n = (s.norm() + 24.0).ceil() as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        sum += cpow64(a + j as f64, -s);
    }
    let big = a + n as f64;
    let a_ms = cpow64(big, -s);
    sum += a_ms * big / (s - 1.0) + a_ms * 0.5;
    let inv2 = 1.0 / (big * big);
    let mut apow = a_ms / big;
    let mut poch = s;
    for (j, c) in em.iter().enumerate() {
        let term = poch * apow * *c;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        let k = 2.0 * (j as f64 + 1.0);
        poch *= (s + (k - 1.0)) * (s + k);
        apow *= inv2;
    }
    sum
}

/// Σ_{n∈ℤ}(τ+n)^{-s} for a fixed exponent s, in double precision.
#[derive(Clone, Debug)]
pub struct Lip64 {
    pub s: Complex64,
    pre: Complex64,
    rot: Complex64,
    em: Vec<f64>,
}

impl Lip64 {
    pub fn new(s: &Complex) -> Result<Self> {
        let p = 96;
        let sw = Complex::with_val(p, s);
        let ipi2 = Complex::with_val(p, (0, 1)) * super::pi(p) / 2u32;
        let pre = (Complex::with_val(p, -&sw) * ipi2).exp()
            * super::rpow(&two_pi(p), &sw, p)
            / gamma(&sw, p)?;
        let sc = to_c64(s);
        Ok(Lip64 {
            s: sc,
            pre: to_c64(&pre),
            rot: (Complex64::new(0.0, -PI) * sc).exp(),
            em: em_coeffs(),
        })
    }

    pub fn eval(&self, tau: Complex64) -> Complex64 {
        let x = tau.re - tau.re.floor();
        let t = Complex64::new(x, tau.im);
        if tau.im >= 0.15 {
            let q = (Complex64::new(0.0, 2.0 * PI) * t).exp();
            let qa = q.norm();
            let sm1 = self.s - 1.0;
            let mut qm = q;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut m = 1.0f64;
            loop {
                let term = cpow64(Complex64::new(m, 0.0), sm1) * qm;
                sum += term;
                if m * 2.0 * PI * tau.im > self.s.re && term.norm() < 1e-18 * sum.norm() {
                    break;
                }
                if m > 4000.0 {
                    break;
                }
                qm *= q;
                if qa == 0.0 {
                    break;
                }
                m += 1.0;
            }
            self.pre * sum
        } else {
            hurwitz64(self.s, t, &self.em) + self.rot * hurwitz64(self.s, 1.0 - t, &self.em)
        }
    }
}

/// Promote an f64 result to an HP value for reporting.
pub fn promote(z: Complex64, prec: u32) -> Complex {
    from_c64(prec, z)
}

pub fn float_f64(x: &Float) -> f64 {
    x.to_f64()
}
