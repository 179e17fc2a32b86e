//! Riemann and Hurwitz zeta by Euler–Maclaurin.

use super::{bernoulli, cpow, gamma::gamma, log2_abs, pi, to_c64, Complex, Float};
use crate::error::{Error, Result};
use rug::Integer;

fn em_attempt(s: &Complex, a: &Complex, n: u64, wp: u32) -> Option<Complex> {
    let neg_s = Complex::with_val(wp, -s);
    let mut sum = Complex::new(wp);
    for j in 0..n {
        sum += cpow(&Complex::with_val(wp, a + j), &neg_s, wp);
    }
    let big_a = Complex::with_val(wp, a + n);
    let a_ms = cpow(&big_a, &neg_s, wp);
    let s1 = Complex::with_val(wp, s - 1u32);
    sum += Complex::with_val(wp, &a_ms * &big_a) / &s1;
    sum += Complex::with_val(wp, &a_ms / 2u32);
    let inv_a = Complex::with_val(wp, big_a.recip_ref());
    let inv_a2 = Complex::with_val(wp, inv_a.square_ref());
    let mut apow = a_ms * &inv_a;
    let mut poch = s.clone();
    let mut fact = Integer::from(2);
    let mut prev = f64::INFINITY;
    for j in 1..4000u64 {
        let b = Float::with_val(wp, &bernoulli(2 * j as usize)) / Float::with_val(wp, &fact);
        let term = Complex::with_val(wp, &poch * &apow) * b;
        let t = log2_abs(&term);
        sum += &term;
        if t < log2_abs(&sum) - wp as f64 || term.real().is_zero() && term.imag().is_zero() {
            return Some(sum);
        }
        if t > prev {
            return None;
        }
        prev = t;
        let k = 2 * j;
        poch *= Complex::with_val(wp, s + (k - 1));
        poch *= Complex::with_val(wp, s + k);
        apow *= &inv_a2;
        fact *= (k + 1) * (k + 2);
    }
    None
}

/// ζ(s,a) = Σ_{n≥0} (n+a)^{-s}, with a off the non-positive real axis.
pub fn hurwitz_zeta(s: &Complex, a: &Complex, prec: u32) -> Result<Complex> {
    let sc = to_c64(s);
    if (sc - 1.0).norm() < 2f64.powi(-(prec as i32) / 2) {
        return Err(Error::PoleAtOne);
    }
    let ac = to_c64(a);
    if ac.im == 0.0 && ac.re <= 0.0 {
        return Err(Error::Domain("Hurwitz parameter on the non-positive axis".into()));
    }
    let extra = ((sc - 1.0).norm().recip().log2().max(0.0)) as u32;
    let wp = prec + 24 + extra;
    let mut n = (0.5 * sc.norm() + 0.12 * wp as f64).ceil() as u64 + 8;
    let sw = Complex::with_val(wp, s);
    let aw = Complex::with_val(wp, a);
    for _ in 0..6 {
        if let Some(v) = em_attempt(&sw, &aw, n, wp) {
            return Ok(Complex::with_val(prec, v));
        }
        n *= 2;
    }
    Err(Error::NonConvergence("Euler–Maclaurin zeta".into()))
}

/// Riemann ζ(s) on ℂ minus the pole.
pub fn zeta(s: &Complex, prec: u32) -> Result<Complex> {
    let sc = to_c64(s);
    if (sc - 1.0).norm() < 2f64.powi(-(prec as i32) / 2) {
        return Err(Error::PoleAtOne);
    }
    if sc.re < -1.0 {
        // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
        let wp = prec + 32;
        let sw = Complex::with_val(wp, s);
        let one_minus = Complex::with_val(wp, 1u32 - &sw);
        let z = zeta(&one_minus, wp)?;
        let g = gamma(&one_minus, wp)?;
        let two = Complex::with_val(wp, 2u32);
        let p = super::creal(wp, &pi(wp));
        let sm1 = Complex::with_val(wp, &sw - 1u32);
        let sn = Complex::with_val(wp, &sw * pi(wp)) / 2u32;
        let r = cpow(&two, &sw, wp) * cpow(&p, &sm1, wp) * sn.sin() * g * z;
        return Ok(Complex::with_val(prec, r));
    }
    hurwitz_zeta(s, &Complex::with_val(prec, 1u32), prec)
}

/// θ(s) = π^{-s} Γ(s) ζ(2s), evaluated on Re s >= 1/4 via θ(s) = θ(1/2 - s).
pub fn theta(s: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 16;
    let mut sw = Complex::with_val(wp, s);
    if *sw.real() < 0.25 {
        sw = Complex::with_val(wp, 0.5 - &sw);
    }
    let p = super::creal(wp, &pi(wp));
    let ms = Complex::with_val(wp, -&sw);
    let g = gamma(&sw, wp)?;
    let z = zeta(&Complex::with_val(wp, &sw * 2u32), wp)?;
    Ok(Complex::with_val(prec, cpow(&p, &ms, wp) * g * z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::cnum;

    #[test]
    fn classical_values() {
        let p = 200;
        let z2 = zeta(&cnum(p, 2.0, 0.0), p).unwrap();
        let pi2 = Float::with_val(p, pi(p).square_ref()) / 6u32;
        let d = Float::with_val(p, z2.real() - &pi2);
        assert!(d.abs() < 1e-58);
        let z0 = zeta(&cnum(p, 0.0, 0.0), p).unwrap();
        assert!((to_c64(&z0) - num_complex::Complex64::new(-0.5, 0.0)).norm() < 1e-50);
        assert_eq!(zeta(&cnum(p, 1.0, 0.0), p), Err(Error::PoleAtOne));
        // Trivial zero and a value from the reflected branch.
        let z = zeta(&cnum(p, -4.0, 0.0), p).unwrap();
        assert!(to_c64(&z).norm() < 1e-50);
        let z = zeta(&cnum(p, -3.0, 0.0), p).unwrap();
        assert!((to_c64(&z).re - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_half() {
        // ζ(s,1/2) = (2^s - 1) ζ(s)
        let p = 160;
        let s = cnum(p, 3.5, -2.0);
        let h = hurwitz_zeta(&s, &cnum(p, 0.5, 0.0), p).unwrap();
        let two = cnum(p, 2.0, 0.0);
        let r = (cpow(&two, &s, p) - 1u32) * zeta(&s, p).unwrap();
        assert!(log2_abs(&Complex::with_val(p, &h - &r)) < -140.0);
    }
}
