//! Complex Γ, log Γ and the incomplete gamma functions.

use super::{bernoulli, cabs, cnum, creal, log2_abs, near_nonpositive_integer, pi, rpow, Complex, Float};
use crate::error::{Error, Result};

fn pole_check(s: &Complex, prec: u32) -> Result<()> {
    let r = 2f64.powi(-(prec as i32) / 2);
    if near_nonpositive_integer(s, r) {
        return Err(Error::PoleNear(format!("Γ at {}", super::to_c64(s))));
    }
    Ok(())
}

/// Stirling series for log Γ(w), valid once |w| is large and Re w > 0.
fn stirling(w: &Complex, wp: u32) -> Result<Complex> {
    let half_ln_2pi = Float::with_val(wp, super::two_pi(wp).ln()) / 2u32;
    let lw = Complex::with_val(wp, w.ln_ref());
    let wm = Complex::with_val(wp, w - 0.5f64);
    let mut sum = Complex::with_val(wp, &wm * &lw) - w + half_ln_2pi;
    let inv = Complex::with_val(wp, w.recip_ref());
    let inv2 = Complex::with_val(wp, inv.square_ref());
    let mut pw = inv;
    let target = log2_abs(&sum).max(0.0) - wp as f64;
    let mut prev = f64::INFINITY;
    for j in 1..2000usize {
        let b = Float::with_val(wp, &bernoulli(2 * j));
        let den = (2 * j * (2 * j - 1)) as u64;
        let term = Complex::with_val(wp, &pw * &b) / den;
        let t = log2_abs(&term);
        sum += &term;
        if t < target {
            return Ok(sum);
        }
        if t > prev + 1.0 {
            break;
        }
        prev = t;
        pw *= &inv2;
    }
    Err(Error::NonConvergence("Stirling series diverged".into()))
}

/// Shift count so that |z + n| clears the Stirling radius.
fn shift_for(z: &Complex, wp: u32) -> u64 {
    let r = 0.3 * wp as f64 + 8.0;
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    let need = (r * r - im * im).max(0.0).sqrt() - re;
    need.max(0.0).ceil() as u64
}

/// A logarithm of Γ(z): the analytic branch for Re z >= 1/2, principal pieces otherwise.
pub fn log_gamma(z: &Complex, prec: u32) -> Result<Complex> {
    pole_check(z, prec)?;
    let wp = prec + 32;
    let z = Complex::with_val(wp, z);
    if z.real().to_f64() < 0.5 {
        let pz = Complex::with_val(wp, &z * pi(wp));
        let ls = pz.sin().ln();
        let one_minus = Complex::with_val(wp, 1u32 - &z);
        let lg = log_gamma(&one_minus, wp)?;
        let lp = Float::with_val(wp, pi(wp).ln());
        return Ok(Complex::with_val(prec, lp - ls - lg));
    }
    let n = shift_for(&z, wp);
    let mut acc = stirling(&Complex::with_val(wp, &z + n), wp)?;
    for j in 0..n {
        acc -= Complex::with_val(wp, &z + j).ln();
    }
    Ok(Complex::with_val(prec, acc))
}

/// Γ(z) on ℂ minus the poles.
pub fn gamma(z: &Complex, prec: u32) -> Result<Complex> {
    pole_check(z, prec)?;
    let wp = prec + 32;
    if z.imag().is_zero() {
        let g = Float::with_val(wp, z.real().gamma_ref());
        return Ok(creal(prec, &g));
    }
    let z = Complex::with_val(wp, z);
    if z.real().to_f64() < 0.5 {
        let pz = Complex::with_val(wp, &z * pi(wp));
        let one_minus = Complex::with_val(wp, 1u32 - &z);
        let g = gamma(&one_minus, wp)?;
        let den = pz.sin() * g;
        return Ok(Complex::with_val(prec, pi(wp) / den));
    }
    let n = shift_for(&z, wp);
    let l = stirling(&Complex::with_val(wp, &z + n), wp)?;
    let mut prod = Complex::with_val(wp, 1u32);
    for j in 0..n {
        prod *= Complex::with_val(wp, &z + j);
    }
    Ok(Complex::with_val(prec, l.exp() / prod))
}

/// Γ of a real argument as a real number.
pub fn gamma_real(x: &Float, prec: u32) -> Float {
    Float::with_val(prec, x.gamma_ref())
}

fn check_x(x: &Float) -> Result<()> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain("incomplete gamma needs x > 0".into()));
    }
    Ok(())
}

/// Power series Σ x^n / (s)_{n+1}; γ(s,x) = x^s e^{-x} times this.
fn lower_series(s: &Complex, x: &Float, wp: u32) -> Result<Complex> {
    let mut t = Complex::with_val(wp, s.recip_ref());
    let mut sum = t.clone();
    let xf = x.to_f64();
    for n in 1..1_000_000u64 {
        t *= x;
        t /= Complex::with_val(wp, s + n);
        sum += &t;
        if n as f64 > xf && log2_abs(&t) < log2_abs(&sum) - wp as f64 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence("lower incomplete gamma series".into()))
}

fn prefactor(s: &Complex, x: &Float, wp: u32) -> Complex {
    let e = Float::with_val(wp, -x).exp();
    rpow(x, s, wp) * e
}

/// Legendre continued fraction for Γ(s,x) by the modified Lentz method.
fn upper_cf(s: &Complex, x: &Float, wp: u32) -> Result<Complex> {
    let xf = x.to_f64();
    let bits = wp as f64 * std::f64::consts::LN_2;
    let cap = (3.0 * bits * bits / (4.0 * xf.max(1e-3))) as u64 + 2000;
    let tiny = Float::with_val(wp, 1u32) >> (2 * wp);
    let fix = |v: &mut Complex| {
        if cabs(v) < tiny {
            *v = Complex::with_val(wp, (&tiny, 0u32));
        }
    };
    let mut b = Complex::with_val(wp, x + Complex::with_val(wp, 1u32 - s));
    let mut c = Complex::with_val(wp, (tiny.clone().recip(), 0u32));
    let mut d = b.clone();
    fix(&mut d);
    d.recip_mut();
    let mut h = d.clone();
    let eps = -(wp as f64) + 2.0;
    for i in 1..cap {
        let an = Complex::with_val(wp, Complex::with_val(wp, i - s) * i) * -1i32;
        b += 2u32;
        d = Complex::with_val(wp, &an * &d) + &b;
        fix(&mut d);
        c = Complex::with_val(wp, &an / &c) + &b;
        fix(&mut c);
        d.recip_mut();
        let del = Complex::with_val(wp, &d * &c);
        h *= &del;
        if log2_abs(&Complex::with_val(wp, &del - 1u32)) < eps {
            return Ok(prefactor(s, x, wp) * h);
        }
    }
    Err(Error::NonConvergence(format!(
        "incomplete gamma continued fraction at s={}, x={}",
        super::to_c64(s),
        xf
    )))
}

fn use_series(s: &Complex, x: &Float) -> bool {
    x.to_f64() < super::to_c64(s).norm() + 2.0 && !near_nonpositive_integer(s, 0.25)
}

/// Γ(s,x) = ∫_x^∞ t^{s-1} e^{-t} dt for x > 0.
pub fn inc_gamma_upper(s: &Complex, x: &Float, prec: u32) -> Result<Complex> {
    check_x(x)?;
    let mut wp = prec + 32 + (x.to_f64() * std::f64::consts::LOG2_E) as u32;
    if !use_series(s, x) {
        if x.to_f64() < 1.0 && near_nonpositive_integer(s, 0.25) {
            return upper_by_recurrence(s, x, prec);
        }
        let r = upper_cf(s, x, prec + 24)?;
        return Ok(Complex::with_val(prec, r));
    }
    for _ in 0..4 {
        let sw = Complex::with_val(wp, s);
        let xw = Float::with_val(wp, x);
        let g = gamma(&sw, wp)?;
        let low = prefactor(&sw, &xw, wp) * lower_series(&sw, &xw, wp)?;
        let r = Complex::with_val(wp, &g - &low);
        let lost = log2_abs(&g).max(log2_abs(&low)) - log2_abs(&r);
        if lost + (prec as f64) + 8.0 < wp as f64 {
            return Ok(Complex::with_val(prec, r));
        }
        wp = prec + 32 + lost.min(4.0 * prec as f64).ceil() as u32 + 16;
    }
    Err(Error::InsufficientPrecision("incomplete gamma cancellation".into()))
}

/// Near a pole with small x: raise s by n, then step down with
/// Γ(s,x) = (Γ(s+1,x) - x^s e^{-x}) / s.
fn upper_by_recurrence(s: &Complex, x: &Float, prec: u32) -> Result<Complex> {
    if near_nonpositive_integer(s, 2f64.powi(-(prec as i32) / 2)) {
        let r = upper_cf(s, x, prec + 24)?;
        return Ok(Complex::with_val(prec, r));
    }
    let n = (1.5 - s.real().to_f64()).ceil().max(1.0) as u64;
    let wp = prec + 64 + 8 * n as u32;
    let sw = Complex::with_val(wp, s);
    let xw = Float::with_val(wp, x);
    let mut g = inc_gamma_upper(&Complex::with_val(wp, &sw + n), &xw, wp)?;
    for j in (0..n).rev() {
        let sj = Complex::with_val(wp, &sw + j);
        g = (g - prefactor(&sj, &xw, wp)) / sj;
    }
    Ok(Complex::with_val(prec, g))
}

/// γ(s,x) = Γ(s) - Γ(s,x).
pub fn inc_gamma_lower(s: &Complex, x: &Float, prec: u32) -> Result<Complex> {
    check_x(x)?;
    let wp = prec + 32 + (x.to_f64() * std::f64::consts::LOG2_E) as u32;
    if use_series(s, x) || x.to_f64() < 1.0 {
        let sw = Complex::with_val(wp, s);
        let xw = Float::with_val(wp, x);
        let r = prefactor(&sw, &xw, wp) * lower_series(&sw, &xw, wp)?;
        return Ok(Complex::with_val(prec, r));
    }
    let g = gamma(s, wp)?;
    let u = inc_gamma_upper(s, x, wp)?;
    Ok(Complex::with_val(prec, g - u))
}

/// Convenience for real arguments given as f64.
pub fn gamma_f(prec: u32, re: f64, im: f64) -> Result<Complex> {
    gamma(&cnum(prec, re, im), prec)
}
