//! Modified Bessel K_ν(x) by the trapezoid rule on ∫_0^∞ e^{-x cosh t} cosh(νt) dt.

use super::{to_c64, Complex, Float};
use crate::error::{Error, Result};
use std::f64::consts::{LN_2, PI};

/// Trapezoid nodes for one order ν, reusable across arguments x >= x_min.
#[derive(Clone, Debug)]
pub struct BesselKGrid {
    cosh_t: Vec<Float>,
    weight: Vec<Complex>,
    prec: u32,
    wp: u32,
}

impl BesselKGrid {
    /// Nodes giving roughly `prec` correct bits for K_ν(x), x in [x_min, x_max].
    pub fn new(nu: &Complex, x_min: f64, x_max: f64, prec: u32) -> Result<Self> {
        if !(x_min > 0.0) || !x_min.is_finite() || x_max < x_min {
            return Err(Error::Domain("Bessel K needs 0 < x_min <= x_max".into()));
        }
        let n = to_c64(nu);
        let (a, b) = (n.re.abs(), n.im.abs());
        let d = (PI / 4.0).min(1.5 / x_max.sqrt());
        let guard = b * (d + PI / 2.0) / LN_2 + 0.5 * a + x_max * (1.0 - d.cos()) / LN_2 + 20.0;
        let bits = prec as f64 + guard;
        let wp = bits.ceil() as u32 + 16;
        let h = 2.0 * PI * d / (bits * LN_2);
        // Truncate where the integrand bound has dropped `bits` below its peak.
        let g = |t: f64| -x_min * t.cosh() + a * t;
        let t_peak = (a / x_min).asinh();
        let drop = bits * LN_2 + 10.0;
        let mut t_end = t_peak + 1.0;
        while g(t_end) > g(t_peak) - drop {
            t_end += 0.25;
            if t_end > 200.0 {
                return Err(Error::NonConvergence("Bessel K truncation".into()));
            }
        }
        let count = (t_end / h).ceil() as usize + 1;
        if count > 2_000_000 {
            return Err(Error::NonConvergence("Bessel K node count".into()));
        }
        let hf = Float::with_val(wp, h);
        let nuw = Complex::with_val(wp, nu);
        let mut cosh_t = Vec::with_capacity(count);
        let mut weight = Vec::with_capacity(count);
        for j in 0..count {
            let t = Float::with_val(wp, &hf * j as u32);
            cosh_t.push(Float::with_val(wp, t.cosh_ref()));
            let mut w = Complex::with_val(wp, &nuw * &t).cosh() * &hf;
            if j == 0 {
                w /= 2u32;
            }
            weight.push(w);
        }
        Ok(BesselKGrid { cosh_t, weight, prec, wp })
    }

    pub fn eval(&self, x: &Float) -> Complex {
        let mut acc = Complex::new(self.wp);
        let xw = Float::with_val(self.wp, x);
        for (c, w) in self.cosh_t.iter().zip(&self.weight) {
            let e = Float::with_val(self.wp, &xw * c).neg_exp();
            if e.is_zero() {
                break;
            }
            acc += Complex::with_val(self.wp, w * &e);
        }
        Complex::with_val(self.prec, acc)
    }

    /// Σ_{m≥1} c_m K_ν(m·base), sharing the nodes across all m.
    pub fn series(&self, base: &Float, coeffs: &[Complex]) -> Complex {
        let mut acc = Complex::new(self.wp);
        if coeffs.is_empty() {
            return Complex::with_val(self.prec, acc);
        }
        let bw = Float::with_val(self.wp, base);
        let cut = -(self.wp as f64) - 8.0;
        for (c, w) in self.cosh_t.iter().zip(&self.weight) {
            let e = Float::with_val(self.wp, &bw * c).neg_exp();
            if e.is_zero() {
                break;
            }
            let le = super::log2_abs_f(&e);
            // Only the powers e^m that still matter.
            let m_eff = if le < 0.0 {
                ((cut / le).ceil() as usize).clamp(1, coeffs.len())
            } else {
                coeffs.len()
            };
            let mut inner = Complex::with_val(self.wp, &coeffs[m_eff - 1]);
            for cm in coeffs[..m_eff - 1].iter().rev() {
                inner *= &e;
                inner += cm;
            }
            inner *= &e;
            acc += inner * w;
        }
        Complex::with_val(self.prec, acc)
    }
}

trait NegExp {
    fn neg_exp(self) -> Float;
}

impl NegExp for Float {
    fn neg_exp(self) -> Float {
        (-self).exp()
    }
}

/// K_ν(x) for x > 0.
pub fn bessel_k(nu: &Complex, x: &Float, prec: u32) -> Result<Complex> {
    if !x.is_finite() || *x <= 0 {
        return Err(Error::Domain("Bessel K needs x > 0".into()));
    }
    let xf = x.to_f64();
    BesselKGrid::new(nu, xf, xf, prec).map(|g| g.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::{cnum, log2_abs, pi};

    #[test]
    fn half_order_closed_form() {
        let p = 200;
        for &x in &[0.05, 1.0, 7.5, 60.0] {
            let xf = Float::with_val(p, x);
            let k = bessel_k(&cnum(p, 0.5, 0.0), &xf, p).unwrap();
            let e = Float::with_val(p, -&xf).exp();
            let r = (pi(p) / (xf.clone() * 2u32)).sqrt() * e;
            let d = Complex::with_val(p, &k - &r);
            assert!(log2_abs(&d) - crate::mpcore::log2_abs_f(&r) < -190.0, "x={x}");
        }
    }

    #[test]
    fn series_matches_pointwise() {
        let p = 128;
        let nu = cnum(p, 0.3, 4.0);
        let base = Float::with_val(p, 0.9);
        let g = BesselKGrid::new(&nu, 0.9, 0.9, p).unwrap();
        let coeffs: Vec<Complex> = (1..=6).map(|m| cnum(p, 1.0 / m as f64, m as f64)).collect();
        let s = g.series(&base, &coeffs);
        let mut direct = Complex::new(p);
        for (m, c) in coeffs.iter().enumerate() {
            let x = Float::with_val(p, &base * (m as u32 + 1));
            direct += bessel_k(&nu, &x, p).unwrap() * c;
        }
        let d = Complex::with_val(p, &s - &direct);
        assert!(log2_abs(&d) - log2_abs(&direct) < -115.0);
    }
}
