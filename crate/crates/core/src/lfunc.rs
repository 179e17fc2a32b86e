//! Completed L-functions of eigenforms, additive twists and Petersson norms.

use crate::error::{Error, Result};
use crate::modforms::{
    cuspidal_projection_exact, eisenstein_qexp, HeckeEigenform,
};
use crate::mpcore::arith::{divisors, gcd, mod_inverse};
use crate::mpcore::gamma::gamma;
use crate::mpcore::quad::gauss_legendre;
use crate::mpcore::{
    bernoulli, creal, inc_gamma_upper, log2_abs, pi, rpow, two_pi, zeta, Complex, Float,
    HpComplex, PrecisionProfile,
};

/// A completed L-value with its truncation estimate.
#[derive(Clone, Debug)]
pub struct LValue {
    pub form: String,
    pub s: HpComplex,
    /// Twist p/q with 0 <= p < q.
    pub twist: (u64, u64),
    pub value: HpComplex,
    pub err_est: f64,
}

impl LValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "form": self.form,
            "s": self.s.to_string(),
            "twist": format!("{}/{}", self.twist.0, self.twist.1),
            "value": self.value.to_strings(),
            "err": format!("{:.3e}", self.err_est),
        })
    }
}

/// Reduced twist p/q with p taken mod q.
pub fn normalize_twist(p: i64, q: i64) -> Result<(u64, u64)> {
    if q <= 0 {
        return Err(Error::Domain("twist denominator must be positive".into()));
    }
    if gcd(p, q) != 1 {
        return Err(Error::Domain(format!("twist {p}/{q} is not reduced")));
    }
    Ok((p.rem_euclid(q) as u64, q as u64))
}

fn deligne(m: usize, k: i64) -> f64 {
    divisors(m as u64).len() as f64 * (m as f64).powf((k as f64 - 1.0) / 2.0)
}

/// Per-denominator tables for L*(f,s;p/q); reusable across all p.
///
/// g1[m] = Γ(s,2πm/q)(2πm)^{-s},
/// g2[m] = (-1)^{k/2} q^{k-2s} Γ(k-s,2πm/q)(2πm)^{s-k}.
pub struct TwistTable {
    pub k: i64,
    pub q: u64,
    pub s: Complex,
    g1: Vec<Complex>,
    g2: Vec<Complex>,
    err_est: f64,
    wp: u32,
    prec: u32,
}

impl TwistTable {
    pub fn new(f: &HeckeEigenform, s: &Complex, q: u64, prof: &PrecisionProfile) -> Result<Self> {
        let prec = prof.bits;
        if f.prec < prec {
            return Err(Error::InsufficientPrecision(format!(
                "form {} carries {} bits, {} requested",
                f.id(),
                f.prec,
                prec
            )));
        }
        let k = f.weight;
        let wp = prec + 32;
        let sw = Complex::with_val(wp, s);
        let ks = Complex::with_val(wp, k - &sw);
        let neg_s = Complex::with_val(wp, -&sw);
        let neg_ks = Complex::with_val(wp, -&ks);
        let qf = Float::with_val(wp, q);
        let mut pre2 = rpow(&qf, &Complex::with_val(wp, &ks - &sw), wp);
        if (k / 2) % 2 == 1 {
            pre2 = -pre2;
        }
        let tp = two_pi(wp);
        let cap = prof.tail * q as usize;
        let reach = sw.real().to_f64().abs().max(ks.real().to_f64().abs())
            + super::mpcore::to_c64(&sw).im.abs();
        let mut g1 = vec![Complex::new(wp)];
        let mut g2 = vec![Complex::new(wp)];
        let mut max_b = f64::NEG_INFINITY;
        let mut err = None;
        for m in 1..=cap {
            if m > f.order() {
                return Err(Error::InsufficientPrecision(format!(
                    "need a_f({m}) for {} at q={q}",
                    f.id()
                )));
            }
            let tm = Float::with_val(wp, &tp * m as u32);
            let x = Float::with_val(wp, &tm / &qf);
            let a = inc_gamma_upper(&sw, &x, wp)? * rpow(&tm, &neg_s, wp);
            let b = inc_gamma_upper(&ks, &x, wp)? * rpow(&tm, &neg_ks, wp) * &pre2;
            let lb = deligne(m, k).log2() + log2_abs(&a).max(log2_abs(&b));
            max_b = max_b.max(lb);
            g1.push(a);
            g2.push(b);
            let x_f = x.to_f64();
            if x_f > reach + 1.0 && lb < max_b - wp as f64 {
                let ratio = (-2.0 * std::f64::consts::PI / q as f64).exp();
                let tail = 2f64.powf(lb) * 2.0 / (1.0 - ratio);
                let round = 2f64.powf(max_b - prec as f64 - 16.0) * m as f64;
                err = Some(tail + round);
                break;
            }
        }
        let err_est = err.ok_or_else(|| {
            Error::NonConvergence(format!("L-series tail not reached within {cap} terms"))
        })?;
        Ok(TwistTable { k, q, s: s.clone(), g1, g2, err_est, wp, prec })
    }

    pub fn terms(&self) -> usize {
        self.g1.len() - 1
    }

    /// L*(f,s;p/q) for p coprime to q.
    pub fn value(&self, f: &HeckeEigenform, p: u64) -> Result<(Complex, f64)> {
        let q = self.q;
        let pp = if q == 1 { 0 } else {
            mod_inverse(p as i64, q as i64)
                .ok_or_else(|| Error::Domain(format!("{p}/{q} not reduced")))? as u64
        };
        let wp = self.wp;
        let unit = |num: u64| -> Complex {
            let ang = Float::with_val(wp, two_pi(wp) * (num % q) as u32) / q as u32;
            Complex::with_val(wp, (ang.clone().cos(), ang.sin()))
        };
        let mut acc = Complex::new(wp);
        for m in 1..self.g1.len() {
            let a = Float::with_val(wp, f.coeff(m));
            if a.is_zero() {
                continue;
            }
            let mq = m as u64 % q;
            let e1 = unit(mq * p % q);
            let e2 = unit((q - mq * pp % q) % q);
            let t = Complex::with_val(wp, &self.g1[m] * &e1) + Complex::with_val(wp, &self.g2[m] * &e2);
            acc += t * a;
        }
        Ok((Complex::with_val(self.prec, acc), self.err_est))
    }
}

fn to_lvalue(f: &HeckeEigenform, s: &Complex, twist: (u64, u64), v: (Complex, f64)) -> Result<LValue> {
    Ok(LValue {
        form: f.id(),
        s: HpComplex::new(s.clone())?,
        twist,
        value: HpComplex::new(v.0)?,
        err_est: v.1,
    })
}

/// L*(f,s) = ∫_0^∞ f(iy) y^{s-1} dy.
pub fn lstar(f: &HeckeEigenform, s: &HpComplex, prof: &PrecisionProfile) -> Result<LValue> {
    let sc = Complex::with_val(prof.bits, s.as_complex());
    let t = TwistTable::new(f, &sc, 1, prof)?;
    to_lvalue(f, &sc, (0, 1), t.value(f, 0)?)
}

/// L*(f,s;p/q) = ∫_0^∞ f(iy + p/q) y^{s-1} dy.
pub fn lstar_twisted(
    f: &HeckeEigenform,
    s: &HpComplex,
    p: i64,
    q: i64,
    prof: &PrecisionProfile,
) -> Result<LValue> {
    let tw = normalize_twist(p, q)?;
    let sc = Complex::with_val(prof.bits, s.as_complex());
    let t = TwistTable::new(f, &sc, tw.1, prof)?;
    to_lvalue(f, &sc, tw, t.value(f, tw.0)?)
}

/// L*(f,s;p/q) for every p coprime to q, sharing the Γ tables.
pub fn lstar_twisted_all(
    f: &HeckeEigenform,
    s: &HpComplex,
    q: u64,
    prof: &PrecisionProfile,
) -> Result<Vec<LValue>> {
    let sc = Complex::with_val(prof.bits, s.as_complex());
    let t = TwistTable::new(f, &sc, q, prof)?;
    (0..q)
        .filter(|&p| gcd(p as i64, q as i64) == 1)
        .map(|p| to_lvalue(f, &sc, (p, q), t.value(f, p)?))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    StripQuadrature,
    RankIdentity,
}

#[derive(Clone, Debug)]
pub struct PeterssonNorm {
    pub form: String,
    pub value: Float,
    pub method: NormMethod,
    pub err_est: f64,
}

/// ∫_{y≥1} over the strip, termwise: Σ a(n)^2 Γ(k-1,4πn)/(4πn)^{k-1}.
fn strip_part(f: &HeckeEigenform, wp: u32) -> Result<Float> {
    let k = f.weight;
    let s = creal(wp, &Float::with_val(wp, k - 1));
    let mut acc = Float::new(wp);
    let fp = Float::with_val(wp, pi(wp) * 4u32);
    for n in 1..=f.order() {
        let x = Float::with_val(wp, &fp * n as u32);
        let g = inc_gamma_upper(&s, &x, wp)?;
        let xp = Float::with_val(wp, x.pow_ref_i(k - 1));
        let a2 = Float::with_val(wp, f.coeff(n).square_ref());
        let t = Float::with_val(wp, g.real() / &xp) * a2;
        let done = n > 2 && log2_abs_f(&t) < log2_abs_f(&acc) - wp as f64;
        acc += t;
        if done {
            return Ok(acc);
        }
    }
    Err(Error::InsufficientPrecision("strip part needs more coefficients".into()))
}

use crate::mpcore::log2_abs_f;

trait PowI {
    fn pow_ref_i(&self, e: i64) -> Float;
}

impl PowI for Float {
    fn pow_ref_i(&self, e: i64) -> Float {
        use rug::ops::Pow;
        self.clone().pow(e as i32)
    }
}

/// 2∫_0^{1/2}∫_{√(1-x²)}^1 y^{k-2}|f(x+iy)|² dy dx with an n×n Gauss–Legendre rule.
fn region_part(f: &HeckeEigenform, n: usize, wp: u32) -> Result<Float> {
    let nodes = gauss_legendre(n, wp);
    let k = f.weight;
    let tp = two_pi(wp);
    // Coefficients needed for |q| <= e^{-π√3}.
    let m_max = {
        let mut m = 1;
        let decay = std::f64::consts::PI * 3f64.sqrt();
        while m < f.order() && (-(decay * m as f64)) / std::f64::consts::LN_2 + (k as f64 / 2.0) * (m as f64).log2() > -(wp as f64) - 8.0 {
            m += 1;
        }
        if m >= f.order() {
            return Err(Error::InsufficientPrecision("region part needs more coefficients".into()));
        }
        m
    };
    let coeffs: Vec<Float> = (0..=m_max).map(|m| Float::with_val(wp, f.coeff(m))).collect();
    let mut total = Float::new(wp);
    let quarter = Float::with_val(wp, 0.25f64);
    for (u, wu) in &nodes {
        let x = Float::with_val(wp, u + 1u32) * &quarter;
        let y0 = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref())).sqrt();
        let half_len = Float::with_val(wp, 1u32 - &y0) / 2u32;
        let mid = Float::with_val(wp, 1u32 + &y0) / 2u32;
        let mut inner = Float::new(wp);
        for (v, wv) in &nodes {
            let y = Float::with_val(wp, v * &half_len) + &mid;
            let z = Complex::with_val(wp, (&x, &y));
            let q = (Complex::with_val(wp, &z * &tp) * Complex::with_val(wp, (0, 1))).exp();
            let mut qm = q.clone();
            let mut fz = Complex::new(wp);
            for c in coeffs.iter().skip(1) {
                fz += Complex::with_val(wp, &qm * c);
                qm *= &q;
            }
            let norm = Float::with_val(wp, fz.norm_ref());
            let yk = Float::with_val(wp, y.pow_ref_i(k - 2));
            inner += norm * yk * wv;
        }
        total += inner * &half_len * wu;
    }
    // dx = dx/du · du = du/4; factor 2 for the mirrored half.
    Ok(total / 2u32)
}

/// ⟨f,f⟩ over the standard fundamental domain, no volume normalization.
pub fn petersson_norm(f: &HeckeEigenform, prof: &PrecisionProfile) -> Result<PeterssonNorm> {
    let prec = prof.bits;
    let wp = prec + 32;
    let strip = strip_part(f, wp)?;
    let n1 = 24 + (prec as usize) / 8;
    let r1 = region_part(f, n1, wp)?;
    let r2 = region_part(f, 2 * n1, wp)?;
    let diff = Float::with_val(wp, &r1 - &r2).abs();
    let total = Float::with_val(wp, &strip + &r2);
    let tol = prof.tol_float() * &total;
    if diff > tol {
        return Err(Error::QuadratureFailure(format!(
            "Petersson quadrature refinement moved by {:.3e}",
            diff.to_f64()
        )));
    }
    Ok(PeterssonNorm {
        form: f.id(),
        value: Float::with_val(prec, &total),
        method: NormMethod::StripQuadrature,
        err_est: diff.to_f64().max(2f64.powi(-(prec as i32)) * total.to_f64()),
    })
}

/// ⟨f,f⟩ from ⟨E_{k1}E_{k2}, f⟩ = c_f⟨f,f⟩ and Rankin's product formula.
///
/// `family` lists all eigenforms of the weight so the cusp projection can be split.
pub fn petersson_norm_rank(
    f: &HeckeEigenform,
    family: &[HeckeEigenform],
    prof: &PrecisionProfile,
) -> Result<PeterssonNorm> {
    let k = f.weight;
    let prec = prof.bits;
    let wp = prec + 32;
    for k1 in [4i64, 6, 8] {
        let k2 = k - k1;
        if k2 < 4 {
            break;
        }
        let c = eigen_coordinate(f, family, k1, k2, wp)?;
        if log2_abs_f(&c) < -(prec as f64) / 4.0 {
            continue;
        }
        let l1 = lstar(f, &HpComplex::from_f64(1.0, 0.0, prec)?, prof)?;
        let l2 = lstar(f, &HpComplex::from_f64(k2 as f64, 0.0, prec)?, prof)?;
        let b = Float::with_val(wp, &bernoulli(k1 as usize)) * Float::with_val(wp, &bernoulli(k2 as usize));
        let mut r = Float::with_val(wp, l1.value.re() * l2.value.re()) * (k1 * k2) as i32 / b;
        r >>= (k - 3) as u32;
        if (k1 / 2) % 2 == 1 {
            r = -r;
        }
        let v = r / &c;
        let err = (l1.err_est + l2.err_est) * v.to_f64().abs() * 10.0;
        return Ok(PeterssonNorm {
            form: f.id(),
            value: Float::with_val(prec, v),
            method: NormMethod::RankIdentity,
            err_est: err,
        });
    }
    Err(Error::DegenerateSpectrum("no Eisenstein product with a usable f-component".into()))
}

/// Coefficient of f in the cusp projection of E_{k1}E_{k2}.
pub fn eigen_coordinate(
    f: &HeckeEigenform,
    family: &[HeckeEigenform],
    k1: i64,
    k2: i64,
    wp: u32,
) -> Result<Float> {
    let d = family.len();
    let g = eisenstein_qexp(k1, d + 1)?.mul(&eisenstein_qexp(k2, d + 1)?);
    let g = cuspidal_projection_exact(&g)?;
    let target: Vec<Float> = (1..=d).map(|n| Float::with_val(wp, g.coeff(n))).collect();
    let coords = solve_eigen_coords(family, &target, wp)?;
    let idx = family
        .iter()
        .position(|h| h.embedding_index == f.embedding_index)
        .ok_or_else(|| Error::InvalidValue("form not in family".into()))?;
    Ok(coords[idx].clone())
}

/// Solve Σ_j x_j a_{f_j}(n) = target[n-1] for n = 1..d.
pub fn solve_eigen_coords(family: &[HeckeEigenform], target: &[Float], wp: u32) -> Result<Vec<Float>> {
    let d = family.len();
    let mut m: Vec<Vec<Float>> = (0..d)
        .map(|i| {
            let mut row: Vec<Float> = family.iter().map(|f| Float::with_val(wp, f.coeff(i + 1))).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    crate::periods::gauss_solve(&mut m, wp)
}

/// Residual of the convolution identity together with its truncation bound.
#[derive(Clone, Debug)]
pub struct Residual {
    pub value: f64,
    pub bound: f64,
    pub terms: usize,
}

/// ζ(k+1-s-w) Γ(k-s)/(2π)^{k-s} Σ_{m≤M} a(m)σ_{w-s}(m)m^{s-k}
/// against (2π)^{k-w}/Γ(k-w) L*(f,k-s)L*(f,k-w).
pub fn rankin_convolution_check(
    f: &HeckeEigenform,
    s: &HpComplex,
    w: &HpComplex,
    terms: usize,
    prof: &PrecisionProfile,
) -> Result<Residual> {
    let k = f.weight;
    let prec = prof.bits;
    let wp = prec + 32;
    let sc = Complex::with_val(wp, s.as_complex());
    let wc = Complex::with_val(wp, w.as_complex());
    let sig = sc.real().to_f64();
    let ws = Complex::with_val(wp, &wc - &sc);
    let xi = ws.real().to_f64();
    // |a(m)m^{s-k}| <= d(m)m^{-β}; |σ_x(m)| <= ζ(-Re x) when Re x < -1, else d(m)m^{max(0,Re x)}
    // with one d(m) <= 2√m.
    let beta = k as f64 - sig - (k as f64 - 1.0) / 2.0;
    let (c_sigma, beta_eff) = if xi < -1.0 {
        let z = zeta(&crate::mpcore::cnum(64, -xi, 0.0), 64)?.real().to_f64();
        (z, beta)
    } else {
        (2.0, beta - 0.5 - xi.max(0.0))
    };
    if beta_eff <= 1.0 {
        return Err(Error::Domain("convolution series outside its convergence region".into()));
    }
    if terms > f.order() {
        return Err(Error::InsufficientPrecision(format!("need {terms} coefficients")));
    }
    let ks = Complex::with_val(wp, k - &sc);
    let kw = Complex::with_val(wp, k - &wc);
    let neg_ks = Complex::with_val(wp, -&ks);
    let mut sum = Complex::new(wp);
    for m in 1..=terms {
        let a = f.coeff(m);
        if a.is_zero() {
            continue;
        }
        let sg = crate::mpcore::divisor_sigma_complex(&ws, m as u64, wp);
        let pw = rpow(&Float::with_val(wp, m), &neg_ks, wp);
        sum += sg * pw * Float::with_val(wp, a);
    }
    let tp = creal(wp, &two_pi(wp));
    let z = zeta(&Complex::with_val(wp, Complex::with_val(wp, (k + 1) as u32 - &sc) - &wc), wp)?;
    let lhs = z * gamma(&ks, wp)? / crate::mpcore::cpow(&tp, &ks, wp) * &sum;
    let l1 = lstar(f, &HpComplex::new(ks.clone())?, prof)?;
    let l2 = lstar(f, &HpComplex::new(kw.clone())?, prof)?;
    let rhs = crate::mpcore::cpow(&tp, &kw, wp) / gamma(&kw, wp)?
        * l1.value.as_complex()
        * l2.value.as_complex();
    let value = 2f64.powf(log2_abs(&Complex::with_val(wp, &lhs - &rhs)));
    // Σ_{m>M} d(m)m^{-b} <= b M^{1-b}((ln M + 1)/(b-1) + 1/(b-1)²), from D(x) <= x(ln x + 1).
    let mf = terms as f64;
    let b1 = beta_eff - 1.0;
    let tail_sum = c_sigma * beta_eff * mf.powf(-b1) * ((mf.ln() + 1.0) / b1 + 1.0 / (b1 * b1));
    let pref = 2f64.powf(log2_abs(&Complex::with_val(wp, &lhs / &sum)));
    let bound = pref * tail_sum + (l1.err_est + l2.err_est) * 2f64.powf(log2_abs(&rhs) - log2_abs(l1.value.as_complex()).min(log2_abs(l2.value.as_complex())));
    Ok(Residual { value, bound, terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::eigenforms;

    #[test]
    fn twist_normalization() {
        assert_eq!(normalize_twist(-1, 5).unwrap(), (4, 5));
        assert!(normalize_twist(2, 4).is_err());
        assert_eq!(normalize_twist(0, 1).unwrap(), (0, 1));
    }

    #[test]
    fn delta_functional_equation() {
        let prof = PrecisionProfile::with_bits(128);
        let f = &eigenforms(12, 80, 128).unwrap()[0];
        let s = HpComplex::from_f64(3.3, 1.7, 128).unwrap();
        let a = lstar(f, &s, &prof).unwrap();
        let ks = HpComplex::new(Complex::with_val(128, 12 - s.as_complex())).unwrap();
        let b = lstar(f, &ks, &prof).unwrap();
        let d = (&a.value - &b.value).abs();
        assert!(d < 1e-30 * a.value.abs().to_f64());
    }
}
