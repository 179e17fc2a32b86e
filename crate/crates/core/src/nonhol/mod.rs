//! Weight-zero Eisenstein series, the kernel K(z;s,s'), the double series 𝓔(z,w;s,s') and
//! L-functions of ingested Maass forms.
//!
//! Coset sums run in f64 (see [`crate::mpcore::fast`]); the Fourier side of E(z,s) runs at
//! full precision.

pub mod maass;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::dbleis::cohen::richardson_err;
use crate::dbleis::cosets::{box_radius, cosets, pair_c, reduce_to_fd, Coset};
use crate::error::{Error, Result};
use crate::mpcore::arith::divisors;
use crate::mpcore::bessel::BesselKGrid;
use crate::mpcore::fast::{cpow64, em_coeffs, hurwitz64};
use crate::mpcore::{
    cpow, creal, divisor_sigma_complex, gamma, log2_abs, pi, theta, to_c64, zeta, Complex, Float,
    HpComplex, PrecisionProfile,
};

pub use maass::{
    cpl_inner_product_check, maass_eval, maass_load, maass_lstar, parse_maass, CplReport,
    MaassFormData, Parity,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisMethod {
    Fourier,
    Lattice,
}

impl EisMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fourier" => Ok(EisMethod::Fourier),
            "lattice" => Ok(EisMethod::Lattice),
            _ => Err(Error::InvalidValue(format!("unknown method {s:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EisMethod::Fourier => "fourier",
            EisMethod::Lattice => "lattice",
        }
    }
}

/// E(z,s) with its truncation estimate.
#[derive(Clone, Debug)]
pub struct EisensteinValue {
    pub z: HpComplex,
    pub s: HpComplex,
    pub value: HpComplex,
    pub method: EisMethod,
    pub err_est: f64,
    pub terms: usize,
}

impl EisensteinValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "z": self.z.to_strings(),
            "s": self.s.to_strings(),
            "value": self.value.to_strings(),
            "method": self.method.name(),
            "err": format!("{:.3e}", self.err_est),
            "terms": self.terms,
        })
    }
}

/// Moves z into the standard fundamental domain at full precision.
fn reduce_hp(z: &Complex, wp: u32) -> Result<Complex> {
    let mut w = Complex::with_val(wp, z);
    if !(w.imag().is_sign_positive() && !w.imag().is_zero()) {
        return Err(Error::Domain("point must lie in the upper half plane".into()));
    }
    for _ in 0..10_000 {
        let n = w.real().to_f64().round();
        if n != 0.0 {
            w -= n;
        }
        let norm = Float::with_val(wp, w.norm_ref());
        if norm < 1.0 - 1e-30 {
            w = Complex::with_val(wp, -1) / w;
        } else {
            return Ok(w);
        }
    }
    Err(Error::NonConvergence("reduction to the fundamental domain".into()))
}

fn check_pole(s: &Complex) -> Result<()> {
    let c = to_c64(s);
    for p in [0.0, 0.5, 1.0] {
        if (c - p).norm() < 1e-8 {
            return Err(Error::PoleNear(format!("s = {c} is too close to {p}")));
        }
    }
    Ok(())
}

/// E*(z,s) = θ(s)E(z,s) by its Fourier expansion, after reducing z.
pub fn eisenstein_star(z: &HpComplex, s: &HpComplex, prec: u32) -> Result<HpComplex> {
    Ok(eisenstein_star_terms(z, s, prec)?.0)
}

fn eisenstein_star_terms(z: &HpComplex, s: &HpComplex, prec: u32) -> Result<(HpComplex, usize)> {
    check_pole(s.as_complex())?;
    let sc = to_c64(s.as_complex());
    let extra = 24 + (sc.im.abs() * 2.3) as u32;
    let wp = prec + extra;
    let zr = reduce_hp(z.as_complex(), wp)?;
    let (x, y) = (Float::with_val(wp, zr.real()), Float::with_val(wp, zr.imag()));
    let sw = Complex::with_val(wp, s.as_complex());
    let one_s = Complex::with_val(wp, 1 - &sw);
    let yc = creal(wp, &y);
    let mut acc = theta(&sw, wp)? * cpow(&yc, &sw, wp);
    acc += theta(&one_s, wp)? * cpow(&yc, &one_s, wp);
    let yf = y.to_f64();
    let growth = (sc.re - 0.5).abs() + 1.0;
    let mut m_max = (((wp + 16) as f64 * std::f64::consts::LN_2) / (2.0 * PI * yf)).ceil() as usize + 2;
    m_max += (growth * (m_max as f64).ln() / (2.0 * PI * yf)).ceil() as usize;
    let two_s1 = Complex::with_val(wp, &sw * 2u32) - 1u32;
    let half_s = Complex::with_val(wp, 0.5 - &sw);
    let tpx = Float::with_val(wp, &x * (pi(wp) * 2u32));
    let coeffs: Vec<Complex> = (1..=m_max)
        .map(|m| {
            let mf = creal(wp, &Float::with_val(wp, m));
            let cs = Float::with_val(wp, &tpx * m as u32).cos();
            divisor_sigma_complex(&two_s1, m as u64, wp) * cpow(&mf, &half_s, wp) * cs
        })
        .collect();
    let base = Float::with_val(wp, &y * (pi(wp) * 2u32));
    let nu = Complex::with_val(wp, &sw - 0.5);
    let grid = BesselKGrid::new(&nu, base.to_f64(), base.to_f64() * m_max as f64, wp)?;
    let series = grid.series(&base, &coeffs) * Float::with_val(wp, y.sqrt_ref()) * 4u32;
    acc += series;
    Ok((HpComplex::new(Complex::with_val(prec, acc))?, m_max))
}

/// E(z,s) by the Fourier expansion or by the truncated lattice sum (Re s > 1).
pub fn eisenstein_nonhol(
    z: &HpComplex,
    s: &HpComplex,
    method: EisMethod,
    prof: &PrecisionProfile,
) -> Result<EisensteinValue> {
    let prec = prof.bits;
    match method {
        EisMethod::Fourier => {
            let (star, terms) = eisenstein_star_terms(z, s, prec)?;
            let th = theta(&Complex::with_val(prec + 16, s.as_complex()), prec + 16)?;
            let value = HpComplex::new(Complex::with_val(prec, star.as_complex() / &th))?;
            let err_est = 2f64.powf(log2_abs(value.as_complex()) - prec as f64 + 8.0);
            Ok(EisensteinValue { z: z.clone(), s: s.clone(), value, method, err_est, terms })
        }
        EisMethod::Lattice => {
            let sc = s.to_c64();
            if sc.re <= 1.0 {
                return Err(Error::Domain("lattice sum needs Re s > 1".into()));
            }
            check_pole(s.as_complex())?;
            let (zr, _) = reduce_to_fd(z.to_c64())?;
            let radius = box_radius(zr, prof.height).max(4.0);
            let list = cosets(zr, radius, false);
            let mut sum = Complex64::new(0.0, 0.0);
            for cs in &list {
                sum += cpow64(Complex64::new(cs.gz.im, 0.0), sc);
            }
            let tail = cpow64(Complex64::new(zr.im, 0.0), sc - 1.0) * (6.0 / PI)
                * cpow64(Complex64::new(radius, 0.0), 2.0 - 2.0 * sc)
                / (2.0 * sc - 2.0);
            let value = HpComplex::from_f64((sum + tail).re, (sum + tail).im, prec)?;
            Ok(EisensteinValue {
                z: z.clone(),
                s: s.clone(),
                value,
                method,
                err_est: tail.norm() + list.len() as f64 * f64::EPSILON * sum.norm(),
                terms: list.len(),
            })
        }
    }
}

/// Σ_{m≥1} c_m K_ν(m·base) in double precision, by the trapezoid rule on
/// ∫_0^∞ e^{-x cosh t} cosh(νt) dt with shared nodes.
pub(crate) fn bessel_series64(nu: Complex64, base: f64, coeffs: &[Complex64]) -> Complex64 {
    let a = nu.re.abs();
    let h = 0.04;
    let g = |t: f64| -base * t.cosh() + a * t;
    let t_peak = (a / base).asinh();
    let mut t_end = t_peak + 1.0;
    while g(t_end) > g(t_peak) - 46.0 {
        t_end += 0.25;
    }
    let n = (t_end / h).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=n {
        let t = j as f64 * h;
        let q = (-base * t.cosh()).exp();
        let mut inner = Complex64::new(0.0, 0.0);
        let mut qm = q;
        for c in coeffs {
            inner += c * qm;
            qm *= q;
            if qm < 1e-300 {
                break;
            }
        }
        let w = (nu * t).cosh() * if j == 0 { 0.5 * h } else { h };
        acc += inner * w;
    }
    acc
}

/// Constants for ξ^♯(w,s) = Σ_{m≠0}|m|^{s-1/2}K_{s-1/2}(2π|m|y)e(mx).
struct XiSharp {
    s: Complex64,
    nu: Complex64,
    /// π^{1/2}Γ(s-1/2)/Γ(s).
    a: Complex64,
    /// 2π^s/Γ(s).
    b: Complex64,
    binom: Vec<Complex64>,
    em: Vec<f64>,
}

const DIRECT_TERMS: i64 = 20;

impl XiSharp {
    fn new(s: Complex64) -> Result<Self> {
        let p = 96;
        let sc = crate::mpcore::from_c64(p, s);
        let g = gamma(&sc, p)?;
        let a = pi(p).sqrt() * gamma(&Complex::with_val(p, &sc - 0.5), p)? / &g;
        let b = cpow(&creal(p, &pi(p)), &sc, p) * 2u32 / &g;
        let mut binom = vec![Complex64::new(1.0, 0.0)];
        for j in 1..40 {
            let prev = binom[j - 1];
            binom.push(prev * (-s - (j as f64 - 1.0)) / j as f64);
        }
        Ok(XiSharp { s, nu: s - 0.5, a: to_c64(&a), b: to_c64(&b), binom, em: em_coeffs() })
    }

    /// ξ_ℤ(w,s) = Σ_m |w+m|^{-2s} directly, with a binomial-Hurwitz tail.
    fn xi_direct(&self, w: Complex64) -> Complex64 {
        let x = w.re - w.re.floor();
        let y2 = w.im * w.im;
        let mut sum = Complex64::new(0.0, 0.0);
        for m in -DIRECT_TERMS..=DIRECT_TERMS {
            let t = x + m as f64;
            sum += cpow64(Complex64::new(t * t + y2, 0.0), -self.s);
        }
        let a1 = Complex64::new(DIRECT_TERMS as f64 + 1.0 + x, 0.0);
        let a2 = Complex64::new(DIRECT_TERMS as f64 + 1.0 - x, 0.0);
        let mut ypow = 1.0;
        for (j, c) in self.binom.iter().enumerate() {
            let e = 2.0 * self.s + 2.0 * j as f64;
            let t = c * ypow * (hurwitz64(e, a1, &self.em) + hurwitz64(e, a2, &self.em));
            sum += t;
            if t.norm() < 1e-18 * sum.norm() {
                break;
            }
            ypow *= y2;
        }
        sum
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let y = w.im;
        if y >= 0.5 {
            let m_max = (46.0 / (2.0 * PI * y)).ceil() as usize + 4;
            let coeffs: Vec<Complex64> = (1..=m_max)
                .map(|m| cpow64(Complex64::new(m as f64, 0.0), self.nu) * (2.0 * PI * m as f64 * w.re).cos() * 2.0)
                .collect();
            bessel_series64(self.nu, 2.0 * PI * y, &coeffs)
        } else {
            let yc = Complex64::new(y, 0.0);
            let main = self.a * cpow64(yc, 1.0 - 2.0 * self.s);
            (self.xi_direct(w) - main) * cpow64(yc, self.nu) / self.b
        }
    }
}

/// K(z;s,s') with its pieces.
#[derive(Clone, Debug)]
pub struct KernelValue {
    pub z: Complex64,
    pub s: Complex64,
    pub s2: Complex64,
    /// The radius parameter of the decomposition, |s|.
    pub rho: f64,
    pub value: Complex64,
    /// π^{1/2}Γ(s-1/2)/Γ(s) E(z,s'-s+1).
    pub k1: Complex64,
    /// K^♯(z;s,s').
    pub sharp: Complex64,
    pub err_est: f64,
    pub cosets: usize,
    pub radius: f64,
}

impl KernelValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "z": [self.z.re, self.z.im],
            "s": [self.s.re, self.s.im],
            "s_prime": [self.s2.re, self.s2.im],
            "rho": self.rho,
            "value": [self.value.re, self.value.im],
            "k1": [self.k1.re, self.k1.im],
            "k_sharp": [self.sharp.re, self.sharp.im],
            "err": format!("{:.3e}", self.err_est),
            "cosets": self.cosets,
            "radius": self.radius,
        })
    }
}

fn sharp_alpha(s: Complex64, s2: Complex64) -> f64 {
    2.0 * s2.re - 1.0 - (2.0 * s.re - 1.0).max(1.0)
}

fn check_kernel_domain(s: Complex64, s2: Complex64) -> Result<f64> {
    let rho = s.norm();
    if !(s.re > 0.5) || !(s2.re > rho + 5.0) {
        return Err(Error::NonConvergence(format!(
            "K^♯ sum needs Re s > 1/2 and Re s' > |s| + 5 (s = {s}, s' = {s2})"
        )));
    }
    Ok(rho)
}

/// K^♯(z;s,s') = Σ_{Γ∞\Γ} Im(γz)^{s'+1/2} ξ^♯(γz,s), without reducing z.
pub fn kernel_sharp(z: Complex64, s: Complex64, s2: Complex64, height: u32) -> Result<(Complex64, f64, usize, f64)> {
    check_kernel_domain(s, s2)?;
    if !(z.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let xs = XiSharp::new(s)?;
    let alpha = sharp_alpha(s, s2);
    let radius = box_radius(z, height).min(10f64.powf(15.0 / alpha)).max(2.0);
    let inner = radius / std::f64::consts::SQRT_2;
    let list = cosets(z, radius, false);
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for cs in &list {
        let t = cpow64(Complex64::new(cs.gz.im, 0.0), s2 + 0.5) * xs.eval(cs.gz);
        full += t;
        if cs.j.norm() <= inner {
            half += t;
        }
    }
    let err = richardson_err(full, half, alpha) + 1e-14 * full.norm();
    Ok((full, err, list.len(), radius))
}

/// K(z;s,s') = π^{1/2}Γ(s-1/2)/Γ(s) E(z,s'-s+1) + 2π^s/Γ(s) K^♯(z;s,s') with ρ = |s|.
pub fn kernel_k(z: Complex64, s: Complex64, s2: Complex64, height: u32) -> Result<KernelValue> {
    let rho = check_kernel_domain(s, s2)?;
    let (zr, _) = reduce_to_fd(z)?;
    let xs = XiSharp::new(s)?;
    let (sharp, err, count, radius) = kernel_sharp(zr, s, s2, height)?;
    let p = 96;
    let e = eisenstein_star(
        &HpComplex::from_f64(zr.re, zr.im, p)?,
        &HpComplex::from_f64(s2.re - s.re + 1.0, s2.im - s.im, p)?,
        p,
    )?;
    let th = theta(&crate::mpcore::from_c64(p, s2 - s + 1.0), p)?;
    let e = to_c64(&Complex::with_val(p, e.as_complex() / &th));
    let k1 = xs.a * e;
    let value = k1 + xs.b * sharp;
    Ok(KernelValue {
        z,
        s,
        s2,
        rho,
        value,
        k1,
        sharp,
        err_est: err * xs.b.norm() + 1e-15 * k1.norm(),
        cosets: count,
        radius,
    })
}

/// The raw group sum ½Σ_{γ∈Γ} Im(γz)^{s+s'}|γz|^{-2s}: cosets of Γ∞ with |cz+d| <= radius,
/// translates |m| <= m_max, and an integral estimate for the remaining translates.
pub fn kernel_k_bruteforce(z: Complex64, s: Complex64, s2: Complex64, radius: f64, m_max: u32) -> Result<(Complex64, f64)> {
    if !(s.re > 0.5 && s2.re > 0.5) {
        return Err(Error::Domain("the group sum needs Re s, Re s' > 1/2".into()));
    }
    let (zr, _) = reduce_to_fd(z)?;
    let list = cosets(zr, radius, false);
    let inner_r = radius / std::f64::consts::SQRT_2;
    let mt = m_max as i64;
    let cut = Complex64::new(mt as f64 + 0.5, 0.0);
    let tail_mid = 2.0 * cpow64(cut, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut tail_abs = 0.0;
    for cs in &list {
        let w = cs.gz;
        let x = w.re - w.re.round();
        let y2 = w.im * w.im;
        let mut inner = Complex64::new(0.0, 0.0);
        for m in -mt..=mt {
            let t = x + m as f64;
            inner += cpow64(Complex64::new(t * t + y2, 0.0), -s);
        }
        let wgt = cpow64(Complex64::new(w.im, 0.0), s + s2);
        let t = wgt * (inner + tail_mid);
        tail_abs += (wgt * tail_mid).norm();
        full += t;
        if cs.j.norm() <= inner_r {
            half += t;
        }
    }
    let alpha = (2.0 * s2.re - 1.0 - (2.0 * s.re - 1.0).max(1.0)).max(0.5);
    let err = richardson_err(full, half, alpha) + tail_abs / m_max as f64 + 1e-13 * full.norm();
    Ok((full, err))
}

/// The two orderings of the group sum over the S-invariant set
/// {±γ : |cz+d| <= R and |az+b| <= R}: Σ Im(γz)^{s+s'}|γz|^{-2s} and Σ Im(γz)^{s+s'}|γz|^{-2s'}.
pub fn kernel_swap_sums(z: Complex64, s: Complex64, s2: Complex64, radius: f64) -> Result<(Complex64, Complex64, usize)> {
    if !(z.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let list = cosets(z, radius, false);
    let (mut t1, mut t2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut count = 0;
    for cs in &list {
        let jn = cs.j.norm();
        let lim = radius / jn * (1.0 + 1e-12);
        let w = cs.gz;
        let m_lo = (-w.re - lim).ceil() as i64;
        let m_hi = (-w.re + lim).floor() as i64;
        let wgt = cpow64(Complex64::new(w.im, 0.0), s + s2);
        for m in m_lo..=m_hi {
            let r2 = (w + m as f64).norm_sqr();
            if r2.sqrt() > lim {
                continue;
            }
            let r2c = Complex64::new(r2, 0.0);
            t1 += wgt * cpow64(r2c, -s);
            t2 += wgt * cpow64(r2c, -s2);
            count += 1;
        }
    }
    Ok((t1, t2, count))
}

/// ΔK - (s+s')(1-s-s')K - 4ss'K(z;s+1,s'+1) with a sixth-order difference Laplacian,
/// relative to the largest of the three terms.
pub fn kernel_laplace_residual(z: Complex64, s: Complex64, s2: Complex64, step: f64, height: u32) -> Result<f64> {
    const C: [f64; 7] = [1.0 / 90.0, -3.0 / 20.0, 1.5, -49.0 / 18.0, 1.5, -3.0 / 20.0, 1.0 / 90.0];
    let k = |w: Complex64| kernel_k(w, s, s2, height).map(|v| v.value);
    let mut lap = Complex64::new(0.0, 0.0);
    for (i, c) in C.iter().enumerate() {
        let o = (i as f64 - 3.0) * step;
        lap += *c * (k(z + o)? + k(z + Complex64::new(0.0, o))?);
    }
    let lap = -z.im * z.im * lap / (step * step);
    let k0 = k(z)?;
    let a = (s + s2) * (1.0 - s - s2) * k0;
    let b = 4.0 * s * s2 * kernel_k(z, s + 1.0, s2 + 1.0, height)?.value;
    let scale = lap.norm().max(a.norm()).max(b.norm());
    Ok((lap - a - b).norm() / scale)
}

/// 𝓔(z,w;s,s') by a truncated pair sum.
#[derive(Clone, Debug)]
pub struct DoubleEisValue {
    pub z: Complex64,
    pub value: Complex64,
    pub err_est: f64,
    pub pairs: usize,
    pub radius: f64,
}

impl DoubleEisValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "z": [self.z.re, self.z.im],
            "value": [self.value.re, self.value.im],
            "err": format!("{:.3e}", self.err_est),
            "pairs": self.pairs,
            "radius": self.radius,
        })
    }
}

pub fn check_dbl_domain(w: Complex64, s: Complex64, s2: Complex64) -> Result<()> {
    if !(s.re > 1.0 && s2.re > 1.0 && w.re > 2.0 - 2.0 * s.re && w.re > 2.0 - 2.0 * s2.re) {
        return Err(Error::Domain(
            "𝓔 needs Re s, Re s' > 1 and Re w > 2 - 2Re s, 2 - 2Re s'".into(),
        ));
    }
    Ok(())
}

/// Sum over ordered pairs of cosets (mod ±) with |cz+d| <= radius and c_{γδ^{-1}} ≠ 0.
/// Each pair is checked against Im(γz)Im(δz)c² <= 1.
pub fn nonhol_dbl_eis_direct(z: Complex64, w: Complex64, s: Complex64, s2: Complex64, radius: f64) -> Result<DoubleEisValue> {
    check_dbl_domain(w, s, s2)?;
    if !(z.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let list: Vec<Coset> = cosets(z, radius, false);
    let inner = radius / std::f64::consts::SQRT_2;
    let pre: Vec<(Complex64, Complex64, f64, bool)> = list
        .iter()
        .map(|cs| {
            let y = Complex64::new(cs.gz.im, 0.0);
            (cpow64(y, s), cpow64(y, s2), cs.gz.im, cs.j.norm() <= inner)
        })
        .collect();
    let real_w = w.im == 0.0;
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut pairs = 0usize;
    for (g, pg) in list.iter().zip(&pre) {
        let mut row = Complex64::new(0.0, 0.0);
        let mut row_half = Complex64::new(0.0, 0.0);
        for (h, ph) in list.iter().zip(&pre) {
            let c = pair_c(g, h).unsigned_abs();
            if c == 0 {
                continue;
            }
            let cf = c as f64;
            if pg.2 * ph.2 * cf * cf > 1.0 + 1e-9 {
                return Err(Error::InvalidValue(format!(
                    "pair ({},{}),({},{}) violates Im(γz)Im(δz)c² <= 1",
                    g.c, g.d, h.c, h.d
                )));
            }
            let cw = if real_w { Complex64::new(cf.powf(-w.re), 0.0) } else { (-w * cf.ln()).exp() };
            let t = ph.1 * cw;
            row += t;
            if ph.3 {
                row_half += t;
            }
            pairs += 1;
        }
        full += pg.0 * row;
        if pg.3 {
            half += pg.0 * row_half;
        }
    }
    let alpha = (2.0 * s.re.min(s2.re) - 1.0).max(0.5);
    let err = richardson_err(full, half, alpha) + 1e-13 * full.norm();
    Ok(DoubleEisValue { z, value: full, err_est: err, pairs, radius })
}

/// Both sides of ζ(w+2s)ζ(w+2s')𝓔(z,w;s,s') = Σ_n n^{-w-s-s'} Σ_{ad=n, 0<=b<d} K((az+b)/d; s,s'),
/// with the Hecke sum cut at n <= n_max.
#[derive(Clone, Debug)]
pub struct HeckeKernelCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub lhs_err: f64,
    pub n_max: u32,
}

pub fn hecke_kernel_check(z: Complex64, s: Complex64, s2: Complex64, w: Complex64, n_max: u32, radius: f64, height: u32) -> Result<HeckeKernelCheck> {
    let e = nonhol_dbl_eis_direct(z, w, s, s2, radius)?;
    let p = 96;
    let zz = |a: Complex64| zeta(&crate::mpcore::from_c64(p, a), p).map(|v| to_c64(&v));
    let pre = zz(w + 2.0 * s)? * zz(w + 2.0 * s2)?;
    let lhs = pre * e.value;
    let mut rhs = Complex64::new(0.0, 0.0);
    for n in 1..=n_max as u64 {
        let mut tn = Complex64::new(0.0, 0.0);
        for d in divisors(n) {
            let a = (n / d) as f64;
            for b in 0..d {
                let gz = (z * a + b as f64) / d as f64;
                tn += kernel_k(gz, s, s2, height)?.value;
            }
        }
        rhs += tn * cpow64(Complex64::new(n as f64, 0.0), -(w + s + s2));
    }
    let residual = (lhs - rhs).norm() / lhs.norm().max(rhs.norm());
    Ok(HeckeKernelCheck { lhs, rhs, residual, lhs_err: e.err_est * pre.norm(), n_max })
}

/// Σ_{m<=M} φ(m,s)m^{-w} against π^s/Γ(s)·ζ(w+s-1/2)ζ(w-s+1/2)/ζ(2s).
#[derive(Clone, Debug)]
pub struct DivisorIdentityCheck {
    pub partial: HpComplex,
    pub closed: HpComplex,
    pub residual: f64,
    pub bound: f64,
    pub terms: usize,
}

pub fn divisor_identity_check(s: &HpComplex, w: &HpComplex, terms: usize, prec: u32) -> Result<DivisorIdentityCheck> {
    check_pole(s.as_complex())?;
    let (sc, wc) = (s.to_c64(), w.to_c64());
    let e = (sc.re - 0.5).abs() - wc.re + 0.5;
    if e >= -1.0 {
        return Err(Error::Domain("divisor series needs Re w > |Re s - 1/2| + 3/2".into()));
    }
    let wp = prec + 24;
    let sw = Complex::with_val(wp, s.as_complex());
    let ww = Complex::with_val(wp, w.as_complex());
    let th = theta(&sw, wp)?;
    let x = Complex::with_val(wp, &sw * 2u32) - 1u32;
    let ex = Complex::with_val(wp, 0.5 - &sw) - &ww;
    let mut sum = Complex::new(wp);
    for m in 1..=terms {
        let mf = creal(wp, &Float::with_val(wp, m));
        sum += divisor_sigma_complex(&x, m as u64, wp) * cpow(&mf, &ex, wp);
    }
    let partial = Complex::with_val(wp, &sum / &th);
    let half = Complex::with_val(wp, &sw - 0.5);
    let z1 = zeta(&Complex::with_val(wp, &ww + &half), wp)?;
    let z2 = zeta(&Complex::with_val(wp, &ww - &half), wp)?;
    let z3 = zeta(&Complex::with_val(wp, &sw * 2u32), wp)?;
    let closed = cpow(&creal(wp, &pi(wp)), &sw, wp) / gamma(&sw, wp)? * z1 * z2 / z3;
    let residual = 2f64.powf(log2_abs(&Complex::with_val(wp, &partial - &closed)));
    // d(m) <= 2√m.
    let inv_th = 2f64.powf(-log2_abs(&th));
    let bound = 2.0 * inv_th * (terms as f64).powf(e + 1.0) / (-(e + 1.0));
    Ok(DivisorIdentityCheck {
        partial: HpComplex::new(Complex::with_val(prec, partial))?,
        closed: HpComplex::new(Complex::with_val(prec, closed))?,
        residual,
        bound,
        terms,
    })
}

/// |K^♯(iy;s,s')| for each y, and the log-slopes between consecutive samples against
/// the growth exponent 5 + ρ - Re s'.
#[derive(Clone, Debug)]
pub struct SharpDecay {
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
    pub exponent: f64,
    pub ok: bool,
}

pub fn sharp_decay_check(s: Complex64, s2: Complex64, ys: &[f64], height: u32) -> Result<SharpDecay> {
    let rho = check_kernel_domain(s, s2)?;
    let mut values = Vec::new();
    for &y in ys {
        values.push(kernel_sharp(Complex64::new(0.0, y), s, s2, height)?.0.norm());
    }
    let slopes: Vec<f64> = (1..ys.len())
        .map(|i| (values[i].ln() - values[i - 1].ln()) / (ys[i].ln() - ys[i - 1].ln()))
        .collect();
    let exponent = 5.0 + rho - s2.re;
    let ok = slopes.iter().all(|&m| m <= exponent + 0.5);
    Ok(SharpDecay { ys: ys.to_vec(), values, slopes, exponent, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::bessel_k;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bessel64_matches_high_precision() {
        let nu = c(0.3, 2.0);
        let v = bessel_series64(nu, 1.7, &[c(1.0, 0.0)]);
        let hp = bessel_k(&crate::mpcore::from_c64(128, nu), &Float::with_val(128, 1.7), 128).unwrap();
        assert!((v - to_c64(&hp)).norm() < 1e-14 * v.norm());
    }

    #[test]
    fn xi_branches_agree() {
        let xs = XiSharp::new(c(0.9, 0.4)).unwrap();
        for w in [c(0.3, 0.5), c(-0.2, 0.55), c(0.45, 0.7)] {
            let yc = c(w.im, 0.0);
            let direct = (xs.xi_direct(w) - xs.a * cpow64(yc, 1.0 - 2.0 * xs.s)) * cpow64(yc, xs.nu) / xs.b;
            let bessel = xs.eval(w);
            assert!((direct - bessel).norm() < 1e-11 * bessel.norm().max(1e-3), "{w}");
        }
    }

    #[test]
    fn eisenstein_fe_and_cross_method() {
        let p = 160;
        let z = HpComplex::from_f64(0.25, 2.0, p).unwrap();
        let s = HpComplex::from_f64(0.3, 2.0, p).unwrap();
        let s1 = HpComplex::new(Complex::with_val(p, 1 - s.as_complex())).unwrap();
        let a = eisenstein_star(&z, &s, p).unwrap();
        let b = eisenstein_star(&z, &s1, p).unwrap();
        assert!(log2_abs(&Complex::with_val(p, a.as_complex() - b.as_complex())) - log2_abs(a.as_complex()) < -140.0);
        let prof = PrecisionProfile::with_bits(p);
        let s = HpComplex::from_f64(1.7, 0.0, p).unwrap();
        let f = eisenstein_nonhol(&z, &s, EisMethod::Fourier, &prof).unwrap();
        let l = eisenstein_nonhol(&z, &s, EisMethod::Lattice, &prof).unwrap();
        let d = (f.value.to_c64() - l.value.to_c64()).norm();
        assert!(d < f.err_est + l.err_est, "{d} vs {}", l.err_est);
    }

    #[test]
    fn eisenstein_domain_errors() {
        let prof = PrecisionProfile::with_bits(128);
        let z = HpComplex::from_f64(0.0, 1.0, 128).unwrap();
        let s = HpComplex::from_f64(0.8, 0.0, 128).unwrap();
        assert!(matches!(eisenstein_nonhol(&z, &s, EisMethod::Lattice, &prof), Err(Error::Domain(_))));
        let s = HpComplex::from_f64(1.0, 0.0, 128).unwrap();
        assert!(matches!(eisenstein_star(&z, &s, 128), Err(Error::PoleNear(_))));
    }

    #[test]
    fn kernel_domain_is_enforced() {
        assert!(matches!(kernel_k(c(0.0, 1.0), c(0.8, 0.0), c(5.0, 0.0), 200), Err(Error::NonConvergence(_))));
        assert!(kernel_k(c(0.0, 1.0), c(0.8, 0.0), c(6.5, 0.0), 200).is_ok());
    }

    #[test]
    fn swap_sums_agree() {
        let (a, b, n) = kernel_swap_sums(c(0.1, 1.1), c(0.8, 0.0), c(6.5, 0.0), 30.0).unwrap();
        assert!(n > 100);
        assert!((a - b).norm() < 1e-12 * a.norm());
    }

    #[test]
    fn dbl_eis_domain_and_symmetry() {
        assert!(nonhol_dbl_eis_direct(c(0.0, 1.0), c(4.0, 0.0), c(0.9, 0.0), c(3.0, 0.0), 10.0).is_err());
        let z = c(0.1, 1.2);
        let a = nonhol_dbl_eis_direct(z, c(5.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), 20.0).unwrap();
        let b = nonhol_dbl_eis_direct(z, c(5.0, 0.0), c(3.0, 0.0), c(2.0, 0.0), 20.0).unwrap();
        assert!((a.value - b.value).norm() < 1e-12 * a.value.norm());
    }
}
