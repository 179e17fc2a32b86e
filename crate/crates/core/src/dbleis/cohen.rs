//! Direct coset evaluation of the Cohen kernel and of E_{s,k-s}(z,w).

use num_complex::Complex64;

use super::cosets::{box_radius, cosets, reduce_to_fd, Coset};
use crate::error::{Error, Result};
use crate::mpcore::arith::divisors;
use crate::mpcore::fast::{cpow64, Lip64};
use crate::mpcore::gamma::gamma;
use crate::mpcore::{cnum, cpow, creal, from_c64, pi, to_c64, Complex, HpComplex};

/// A truncated group sum at one point.
#[derive(Clone, Debug)]
pub struct KernelPointValue {
    pub z: HpComplex,
    pub k: i64,
    pub s: HpComplex,
    pub w: Option<HpComplex>,
    pub twist: (u64, u64),
    pub value: HpComplex,
    pub height: u32,
    /// Coset radius |cz+d| <= radius actually used.
    pub radius: f64,
    pub cosets: usize,
    pub err_est: f64,
}

impl KernelPointValue {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "z": self.z.to_string(),
            "k": self.k,
            "s": self.s.to_string(),
            "w": self.w.as_ref().map(|w| w.to_string()),
            "twist": format!("{}/{}", self.twist.0, self.twist.1),
            "value": self.value.to_strings(),
            "height": self.height,
            "radius": self.radius,
            "cosets": self.cosets,
            "err": format!("{:.3e}", self.err_est),
        })
    }
}

fn c64(z: &HpComplex) -> Complex64 {
    z.to_c64()
}

/// Error of a sum truncated at R, given the sums at R and R/√2 and decay R^{-alpha}.
pub(crate) fn richardson_err(full: Complex64, half: Complex64, alpha: f64) -> f64 {
    let r = 2f64.powf(alpha / 2.0);
    2.0 * (full - half).norm() / (r - 1.0).max(0.05)
}

/// (1/2)Σ_{γ∈B\Γ} j(γ,z)^{-k} Σ_{m∈ℤ}(γz + p/q + m)^{-s}, cosets with |cz+d| <= R.
pub fn cohen_kernel_eval(
    z: &HpComplex,
    k: i64,
    s: &HpComplex,
    p: i64,
    q: i64,
    height: u32,
) -> Result<KernelPointValue> {
    let tw = crate::lfunc::normalize_twist(p, q)?;
    let sig = s.re().to_f64();
    if !(sig > 1.0 && sig < (k - 1) as f64) {
        return Err(Error::Domain(format!("Cohen kernel needs 1 < Re s < {}", k - 1)));
    }
    let zc = c64(z);
    if !(zc.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let lip = Lip64::new(s.as_complex())?;
    let shift = tw.0 as f64 / tw.1 as f64;
    let radius = box_radius(zc, height);
    let inner = radius / std::f64::consts::SQRT_2;
    let list = cosets(zc, radius, false);
    let (mut full, mut half) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for cs in &list {
        let t = jpow(cs, k) * lip.eval(cs.gz + shift);
        full += t;
        if cs.j.norm() <= inner {
            half += t;
        }
    }
    let err = richardson_err(full, half, (k - 1) as f64 - sig);
    if !(err < full.norm() * 1e-3) && full.norm() > 0.0 {
        return Err(Error::NonConvergence(format!("coset tail {err:.2e} at height {height}")));
    }
    let prec = s.prec();
    Ok(KernelPointValue {
        z: z.clone(),
        k,
        s: s.clone(),
        w: None,
        twist: tw,
        value: HpComplex::new(from_c64(prec, full))?,
        height,
        radius,
        cosets: list.len(),
        err_est: err,
    })
}

fn jpow(cs: &Coset, k: i64) -> Complex64 {
    cs.j.powi(-(k as i32))
}

/// e^{siπ/2}Γ(s)Γ(k-s)Γ(k-w) / (2^{3-w} π^{k+1-w} Γ(k-1)): multiplies ζ(1-w+s)ζ(1-w+k-s)E
/// into E*.
pub fn completion_factor(k: i64, s: &Complex, w: &Complex, prec: u32) -> Result<Complex> {
    let wp = prec + 32;
    let s = Complex::with_val(wp, s);
    let w = Complex::with_val(wp, w);
    let ks = Complex::with_val(wp, k - &s);
    let kw = Complex::with_val(wp, k - &w);
    let ipi2 = Complex::with_val(wp, (0, 1)) * pi(wp) / 2u32;
    let rot = Complex::with_val(wp, &s * &ipi2).exp();
    let num = rot * gamma(&s, wp)? * gamma(&ks, wp)? * gamma(&kw, wp)?;
    let two = cpow(&cnum(wp, 2.0, 0.0), &Complex::with_val(wp, 3u32 - &w), wp);
    let pw = cpow(&creal(wp, &pi(wp)), &Complex::with_val(wp, (k + 1) as u32 - &w), wp);
    let g = gamma(&cnum(wp, (k - 1) as f64, 0.0), wp)?;
    Ok(Complex::with_val(prec, num / (two * pw * g)))
}

/// ζ(1-w+s)ζ(1-w+k-s)E_{s,k-s}(z,w) = 2Σ_{n<=M} n^{s-1-k+w} Σ_{a|n} a^{k-s} L(a),
/// L(a) = Σ_{γ∈B\Γ/±} j(γ,z)^{-k} Σ_m (aγz+m)^{-s}, evaluated at a point of the
/// fundamental domain. Returns (value, coset error, n-tail error).
pub fn dbl_eis_raw_eval(
    z: Complex64,
    k: i64,
    s: &Complex,
    w: &Complex,
    height: u32,
    m_n: usize,
) -> Result<(Complex64, usize, f64, f64, f64)> {
    let lip = Lip64::new(s)?;
    let sc = to_c64(s);
    let wc = to_c64(w);
    let radius = box_radius(z, height);
    let inner = radius / std::f64::consts::SQRT_2;
    let list = cosets(z, radius, false);
    let kk = k as f64;
    let mut l_full = vec![Complex64::new(0.0, 0.0); m_n + 1];
    let mut l_half = vec![Complex64::new(0.0, 0.0); m_n + 1];
    for cs in &list {
        let jk = jpow(cs, k);
        let near = cs.j.norm() <= inner;
        for a in 1..=m_n {
            let t = jk * lip.eval(cs.gz * a as f64);
            l_full[a] += t;
            if near {
                l_half[a] += t;
            }
        }
    }
    let apow: Vec<Complex64> = (0..=m_n)
        .map(|a| if a == 0 { Complex64::new(0.0, 0.0) } else { cpow64(Complex64::new(a as f64, 0.0), kk - sc) })
        .collect();
    let mut full = Complex64::new(0.0, 0.0);
    let mut half = Complex64::new(0.0, 0.0);
    for n in 1..=m_n {
        let np = cpow64(Complex64::new(n as f64, 0.0), sc - 1.0 - kk + wc);
        let (mut tf, mut th) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for a in divisors(n as u64) {
            let a = a as usize;
            tf += apow[a] * l_full[a];
            th += apow[a] * l_half[a];
        }
        full += np * tf * 2.0;
        half += np * th * 2.0;
    }
    let sig = sc.re;
    let coset_err = richardson_err(full, half, kk - 1.0 - sig);
    // n-tail: |T_n C| <= d(n) n^{(k-1)/2} |C|-scale, d(n) <= 2√n.
    let e = wc.re - kk / 2.0;
    let scale = l_full[1].norm() * 2.0;
    let tail = scale * 2.0 * (m_n as f64).powf(e + 1.0) / (-(e + 1.0)).max(0.1);
    Ok((full, list.len(), radius, coset_err, tail))
}

/// E*_{s,k-s}(z,w) by direct summation, completed; z is first moved into the
/// fundamental domain using weight-k modularity.
pub fn dbl_eis_point_eval(
    z: &HpComplex,
    k: i64,
    s: &HpComplex,
    w: &HpComplex,
    height: u32,
    m_n: usize,
) -> Result<KernelPointValue> {
    let sig = s.re().to_f64();
    let wr = w.re().to_f64();
    let kk = k as f64;
    if !(sig > 2.0 && sig < kk - 2.0 && wr < sig - 1.0 && wr < kk - 1.0 - sig) {
        return Err(Error::Domain(
            "direct double Eisenstein sum needs 2 < Re s < k-2 and Re w < Re s - 1, k - 1 - Re s".into(),
        ));
    }
    let prec = s.prec().min(w.prec());
    let (z0, g) = reduce_to_fd(c64(z))?;
    let (raw, count, radius, cerr, terr) = dbl_eis_raw_eval(z0, k, s.as_complex(), w.as_complex(), height, m_n)?;
    let fac = to_c64(&completion_factor(k, s.as_complex(), w.as_complex(), 128)?);
    // E(z) = j(g,z)^{-k} E(gz).
    let zc = c64(z);
    let jg = (zc * g[2] as f64 + g[3] as f64).powi(-(k as i32));
    let value = fac * raw * jg;
    let scale = (fac * jg).norm();
    let err = (cerr + terr) * scale;
    if !(err <= value.norm().max(1e-300) * 1e-2) {
        return Err(Error::NonConvergence(format!("direct sum error {err:.2e} at height {height}")));
    }
    Ok(KernelPointValue {
        z: z.clone(),
        k,
        s: s.clone(),
        w: Some(w.clone()),
        twist: (0, 1),
        value: HpComplex::new(from_c64(prec, value))?,
        height,
        radius,
        cosets: count,
        err_est: err,
    })
}

/// Σ_f c_f f(z) for coefficient vectors given at high precision.
pub fn qseries_at(coeffs: &[HpComplex], z: &HpComplex) -> Complex {
    let p = z.prec();
    let tp = Complex::with_val(p, (0, 1)) * crate::mpcore::two_pi(p);
    let q = Complex::with_val(p, z.as_complex() * tp).exp();
    let mut qn = q.clone();
    let mut acc = Complex::new(p);
    for c in coeffs {
        acc += Complex::with_val(p, c.as_complex() * &qn);
        qn *= &q;
    }
    acc
}
