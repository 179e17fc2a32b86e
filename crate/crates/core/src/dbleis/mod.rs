//! Holomorphic double Eisenstein series: spectral coefficients, direct group sums and
//! the identities linking them to brackets, L-values and Poincaré series.
//!
//! The spectral expansion over an eigenbasis is the primary representation; the coset
//! sums in [`cohen`] and [`poincare`] serve as independent cross-checks.

pub mod cohen;
pub mod cosets;
pub mod poincare;

pub use cohen::{
    cohen_kernel_eval, completion_factor, dbl_eis_point_eval, dbl_eis_raw_eval, KernelPointValue,
};
pub use poincare::{
    bracket_poincare_check, dbl_poincare_point_eval, poincare_point_eval, PoincareCheck,
};

use crate::error::{Error, Result};
use crate::lfunc::{lstar, petersson_norm, LValue, TwistTable};
use crate::modforms::{dim_sk, eigenforms, eisenstein_qexp, rankin_cohen, HeckeEigenform};
use crate::mpcore::arith::{binomial, mod_inverse};
use crate::mpcore::gamma::gamma;
use crate::mpcore::{
    bernoulli, cpow, creal, log2_abs, pi, rpow, two_pi, zeta, Complex, Float, HpComplex,
    PrecisionProfile,
};
use num_complex::Complex64;

/// Eigenbasis of S_k with Petersson norms, shared by all spectral computations.
#[derive(Clone, Debug)]
pub struct SpectralData {
    pub k: i64,
    pub forms: Vec<HeckeEigenform>,
    pub norms: Vec<Float>,
    pub norm_err: f64,
    pub prof: PrecisionProfile,
}

impl SpectralData {
    /// `order` must cover both the q-expansion length and the longest L-series used.
    pub fn new(k: i64, order: usize, prof: &PrecisionProfile) -> Result<Self> {
        if k % 2 != 0 || k < 4 {
            return Err(Error::BadWeight(k));
        }
        let forms = eigenforms(k, order, prof.bits)?;
        let mut norms = Vec::with_capacity(forms.len());
        let mut norm_err: f64 = 0.0;
        for f in &forms {
            let n = petersson_norm(f, prof)?;
            norm_err = norm_err.max(n.err_est / n.value.to_f64().abs());
            norms.push(n.value);
        }
        Ok(SpectralData { k, forms, norms, norm_err, prof: prof.clone() })
    }

    /// Enough coefficients for q-expansions of length `n_q` and twists up to `q_max`.
    pub fn for_twists(k: i64, q_max: u64, prof: &PrecisionProfile) -> Result<Self> {
        let order = prof.qexp_order.max(prof.tail * q_max as usize + 8);
        Self::new(k, order, prof)
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMethod {
    Spectral,
}

/// Coefficients 1..=N_q of E*_{s,k-s}(·,w), possibly twisted.
#[derive(Clone, Debug)]
pub struct DblEisCoeffs {
    pub k: i64,
    pub s: HpComplex,
    pub w: HpComplex,
    pub twist: (u64, u64),
    /// coeffs[n-1] is the coefficient of q^n.
    pub coeffs: Vec<HpComplex>,
    pub method: CoeffMethod,
    /// Set when S_k = 0 and the vector is identically zero.
    pub empty: bool,
    pub err_est: f64,
}

impl DblEisCoeffs {
    /// u = (s+w-k+1)/2 and v = (w-s+1)/2.
    pub fn uv(&self) -> (HpComplex, HpComplex) {
        let p = self.s.prec();
        let (s, w) = (self.s.as_complex(), self.w.as_complex());
        let u = Complex::with_val(p, s + w) - (self.k - 1) as i32;
        let v = Complex::with_val(p, w - s) + 1u32;
        (HpComplex(u / 2u32), HpComplex(v / 2u32))
    }

    /// Σ_n c_n e^{2πinz}.
    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * z).exp();
        let mut qn = q;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs {
            acc += c.to_c64() * qn;
            qn *= q;
        }
        acc
    }

    /// The same vector scaled by a constant.
    pub fn scaled(&self, c: &Complex) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.iter_mut() {
            let p = v.prec();
            *v = HpComplex(Complex::with_val(p, v.as_complex() * c));
        }
        out
    }

    /// max_n |a_n - b_n| / max_n |a_n|.
    pub fn rel_distance(&self, other: &Self) -> f64 {
        rel_distance(&self.coeffs, &other.coeffs)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "s": self.s.to_string(),
            "w": self.w.to_string(),
            "twist": format!("{}/{}", self.twist.0, self.twist.1),
            "method": "spectral",
            "empty": self.empty,
            "err": format!("{:.3e}", self.err_est),
            "coeffs": self.coeffs.iter().map(|c| c.to_strings()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn rel_distance(a: &[HpComplex], b: &[HpComplex]) -> f64 {
    let mut scale = f64::NEG_INFINITY;
    let mut diff = f64::NEG_INFINITY;
    for (x, y) in a.iter().zip(b) {
        scale = scale.max(log2_abs(x.as_complex()));
        let p = x.prec().min(y.prec());
        diff = diff.max(log2_abs(&Complex::with_val(p, x.as_complex() - y.as_complex())));
    }
    if diff == f64::NEG_INFINITY {
        return 0.0;
    }
    if scale == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    2f64.powf(diff - scale)
}

fn lval(f: &HeckeEigenform, s: &Complex, q: u64, p: u64, prof: &PrecisionProfile) -> Result<(Complex, f64)> {
    let t = TwistTable::new(f, s, q, prof)?;
    t.value(f, p)
}

fn assemble(
    sd: &SpectralData,
    weights: Vec<(Complex, f64)>,
    s: &HpComplex,
    w: &HpComplex,
    twist: (u64, u64),
    n_q: usize,
) -> Result<DblEisCoeffs> {
    let prec = sd.prof.bits;
    let wp = prec + 16;
    let mut coeffs = vec![Complex::new(wp); n_q];
    let mut err: f64 = 0.0;
    for (i, (f, (wt, e))) in sd.forms.iter().zip(weights).enumerate() {
        if f.order() < n_q {
            return Err(Error::InsufficientPrecision(format!("{} has {} coefficients", f.id(), f.order())));
        }
        let c = Complex::with_val(wp, &wt / &sd.norms[i]);
        for (n, slot) in coeffs.iter_mut().enumerate() {
            *slot += Complex::with_val(wp, &c * f.coeff(n + 1));
        }
        err = err.max(e + sd.norm_err);
    }
    Ok(DblEisCoeffs {
        k: sd.k,
        s: s.with_prec(prec),
        w: w.with_prec(prec),
        twist,
        coeffs: coeffs
            .into_iter()
            .map(|c| HpComplex::new(Complex::with_val(prec, c)))
            .collect::<Result<_>>()?,
        method: CoeffMethod::Spectral,
        empty: sd.forms.is_empty(),
        err_est: err,
    })
}

/// Coefficients of E*_{s,k-s}(·,w) = Σ_f L*(f,s)L*(f,w) f/⟨f,f⟩.
pub fn dbl_eis_coeffs(sd: &SpectralData, s: &HpComplex, w: &HpComplex, n_q: usize) -> Result<DblEisCoeffs> {
    let prof = &sd.prof;
    let sc = Complex::with_val(prof.bits, s.as_complex());
    let wc = Complex::with_val(prof.bits, w.as_complex());
    let mut weights = Vec::new();
    for f in &sd.forms {
        let (a, ea) = lval(f, &sc, 1, 0, prof)?;
        let (b, eb) = lval(f, &wc, 1, 0, prof)?;
        let rel = ea / 2f64.powf(log2_abs(&a)) + eb / 2f64.powf(log2_abs(&b));
        weights.push((Complex::with_val(prof.bits + 16, &a * &b), rel));
    }
    assemble(sd, weights, s, w, (0, 1), n_q)
}

/// Coefficients of Σ_f L*(f,k-s;p/q) L*(f,k-w) f/⟨f,f⟩.
pub fn twisted_dbl_eis_coeffs(
    sd: &SpectralData,
    s: &HpComplex,
    w: &HpComplex,
    p: i64,
    q: i64,
    n_q: usize,
) -> Result<DblEisCoeffs> {
    let tw = crate::lfunc::normalize_twist(p, q)?;
    let prof = &sd.prof;
    let k = sd.k;
    let ks = Complex::with_val(prof.bits, k - s.as_complex());
    let kw = Complex::with_val(prof.bits, k - w.as_complex());
    let mut weights = Vec::new();
    for f in &sd.forms {
        let (a, ea) = lval(f, &ks, tw.1, tw.0, prof)?;
        let (b, eb) = lval(f, &kw, 1, 0, prof)?;
        let rel = ea / 2f64.powf(log2_abs(&a)) + eb / 2f64.powf(log2_abs(&b));
        weights.push((Complex::with_val(prof.bits + 16, &a * &b), rel));
    }
    assemble(sd, weights, s, w, tw, n_q)
}

/// The constant λ in n!·[E_{k1},E_{k2}]_n/(2πi)^n = λ·E*_{k1+n,k2+n}(·,n+1).
pub fn rc_constant(k1: i64, k2: i64, n: i64, wp: u32) -> Result<Float> {
    let k = k1 + k2 + 2 * n;
    let g = |x: i64| -> Float { crate::mpcore::gamma::gamma_real(&Float::with_val(wp, x), wp) };
    let z = |x: i64| -> Result<Float> {
        Ok(zeta(&creal(wp, &Float::with_val(wp, x)), wp)?.real().clone())
    };
    let pk = Float::with_val(wp, pi(wp).pow_i(k));
    let tpn = Float::with_val(wp, two_pi(wp).pow_i(2 * n));
    let mut c = pk * g(k - 1) * 2u32 / tpn / z(k1)? / z(k2)? / g(k1) / g(k2) / g(k - n - 1);
    // (2πi)^{2n} = (-1)^n (2π)^{2n}.
    if ((k1 / 2) + n) % 2 == 1 {
        c = -c;
    }
    Ok(c)
}

trait PowI {
    fn pow_i(self, e: i64) -> Float;
}

impl PowI for Float {
    fn pow_i(self, e: i64) -> Float {
        use rug::ops::Pow;
        self.pow(e as i32)
    }
}

/// Relative deviation between n!·[E_{k1},E_{k2}]_n/(2πi)^n and λ·E*_{k1+n,k2+n}(·,n+1)
/// over the first N_q coefficients. Zero when both sides vanish.
pub fn rc_identity_residual(k1: i64, k2: i64, n: i64, sd: &SpectralData) -> Result<f64> {
    if k1 < 4 || k2 < 4 || k1 % 2 != 0 || k2 % 2 != 0 || n < 1 {
        return Err(Error::Domain("need even k1,k2 >= 4 and n >= 1".into()));
    }
    let k = k1 + k2 + 2 * n;
    if sd.k != k {
        return Err(Error::InvalidValue(format!("spectral data has weight {}, need {k}", sd.k)));
    }
    let prof = &sd.prof;
    let n_q = prof.qexp_order;
    let wp = prof.bits + 32;
    let br = rankin_cohen(&eisenstein_qexp(k1, n_q + 1)?, &eisenstein_qexp(k2, n_q + 1)?, n as u32);
    let nf = rug::Integer::from(rug::Integer::factorial(n as u32));
    let lhs: Vec<HpComplex> = (1..=n_q)
        .map(|m| {
            let v = Float::with_val(prof.bits, rug::Rational::from(br.coeff(m) * &nf));
            HpComplex::from_real(&v)
        })
        .collect::<Result<_>>()?;
    let s = HpComplex::from_f64((k1 + n) as f64, 0.0, prof.bits)?;
    let w = HpComplex::from_f64((n + 1) as f64, 0.0, prof.bits)?;
    let e = dbl_eis_coeffs(sd, &s, &w, n_q)?;
    let lam = rc_constant(k1, k2, n, wp)?;
    let rhs = e.scaled(&creal(wp, &lam));
    if lhs.iter().all(|c| c.abs().is_zero()) {
        let mx = rhs.coeffs.iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max);
        return Ok(mx);
    }
    Ok(rel_distance(&lhs, &rhs.coeffs))
}

/// Zagier's inner-product formula for ⟨[E_{k1},E_{k2}]_n, f⟩ (normalized bracket).
#[derive(Clone, Debug)]
pub struct ZagierCheck {
    pub lhs: Float,
    pub rhs: Float,
    /// |lhs - rhs| / |rhs| (absolute when rhs = 0).
    pub residual: f64,
}

/// c·⟨f,f⟩ where c is the f-coordinate of the cusp part of [E_{k1},E_{k2}]_n/(2πi)^n,
/// compared with (-1)^{k1/2} 2^{3-k} C(k-2,n) k1 k2/(B_{k1}B_{k2}) L*(f,n+1)L*(f,n+k2).
pub fn zagier_kernel_residual(
    k1: i64,
    k2: i64,
    n: i64,
    f: &HeckeEigenform,
    sd: &SpectralData,
) -> Result<ZagierCheck> {
    let k = k1 + k2 + 2 * n;
    if f.weight != k || sd.k != k {
        return Err(Error::Domain(format!("form of weight {} cannot pair with weight {k}", f.weight)));
    }
    let prof = &sd.prof;
    let wp = prof.bits + 32;
    let d = sd.forms.len();
    let br = rankin_cohen(&eisenstein_qexp(k1, d + 1)?, &eisenstein_qexp(k2, d + 1)?, n as u32);
    let br = crate::modforms::cuspidal_projection_exact(&br)?;
    let target: Vec<Float> = (1..=d).map(|m| Float::with_val(wp, br.coeff(m))).collect();
    let coords = crate::lfunc::solve_eigen_coords(&sd.forms, &target, wp)?;
    let idx = sd
        .forms
        .iter()
        .position(|h| h.embedding_index == f.embedding_index)
        .ok_or_else(|| Error::InvalidValue("form not in the eigenbasis".into()))?;
    let lhs = Float::with_val(wp, &coords[idx] * &sd.norms[idx]);
    let l1: LValue = lstar(f, &HpComplex::from_f64((n + 1) as f64, 0.0, prof.bits)?, prof)?;
    let l2: LValue = lstar(f, &HpComplex::from_f64((n + k2) as f64, 0.0, prof.bits)?, prof)?;
    let b = Float::with_val(wp, &bernoulli(k1 as usize)) * Float::with_val(wp, &bernoulli(k2 as usize));
    let bin = Float::with_val(wp, &binomial(k - 2, n));
    let mut rhs = Float::with_val(wp, l1.value.re() * l2.value.re()) * bin * (k1 * k2) as i32 / b;
    rhs >>= (k - 3) as u32;
    if (k1 / 2) % 2 == 1 {
        rhs = -rhs;
    }
    let diff = Float::with_val(wp, &lhs - &rhs).abs();
    let residual = if rhs.is_zero() { diff.to_f64() } else { (diff / rhs.clone().abs()).to_f64() };
    Ok(ZagierCheck {
        lhs: Float::with_val(prof.bits, lhs),
        rhs: Float::with_val(prof.bits, rhs),
        residual,
    })
}

/// Residual of (2π)^{k-w}/Γ(k-w) L*(f,s)L*(f,w) = ζ(k+1-s-w) Σ_a a^{w-s-1} Σ_b L*(f,k-s;b/a).
#[derive(Clone, Debug)]
pub struct HeckeActionCheck {
    pub lhs: HpComplex,
    pub rhs: HpComplex,
    /// |lhs - rhs|, absolute.
    pub residual: f64,
    /// Bound on the omitted a > A_max terms plus L-value errors.
    pub bound: f64,
    pub a_max: u64,
}

pub fn hecke_action_identity_residual(
    f: &HeckeEigenform,
    s: &HpComplex,
    w: &HpComplex,
    a_max: u64,
    prof: &PrecisionProfile,
) -> Result<HeckeActionCheck> {
    let k = f.weight;
    let wp = prof.bits + 32;
    let sc = Complex::with_val(wp, s.as_complex());
    let wc = Complex::with_val(wp, w.as_complex());
    let sig = sc.real().to_f64();
    let wre = wc.real().to_f64();
    // Absolute convergence of the a-sum and of the untwisted Dirichlet series at k-s.
    let kf = k as f64;
    // Two tail bounds: expand L*(f,k-s;b/a) directly (needs k-σ > (k+1)/2), or first
    // apply the twisted functional equation (needs σ > (k+1)/2).
    let beta_direct = (kf - sig) - (kf - 1.0) / 2.0;
    let beta_fe = sig - (kf - 1.0) / 2.0;
    let e_direct = if beta_direct > 1.0 { wre - kf / 2.0 } else { f64::INFINITY };
    let e_fe = if beta_fe > 1.0 { wre + sig - kf } else { f64::INFINITY };
    if wre - sig >= -1.0 || e_direct.min(e_fe) >= -1.0 {
        return Err(Error::Domain("a-sum outside its convergence region".into()));
    }
    if (f.order() as u64) < prof.tail as u64 * a_max {
        return Err(Error::InsufficientPrecision(format!(
            "need {} coefficients for denominators up to {a_max}",
            prof.tail as u64 * a_max
        )));
    }
    let ks = Complex::with_val(wp, k - &sc);
    let kw = Complex::with_val(wp, k - &wc);
    let ls = lstar(f, s, prof)?;
    let lw = lstar(f, w, prof)?;
    let tp = creal(wp, &two_pi(wp));
    let lhs = cpow(&tp, &kw, wp) / gamma(&kw, wp)? * ls.value.as_complex() * lw.value.as_complex();
    let mut sum = Complex::new(wp);
    let mut lerr: f64 = 0.0;
    let exp = Complex::with_val(wp, &wc - &sc) - 1u32;
    for a in 1..=a_max {
        let t = TwistTable::new(f, &Complex::with_val(prof.bits, &ks), a, prof)?;
        let mut inner = Complex::new(wp);
        for b in 0..a {
            // L*(f,u;b/a) depends on b/a in lowest terms.
            let g = crate::mpcore::arith::gcd(b as i64, a as i64) as u64;
            let (bb, aa) = (b / g, a / g);
            let v = if aa == a {
                t.value(f, bb)?
            } else {
                TwistTable::new(f, &Complex::with_val(prof.bits, &ks), aa, prof)?.value(f, bb)?
            };
            lerr += v.1;
            inner += v.0;
        }
        sum += inner * rpow(&Float::with_val(wp, a), &exp, wp);
    }
    let zk = zeta(&Complex::with_val(wp, Complex::with_val(wp, (k + 1) as u32 - &sc) - &wc), wp)?;
    let rhs = Complex::with_val(wp, &zk * &sum);
    let residual = 2f64.powf(log2_abs(&Complex::with_val(wp, &lhs - &rhs)));
    // Direct: |Σ_b L*(f,k-s;b/a)| = a|Γ(k-s)|(2π)^{σ-k}|Σ_t a_f(at)(at)^{s-k}|
    //   <= 2ζ(β)²|Γ(k-s)|(2π)^{σ-k} a^{σ-k+(k-1)/2+3/2}, using d(at) <= 2√a d(t).
    // After the functional equation: |L*(f,k-s;b/a)| = a^{2σ-k}|L*(f,s;-b'/a)|
    //   <= a^{2σ-k} ζ(β')²|Γ(s)|(2π)^{-σ}, summed over a values of b.
    let zeta_sq = |b: f64| -> Result<f64> {
        let z = zeta(&crate::mpcore::cnum(64, b, 0.0), 64)?.real().to_f64();
        Ok(z * z)
    };
    let tp_f = 2.0 * std::f64::consts::PI;
    let (c, e) = if e_direct <= e_fe {
        let g = 2f64.powf(log2_abs(&gamma(&ks, wp)?)) * tp_f.powf(sig - kf);
        (2.0 * zeta_sq(beta_direct)? * g, e_direct)
    } else {
        let g = 2f64.powf(log2_abs(&gamma(&sc, wp)?)) * tp_f.powf(-sig);
        (zeta_sq(beta_fe)? * g, e_fe)
    };
    let c = c * 2f64.powf(log2_abs(&zk));
    let tail = c * (a_max as f64).powf(e + 1.0) / (-(e + 1.0));
    let bound = tail + lerr * 2f64.powf(log2_abs(&zk)) + 2f64.powf(log2_abs(&lhs)) * (ls.err_est + lw.err_est);
    Ok(HeckeActionCheck {
        lhs: HpComplex::new(Complex::with_val(prof.bits, lhs))?,
        rhs: HpComplex::new(Complex::with_val(prof.bits, rhs))?,
        residual,
        bound,
        a_max,
    })
}

/// p' with pp' ≡ 1 mod q (0 when q = 1).
pub fn twist_inverse(p: u64, q: u64) -> Result<u64> {
    if q == 1 {
        return Ok(0);
    }
    mod_inverse(p as i64, q as i64)
        .map(|x| x as u64)
        .ok_or_else(|| Error::Domain(format!("{p}/{q} not reduced")))
}

/// dim S_k; zero means every spectral vector is empty.
pub fn cusp_dimension(k: i64) -> usize {
    dim_sk(k)
}

#[cfg(test)]
mod tests;
