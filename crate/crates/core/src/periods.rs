//! Manin periods ω±, rational reconstruction and the rationality certificates built on them.

use crate::dbleis::{dbl_eis_coeffs, SpectralData};
use crate::error::{Error, Result};
use crate::lfunc::{lstar, lstar_twisted, petersson_norm};
use crate::modforms::HeckeEigenform;
use crate::mpcore::{Complex, Float, HpComplex, Integer, PrecisionProfile, Rational};

/// Gaussian elimination with partial pivoting on an augmented d×(d+1) matrix.
pub fn gauss_solve(m: &mut [Vec<Float>], wp: u32) -> Result<Vec<Float>> {
    let d = m.len();
    for col in 0..d {
        let p = (col..d)
            .max_by(|&i, &j| m[i][col].clone().abs().partial_cmp(&m[j][col].clone().abs()).unwrap())
            .unwrap();
        if m[p][col].is_zero() {
            return Err(Error::SingularSystem("zero pivot".into()));
        }
        m.swap(col, p);
        for i in col + 1..d {
            let f = Float::with_val(wp, &m[i][col] / &m[col][col]);
            for j in col..=d {
                let t = Float::with_val(wp, &f * &m[col][j]);
                m[i][j] -= t;
            }
        }
    }
    let mut x = vec![Float::new(wp); d];
    for i in (0..d).rev() {
        let mut acc = m[i][d].clone();
        for j in i + 1..d {
            acc -= Float::with_val(wp, &m[i][j] * &x[j]);
        }
        x[i] = acc / &m[i][i];
    }
    Ok(x)
}

pub const DEFAULT_D_MAX: u64 = 100_000_000;

/// ω₊ = c_f⟨f,f⟩/L*(f,k-1), ω₋ = ⟨f,f⟩/L*(f,k-2), c_f = L*(f,k-1)L*(f,k-2)/⟨f,f⟩.
#[derive(Clone, Debug)]
pub struct PeriodPair {
    pub form: String,
    pub omega_plus: HpComplex,
    pub omega_minus: HpComplex,
    pub c_f: HpComplex,
    pub norm: Float,
}

impl PeriodPair {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "form": self.form,
            "omega_plus": self.omega_plus.to_strings(),
            "omega_minus": self.omega_minus.to_strings(),
            "c_f": self.c_f.to_strings(),
            "petersson_norm": crate::mpcore::fmt_float(&self.norm, (self.norm.prec() as f64 * std::f64::consts::LOG10_2) as usize),
        })
    }
}

pub fn period_pair(f: &HeckeEigenform, prof: &PrecisionProfile) -> Result<PeriodPair> {
    let norm = petersson_norm(f, prof)?.value;
    period_pair_with_norm(f, &norm, prof)
}

pub fn period_pair_with_norm(f: &HeckeEigenform, norm: &Float, prof: &PrecisionProfile) -> Result<PeriodPair> {
    let k = f.weight;
    let p = prof.bits;
    let l1 = lstar(f, &HpComplex::from_f64((k - 1) as f64, 0.0, p)?, prof)?.value;
    let l2 = lstar(f, &HpComplex::from_f64((k - 2) as f64, 0.0, p)?, prof)?.value;
    let nc = HpComplex::from_real(norm)?;
    let c_f = (&(&l1 * &l2) / &nc)?;
    let omega_plus = (&(&c_f * &nc) / &l1)?;
    let omega_minus = (&nc / &l2)?;
    Ok(PeriodPair { form: f.id(), omega_plus, omega_minus, c_f, norm: norm.clone() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Rational,
    Inconclusive,
}

/// A continued-fraction verdict that a real number is a small-denominator rational.
#[derive(Clone, Debug)]
pub struct RationalCertificate {
    pub input: HpComplex,
    pub reconstructed: Rational,
    pub d_max: u64,
    /// |input - reconstructed|.
    pub residual: f64,
    pub verdict: Verdict,
    pub convergents: Vec<Rational>,
}

impl RationalCertificate {
    pub fn is_rational(&self) -> bool {
        self.verdict == Verdict::Rational
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "input": self.input.to_strings(),
            "reconstructed": self.reconstructed.to_string(),
            "d_max": self.d_max,
            "residual": format!("{:.3e}", self.residual),
            "verdict": match self.verdict { Verdict::Rational => "rational", Verdict::Inconclusive => "inconclusive" },
            "convergents": self.convergents.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn log2_of(x: &Float) -> f64 {
    crate::mpcore::log2_abs_f(x)
}

/// Best continued-fraction convergent of Re x with denominator <= d_max. The verdict is
/// rational when |Im x| and |x - p/q| are below 2^{-P/2}·max(1,|x|).
pub fn rational_reconstruct(x: &HpComplex, d_max: u64) -> RationalCertificate {
    let prec = x.prec();
    let wp = prec + 16;
    let scale = log2_of(x.re()).max(0.0);
    let tol_log2 = -(prec as f64) / 2.0 + scale;
    let re = Float::with_val(wp, x.re());
    let mut convergents = Vec::new();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rem = re.clone();
    let mut best = Rational::new();
    for _ in 0..200 {
        if !rem.is_finite() {
            break;
        }
        let a = rem.clone().floor().to_integer().unwrap_or_default();
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > d_max {
            break;
        }
        let r = Rational::from((h2.clone(), k2.clone()));
        convergents.push(r.clone());
        best = r;
        let frac = Float::with_val(wp, &rem - &a);
        let diff = Float::with_val(wp, &re - &best);
        if frac.is_zero() || log2_of(&diff) < tol_log2 - 8.0 {
            break;
        }
        rem = Float::with_val(wp, 1u32) / frac;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    let diff = Float::with_val(wp, &re - &best);
    let residual = if diff.is_zero() { 0.0 } else { 2f64.powf(log2_of(&diff)) };
    let ok_re = diff.is_zero() || log2_of(&diff) < tol_log2;
    let ok_im = x.im().is_zero() || log2_of(x.im()) < tol_log2;
    let verdict = if ok_re && ok_im && !convergents.is_empty() { Verdict::Rational } else { Verdict::Inconclusive };
    RationalCertificate {
        input: x.clone(),
        reconstructed: best,
        d_max,
        residual,
        verdict,
        convergents,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodSign {
    Plus,
    Minus,
}

impl PeriodSign {
    pub fn name(self) -> &'static str {
        match self {
            PeriodSign::Plus => "+",
            PeriodSign::Minus => "-",
        }
    }
}

/// L*(f,s)/ω₊ for even s and L*(f,s)/ω₋ for odd s.
#[derive(Clone, Debug)]
pub struct ManinEntry {
    pub s: i64,
    pub sign: PeriodSign,
    pub cert: RationalCertificate,
}

impl ManinEntry {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "s": self.s, "sign": self.sign.name(), "certificate": self.cert.to_json() })
    }
}

fn manin_ratio(f: &HeckeEigenform, s: i64, pair: &PeriodPair, prof: &PrecisionProfile) -> Result<(PeriodSign, HpComplex)> {
    let l = lstar(f, &HpComplex::from_f64(s as f64, 0.0, prof.bits)?, prof)?.value;
    if s % 2 == 0 {
        Ok((PeriodSign::Plus, (&l / &pair.omega_plus)?))
    } else {
        Ok((PeriodSign::Minus, (&l / &pair.omega_minus)?))
    }
}

/// All critical ratios of a form whose coefficients are rational.
pub fn manin_table(f: &HeckeEigenform, prof: &PrecisionProfile) -> Result<Vec<ManinEntry>> {
    let pair = period_pair(f, prof)?;
    manin_table_with(f, &pair, prof)
}

pub fn manin_table_with(f: &HeckeEigenform, pair: &PeriodPair, prof: &PrecisionProfile) -> Result<Vec<ManinEntry>> {
    (1..f.weight)
        .map(|s| {
            let (sign, r) = manin_ratio(f, s, pair, prof)?;
            Ok(ManinEntry { s, sign, cert: rational_reconstruct(&r, DEFAULT_D_MAX) })
        })
        .collect()
}

/// x = r0 + r1 λ in a quadratic field, from its two real embeddings.
#[derive(Clone, Debug)]
pub struct QuadraticCertificate {
    pub r0: RationalCertificate,
    pub r1: RationalCertificate,
}

impl QuadraticCertificate {
    pub fn is_certified(&self) -> bool {
        self.r0.is_rational() && self.r1.is_rational()
    }
}

/// Solves x_j = r0 + r1 λ_j (Vandermonde) and certifies r0, r1.
pub fn quadratic_reconstruct(x: [&Float; 2], lambda: [&Float; 2], prec: u32, d_max: u64) -> Result<QuadraticCertificate> {
    let wp = prec + 32;
    let mut m = vec![
        vec![Float::with_val(wp, 1u32), Float::with_val(wp, lambda[0]), Float::with_val(wp, x[0])],
        vec![Float::with_val(wp, 1u32), Float::with_val(wp, lambda[1]), Float::with_val(wp, x[1])],
    ];
    let r = gauss_solve(&mut m, wp)?;
    let cert = |v: &Float| -> Result<RationalCertificate> {
        Ok(rational_reconstruct(&HpComplex::from_real(&Float::with_val(prec, v))?, d_max))
    };
    Ok(QuadraticCertificate { r0: cert(&r[0])?, r1: cert(&r[1])? })
}

/// Manin ratios for a two-dimensional S_k, each certified in ℚ(a_f(2)).
#[derive(Clone, Debug)]
pub struct QuadraticManinEntry {
    pub s: i64,
    pub sign: PeriodSign,
    pub cert: QuadraticCertificate,
}

impl QuadraticManinEntry {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.s,
            "sign": self.sign.name(),
            "certified": self.cert.is_certified(),
            "r0": self.cert.r0.to_json(),
            "r1": self.cert.r1.to_json(),
        })
    }
}

pub fn manin_table_quadratic(sd: &SpectralData, d_max: u64) -> Result<Vec<QuadraticManinEntry>> {
    if sd.forms.len() != 2 {
        return Err(Error::Domain("quadratic reconstruction needs dim S_k = 2".into()));
    }
    let prof = &sd.prof;
    let pairs: Vec<PeriodPair> = sd
        .forms
        .iter()
        .zip(&sd.norms)
        .map(|(f, n)| period_pair_with_norm(f, n, prof))
        .collect::<Result<_>>()?;
    let lam = [sd.forms[0].t2_eigenvalue(), sd.forms[1].t2_eigenvalue()];
    (1..sd.k)
        .map(|s| {
            let (sign, a) = manin_ratio(&sd.forms[0], s, &pairs[0], prof)?;
            let (_, b) = manin_ratio(&sd.forms[1], s, &pairs[1], prof)?;
            let cert = quadratic_reconstruct([a.re(), b.re()], lam, prof.bits, d_max)?;
            Ok(QuadraticManinEntry { s, sign, cert })
        })
        .collect()
}

/// L*(f,s)/ω₊ against the q^1 coefficient of E*_{s,k-s}(·,k-1), and L*(f,s)/ω₋ against
/// that of E*_{k-2,2}(·,s). For dim S_k = 1 both ratios should be rational.
#[derive(Clone, Debug)]
pub struct KdkdReport {
    pub s: HpComplex,
    pub plus: RationalCertificate,
    pub minus: RationalCertificate,
    /// Set for non-real s, where no finite certificate exists; the ratios are reported
    /// but a rational verdict is not expected.
    pub flagged: bool,
}

impl KdkdReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.s.to_strings(),
            "plus": self.plus.to_json(),
            "minus": self.minus.to_json(),
            "flagged_non_real": self.flagged,
        })
    }
}

pub fn kdkd_check(sd: &SpectralData, s: &HpComplex) -> Result<KdkdReport> {
    if sd.forms.len() != 1 {
        return Err(Error::Domain("field certificates are implemented for dim S_k = 1".into()));
    }
    let f = &sd.forms[0];
    let prof = &sd.prof;
    let k = sd.k;
    let pair = period_pair_with_norm(f, &sd.norms[0], prof)?;
    let l = lstar(f, s, prof)?.value;
    let hp = |x: i64| HpComplex::from_f64(x as f64, 0.0, prof.bits);
    let g_plus = dbl_eis_coeffs(sd, s, &hp(k - 1)?, 1)?.coeffs[0].clone();
    let g_minus = dbl_eis_coeffs(sd, &hp(k - 2)?, s, 1)?.coeffs[0].clone();
    let plus = (&(&l / &pair.omega_plus)? / &g_plus)?;
    let minus = (&(&l / &pair.omega_minus)? / &g_minus)?;
    let flagged = !s.im().is_zero();
    Ok(KdkdReport {
        s: s.clone(),
        plus: rational_reconstruct(&plus, DEFAULT_D_MAX),
        minus: rational_reconstruct(&minus, DEFAULT_D_MAX),
        flagged,
    })
}

/// i^u q^{k-2} L*(f,u;p/q) = A ω₊ + i B ω₋ with A, B certified rational.
#[derive(Clone, Debug)]
pub struct TwistedPeriodReport {
    pub u: i64,
    pub twist: (u64, u64),
    pub value: HpComplex,
    pub a: RationalCertificate,
    pub b: RationalCertificate,
}

impl TwistedPeriodReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "u": self.u,
            "twist": format!("{}/{}", self.twist.0, self.twist.1),
            "value": self.value.to_strings(),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
        })
    }
}

pub fn twisted_period_check(
    f: &HeckeEigenform,
    u: i64,
    p: i64,
    q: i64,
    pair: &PeriodPair,
    prof: &PrecisionProfile,
) -> Result<TwistedPeriodReport> {
    let k = f.weight;
    if !(1..k).contains(&u) {
        return Err(Error::Domain(format!("u must lie in 1..{}", k - 1)));
    }
    let lv = lstar_twisted(f, &HpComplex::from_f64(u as f64, 0.0, prof.bits)?, p, q, prof)?;
    let wp = prof.bits + 16;
    let iu = match u.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    let qk = Float::with_val(wp, Integer::from(lv.twist.1).pow((k - 2) as u32));
    let x = Complex::with_val(wp, iu) * lv.value.as_complex() * &qk;
    let (wpl, wmi) = (pair.omega_plus.re(), pair.omega_minus.re());
    if wpl.is_zero() || wmi.is_zero() {
        return Err(Error::SingularSystem("vanishing period".into()));
    }
    let a = Float::with_val(prof.bits, x.real() / wpl);
    let b = Float::with_val(prof.bits, x.imag() / wmi);
    Ok(TwistedPeriodReport {
        u,
        twist: lv.twist,
        value: lv.value.clone(),
        a: rational_reconstruct(&HpComplex::from_real(&a)?, DEFAULT_D_MAX),
        b: rational_reconstruct(&HpComplex::from_real(&b)?, DEFAULT_D_MAX),
    })
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(x: f64, p: u32) -> HpComplex {
        HpComplex::from_f64(x, 0.0, p).unwrap()
    }

    #[test]
    fn reconstructs_simple_fractions() {
        let c = rational_reconstruct(&hp(0.5, 128), 1000);
        assert!(c.is_rational());
        assert_eq!(c.reconstructed, Rational::from((1, 2)));
        let pi = HpComplex::from_real(&crate::mpcore::pi(256)).unwrap();
        assert!(!rational_reconstruct(&pi, 1_000_000).is_rational());
    }

    #[test]
    fn reconstructs_bernoulli_ratio() {
        let r = Rational::from((691, 2730));
        let x = HpComplex::from_real(&Float::with_val(300, &r)).unwrap();
        let c = rational_reconstruct(&x, DEFAULT_D_MAX);
        assert!(c.is_rational());
        assert_eq!(c.reconstructed, r);
        assert_eq!(c.convergents.last().unwrap(), &r);
    }

    #[test]
    fn negative_and_integer_inputs() {
        let c = rational_reconstruct(&hp(-3.25, 128), 100);
        assert_eq!(c.reconstructed, Rational::from((-13, 4)));
        let c = rational_reconstruct(&hp(7.0, 128), 100);
        assert_eq!(c.reconstructed, Rational::from(7));
        assert!(c.is_rational());
    }

    #[test]
    fn imaginary_part_blocks_verdict() {
        let x = HpComplex::from_f64(0.5, 1e-3, 128).unwrap();
        assert!(!rational_reconstruct(&x, 100).is_rational());
    }

    #[test]
    fn vandermonde_recovers_coordinates() {
        let p = 256;
        let s = Float::with_val(p, 5u32).sqrt();
        let l = [Float::with_val(p, 1u32 + &s), Float::with_val(p, 1u32 - &s)];
        // x = 2/3 + (5/7) λ.
        let x: Vec<Float> = l
            .iter()
            .map(|v| Float::with_val(p, v * Rational::from((5, 7))) + Rational::from((2, 3)))
            .collect();
        let c = quadratic_reconstruct([&x[0], &x[1]], [&l[0], &l[1]], p, 1000).unwrap();
        assert!(c.is_certified());
        assert_eq!(c.r0.reconstructed, Rational::from((2, 3)));
        assert_eq!(c.r1.reconstructed, Rational::from((5, 7)));
    }
}
