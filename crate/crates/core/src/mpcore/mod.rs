//! Arbitrary-precision arithmetic and special functions.
//!
//! Big numbers come from `rug` (GMP/MPFR/MPC). Functions on the hot path take a
//! `&Complex` plus a target precision; [`HpComplex`] is the validated value type
//! that crosses module boundaries.

pub mod arith;
pub mod bernoulli;
pub mod bessel;
pub mod fast;
pub mod gamma;
pub mod lipschitz;
pub mod quad;
pub mod zeta;

use crate::error::{Error, Result};
use num_complex::Complex64;
pub use rug::{Complex, Float, Integer, Rational};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type BigRational = Rational;

pub use arith::{divisor_sigma_complex, divisor_sigma_int};
pub use bernoulli::bernoulli;
pub use bessel::bessel_k;
pub use gamma::{gamma, inc_gamma_lower, inc_gamma_upper, log_gamma};
pub use lipschitz::lipschitz_sum;
pub use zeta::{hurwitz_zeta, theta, zeta};

/// Smallest working precision accepted anywhere.
pub const MIN_PREC: u32 = 64;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

pub fn two_pi(prec: u32) -> Float {
    pi(prec) * 2u32
}

pub fn ln2(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Log2)
}

pub fn cnum(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn creal(prec: u32, re: &Float) -> Complex {
    Complex::with_val(prec, (re, 0u32))
}

/// |z| as a real at the precision of `z`.
pub fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

pub fn from_c64(prec: u32, z: Complex64) -> Complex {
    cnum(prec, z.re, z.im)
}

/// log2 |z|, or -inf for zero; handy for bit-loss bookkeeping.
pub fn log2_abs(z: &Complex) -> f64 {
    let a = cabs(z);
    if a.is_zero() {
        f64::NEG_INFINITY
    } else {
        let (m, e) = a.to_f64_exp();
        m.abs().log2() + e as f64
    }
}

pub fn log2_abs_f(x: &Float) -> f64 {
    if x.is_zero() {
        f64::NEG_INFINITY
    } else {
        let (m, e) = x.to_f64_exp();
        m.abs().log2() + e as f64
    }
}

/// Is `s` within `radius` of a non-positive integer?
pub fn near_nonpositive_integer(s: &Complex, radius: f64) -> bool {
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    if re > radius {
        return false;
    }
    let n = re.round().min(0.0);
    ((re - n).powi(2) + im * im).sqrt() < radius
}

/// Principal power `base^e` with arg(base) in (-pi, pi].
///
/// This is the only place complex powers are formed. A zero imaginary part is
/// forced to +0 so that negative reals sit on the upper side of the cut.
pub fn cpow(base: &Complex, e: &Complex, prec: u32) -> Complex {
    if base.real().is_zero() && base.imag().is_zero() {
        if e.real().is_sign_positive() && !e.real().is_zero() {
            return Complex::new(prec);
        }
        if e.real().is_zero() && e.imag().is_zero() {
            return Complex::with_val(prec, 1u32);
        }
        return Complex::with_val(prec, (f64::INFINITY, 0.0));
    }
    let wp = prec + 16;
    let mut b = Complex::with_val(wp, base);
    if b.imag().is_zero() {
        *b.mut_imag() = Float::new(wp);
    }
    let l = b.ln();
    let mut r = Complex::with_val(wp, &l * e);
    r.exp_mut();
    Complex::with_val(prec, r)
}

/// `x^e` for a positive real `x`.
pub fn rpow(x: &Float, e: &Complex, prec: u32) -> Complex {
    let wp = prec + 16;
    let l = Float::with_val(wp, x.ln_ref());
    let r = Complex::with_val(wp, e * &l).exp();
    Complex::with_val(prec, r)
}

/// A finite complex number at a recorded working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex(pub(crate) Complex);

impl HpComplex {
    pub fn new(z: Complex) -> Result<Self> {
        let p = z.prec();
        if p.0.min(p.1) < MIN_PREC {
            return Err(Error::InvalidValue(format!(
                "precision {} below {MIN_PREC}",
                p.0.min(p.1)
            )));
        }
        if !z.real().is_finite() || !z.imag().is_finite() {
            return Err(Error::InvalidValue("non-finite complex value".into()));
        }
        Ok(HpComplex(z))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidValue("non-finite complex value".into()));
        }
        Self::new(cnum(prec.max(MIN_PREC), re, im))
    }

    pub fn from_real(x: &Float) -> Result<Self> {
        Self::new(creal(x.prec(), x))
    }

    /// Parses `"re"`, `"[re,im]"` or `"re+imi"`-free forms `"re,im"`.
    pub fn parse(text: &str, prec: u32) -> Result<Self> {
        let t = text.trim().trim_start_matches('[').trim_end_matches(']');
        let mut parts = t.split(',').map(|p| p.trim().trim_matches('"'));
        let re = parts.next().unwrap_or("");
        let im = parts.next().unwrap_or("0");
        if parts.next().is_some() {
            return Err(Error::InvalidValue(format!("cannot parse complex {text:?}")));
        }
        let parse = |s: &str| -> Result<Float> {
            let v = Float::parse(s)
                .map_err(|_| Error::InvalidValue(format!("cannot parse number {s:?}")))?;
            Ok(Float::with_val(prec, v))
        };
        Self::new(Complex::with_val(prec, (parse(re)?, parse(im)?)))
    }

    pub fn prec(&self) -> u32 {
        let p = self.0.prec();
        p.0.min(p.1)
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn into_complex(self) -> Complex {
        self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn abs(&self) -> Float {
        cabs(&self.0)
    }

    pub fn to_c64(&self) -> Complex64 {
        to_c64(&self.0)
    }

    pub fn conj(&self) -> Self {
        HpComplex(self.0.clone().conj())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        HpComplex(Complex::with_val(prec.max(MIN_PREC), &self.0))
    }

    /// `[re, im]` as decimal strings with enough digits for the precision.
    pub fn to_strings(&self) -> [String; 2] {
        let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
        [
            fmt_float(self.0.real(), digits),
            fmt_float(self.0.imag(), digits),
        ]
    }
}

pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits.max(2)))
}

impl fmt::Display for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [re, im] = self.to_strings();
        write!(f, "[{re},{im}]")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&HpComplex> for &HpComplex {
            type Output = HpComplex;
            fn $m(self, rhs: &HpComplex) -> HpComplex {
                let p = self.prec().min(rhs.prec());
                HpComplex(Complex::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl $tr<HpComplex> for HpComplex {
            type Output = HpComplex;
            fn $m(self, rhs: HpComplex) -> HpComplex {
                &self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div<&HpComplex> for &HpComplex {
    type Output = Result<HpComplex>;
    fn div(self, rhs: &HpComplex) -> Result<HpComplex> {
        if rhs.0.real().is_zero() && rhs.0.imag().is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let p = self.prec().min(rhs.prec());
        HpComplex::new(Complex::with_val(p, &self.0 / &rhs.0))
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex(Complex::with_val(self.prec(), -&self.0))
    }
}

/// Precision and truncation knobs shared by every computation.
#[derive(Clone, Debug, PartialEq)]
pub struct PrecisionProfile {
    /// Working precision in bits.
    pub bits: u32,
    /// q-expansion order.
    pub qexp_order: usize,
    /// Cap on the number of terms in an exponentially convergent L-series.
    pub tail: usize,
    /// Height bound for group sums.
    pub height: u32,
    /// Acceptance tolerance is `2^tol_log2`.
    pub tol_log2: i32,
}

impl Default for PrecisionProfile {
    fn default() -> Self {
        Self::with_bits(256)
    }
}

impl PrecisionProfile {
    /// Defaults scaled to a given precision.
    pub fn with_bits(bits: u32) -> Self {
        PrecisionProfile {
            bits,
            qexp_order: 64,
            tail: Self::tail_for(bits),
            height: 200,
            tol_log2: -((bits / 2) as i32),
        }
    }

    /// Smallest M with e^{-2 pi M} < 2^{-bits}, padded.
    pub fn tail_for(bits: u32) -> usize {
        let m = ((bits as f64 + 32.0) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil();
        m as usize + 16
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < MIN_PREC {
            return Err(Error::InvalidValue(format!("precision must be >= {MIN_PREC} bits")));
        }
        if self.qexp_order == 0 || self.tail == 0 || self.height == 0 {
            return Err(Error::InvalidValue("profile sizes must be positive".into()));
        }
        if self.tol_log2 >= 0 {
            return Err(Error::InvalidValue("tolerance must be below 1".into()));
        }
        if (self.tol_log2 as i64) < 12 - self.bits as i64 {
            return Err(Error::InvalidValue(format!(
                "tolerance 2^{} too tight for {} bits",
                self.tol_log2, self.bits
            )));
        }
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        2f64.powi(self.tol_log2)
    }

    pub fn tol_float(&self) -> Float {
        Float::with_val(self.bits, 1u32) << self.tol_log2
    }

    /// Same profile at doubled precision, for stability checks.
    pub fn doubled(&self) -> Self {
        let mut p = self.clone();
        p.bits *= 2;
        p.tail = p.tail.max(Self::tail_for(p.bits));
        p.tol_log2 *= 2;
        p
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "precision_bits": self.bits,
            "qexp_order": self.qexp_order,
            "tail": self.tail,
            "height": self.height,
            "tol_log2": self.tol_log2,
        })
    }

    /// Reads a profile; missing fields keep their defaults for the given bits.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidValue("profile must be a JSON object".into()))?;
        let get = |k: &str| obj.get(k).and_then(|x| x.as_i64());
        let bits = get("precision_bits").unwrap_or(256);
        if bits < MIN_PREC as i64 || bits > 1 << 20 {
            return Err(Error::InvalidValue(format!("bad precision_bits {bits}")));
        }
        let mut p = Self::with_bits(bits as u32);
        if let Some(x) = get("qexp_order") {
            p.qexp_order = usize::try_from(x).map_err(|_| Error::InvalidValue("qexp_order".into()))?;
        }
        if let Some(x) = get("tail") {
            p.tail = usize::try_from(x).map_err(|_| Error::InvalidValue("tail".into()))?;
        }
        if let Some(x) = get("height") {
            p.height = u32::try_from(x).map_err(|_| Error::InvalidValue("height".into()))?;
        }
        if let Some(x) = get("tol_log2") {
            p.tol_log2 = i32::try_from(x).map_err(|_| Error::InvalidValue("tol_log2".into()))?;
        }
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(HpComplex::from_f64(f64::NAN, 0.0, 128).is_err());
        assert!(HpComplex::new(Complex::with_val(128, (f64::INFINITY, 0.0))).is_err());
        assert!(HpComplex::new(Complex::with_val(32, 1.0)).is_err());
    }

    #[test]
    fn mixed_precision_uses_min() {
        let a = HpComplex::from_f64(1.0, 2.0, 128).unwrap();
        let b = HpComplex::from_f64(3.0, -1.0, 300).unwrap();
        assert_eq!((&a * &b).prec(), 128);
        assert_eq!((&b + &a).prec(), 128);
    }

    #[test]
    fn cpow_branch() {
        // (-1)^{1/2} = i on the principal branch.
        let r = cpow(&cnum(128, -1.0, 0.0), &cnum(128, 0.5, 0.0), 128);
        assert!((to_c64(&r) - Complex64::new(0.0, 1.0)).norm() < 1e-30);
        // Negative zero imaginary part must not flip the branch.
        let mut b = cnum(128, -1.0, 0.0);
        *b.mut_imag() = -Float::new(128);
        let r = cpow(&b, &cnum(128, 0.5, 0.0), 128);
        assert!(r.imag().is_sign_positive());
    }

    #[test]
    fn profile_defaults() {
        let p = PrecisionProfile::default();
        assert_eq!(p.bits, 256);
        assert_eq!(p.tol_log2, -128);
        let m = p.tail as f64;
        assert!((-2.0 * std::f64::consts::PI * m) < -256.0 * std::f64::consts::LN_2);
        p.validate().unwrap();
        let q = PrecisionProfile::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);
        let mut bad = p.clone();
        bad.tol_log2 = -250;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn parse_forms() {
        let z = HpComplex::parse("[1.5, -2]", 128).unwrap();
        assert_eq!(z.to_c64(), Complex64::new(1.5, -2.0));
        assert_eq!(HpComplex::parse("6", 128).unwrap().to_c64(), Complex64::new(6.0, 0.0));
        assert!(HpComplex::parse("abc", 128).is_err());
    }
}
