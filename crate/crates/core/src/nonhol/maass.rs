//! Ingested Maass cusp forms: the data file, evaluation on ℍ and completed L-values.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::path::Path;

use super::{bessel_series64, check_dbl_domain, eisenstein_star, nonhol_dbl_eis_direct};
use crate::error::{Error, Result};
use crate::lfunc::LValue;
use crate::mpcore::quad::gauss_legendre;
use crate::mpcore::{
    creal, from_c64, gamma, inc_gamma_upper, log2_abs, pi, theta, to_c64, zeta, Complex, Float,
    HpComplex, PrecisionProfile,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Spectral parameter R (eigenvalue 1/4 + R²), parity and ν(1..=N).
#[derive(Clone, Debug)]
pub struct MaassFormData {
    pub r: Float,
    pub parity: Parity,
    pub nu: Vec<Float>,
    pub source: String,
    pub claimed_precision: f64,
}

impl MaassFormData {
    pub fn n_max(&self) -> usize {
        self.nu.len()
    }

    pub fn nu(&self, n: usize) -> &Float {
        &self.nu[n - 1]
    }

    /// ν(1) = 1 and ν(m)ν(n) = Σ_{d|(m,n)} ν(mn/d²) for m, n <= 12 within 100× the claimed precision.
    pub fn validate(&self) -> Result<()> {
        if self.nu.is_empty() {
            return Err(Error::BadData("no coefficients".into()));
        }
        let tol = 100.0 * self.claimed_precision;
        if (self.nu(1).to_f64() - 1.0).abs() > tol {
            return Err(Error::BadData("ν(1) must be 1".into()));
        }
        let n = self.n_max();
        let p = self.nu[0].prec();
        for a in 2..=12.min(n) {
            for b in a..=12.min(n) {
                if a * b > n {
                    break;
                }
                let g = crate::mpcore::arith::gcd(a as i64, b as i64) as usize;
                let mut rhs = Float::new(p);
                for d in 1..=g {
                    if g.is_multiple_of(d) {
                        rhs += self.nu(a * b / (d * d));
                    }
                }
                let lhs = Float::with_val(p, self.nu(a) * self.nu(b));
                let diff = Float::with_val(p, &lhs - &rhs).abs().to_f64();
                if diff > tol * (1.0 + lhs.to_f64().abs()) {
                    return Err(Error::BadData(format!("Hecke relation fails at ({a},{b}): {diff:e}")));
                }
            }
        }
        Ok(())
    }

    pub fn id(&self) -> String {
        format!("maass:R={}", self.r.to_string_radix(10, Some(12)))
    }
}

fn parse_decimal(s: &str, prec: u32) -> Result<Float> {
    let ok = !s.is_empty()
        && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'));
    if !ok {
        return Err(Error::BadData(format!("not a decimal: {s:?}")));
    }
    Float::parse(s)
        .map(|v| Float::with_val(prec, v))
        .map_err(|_| Error::BadData(format!("not a decimal: {s:?}")))
}

/// Strict parser for `R <dec> parity <even|odd> prec <dec>` followed by `n nu(n)` lines
/// with n = 1, 2, ... in order.
pub fn parse_maass(text: &str, source: &str) -> Result<MaassFormData> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::BadData("empty file".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 6 || h[0] != "R" || h[2] != "parity" || h[4] != "prec" {
        return Err(Error::BadData(format!("bad header {header:?}")));
    }
    let digits = h[1].chars().filter(|c| c.is_ascii_digit()).count();
    let bits = ((digits as f64 * 3.33) as u32 + 32).max(128);
    let r = parse_decimal(h[1], bits)?;
    if r <= 0 {
        return Err(Error::BadData("R must be positive".into()));
    }
    let parity = match h[3] {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => return Err(Error::BadData(format!("bad parity {other:?}"))),
    };
    let claimed_precision = parse_decimal(h[5], 64)?.to_f64();
    if !(claimed_precision > 0.0 && claimed_precision < 1.0) {
        return Err(Error::BadData("prec must lie in (0,1)".into()));
    }
    let mut nu = Vec::new();
    for (i, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::BadData(format!("line {}: expected `n nu(n)`", i + 1)));
        }
        let n: usize = f[0]
            .parse()
            .map_err(|_| Error::BadData(format!("line {}: bad index", i + 1)))?;
        if n != nu.len() + 1 {
            let what = if n <= nu.len() { "duplicate" } else { "gap before" };
            return Err(Error::BadData(format!("line {}: {what} n = {n}", i + 1)));
        }
        nu.push(parse_decimal(f[1], bits)?);
    }
    let data = MaassFormData { r, parity, nu, source: source.to_string(), claimed_precision };
    data.validate()?;
    Ok(data)
}

pub fn maass_load(path: &Path) -> Result<MaassFormData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadData(format!("{}: {e}", path.display())))?;
    parse_maass(&text, &path.display().to_string())
}

/// u(z) = 4√y Σ ν(n) K_{iR}(2πny) cos(2πnx) for even data.
pub fn maass_eval(data: &MaassFormData, z: Complex64) -> Result<f64> {
    if data.parity != Parity::Even {
        return Err(Error::ParityUnsupported);
    }
    let coeffs: Vec<Complex64> = data
        .nu
        .iter()
        .enumerate()
        .map(|(i, v)| Complex64::new(v.to_f64() * (2.0 * PI * (i + 1) as f64 * z.re).cos(), 0.0))
        .collect();
    let nu = Complex64::new(0.0, data.r.to_f64());
    Ok(4.0 * z.im.sqrt() * bessel_series64(nu, 2.0 * PI * z.im, &coeffs).re)
}

/// L*(u,s) = ∫_1^∞ u(iy)(y^{s-1/2} + y^{1/2-s}) dy/y
///         = 4 Σ ν(n) ∫_0^∞ cos(Rt)[Γ(s,λ)λ^{-s} + Γ(1-s,λ)λ^{s-1}] dt,  λ = 2πn cosh t.
pub fn maass_lstar(data: &MaassFormData, s: &HpComplex, prof: &PrecisionProfile) -> Result<LValue> {
    if data.parity != Parity::Even {
        return Err(Error::ParityUnsupported);
    }
    let prec = prof.bits;
    let rf = data.r.to_f64();
    let ln2 = std::f64::consts::LN_2;
    // The value is of size e^{-πR/2}; carry that many extra bits.
    let scale_bits = PI * rf / 2.0 / ln2;
    let wp = prec + 32 + scale_bits as u32;
    let d = PI / 6.0;
    let need = (prec as f64 + 40.0) * ln2 + PI * rf / 2.0;
    let h = 2.0 * PI * d / (need + rf * d + 20.0);
    let hf = Float::with_val(wp, h);
    let r = Float::with_val(wp, &data.r);
    let sw = Complex::with_val(wp, s.as_complex());
    let one_s = Complex::with_val(wp, 1 - &sw);
    let neg_s = Complex::with_val(wp, -&sw);
    let s_m1 = Complex::with_val(wp, &sw - 1u32);
    let tp = Float::with_val(wp, pi(wp) * 2u32);
    let mut total = Complex::new(wp);
    let mut abs_total = 0f64;
    let mut used = 0;
    for n in 1..=data.n_max() {
        let lam0 = 2.0 * PI * n as f64;
        if lam0 - (lam0.ln()) > need + 8.0 {
            break;
        }
        used = n;
        let nv = data.nu(n);
        if nv.is_zero() {
            continue;
        }
        let c_end = ((need + 8.0) / lam0).max(1.0);
        let t_end = c_end.acosh() + 0.5;
        let count = (t_end / h).ceil() as usize;
        let mut acc = Complex::new(wp);
        for j in 0..=count {
            let t = Float::with_val(wp, &hf * j as u32);
            let lam = Float::with_val(wp, t.cosh_ref()) * &tp * n as u32;
            let lc = creal(wp, &lam);
            let g1 = inc_gamma_upper(&sw, &lam, wp)? * crate::mpcore::cpow(&lc, &neg_s, wp);
            let g2 = inc_gamma_upper(&one_s, &lam, wp)? * crate::mpcore::cpow(&lc, &s_m1, wp);
            let mut term = (g1 + g2) * Float::with_val(wp, &r * &t).cos();
            if j == 0 {
                term /= 2u32;
            }
            acc += term;
        }
        acc *= &hf;
        acc *= nv;
        abs_total += 2f64.powf(log2_abs(&acc));
        total += acc;
    }
    total *= 4u32;
    // Coefficients beyond the data: |ν(n)| <= √n, integral <= e^{-2πn}/(πn).
    let mut missing = 0.0;
    if used == data.n_max() {
        let n = (used + 1) as f64;
        missing = 8.0 * n.sqrt() * (-2.0 * PI * n).exp() / (PI * n);
    }
    let value = HpComplex::new(Complex::with_val(prec, total))?;
    let err_est = 4.0 * abs_total * data.claimed_precision + missing
        + 2f64.powf(log2_abs(value.as_complex()) - prec as f64 + 8.0);
    Ok(LValue { form: data.id(), s: s.clone(), twist: (0, 1), value, err_est })
}

/// Fundamental-domain quadrature of ⟨𝓔*(·;s,s'), u⟩ against L*(u,s+s'-1/2)L*(u,s'-s+1/2).
#[derive(Clone, Debug)]
pub struct CplReport {
    pub s: Complex64,
    pub s2: Complex64,
    pub estimate: Complex64,
    pub predicted: Complex64,
    /// L*(u,s+s'-1/2)L*(u,s-s'+1/2); equal to `predicted` by the functional equation.
    pub predicted_swapped: Complex64,
    pub rel_diff: f64,
    pub loose_tol: f64,
    pub agrees: bool,
    pub caveats: Vec<String>,
}

impl CplReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": [self.s.re, self.s.im],
            "s_prime": [self.s2.re, self.s2.im],
            "estimate": [self.estimate.re, self.estimate.im],
            "predicted": [self.predicted.re, self.predicted.im],
            "predicted_swapped": [self.predicted_swapped.re, self.predicted_swapped.im],
            "rel_diff": format!("{:.3e}", self.rel_diff),
            "loose_tol": self.loose_tol,
            "agrees": self.agrees,
            "caveats": self.caveats,
        })
    }
}

/// 𝓔*(z;s,s') with 𝓔 from a pair sum of the given radius.
pub fn dbl_eis_star(z: Complex64, s: Complex64, s2: Complex64, radius: f64) -> Result<Complex64> {
    let p = 96;
    let w = s + s2;
    let e = nonhol_dbl_eis_direct(z, w, s, s2, radius)?.value;
    let c = |x: Complex64| from_c64(p, x);
    let g = gamma(&c(s), p)? * gamma(&c(s2), p)?;
    let zz = zeta(&c(3.0 * s + s2), p)? * zeta(&c(s + 3.0 * s2), p)?;
    let pw = crate::mpcore::cpow(&creal(p, &pi(p)), &c(-w), p);
    let pre = to_c64(&Complex::with_val(p, pw * g * zz * 4u32));
    let th = to_c64(&Complex::with_val(p, theta(&c(s), p)? * theta(&c(s2), p)? * 2u32));
    let es = eisenstein_star(&HpComplex::from_f64(z.re, z.im, p)?, &HpComplex::from_f64(w.re, w.im, p)?, p)?;
    let eis = to_c64(&Complex::with_val(p, es.as_complex() / theta(&c(w), p)?));
    Ok(pre * e + th * eis)
}

pub fn cpl_inner_product_check(
    data: &MaassFormData,
    s: Complex64,
    s2: Complex64,
    nodes: usize,
    radius: f64,
    prof: &PrecisionProfile,
) -> Result<CplReport> {
    if data.parity != Parity::Even {
        return Err(Error::ParityUnsupported);
    }
    check_dbl_domain(s + s2, s, s2)?;
    let y_max = 6.0;
    let gl: Vec<(f64, f64)> = gauss_legendre(nodes, 64).iter().map(|(x, w)| (x.to_f64(), w.to_f64())).collect();
    let mut est = Complex64::new(0.0, 0.0);
    for &(tx, wx) in &gl {
        let x = 0.5 * tx;
        let y0 = (1.0 - x * x).sqrt();
        let half = 0.5 * (y_max - y0);
        for &(ty, wy) in &gl {
            let y = y0 + half * (ty + 1.0);
            let z = Complex64::new(x, y);
            let u = maass_eval(data, z)?;
            if u == 0.0 {
                continue;
            }
            let e = dbl_eis_star(z, s, s2, radius)?;
            est += e * u * (0.5 * wx * half * wy / (y * y));
        }
    }
    let lp = PrecisionProfile { bits: prof.bits.min(128), ..prof.clone() };
    let l = |a: Complex64| -> Result<Complex64> {
        Ok(maass_lstar(data, &HpComplex::from_f64(a.re, a.im, lp.bits)?, &lp)?.value.to_c64())
    };
    let first = l(s + s2 - 0.5)?;
    let predicted = first * l(s2 - s + 0.5)?;
    let predicted_swapped = first * l(s - s2 + 0.5)?;
    let scale = est.norm().max(predicted.norm());
    let rel_diff = if scale == 0.0 { 0.0 } else { (est - predicted).norm() / scale };
    let loose_tol = 5e-2;
    let caveats = vec![
        format!("𝓔 pair sums truncated at |cz+d| <= {radius}"),
        format!("fundamental domain cut at y <= {y_max}; {nodes}×{nodes} Gauss–Legendre nodes"),
        "continuous-spectrum and other cusp-form contributions are bounded, not computed; \
         agreement is expected only for genuine eigenform data"
            .to_string(),
    ];
    Ok(CplReport {
        s,
        s2,
        estimate: est,
        predicted,
        predicted_swapped,
        rel_diff,
        loose_tol,
        agrees: rel_diff < loose_tol,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "R 9.5336952613535575543442352359287 parity even prec 1e-20\n";

    fn synthetic(n_max: usize) -> String {
        // Hecke-consistent coefficients from ν(2) = 0.5, ν(3) = -0.25, ν(p) = 0 otherwise.
        let mut nu = vec![0.0f64; n_max + 1];
        nu[1] = 1.0;
        let prime = |p: usize| -> f64 {
            match p {
                2 => 0.5,
                3 => -0.25,
                _ => 0.0,
            }
        };
        for n in 2..=n_max {
            let f = crate::mpcore::arith::factor(n as u64);
            let mut v = 1.0;
            for (p, e) in f {
                let a = prime(p as usize);
                let (mut x0, mut x1) = (1.0, a);
                for _ in 1..e {
                    let x2 = a * x1 - x0;
                    x0 = x1;
                    x1 = x2;
                }
                v *= x1;
            }
            nu[n] = v;
        }
        let mut t = HEADER.to_string();
        for (n, v) in nu.iter().enumerate().skip(1) {
            t.push_str(&format!("{n} {v:.17e}\n"));
        }
        t
    }

    #[test]
    fn parser_accepts_consistent_data() {
        let d = parse_maass(&synthetic(30), "test").unwrap();
        assert_eq!(d.n_max(), 30);
        assert_eq!(d.parity, Parity::Even);
        assert!((d.nu(4).to_f64() - (0.25 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn parser_rejects_malformed_files() {
        assert!(parse_maass("", "t").is_err());
        assert!(parse_maass("R 9.5 parity even\n1 1\n", "t").is_err());
        assert!(parse_maass("R 9.5 parity sideways prec 1e-10\n1 1\n", "t").is_err());
        assert!(parse_maass("R 9.5 parity even prec 1e-10\n1 1\n1 1\n", "t").is_err());
        assert!(parse_maass("R 9.5 parity even prec 1e-10\n1 1\n3 0\n", "t").is_err());
        assert!(parse_maass("R 9.5 parity even prec 1e-10\n1 2\n", "t").is_err());
        assert!(parse_maass("R 9.5 parity even prec 1e-10\n1 1\n2 abc\n", "t").is_err());
        // ν(2)² = ν(4) + 1 violated.
        assert!(matches!(
            parse_maass("R 9.5 parity even prec 1e-10\n1 1\n2 1\n3 0\n4 1\n", "t"),
            Err(Error::BadData(_))
        ));
    }

    #[test]
    fn odd_forms_are_refused() {
        let t = synthetic(10).replace("parity even", "parity odd");
        let d = parse_maass(&t, "t").unwrap();
        let prof = PrecisionProfile::with_bits(128);
        let s = HpComplex::from_f64(0.7, 0.0, 128).unwrap();
        assert_eq!(maass_lstar(&d, &s, &prof).unwrap_err(), Error::ParityUnsupported);
    }

    #[test]
    fn functional_equation_and_reality() {
        let d = parse_maass(&synthetic(30), "t").unwrap();
        let prof = PrecisionProfile::with_bits(128);
        let s = HpComplex::from_f64(0.7, 0.3, 128).unwrap();
        let s1 = HpComplex::new(Complex::with_val(128, 1 - s.as_complex())).unwrap();
        let a = maass_lstar(&d, &s, &prof).unwrap();
        let b = maass_lstar(&d, &s1, &prof).unwrap();
        let c = maass_lstar(&d, &s.conj(), &prof).unwrap();
        assert!((a.value.to_c64() - b.value.to_c64()).norm() <= a.err_est + b.err_est);
        assert!((a.value.to_c64() - c.value.to_c64().conj()).norm() <= a.err_est + c.err_est);
    }

    #[test]
    fn single_term_matches_direct_quadrature() {
        let mut d = parse_maass(&synthetic(5), "t").unwrap();
        for v in d.nu.iter_mut().skip(1) {
            *v = Float::new(v.prec());
        }
        let prof = PrecisionProfile::with_bits(128);
        let s = HpComplex::from_f64(0.7, 0.0, 128).unwrap();
        let l = maass_lstar(&d, &s, &prof).unwrap().value.to_c64();
        // ∫_1^20 4√y K_{iR}(2πy)(y^{s-1/2} + y^{1/2-s}) dy/y on unit panels.
        let p = 128;
        let nu = Complex::with_val(p, (0, d.r.clone()));
        let grid = crate::mpcore::bessel::BesselKGrid::new(&nu, 2.0 * PI, 40.0 * PI, p).unwrap();
        let gl = gauss_legendre(30, p);
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..20 {
            for (x, w) in &gl {
                let y = (x.to_f64() + 1.0) / 2.0 + a as f64;
                let yf = Float::with_val(p, (x.clone() + 1u32) / 2u32 + a);
                let k = to_c64(&grid.eval(&Float::with_val(p, &yf * (pi(p) * 2u32))));
                let f = 4.0 * y.sqrt() * k * (y.powf(0.2) + y.powf(-0.2)) / y;
                acc += f * w.to_f64() / 2.0;
            }
        }
        assert!((acc - l).norm() < 1e-12 * l.norm(), "{acc} vs {l}");
    }
}
