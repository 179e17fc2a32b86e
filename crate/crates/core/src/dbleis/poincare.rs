//! Poincaré and double Poincaré series by truncated coset sums, and the bracket identity
//! expressing [P_{k1}(m1), P_{k2}(m2)]_n through them.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::cohen::{richardson_err, KernelPointValue};
use super::cosets::{box_radius, cosets, pair_c, Coset};
use crate::error::{Error, Result};
use crate::mpcore::{from_c64, HpComplex};

fn e2pi(m: i64, tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * m as f64) * tau).exp()
}

fn binom(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn fact(n: i64) -> f64 {
    (1..=n).fold(1.0, |a, i| a * i as f64)
}

/// Radius for the pair sums: the box radius, capped where a tail decaying like
/// R^{-alpha} drops below 1e-12.
fn pair_radius(z: Complex64, height: u32, alpha: f64) -> f64 {
    box_radius(z, height).min(10f64.powf(12.0 / alpha.max(1.0)))
}

/// d^r/dz^r P_k(z;m) for r = 0..=n, summed over cosets with |cz+d| <= radius (mod ±).
fn poincare_derivs(list: &[Coset], k: i64, m: i64, n: i64, inner: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let tpim = Complex64::new(0.0, 2.0 * PI * m as f64);
    let mut full = vec![Complex64::new(0.0, 0.0); n as usize + 1];
    let mut half = full.clone();
    for cs in list {
        let e = if m == 0 { Complex64::new(1.0, 0.0) } else { e2pi(m, cs.gz) };
        let jinv = 1.0 / cs.j;
        let base = e * jinv.powi(k as i32);
        let c = cs.c as f64;
        let near = cs.j.norm() <= inner;
        for j in 0..=n {
            let mut t = Complex64::new(0.0, 0.0);
            for l in 0..=j {
                let sign = if (l + j) % 2 == 0 { 1.0 } else { -1.0 };
                let coef = sign * fact(j) / fact(l) * binom(k + j - 1, k + l - 1);
                // Q_{k+2l}(z, j-l; m) summand.
                t += tpim.powi(l as i32) * coef * c.powi((j - l) as i32) * jinv.powi((2 * l + j - l) as i32);
            }
            let v = base * t;
            full[j as usize] += v;
            if near {
                half[j as usize] += v;
            }
        }
    }
    (full, half)
}

/// P_k(z;m) = Σ_{γ∈B\Γ/±} e(mγz) j(γ,z)^{-k}; m = 0 gives E_k.
pub fn poincare_point_eval(z: &HpComplex, k: i64, m: i64, height: u32) -> Result<KernelPointValue> {
    if k < 4 || k % 2 != 0 || m < 0 {
        return Err(Error::Domain("Poincaré series needs even k >= 4 and m >= 0".into()));
    }
    let zc = z.to_c64();
    if !(zc.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let radius = box_radius(zc, height);
    let list = cosets(zc, radius, false);
    let (full, half) = poincare_derivs(&list, k, m, 0, radius / std::f64::consts::SQRT_2);
    let err = richardson_err(full[0], half[0], (k - 2) as f64);
    let prec = z.prec();
    Ok(KernelPointValue {
        z: z.clone(),
        k,
        s: HpComplex::from_f64(m as f64, 0.0, prec)?,
        w: None,
        twist: (0, 1),
        value: HpComplex::new(from_c64(prec, full[0]))?,
        height,
        radius,
        cosets: list.len(),
        err_est: err,
    })
}

struct PairSum {
    full: Complex64,
    half: Complex64,
    pairs: usize,
}

/// Σ_{γ,δ∈B\Γ, c_{γδ^{-1}}>0} c^{w-1} e(m1γz + m2δz) j_γ^{-k1} j_δ^{-k2} over signed cosets.
fn pair_sum(signed: &[Coset], y: f64, k1: i64, k2: i64, w: f64, m1: i64, m2: i64, inner: f64) -> Result<PairSum> {
    let pre: Vec<(Complex64, Complex64, bool)> = signed
        .iter()
        .map(|cs| {
            let a = if m1 == 0 { Complex64::new(1.0, 0.0) } else { e2pi(m1, cs.gz) };
            let b = if m2 == 0 { Complex64::new(1.0, 0.0) } else { e2pi(m2, cs.gz) };
            (a * cs.j.powi(-(k1 as i32)), b * cs.j.powi(-(k2 as i32)), cs.j.norm() <= inner)
        })
        .collect();
    let mut full = Complex64::new(0.0, 0.0);
    let mut half = Complex64::new(0.0, 0.0);
    let mut pairs = 0usize;
    let integral = w.fract() == 0.0;
    for (g, pg) in signed.iter().zip(&pre) {
        let jg = g.j.norm();
        for (h, ph) in signed.iter().zip(&pre) {
            let c = pair_c(g, h);
            if c <= 0 {
                continue;
            }
            if c as f64 * y > jg * h.j.norm() * (1.0 + 1e-9) {
                return Err(Error::InvalidValue(format!(
                    "pair ({},{}),({},{}) violates c <= Im(γz)^-1/2 Im(δz)^-1/2",
                    g.c, g.d, h.c, h.d
                )));
            }
            let cw = if integral { (c as f64).powi(w as i32 - 1) } else { (c as f64).powf(w - 1.0) };
            let t = pg.0 * ph.1 * cw;
            full += t;
            if pg.2 && ph.2 {
                half += t;
            }
            pairs += 1;
        }
    }
    Ok(PairSum { full, half, pairs })
}

/// The double Poincaré series P_{k1,k2}(z,w;m1,m2) by a truncated pair sum.
pub fn dbl_poincare_point_eval(
    z: &HpComplex,
    k1: i64,
    k2: i64,
    w: f64,
    m1: i64,
    m2: i64,
    height: u32,
) -> Result<KernelPointValue> {
    if k1 < 3 || k2 < 3 || !(w < (k1 - 1) as f64 && w < (k2 - 1) as f64) {
        return Err(Error::Domain("double Poincaré series needs Re w < k1-1, k2-1".into()));
    }
    let zc = z.to_c64();
    if !(zc.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    let alpha = (k1.min(k2) as f64 - (w - 1.0).max(0.0)) - 2.0;
    let radius = pair_radius(zc, height, alpha);
    let signed = cosets(zc, radius, true);
    let ps = pair_sum(&signed, zc.im, k1, k2, w, m1, m2, radius / std::f64::consts::SQRT_2)?;
    let err = richardson_err(ps.full, ps.half, alpha);
    let prec = z.prec();
    Ok(KernelPointValue {
        z: z.clone(),
        k: k1 + k2,
        s: HpComplex::from_f64(k1 as f64, 0.0, prec)?,
        w: Some(HpComplex::from_f64(w, 0.0, prec)?),
        twist: (0, 1),
        value: HpComplex::new(from_c64(prec, ps.full))?,
        height,
        radius,
        cosets: ps.pairs,
        err_est: err,
    })
}

/// Both sides of the bracket identity for Poincaré series at one point.
#[derive(Clone, Debug)]
pub struct PoincareCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Largest single contribution on the right, the scale for `residual`.
    pub scale: f64,
    /// |lhs - rhs| / scale.
    pub residual: f64,
    pub err_est: f64,
    pub radius: f64,
}

fn a_coef(k1: i64, k2: i64, l: i64, u: i64, n: i64) -> f64 {
    fact(k1 + n - 1) * fact(k2 + n - 1)
        / (fact(l) * fact(u) * fact(n - l - u) * fact(k1 + l - 1) * fact(k2 + u - 1))
}

/// [P_{k1}(m1),P_{k2}(m2)]_n (derivatives in z) against
/// Σ_{l+u<=n} A(l,u)(-2πim1)^l(2πim2)^u P_{k1+n+l-u,k2+n-l+u}(z,n+1-l-u)/2
///   + P_{k1+k2+2n}(z;m1+m2) Σ_{l+u=n} A(l,u)(-2πim1)^l(2πim2)^u.
pub fn bracket_poincare_check(
    z: &HpComplex,
    k1: i64,
    k2: i64,
    n: i64,
    m1: i64,
    m2: i64,
    height: u32,
) -> Result<PoincareCheck> {
    if k1 < 4 || k2 < 4 || k1 % 2 != 0 || k2 % 2 != 0 || n < 0 || m1 < 0 || m2 < 0 {
        return Err(Error::Domain("need even k1,k2 >= 4 and n,m1,m2 >= 0".into()));
    }
    let zc = z.to_c64();
    if !(zc.im > 0.0) {
        return Err(Error::Domain("z must lie in the upper half plane".into()));
    }
    // Slowest pair sum: weights (k1, k2 - n ...) with exponent w-1 = n-l-u.
    let mut alpha = f64::INFINITY;
    for l in 0..=n {
        for u in 0..=n - l {
            let kk1 = k1 + n + l - u;
            let kk2 = k2 + n - l + u;
            let wm1 = (n - l - u) as f64;
            alpha = alpha.min(kk1.min(kk2) as f64 - wm1 - 2.0);
        }
    }
    alpha = alpha.min((k1.min(k2) - 2) as f64);
    let radius = pair_radius(zc, height, alpha);
    let inner = radius / std::f64::consts::SQRT_2;
    let plain = cosets(zc, radius, false);
    let signed = cosets(zc, radius, true);

    let (d1, d1h) = poincare_derivs(&plain, k1, m1, n, inner);
    let (d2, d2h) = poincare_derivs(&plain, k2, m2, n, inner);
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut lhs_h = Complex64::new(0.0, 0.0);
    for r in 0..=n {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * binom(k1 + n - 1, n - r) * binom(k2 + n - 1, r);
        lhs += d1[r as usize] * d2[(n - r) as usize] * c;
        lhs_h += d1h[r as usize] * d2h[(n - r) as usize] * c;
    }

    let a1 = Complex64::new(0.0, -2.0 * PI * m1 as f64);
    let a2 = Complex64::new(0.0, 2.0 * PI * m2 as f64);
    let pw = |b: Complex64, e: i64| if e == 0 { Complex64::new(1.0, 0.0) } else { b.powi(e as i32) };
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut rhs_h = Complex64::new(0.0, 0.0);
    let mut scale: f64 = lhs.norm();
    let mut edge = Complex64::new(0.0, 0.0);
    for l in 0..=n {
        for u in 0..=n - l {
            let coef = pw(a1, l) * pw(a2, u) * a_coef(k1, k2, l, u, n);
            let ps = pair_sum(&signed, zc.im, k1 + n + l - u, k2 + n - l + u, (n + 1 - l - u) as f64, m1, m2, inner)?;
            let t = coef * ps.full / 2.0;
            rhs += t;
            rhs_h += coef * ps.half / 2.0;
            scale = scale.max(t.norm());
            if l + u == n {
                edge += coef;
            }
        }
    }
    let (p, ph) = poincare_derivs(&plain, k1 + k2 + 2 * n, m1 + m2, 0, inner);
    let t = p[0] * edge;
    rhs += t;
    rhs_h += ph[0] * edge;
    scale = scale.max(t.norm());
    let err = richardson_err(lhs, lhs_h, alpha) + richardson_err(rhs, rhs_h, alpha);
    let residual = if scale > 0.0 { (lhs - rhs).norm() / scale } else { 0.0 };
    Ok(PoincareCheck { lhs, rhs, scale, residual, err_est: err / scale.max(1e-300), radius })
}
