//! Exact q-expansion algebra for level-one modular forms.

mod eigen;
mod qseries;

pub use eigen::{eigenforms, HeckeEigenform};
pub use qseries::QSeries;

use crate::error::{Error, Result};
use crate::mpcore::arith::{binomial, divisors, gcd, sigma_table};
use crate::mpcore::bernoulli;
use rug::{Integer, Rational};

/// A level-one form of even weight with its truncated q-expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularForm {
    pub weight: i64,
    pub series: QSeries,
    pub cuspidal: bool,
}

impl ModularForm {
    pub fn new(weight: i64, series: QSeries) -> Result<Self> {
        if weight < 0 || weight % 2 != 0 {
            return Err(Error::BadWeight(weight));
        }
        let cuspidal = *series.coeff(0) == 0;
        Ok(ModularForm { weight, series, cuspidal })
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        self.series.coeff(n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let series = self.series.mul(&o.series);
        let cuspidal = *series.coeff(0) == 0;
        ModularForm { weight: self.weight + o.weight, series, cuspidal }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "weight": self.weight, "coeffs": self.series.to_strings() })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let k = v
            .get("weight")
            .and_then(|w| w.as_i64())
            .ok_or_else(|| Error::InvalidValue("missing weight".into()))?;
        let items: Vec<String> = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::InvalidValue("missing coeffs".into()))?
            .iter()
            .map(|x| x.as_str().map(str::to_owned))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidValue("coefficients must be strings".into()))?;
        Self::new(k, QSeries::parse_strings(&items)?)
    }
}

pub fn dim_mk(k: i64) -> usize {
    if k < 0 || k % 2 != 0 || k == 2 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

pub fn dim_sk(k: i64) -> usize {
    if k < 12 {
        0
    } else {
        dim_mk(k) - 1
    }
}

/// E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) q^n.
pub fn eisenstein_qexp(k: i64, order: usize) -> Result<ModularForm> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let c = Rational::from(-2 * k) / bernoulli(k as usize);
    let sig = sigma_table((k - 1) as u32, order);
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(Rational::from(1));
    for s in sig.into_iter().skip(1) {
        coeffs.push(Rational::from(&c * s));
    }
    ModularForm::new(k, QSeries::from_coeffs(coeffs)?)
}

/// Δ = (E_4^3 - E_6^2)/1728.
pub fn delta_qexp(order: usize) -> Result<ModularForm> {
    if order < 2 {
        return Err(Error::InvalidValue("Δ needs order >= 2".into()));
    }
    let e4 = eisenstein_qexp(4, order)?.series;
    let e6 = eisenstein_qexp(6, order)?.series;
    let d = e4.pow(3).sub(&e6.pow(2)).scale(&Rational::from((1, 1728)));
    ModularForm::new(12, d)
}

/// E_4^a E_6^b of weight r (r ≠ 2, r even, r >= 0).
fn eisenstein_monomial(r: i64, order: usize) -> Result<QSeries> {
    let b = (0..3).find(|b| r - 6 * b >= 0 && (r - 6 * b) % 4 == 0).ok_or(Error::BadWeight(r))?;
    let a = (r - 6 * b) / 4;
    let mut s = QSeries::one(order);
    if a > 0 {
        s = s.mul(&eisenstein_qexp(4, order)?.series.pow(a as u32));
    }
    if b > 0 {
        s = s.mul(&eisenstein_qexp(6, order)?.series.pow(b as u32));
    }
    Ok(s)
}

/// Echelonized basis g_0..g_d of M_k with g_i = q^i + O(q^{d+1}).
pub fn victor_miller_basis(k: i64, order: usize) -> Result<Vec<ModularForm>> {
    if k < 0 || k % 2 != 0 {
        return Err(Error::BadWeight(k));
    }
    let dim = dim_mk(k);
    if dim == 0 {
        return Ok(Vec::new());
    }
    if order + 1 < dim {
        return Err(Error::InsufficientPrecision(format!(
            "order {order} below dim M_{k} = {dim}"
        )));
    }
    let delta = if dim > 1 { Some(delta_qexp(order.max(2))?.series.truncate(order)) } else { None };
    let mut gens: Vec<QSeries> = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut g = eisenstein_monomial(k - 12 * i as i64, order)?;
        if i > 0 {
            g = g.mul(&delta.as_ref().unwrap().pow(i as u32));
        }
        gens.push(g);
    }
    for i in (0..dim).rev() {
        for j in i + 1..dim {
            let c = gens[i].coeff(j).clone();
            if c != 0 {
                gens[i] = gens[i].sub_scaled(&c, &gens[j]);
            }
        }
    }
    gens.into_iter().map(|g| ModularForm::new(k, g)).collect()
}

/// T_m on a weight-k form; output order ⌊N/m⌋ unless `out_order` asks for less.
pub fn hecke_operator(m: u64, f: &ModularForm, out_order: Option<usize>) -> Result<ModularForm> {
    if m == 0 {
        return Err(Error::InvalidValue("Hecke index must be positive".into()));
    }
    let max = f.order() / m as usize;
    let n_out = out_order.unwrap_or(max);
    if n_out > max {
        return Err(Error::InsufficientPrecision(format!(
            "T_{m} output order {n_out} exceeds {max}"
        )));
    }
    let k1 = (f.weight - 1) as u32;
    let mut coeffs = Vec::with_capacity(n_out + 1);
    for n in 0..=n_out as u64 {
        let g = if n == 0 { m } else { gcd(m as i64, n as i64) as u64 };
        let mut acc = Rational::new();
        for d in divisors(g) {
            let idx = (m * n / (d * d)) as usize;
            acc += Rational::from(f.coeff(idx) * Integer::from(d).pow(k1));
        }
        coeffs.push(acc);
    }
    ModularForm::new(f.weight, QSeries::from_coeffs(coeffs)?)
}

use rug::ops::Pow;

/// Rankin–Cohen bracket divided by (2πi)^n, i.e. with θ = q d/dq in place of d/dz.
pub fn rankin_cohen(g1: &ModularForm, g2: &ModularForm, n: u32) -> ModularForm {
    let (k1, k2) = (g1.weight, g2.weight);
    let n_i = n as i64;
    let order = g1.order().min(g2.order());
    let mut acc = QSeries::zero(order);
    for r in 0..=n {
        let c = binomial(k1 + n_i - 1, n_i - r as i64) * binomial(k2 + n_i - 1, r as i64);
        if c == 0 {
            continue;
        }
        let c = if r % 2 == 1 { -c } else { c };
        let term = g1.series.theta_pow(r).mul(&g2.series.theta_pow(n - r));
        acc = acc.add(&term.scale(&Rational::from(c)));
    }
    let cuspidal = *acc.coeff(0) == 0;
    ModularForm { weight: k1 + k2 + 2 * n_i, series: acc, cuspidal }
}

/// g - a_0(g) E_k.
pub fn cuspidal_projection_exact(g: &ModularForm) -> Result<ModularForm> {
    if g.weight < 4 {
        return Err(Error::BadWeight(g.weight));
    }
    let e = eisenstein_qexp(g.weight, g.order())?;
    let s = g.series.sub_scaled(g.coeff(0), &e.series);
    ModularForm::new(g.weight, s)
}

/// Coordinates of a cusp form in the cuspidal Victor–Miller basis (read off q^1..q^d).
pub fn cusp_coordinates(g: &ModularForm) -> Result<Vec<Rational>> {
    let d = dim_sk(g.weight);
    if g.order() < d {
        return Err(Error::InsufficientPrecision("order below dim S_k".into()));
    }
    Ok((1..=d).map(|i| g.coeff(i).clone()).collect())
}
