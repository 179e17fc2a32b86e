use super::{dim_sk, hecke_operator, victor_miller_basis, QSeries};
use crate::error::{Error, Result};
use crate::mpcore::{HpComplex, MIN_PREC};
use num_complex::Complex64;
use rug::{Float, Rational};

/// A normalized Hecke eigenform: exact when dim S_k = 1, a numeric embedding otherwise.
#[derive(Clone, Debug)]
pub struct HeckeEigenform {
    pub weight: i64,
    pub dim_sk: usize,
    pub exact: Option<QSeries>,
    /// a_f(n) for n = 0..=order (a_f(0) = 0).
    pub coeffs: Vec<Float>,
    pub embedding_index: usize,
    /// Monic characteristic polynomial of T_2 on S_k, constant term first.
    pub t2_charpoly: Vec<Rational>,
    /// Coordinates in the cuspidal Victor–Miller basis.
    pub basis_coords: Vec<Float>,
    pub prec: u32,
}

impl HeckeEigenform {
    pub fn id(&self) -> String {
        format!("k{}#{}", self.weight, self.embedding_index)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Float {
        &self.coeffs[n]
    }

    pub fn coeff_hp(&self, n: usize) -> HpComplex {
        HpComplex::from_real(&self.coeffs[n]).expect("finite coefficient")
    }

    /// a_f(2), the generator of the coefficient field used for field-membership checks.
    pub fn t2_eigenvalue(&self) -> &Float {
        &self.coeffs[2]
    }
}

/// Characteristic polynomial by Faddeev–LeVerrier, constant term first.
pub fn charpoly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let d = a.len();
    let mut c = vec![Rational::new(); d + 1];
    c[d] = Rational::from(1);
    let mut m = vec![vec![Rational::new(); d]; d];
    for k in 1..=d {
        // M_k = A M_{k-1} + c_{d-k+1} I
        let mut next = vec![vec![Rational::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s = Rational::new();
                for l in 0..d {
                    s += Rational::from(&a[i][l] * &m[l][j]);
                }
                if i == j {
                    s += &c[d - k + 1];
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = Rational::new();
        for i in 0..d {
            for l in 0..d {
                tr += Rational::from(&a[i][l] * &m[l][i]);
            }
        }
        c[d - k] = -tr / k as u64;
    }
    c
}

fn horner(poly: &[Rational], x: &Float, wp: u32) -> (Float, Float) {
    let mut p = Float::new(wp);
    let mut dp = Float::new(wp);
    for c in poly.iter().rev() {
        dp = Float::with_val(wp, &dp * x) + &p;
        p = Float::with_val(wp, &p * x) + Float::with_val(wp, c);
    }
    (p, dp)
}

/// Real roots of a polynomial with only simple real roots, ascending.
pub fn real_roots(poly: &[Rational], wp: u32) -> Result<Vec<Float>> {
    let d = poly.len() - 1;
    let lead = poly[d].to_f64();
    let cf: Vec<f64> = poly.iter().map(|c| c.to_f64() / lead).collect();
    let bound = 1.0 + cf[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> =
        (0..d).map(|i| Complex64::new(0.4, 0.9).powu(i as u32) * bound).collect();
    let eval = |x: Complex64| cf.iter().rev().fold(Complex64::new(0.0, 0.0), |a, c| a * x + c);
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    let mut out = Vec::with_capacity(d);
    for r in &z {
        if r.im.abs() > 1e-6 * (1.0 + r.norm()) {
            return Err(Error::DegenerateSpectrum(format!("non-real T_2 eigenvalue {r}")));
        }
        let mut x = Float::with_val(wp, r.re);
        for _ in 0..200 {
            let (p, dp) = horner(poly, &x, wp);
            if dp.is_zero() {
                return Err(Error::DegenerateSpectrum("repeated T_2 eigenvalue".into()));
            }
            let dx = p / dp;
            x -= &dx;
            if dx.is_zero() || crate::mpcore::log2_abs_f(&dx) < crate::mpcore::log2_abs_f(&x) - wp as f64 + 4.0 {
                break;
            }
        }
        out.push(x);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sep = Float::with_val(wp, 1u32) >> (wp / 2);
    for w in out.windows(2) {
        let gap = Float::with_val(wp, &w[1] - &w[0]);
        if gap < Float::with_val(wp, &sep * (w[1].clone().abs() + 1u32)) {
            return Err(Error::DegenerateSpectrum("T_2 eigenvalues collide".into()));
        }
    }
    Ok(out)
}

/// Null vector of a singular square matrix, normalized so its first entry is 1.
fn null_vector(mut b: Vec<Vec<Float>>, wp: u32) -> Result<Vec<Float>> {
    let d = b.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut free = None;
    for col in 0..d {
        let p = (row..d).max_by(|&i, &j| b[i][col].clone().abs().partial_cmp(&b[j][col].clone().abs()).unwrap());
        let scale = b.iter().flatten().fold(Float::new(wp), |m, x| m.max(&x.clone().abs()));
        let eps = scale >> (wp / 2);
        match p {
            Some(p) if b[p][col].clone().abs() > eps => {
                b.swap(row, p);
                let piv = b[row][col].clone();
                for j in col..d {
                    b[row][j] /= &piv;
                }
                for i in 0..d {
                    if i != row {
                        let f = b[i][col].clone();
                        if !f.is_zero() {
                            for j in col..d {
                                let t = Float::with_val(wp, &f * &b[row][j]);
                                b[i][j] -= t;
                            }
                        }
                    }
                }
                pivots.push(col);
                row += 1;
            }
            _ => {
                if free.is_none() {
                    free = Some(col);
                }
            }
        }
    }
    let free = free.ok_or_else(|| Error::DegenerateSpectrum("eigenvector not found".into()))?;
    if d - pivots.len() != 1 {
        return Err(Error::DegenerateSpectrum("eigenspace dimension > 1".into()));
    }
    let mut v = vec![Float::new(wp); d];
    v[free] = Float::with_val(wp, 1u32);
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = -Float::with_val(wp, &b[r][free]);
    }
    if v[0].clone().abs() < (Float::with_val(wp, 1u32) >> (wp / 2)) {
        return Err(Error::DegenerateSpectrum("eigenvector with a(1) = 0".into()));
    }
    let v0 = v[0].clone();
    Ok(v.into_iter().map(|x| x / &v0).collect())
}

/// All normalized eigenforms of weight k with coefficients up to `order`.
pub fn eigenforms(k: i64, order: usize, prec: u32) -> Result<Vec<HeckeEigenform>> {
    if k % 2 != 0 || !(4..=40).contains(&k) {
        return Err(Error::BadWeight(k));
    }
    let prec = prec.max(MIN_PREC);
    let d = dim_sk(k);
    if d == 0 {
        return Ok(Vec::new());
    }
    let order = order.max(2 * d).max(2);
    let basis = victor_miller_basis(k, order)?;
    let cusp: Vec<_> = basis[1..].to_vec();
    let mut t2 = vec![vec![Rational::new(); d]; d];
    for (j, g) in cusp.iter().enumerate() {
        let tg = hecke_operator(2, g, Some(d))?;
        for i in 0..d {
            t2[i][j] = tg.coeff(i + 1).clone();
        }
    }
    let poly = charpoly(&t2);
    if d == 1 {
        let s = cusp[0].series.clone();
        let coeffs = s.coeffs().iter().map(|c| Float::with_val(prec, c)).collect();
        return Ok(vec![HeckeEigenform {
            weight: k,
            dim_sk: 1,
            exact: Some(s),
            coeffs,
            embedding_index: 0,
            t2_charpoly: poly,
            basis_coords: vec![Float::with_val(prec, 1u32)],
            prec,
        }]);
    }
    let wp = prec + 64;
    let roots = real_roots(&poly, wp)?;
    let mut out = Vec::with_capacity(d);
    for (idx, lam) in roots.iter().enumerate() {
        let b: Vec<Vec<Float>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let x = Float::with_val(wp, &t2[i][j]);
                        if i == j {
                            x - lam
                        } else {
                            x
                        }
                    })
                    .collect()
            })
            .collect();
        let c = null_vector(b, wp)?;
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = Float::new(wp);
                for (ci, g) in c.iter().zip(&cusp) {
                    acc += Float::with_val(wp, ci * Float::with_val(wp, g.coeff(n)));
                }
                Float::with_val(prec, acc)
            })
            .collect();
        out.push(HeckeEigenform {
            weight: k,
            dim_sk: d,
            exact: None,
            coeffs,
            embedding_index: idx,
            t2_charpoly: poly.clone(),
            basis_coords: c.into_iter().map(|x| Float::with_val(prec, x)).collect(),
            prec,
        });
    }
    Ok(out)
}
