use crate::error::{Error, Result};
use rug::{Integer, Rational};
use std::fmt;

/// Truncated power series Σ_{n≤N} a_n q^n with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::new(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::from(1);
        s
    }

    /// q^m truncated at `order`.
    pub fn monomial(m: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if m <= order {
            s.coeffs[m] = Rational::from(1);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidValue("q-series needs at least one coefficient".into()));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_integers<I: IntoIterator<Item = Integer>>(it: I) -> Result<Self> {
        Self::from_coeffs(it.into_iter().map(Rational::from).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, v: Rational) {
        self.coeffs[n] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Index of the first non-zero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        QSeries {
            coeffs: (0..=n).map(|i| Rational::from(&self.coeffs[i] + &o.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        QSeries {
            coeffs: (0..=n).map(|i| Rational::from(&self.coeffs[i] - &o.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect() }
    }

    /// self - c·o, the echelon step.
    pub fn sub_scaled(&self, c: &Rational, o: &Self) -> Self {
        let n = self.order().min(o.order());
        QSeries {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] - Rational::from(c * &o.coeffs[i]))
                .collect(),
        }
    }

    /// Common denominator and the integer numerators over it.
    fn integerize(&self) -> (Integer, Vec<Integer>) {
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            if *c.denom() != 1 {
                den.lcm_mut(c.denom());
            }
        }
        let nums = self
            .coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect();
        (den, nums)
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let (da, a) = self.integerize();
        let (db, b) = o.integerize();
        let mut c = vec![Integer::new(); n + 1];
        for (i, ai) in a.iter().enumerate().take(n + 1) {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
                if *bj != 0 {
                    c[i + j] += ai * bj;
                }
            }
        }
        let den = da * db;
        QSeries {
            coeffs: c.into_iter().map(|x| Rational::from((x, den.clone()))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// θ = q d/dq.
    pub fn theta(&self) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| Rational::from(c * n as u64))
                .collect(),
        }
    }

    pub fn theta_pow(&self, r: u32) -> Self {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| Rational::from(c * Integer::from(n).pow(r)))
                .collect(),
        }
    }

    /// Coefficients as `"num/den"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect()
    }

    pub fn parse_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coeffs = items
            .iter()
            .map(|s| {
                let t = s.as_ref().trim();
                Rational::parse(t)
                    .map(Rational::from)
                    .map_err(|_| Error::InvalidValue(format!("bad rational {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coeffs(coeffs)
    }
}

use rug::ops::Pow;

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> QSeries {
        QSeries::from_coeffs(v.iter().map(|&x| Rational::from(x)).collect()).unwrap()
    }

    #[test]
    fn ring_ops() {
        let a = s(&[1, 1, 0, 0]);
        assert_eq!(a.pow(3), s(&[1, 3, 3, 1]));
        let b = QSeries::from_coeffs(vec![Rational::from((1, 2)), Rational::from((2, 3))]).unwrap();
        let p = b.mul(&b);
        assert_eq!(p.coeffs(), &[Rational::from((1, 4)), Rational::from((2, 3))]);
        assert_eq!(a.theta(), s(&[0, 1, 0, 0]));
        assert_eq!(s(&[1, 2, 3]).theta_pow(2), s(&[0, 2, 12]));
        assert_eq!(a.sub(&a), QSeries::zero(3));
    }

    #[test]
    fn string_round_trip() {
        let b = QSeries::from_coeffs(vec![Rational::from((-1, 2)), Rational::from(7)]).unwrap();
        let t = b.to_strings();
        assert_eq!(t, vec!["-1/2", "7/1"]);
        assert_eq!(QSeries::parse_strings(&t).unwrap(), b);
        assert!(QSeries::parse_strings(&["x"]).is_err());
    }
}
