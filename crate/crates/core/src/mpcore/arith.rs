//! Elementary integer arithmetic.

use super::{cpow, creal, Complex, Float};
use rug::ops::Pow;
use rug::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `p` modulo `q` in `0..q`; `None` unless gcd(p, q) = 1.
pub fn mod_inverse(p: i64, q: i64) -> Option<i64> {
    if q == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (p.rem_euclid(q), q);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(q))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == vec![(n, 1)]
}

/// σ_x(m) for integer x; negative x gives a rational.
pub fn divisor_sigma_int(x: i64, m: u64) -> rug::Rational {
    assert!(m >= 1, "divisor_sigma needs m >= 1");
    let mut acc = rug::Rational::new();
    for d in divisors(m) {
        let p = Integer::from(d).pow(x.unsigned_abs() as u32);
        if x >= 0 {
            acc += p;
        } else {
            acc += rug::Rational::from((1, p));
        }
    }
    acc
}

/// σ_x(n) for all n in 1..=n_max, x >= 0, by sieving.
pub fn sigma_table(x: u32, n_max: usize) -> Vec<Integer> {
    let mut t = vec![Integer::new(); n_max + 1];
    for d in 1..=n_max {
        let p = Integer::from(d).pow(x);
        for m in (d..=n_max).step_by(d) {
            t[m] += &p;
        }
    }
    t
}

/// σ_x(m) for complex x.
pub fn divisor_sigma_complex(x: &Complex, m: u64, prec: u32) -> Complex {
    let mut acc = Complex::new(prec + 8);
    for d in divisors(m) {
        acc += cpow(&creal(prec + 8, &Float::with_val(prec + 8, d)), x, prec + 8);
    }
    Complex::with_val(prec, acc)
}

pub fn binomial(n: i64, k: i64) -> Integer {
    if k < 0 || n < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        assert_eq!(divisor_sigma_int(1, 6), 12);
        assert_eq!(divisor_sigma_int(3, 2), 9);
        assert_eq!(divisor_sigma_int(0, 13), 2);
        assert_eq!(divisor_sigma_int(-1, 2), rug::Rational::from((3, 2)));
        let t = sigma_table(3, 10);
        for n in 1..=10u64 {
            assert_eq!(rug::Rational::from(t[n as usize].clone()), divisor_sigma_int(3, n));
        }
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(2, 5), Some(3));
        assert_eq!(mod_inverse(-1, 5), Some(4));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(0, 1), Some(0));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert!(is_prime(691) && !is_prime(1));
    }
}
