//! Enumeration of B\SL(2,ℤ) by bottom rows, in double precision.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mpcore::arith::{gcd, mod_inverse};

/// One coset representative acting on a fixed point z.
#[derive(Clone, Copy, Debug)]
pub struct Coset {
    pub c: i64,
    pub d: i64,
    /// j(γ,z) = cz + d.
    pub j: Complex64,
    /// γz with the top row fixed by ad - bc = 1.
    pub gz: Complex64,
}

impl Coset {
    pub fn new(c: i64, d: i64, z: Complex64) -> Self {
        let j = Complex64::new(c as f64, 0.0) * z + d as f64;
        let gz = if c == 0 {
            z
        } else {
            let a = mod_inverse(d.rem_euclid(c.abs()), c.abs()).unwrap_or(0);
            // a d ≡ 1 mod c; γz = a/c - 1/(c j).
            Complex64::new(a as f64 / c as f64, 0.0) - 1.0 / (j * c as f64)
        };
        Coset { c, d, j, gz }
    }
}

/// Matrix g in SL(2,ℤ) and g·z in the standard fundamental domain.
pub fn reduce_to_fd(z: Complex64) -> Result<(Complex64, [i64; 4])> {
    if !(z.im > 0.0) || !z.re.is_finite() {
        return Err(Error::Domain("point must lie in the upper half plane".into()));
    }
    let mut w = z;
    let mut g = [1i64, 0, 0, 1];
    for _ in 0..10_000 {
        let n = w.re.round();
        if n != 0.0 {
            w.re -= n;
            let n = n as i64;
            g = [g[0] - n * g[2], g[1] - n * g[3], g[2], g[3]];
        }
        if w.norm_sqr() < 1.0 - 1e-14 {
            w = -1.0 / w;
            g = [-g[2], -g[3], g[0], g[1]];
        } else {
            return Ok((w, g));
        }
    }
    Err(Error::NonConvergence("reduction to the fundamental domain".into()))
}

/// Largest radius R with {|cz+d| ≤ R} inside the box |c|,|d| ≤ h.
pub fn box_radius(z: Complex64, h: u32) -> f64 {
    let y = z.im;
    h as f64 * y.min(y / (y + z.re.abs()))
}

/// Cosets with |cz+d| ≤ radius. With `signed`, both (c,d) and (-c,-d) appear;
/// otherwise c > 0 or (c,d) = (0,1).
pub fn cosets(z: Complex64, radius: f64, signed: bool) -> Vec<Coset> {
    let y = z.im;
    let c_max = (radius / y).floor() as i64;
    let mut out = Vec::new();
    let r2 = radius * radius;
    for c in 0..=c_max {
        // |cz + d|² = (cx + d)² + (cy)² ≤ R².
        let rest = r2 - (c as f64 * y).powi(2);
        if rest < 0.0 {
            break;
        }
        let w = rest.sqrt();
        let cx = c as f64 * z.re;
        let lo = (-cx - w).ceil() as i64;
        let hi = (-cx + w).floor() as i64;
        for d in lo..=hi {
            if c == 0 && d != 1 && !(signed && d == -1) {
                continue;
            }
            if gcd(c, d) != 1 {
                continue;
            }
            out.push(Coset::new(c, d, z));
            if signed && c != 0 {
                out.push(Coset::new(-c, -d, z));
            }
        }
    }
    out
}

/// det of the bottom rows, i.e. c of γδ^{-1}.
pub fn pair_c(g: &Coset, h: &Coset) -> i64 {
    g.c * h.d - g.d * h.c
}
