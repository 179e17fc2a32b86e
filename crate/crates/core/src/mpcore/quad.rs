use super::Float;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize, prec: u32) -> Vec<(Float, Float)> {
    let wp = prec + 16;
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        let mut dp = Float::new(wp);
        for _ in 0..100 {
            let (p, d) = legendre(n, &x, wp);
            let dx = Float::with_val(wp, &p / &d);
            x -= &dx;
            dp = d;
            if dx.is_zero() || super::log2_abs_f(&dx) < -(wp as f64) + 4.0 {
                dp = legendre(n, &x, wp).1;
                break;
            }
        }
        let one_m = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32) / (one_m * dp.square());
        out.push((Float::with_val(prec, x), Float::with_val(prec, w)));
    }
    out
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: &Float, wp: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(wp, 1u32);
    let mut p1 = x.clone();
    for k in 2..=n {
        let a = Float::with_val(wp, x * &p1) * (2 * k - 1) as u32;
        let b = Float::with_val(wp, &p0 * (k - 1) as u32);
        let p2 = (a - b) / k as u32;
        p0 = p1;
        p1 = p2;
    }
    let num = (Float::with_val(wp, x * &p1) - &p0) * n as u32;
    let den = Float::with_val(wp, x.square_ref()) - 1u32;
    (p1, num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn integrates_polynomials_exactly() {
        let nodes = gauss_legendre(12, 200);
        // ∫ x^22 = 2/23 is the top degree a 12-point rule handles.
        let mut s = Float::new(200);
        for (x, w) in &nodes {
            s += Float::with_val(200, x.clone().pow(22u32)) * w;
        }
        let r = Float::with_val(200, 2u32) / 23u32;
        assert!((s - r).abs() < 1e-55);
        let wsum: Float = nodes.iter().fold(Float::new(200), |a, (_, w)| a + w);
        assert!((wsum - 2u32).abs() < 1e-55);
    }
}
