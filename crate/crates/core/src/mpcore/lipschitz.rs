use super::{gamma::gamma, log2_abs, pi, rpow, two_pi, Complex, Float};
use crate::error::{Error, Result};

/// Σ_{n∈ℤ} (τ+n)^{-s} through e^{-πis/2} (2π)^s/Γ(s) Σ_{m≥1} m^{s-1} e^{2πimτ}.
///
/// `max_terms` caps the exponential sum; running out is a convergence failure.
pub fn lipschitz_sum(tau: &Complex, s: &Complex, max_terms: usize, prec: u32) -> Result<Complex> {
    if *tau.imag() <= 0 {
        return Err(Error::Domain("Lipschitz sum needs Im τ > 0".into()));
    }
    if *s.real() <= 1 {
        return Err(Error::Domain("Lipschitz sum needs Re s > 1".into()));
    }
    let wp = prec + 24;
    let sw = Complex::with_val(wp, s);
    let sm1 = Complex::with_val(wp, &sw - 1u32);
    let q = (Complex::with_val(wp, tau * two_pi(wp)) * Complex::with_val(wp, (0, 1))).exp();
    let mut qm = q.clone();
    let mut sum = Complex::new(wp);
    let y = tau.imag().to_f64();
    let sigma = s.real().to_f64();
    let mut done = false;
    for m in 1..=max_terms {
        let term = rpow(&Float::with_val(wp, m), &sm1, wp) * &qm;
        sum += &term;
        // Past the peak of m^{σ-1} e^{-2πym}, the remaining tail is dominated geometrically.
        let past_peak = (m as f64) * 2.0 * std::f64::consts::PI * y > sigma;
        if past_peak && log2_abs(&term) < log2_abs(&sum) - wp as f64 {
            done = true;
            break;
        }
        qm *= &q;
    }
    if !done {
        return Err(Error::NonConvergence(format!(
            "Lipschitz sum: Im τ = {y} too small for {max_terms} terms"
        )));
    }
    let ipi2 = Complex::with_val(wp, (0, 1)) * pi(wp) / 2u32;
    let pre = (Complex::with_val(wp, -&sw) * ipi2).exp() * rpow(&two_pi(wp), &sw, wp) / gamma(&sw, wp)?;
    Ok(Complex::with_val(prec, pre * sum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpcore::{cnum, log2_abs};

    #[test]
    fn weight_two_identity() {
        let p = 160;
        let tau = cnum(p, 0.3, 0.8);
        let v = lipschitz_sum(&tau, &cnum(p, 2.0, 0.0), 400, p).unwrap();
        let sn = Complex::with_val(p, &tau * pi(p)).sin();
        let r = Complex::with_val(p, pi(p).square_ref()) / sn.square();
        assert!(log2_abs(&Complex::with_val(p, &v - &r)) < -150.0);
    }

    #[test]
    fn periodic_and_capped() {
        let p = 128;
        let s = cnum(p, 3.2, 1.0);
        let t = cnum(p, 0.2, 1.1);
        let a = lipschitz_sum(&t, &s, 200, p).unwrap();
        let b = lipschitz_sum(&Complex::with_val(p, &t + 1u32), &s, 200, p).unwrap();
        assert!(log2_abs(&Complex::with_val(p, &a - &b)) < log2_abs(&a) - 100.0, "{} {}", a, b);
        assert!(matches!(
            lipschitz_sum(&cnum(p, 0.0, 0.01), &s, 48, p),
            Err(Error::NonConvergence(_))
        ));
    }
}
