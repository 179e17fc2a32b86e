use eiskern::lfunc::{
    lstar, lstar_twisted, lstar_twisted_all, normalize_twist, petersson_norm, petersson_norm_rank,
    rankin_convolution_check,
};
use eiskern::modforms::{eigenforms, HeckeEigenform};
use eiskern::mpcore::{Float, HpComplex, PrecisionProfile};
use rug::ops::Pow;

const P: u32 = 256;

fn delta(order: usize) -> HeckeEigenform {
    eigenforms(12, order, P).unwrap().remove(0)
}

fn tau(n_max: usize) -> Vec<i128> {
    let mut c = vec![0i128; n_max + 1];
    c[1] = 1;
    for n in 1..=n_max {
        for _ in 0..24 {
            for m in (n..=n_max).rev() {
                c[m] -= c[m - n];
            }
        }
    }
    c
}

/// (2π)^{-s} Γ(s) Σ τ(n) n^{-s} for real s far to the right.
fn lstar_direct(s: u32, terms: usize) -> Float {
    let t = tau(terms);
    let wp = P + 64;
    let mut sum = Float::new(wp);
    for (n, &c) in t.iter().enumerate().skip(1) {
        let term = Float::with_val(wp, Float::with_val(wp, n as u32).pow(s)).recip();
        sum += term * Float::with_val(wp, c);
    }
    let two_pi = Float::with_val(wp, rug::float::Constant::Pi) * 2u32;
    let g = Float::with_val(wp, s).gamma();
    sum * g / two_pi.pow(s)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn lstar_matches_dirichlet_series_far_right() {
    let prof = PrecisionProfile::default();
    let f = delta(prof.qexp_order);
    for s in [20u32, 24] {
        let got = lstar(&f, &HpComplex::from_f64(s as f64, 0.0, P).unwrap(), &prof).unwrap();
        let want = lstar_direct(s, 600);
        let diff = Float::with_val(P, got.value.re() - &want).abs() / want.clone().abs();
        assert!(diff < 1e-35, "s = {s}: rel diff {diff}");
        assert!(got.value.im().is_zero() || got.value.im().to_f64().abs() < 1e-60);
    }
}

#[test]
fn functional_equation_of_delta() {
    let prof = PrecisionProfile::default();
    let f = delta(prof.qexp_order);
    for (t, u) in [(0.7, 0.0), (1.3, 2.1), (-4.0, 0.5)] {
        let a = lstar(&f, &HpComplex::from_f64(6.0 + t, u, P).unwrap(), &prof).unwrap().value;
        let b = lstar(&f, &HpComplex::from_f64(6.0 - t, -u, P).unwrap(), &prof).unwrap().value;
        let d = (a.to_c64() - b.to_c64()).norm() / a.to_c64().norm();
        assert!(d < 1e-14, "t = {t}+{u}i: {d}");
    }
}

#[test]
fn trivial_twist_and_periodic_twist_agree() {
    let prof = PrecisionProfile::default();
    let f = eigenforms(16, prof.qexp_order.max(prof.tail * 5 + 8), P).unwrap().remove(0);
    let s = HpComplex::from_f64(7.5, 1.0, P).unwrap();
    let plain = lstar(&f, &s, &prof).unwrap().value.to_c64();
    let zero = lstar_twisted(&f, &s, 0, 1, &prof).unwrap().value.to_c64();
    assert!((plain - zero).norm() < 1e-60 * plain.norm());
    let a = lstar_twisted(&f, &s, 2, 5, &prof).unwrap();
    let b = lstar_twisted(&f, &s, 7, 5, &prof).unwrap();
    assert_eq!(a.twist, (2, 5));
    assert_eq!(b.twist, (2, 5));
    assert!((a.value.to_c64() - b.value.to_c64()).norm() <= 1e-60 * a.value.to_c64().norm());
    let all = lstar_twisted_all(&f, &s, 5, &prof).unwrap();
    assert_eq!(all.len(), 4);
    assert!((all[1].value.to_c64() - a.value.to_c64()).norm() <= 1e-50 * a.value.to_c64().norm());
}

#[test]
fn twist_normalization() {
    assert_eq!(normalize_twist(-1, 3).unwrap(), (2, 3));
    assert_eq!(normalize_twist(3, 1).unwrap(), (0, 1));
    assert!(normalize_twist(4, 2).is_err());
    assert!(normalize_twist(1, 0).is_err());
}

#[test]
fn petersson_norm_of_delta() {
    let prof = PrecisionProfile::default();
    let fam = eigenforms(12, prof.qexp_order, P).unwrap();
    let quad = petersson_norm(&fam[0], &prof).unwrap().value.to_f64();
    let rank = petersson_norm_rank(&fam[0], &fam, &prof).unwrap().value.to_f64();
    assert!(rel(quad, rank) < 1e-14, "{quad} vs {rank}");
    // published value of (Δ,Δ)
    assert!(rel(quad, 1.035_362_056_804_321e-6) < 1e-14, "{quad}");
}

#[test]
fn convolution_residual_stays_inside_its_bound() {
    let prof = PrecisionProfile::default();
    let f = eigenforms(12, 600, P).unwrap().remove(0);
    let s = HpComplex::from_f64(3.0, 0.0, P).unwrap();
    let w = HpComplex::from_f64(2.0, 0.0, P).unwrap();
    let r = rankin_convolution_check(&f, &s, &w, 500, &prof).unwrap();
    assert!(r.value <= r.bound, "{} > {}", r.value, r.bound);
    assert!(r.bound < 1e-4);
}

#[test]
fn convolution_outside_its_region_is_a_domain_error() {
    let prof = PrecisionProfile::default();
    let f = eigenforms(12, 200, P).unwrap().remove(0);
    let s = HpComplex::from_f64(10.0, 0.0, P).unwrap();
    let w = HpComplex::from_f64(2.0, 0.0, P).unwrap();
    assert!(matches!(rankin_convolution_check(&f, &s, &w, 100, &prof), Err(eiskern::Error::Domain(_))));
}
