use super::*;

fn prof() -> PrecisionProfile {
    let mut p = PrecisionProfile::with_bits(128);
    p.qexp_order = 24;
    p
}

fn hp(re: f64, im: f64) -> HpComplex {
    HpComplex::from_f64(re, im, 128).unwrap()
}

#[test]
fn weight_twelve_vector_is_proportional_to_delta() {
    let sd = SpectralData::new(12, 120, &prof()).unwrap();
    let c = dbl_eis_coeffs(&sd, &hp(3.2, 0.7), &hp(-1.5, 2.0), 8).unwrap();
    let r = (&c.coeffs[1] / &c.coeffs[0]).unwrap();
    assert!((r.to_c64() - num_complex::Complex64::new(-24.0, 0.0)).norm() < 1e-30);
    assert!(!c.empty);
}

#[test]
fn empty_space_gives_flagged_zero_vector() {
    let sd = SpectralData::new(14, 60, &prof()).unwrap();
    let c = dbl_eis_coeffs(&sd, &hp(5.0, 0.0), &hp(2.0, 0.0), 6).unwrap();
    assert!(c.empty);
    assert!(c.coeffs.iter().all(|x| x.abs().is_zero()));
}

#[test]
fn swap_and_reflection_symmetries() {
    let sd = SpectralData::new(16, 120, &prof()).unwrap();
    let (s, w) = (hp(4.5, 1.0), hp(2.5, -0.5));
    let a = dbl_eis_coeffs(&sd, &s, &w, 10).unwrap();
    let b = dbl_eis_coeffs(&sd, &w, &s, 10).unwrap();
    assert!(a.rel_distance(&b) < 1e-30);
    let ks = HpComplex::new(Complex::with_val(128, 16 - s.as_complex())).unwrap();
    let c = dbl_eis_coeffs(&sd, &ks, &w, 10).unwrap();
    // (-1)^{16/2} = 1.
    assert!(a.rel_distance(&c) < 1e-30);
}

#[test]
fn twisted_specializes_and_reflects() {
    let sd = SpectralData::for_twists(18, 3, &prof()).unwrap();
    let k = 18;
    let (s, w) = (hp(5.5, 0.3), hp(7.0, 0.0));
    let t0 = twisted_dbl_eis_coeffs(&sd, &s, &w, 0, 1, 8).unwrap();
    let plain = dbl_eis_coeffs(&sd, &s, &w, 8).unwrap();
    assert!(t0.rel_distance(&plain) < 1e-30);

    let kw = HpComplex::new(Complex::with_val(128, k - w.as_complex())).unwrap();
    let a = twisted_dbl_eis_coeffs(&sd, &s, &w, 1, 3, 8).unwrap();
    let b = twisted_dbl_eis_coeffs(&sd, &s, &kw, 1, 3, 8).unwrap();
    // (-1)^{18/2} = -1.
    let neg = b.scaled(&crate::mpcore::cnum(128, -1.0, 0.0));
    assert!(a.rel_distance(&neg) < 1e-30);

    // q^s E*_{k-s,s}(w;p/q) = (-1)^{k/2} q^{k-s} E*_{s,k-s}(w;-p'/q) with p = 1, p' = 1.
    let ks = HpComplex::new(Complex::with_val(128, k - s.as_complex())).unwrap();
    let lhs = twisted_dbl_eis_coeffs(&sd, &ks, &w, 1, 3, 8).unwrap();
    let rhs = twisted_dbl_eis_coeffs(&sd, &s, &w, -1, 3, 8).unwrap();
    let three = crate::mpcore::cnum(128, 3.0, 0.0);
    let qs = cpow(&three, s.as_complex(), 128);
    let qks = cpow(&three, ks.as_complex(), 128);
    let l = lhs.scaled(&qs);
    let r = rhs.scaled(&(-qks));
    assert!(l.rel_distance(&r) < 1e-30);
}

#[test]
fn antisymmetric_bracket_vanishes() {
    let sd = SpectralData::new(10, 60, &prof()).unwrap();
    assert!(rc_identity_residual(4, 4, 1, &sd).unwrap() < 1e-30);
    // Weight 18: the right side vanishes through L*(f,9) = 0 at the centre.
    let sd = SpectralData::new(18, 60, &prof()).unwrap();
    assert!(rc_identity_residual(6, 6, 3, &sd).unwrap() < 1e-30);
}

#[test]
fn bracket_constant_is_negative_for_k1_six() {
    // sign (-1)^{k1/2 + n}: k1 = 6, n = 2 gives -1.
    assert!(rc_constant(6, 6, 2, 128).unwrap() < 0);
    assert!(rc_constant(4, 6, 1, 128).unwrap() < 0);
    assert!(rc_constant(4, 4, 2, 128).unwrap() > 0);
}

#[test]
fn uv_accessors() {
    let sd = SpectralData::new(12, 60, &prof()).unwrap();
    let c = dbl_eis_coeffs(&sd, &hp(5.0, 0.0), &hp(2.0, 0.0), 2).unwrap();
    let (u, v) = c.uv();
    assert_eq!(u.re().to_f64(), -2.0);
    assert_eq!(v.re().to_f64(), -1.0);
}
