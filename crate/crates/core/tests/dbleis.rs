use eiskern::dbleis::cohen::qseries_at;
use eiskern::dbleis::{
    cusp_dimension, dbl_eis_coeffs, dbl_eis_point_eval, rc_identity_residual, twist_inverse,
    twisted_dbl_eis_coeffs, SpectralData,
};
use eiskern::modforms::delta_qexp;
use eiskern::mpcore::{Complex, HpComplex, PrecisionProfile};

fn hp(re: f64, im: f64) -> HpComplex {
    HpComplex::from_f64(re, im, 256).unwrap()
}

#[test]
fn weight_12_vector_is_proportional_to_delta() {
    let prof = PrecisionProfile::default();
    let sd = SpectralData::new(12, prof.qexp_order, &prof).unwrap();
    let c = dbl_eis_coeffs(&sd, &hp(4.5, 0.3), &hp(2.0, -1.0), 20).unwrap();
    let d = delta_qexp(20).unwrap();
    let c1 = c.coeffs[0].as_complex();
    assert!(!c1.is_zero());
    for n in 2..=20 {
        let ratio = Complex::with_val(256, c.coeffs[n - 1].as_complex() / c1);
        let dev = Complex::with_val(256, &ratio - d.coeff(n)).abs().real().to_f64();
        assert!(dev < 1e-40 * d.coeff(n).to_f64().abs().max(1.0), "n = {n}: {dev}");
    }
}

#[test]
fn untwisted_and_zero_twist_agree() {
    let prof = PrecisionProfile::default();
    let sd = SpectralData::for_twists(16, 1, &prof).unwrap();
    let (s, w) = (hp(5.0, 0.0), hp(3.0, 0.5));
    let a = dbl_eis_coeffs(&sd, &s, &w, 12).unwrap();
    let b = twisted_dbl_eis_coeffs(&sd, &s, &w, 0, 1, 12).unwrap();
    assert!(a.rel_distance(&b) < 1e-60);
}

#[test]
fn empty_cusp_space_gives_zero_vector() {
    assert_eq!(cusp_dimension(14), 0);
    let prof = PrecisionProfile::default();
    let sd = SpectralData::new(14, 16, &prof).unwrap();
    assert!(sd.is_empty());
    let c = dbl_eis_coeffs(&sd, &hp(5.0, 0.0), &hp(2.0, 0.0), 8).unwrap();
    assert!(c.empty);
    assert!(c.coeffs.iter().all(|x| x.to_c64().norm() == 0.0));
}

#[test]
fn spectral_value_matches_direct_summation() {
    let prof = PrecisionProfile::default();
    let sd = SpectralData::new(16, prof.qexp_order, &prof).unwrap();
    let (s, w) = (hp(5.0, 0.0), hp(3.0, 0.0));
    let c = dbl_eis_coeffs(&sd, &s, &w, 40).unwrap();
    let z = hp(0.1, 1.2);
    let spectral = HpComplex::new(qseries_at(&c.coeffs, &z)).unwrap().to_c64();
    let direct = dbl_eis_point_eval(&z, 16, &s, &w, prof.height, 40).unwrap();
    let diff = (direct.value.to_c64() - spectral).norm();
    assert!(diff < direct.err_est.max(1e-12) * 10.0, "{diff} vs err {}", direct.err_est);
}

#[test]
fn direct_sum_rejects_points_outside_its_domain() {
    let r = dbl_eis_point_eval(&hp(0.0, 1.0), 16, &hp(5.0, 0.0), &hp(9.0, 0.0), 50, 10);
    assert!(matches!(r, Err(eiskern::Error::Domain(_))));
}

#[test]
fn rankin_cohen_identity_in_weight_12() {
    let prof = PrecisionProfile::default();
    let sd = SpectralData::new(12, prof.qexp_order, &prof).unwrap();
    let r = rc_identity_residual(4, 4, 2, &sd).unwrap();
    assert!(r < 1e-30, "{r}");
}

#[test]
fn twist_inverses() {
    assert_eq!(twist_inverse(0, 1).unwrap(), 0);
    assert_eq!(twist_inverse(2, 5).unwrap(), 3);
    assert_eq!(twist_inverse(3, 7).unwrap(), 5);
    assert!(twist_inverse(2, 4).is_err());
}
