use eiskern::dbleis::SpectralData;
use eiskern::modforms::eigenforms;
use eiskern::mpcore::{HpComplex, PrecisionProfile, Rational};
use eiskern::periods::{
    kdkd_check, manin_table, manin_table_quadratic, period_pair, rational_reconstruct, twisted_period_check,
    PeriodSign, DEFAULT_D_MAX,
};

#[test]
fn delta_manin_table_is_rational_and_symmetric() {
    let prof = PrecisionProfile::default();
    let f = eigenforms(12, prof.qexp_order, prof.bits).unwrap().remove(0);
    let t = manin_table(&f, &prof).unwrap();
    assert_eq!(t.len(), 11);
    for e in &t {
        assert!(e.cert.is_rational(), "s = {}: {:?}", e.s, e.cert.verdict);
        let want = if e.s % 2 == 0 { PeriodSign::Plus } else { PeriodSign::Minus };
        assert_eq!(e.sign, want);
    }
    // L*(Δ,12-s) = L*(Δ,s)
    for s in 1..=5 {
        assert_eq!(t[s - 1].cert.reconstructed, t[12 - s - 1].cert.reconstructed, "s = {s}");
    }
}

#[test]
fn twisted_periods_of_delta_are_rational_combinations() {
    let prof = PrecisionProfile::default();
    let f = eigenforms(12, prof.qexp_order.max(prof.tail * 3 + 8), prof.bits).unwrap().remove(0);
    let pair = period_pair(&f, &prof).unwrap();
    for u in [2, 5] {
        let r = twisted_period_check(&f, u, 1, 3, &pair, &prof).unwrap();
        assert!(r.a.is_rational() && r.b.is_rational(), "u = {u}");
    }
}

#[test]
fn kdkd_ratio_at_zero_is_rational() {
    let prof = PrecisionProfile::default();
    let sd = SpectralData::new(12, prof.qexp_order, &prof).unwrap();
    let r = kdkd_check(&sd, &HpComplex::from_f64(0.0, 0.0, prof.bits).unwrap()).unwrap();
    assert!(r.plus.is_rational());
    assert!(!r.flagged);
}

#[test]
fn weight_24_table_is_certified_over_the_quadratic_field() {
    let prof = PrecisionProfile::with_bits(512);
    let sd = SpectralData::for_twists(24, 1, &prof).unwrap();
    let t = manin_table_quadratic(&sd, 10u64.pow(16)).unwrap();
    assert_eq!(t.len(), 23);
    assert!(t.iter().all(|e| e.cert.is_certified()));
}

#[test]
fn reconstruction_recovers_small_fractions() {
    for (p, q) in [(3i64, 7u64), (-691, 36), (1, 1), (0, 5), (123456, 99991)] {
        let x = HpComplex::from_real(&rug::Float::with_val(256, Rational::from((p, q)))).unwrap();
        let c = rational_reconstruct(&x, DEFAULT_D_MAX);
        assert!(c.is_rational());
        assert_eq!(c.reconstructed, Rational::from((p, q)));
    }
}

#[test]
fn reconstruction_declines_irrationals() {
    let x = HpComplex::from_real(&rug::Float::with_val(256, 2).sqrt()).unwrap();
    let c = rational_reconstruct(&x, DEFAULT_D_MAX);
    assert!(!c.is_rational());
    assert!(!c.convergents.is_empty());
}
