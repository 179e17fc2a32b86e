use eiskern::mpcore::{Complex, HpComplex, PrecisionProfile};
use eiskern::nonhol::{
    divisor_identity_check, eisenstein_nonhol, eisenstein_star, kernel_k, kernel_swap_sums, maass_eval,
    maass_lstar, nonhol_dbl_eis_direct, parse_maass, EisMethod, Parity,
};
use eiskern::Error;
use num_complex::Complex64;

const FIXTURE: &str = include_str!("data/synthetic_maass.txt");

fn hp(re: f64, im: f64) -> HpComplex {
    HpComplex::from_f64(re, im, 256).unwrap()
}

fn hp_rel(a: &HpComplex, b: &HpComplex) -> f64 {
    let d = Complex::with_val(256, a.as_complex() - b.as_complex()).abs().real().to_f64();
    d / a.abs().to_f64().max(1e-300)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// ½ Σ_{gcd(c,d)=1} y^s |cz+d|^{-2s} over a box, real s.
fn eisenstein_box(z: Complex64, s: f64, r: i64) -> f64 {
    let mut acc = 0.0;
    for c in -r..=r {
        for d in -r..=r {
            if gcd(c, d) == 1 {
                acc += (z * c as f64 + d as f64).norm_sqr().powf(-s);
            }
        }
    }
    0.5 * acc * z.im.powf(s)
}

#[test]
fn eisenstein_matches_an_independent_box_sum() {
    let prof = PrecisionProfile::default();
    let z = Complex64::new(0.3, 1.1);
    let want = eisenstein_box(z, 4.0, 300);
    let got = eisenstein_nonhol(&hp(z.re, z.im), &hp(4.0, 0.0), EisMethod::Fourier, &prof).unwrap();
    let d = (got.value.to_c64().re - want).abs();
    assert!(d < 1e-12, "{d}");
}

#[test]
fn eisenstein_is_invariant_under_inversion() {
    let prof = PrecisionProfile::default();
    let z = hp(0.21, 0.8);
    let zi = HpComplex::new(Complex::with_val(256, -z.as_complex().clone().recip())).unwrap();
    let s = hp(0.5, 7.0);
    let a = eisenstein_nonhol(&z, &s, EisMethod::Fourier, &prof).unwrap().value;
    let b = eisenstein_nonhol(&zi, &s, EisMethod::Fourier, &prof).unwrap().value;
    assert!(hp_rel(&a, &b) < 1e-30);
}

#[test]
fn completed_eisenstein_functional_equation() {
    let z = hp(-0.4, 1.3);
    let s = hp(0.3, 2.5);
    let s1 = HpComplex::new(Complex::with_val(256, 1 - s.as_complex())).unwrap();
    let a = eisenstein_star(&z, &s, 256).unwrap();
    let b = eisenstein_star(&z, &s1, 256).unwrap();
    assert!(hp_rel(&a, &b) < 1e-30);
}

#[test]
fn kernel_is_symmetric_in_its_two_parameters() {
    let z = Complex64::new(0.15, 1.05);
    let (t1, t2, n) = kernel_swap_sums(z, Complex64::new(0.8, 0.0), Complex64::new(6.5, 0.0), 60.0).unwrap();
    assert!(n > 100);
    assert!((t1 - t2).norm() < 1e-10 * t1.norm());
}

#[test]
fn kernel_outside_its_domain_reports_nonconvergence() {
    let r = kernel_k(Complex64::new(0.0, 1.0), Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0), 50);
    assert!(matches!(r, Err(e) if e.is_convergence()));
}

#[test]
fn double_series_domain_is_enforced() {
    let z = Complex64::new(0.0, 1.2);
    let r = nonhol_dbl_eis_direct(z, Complex64::new(0.5, 0.0), Complex64::new(0.9, 0.0), Complex64::new(7.0, 0.0), 10.0);
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn divisor_dirichlet_series_of_eisenstein() {
    let c = divisor_identity_check(&hp(0.7, 0.3), &hp(4.0, 0.0), 4000, 256).unwrap();
    assert!(c.residual <= c.bound, "{} > {}", c.residual, c.bound);
}

#[test]
fn maass_fixture_parses_and_satisfies_its_functional_equation() {
    let prof = PrecisionProfile::default();
    let d = parse_maass(FIXTURE, "fixture").unwrap();
    assert_eq!(d.parity, Parity::Even);
    assert_eq!(d.n_max(), 80);
    let s = hp(0.65, 1.5);
    let s1 = hp(0.35, -1.5);
    let a = maass_lstar(&d, &s, &prof).unwrap();
    let b = maass_lstar(&d, &s1, &prof).unwrap();
    let diff = (a.value.to_c64() - b.value.to_c64()).norm();
    assert!(diff <= a.err_est + b.err_est + 1e-30, "{diff}");
    // u(x+iy) is even in x and periodic
    let u1 = maass_eval(&d, Complex64::new(0.2, 0.9)).unwrap();
    let u2 = maass_eval(&d, Complex64::new(-0.2, 0.9)).unwrap();
    let u3 = maass_eval(&d, Complex64::new(0.8, 0.9)).unwrap();
    assert!((u1 - u2).abs() < 1e-12 && (u1 - u3).abs() < 1e-12);
}

#[test]
fn maass_parser_rejects_malformed_files() {
    let header = "R 9.5 parity even prec 1e-30\n";
    let bad = [
        String::new(),
        "R 9.5 parity even\n1 1\n".to_string(),
        "R -1 parity even prec 1e-30\n1 1\n".to_string(),
        "R 9.5 parity sideways prec 1e-30\n1 1\n".to_string(),
        format!("{header}1 1\n3 0\n"),
        format!("{header}1 1\n1 1\n"),
        format!("{header}1 2\n"),
        format!("{header}1 1\n2 x\n"),
        format!("{header}1 1\n2 0.5\n3 0\n4 0.9\n"),
    ];
    for text in &bad {
        assert!(matches!(parse_maass(text, "t"), Err(Error::BadData(_))), "accepted {text:?}");
    }
}

#[test]
fn odd_maass_forms_are_unsupported() {
    let prof = PrecisionProfile::default();
    let d = parse_maass("R 9.5 parity odd prec 1e-30\n1 1\n", "odd").unwrap();
    assert_eq!(maass_lstar(&d, &hp(0.5, 1.0), &prof).unwrap_err(), Error::ParityUnsupported);
}
