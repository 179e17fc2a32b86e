use eiskern::modforms::{eisenstein_qexp, QSeries};
use eiskern::mpcore::{Complex, Float, HpComplex, Integer, Rational};
use eiskern::nonhol::{eisenstein_star, parse_maass};
use eiskern::periods::{rational_reconstruct, DEFAULT_D_MAX};
use proptest::prelude::*;
use rug::ops::Pow;

const ORDER: usize = 12;

fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((-50i64..50, 1i64..6), ORDER + 1)
        .prop_map(|v| QSeries::from_coeffs(v.into_iter().map(|(p, q)| Rational::from((p, q))).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qseries_ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.mul(&QSeries::one(ORDER + 1)), a.clone());
    }

    #[test]
    fn theta_is_a_derivation(a in series(), b in series()) {
        prop_assert_eq!(a.mul(&b).theta(), a.theta().mul(&b).add(&a.mul(&b.theta())));
    }

    #[test]
    fn qseries_string_round_trip(a in series()) {
        prop_assert_eq!(QSeries::parse_strings(&a.to_strings()).unwrap(), a);
    }

    #[test]
    fn reconstruction_round_trip(p in -1_000_000i64..1_000_000, q in 1u64..10_000) {
        let r = Rational::from((p, q));
        let x = HpComplex::from_real(&Float::with_val(256, &r)).unwrap();
        let c = rational_reconstruct(&x, DEFAULT_D_MAX);
        prop_assert!(c.is_rational());
        prop_assert_eq!(c.reconstructed, r);
    }

    #[test]
    fn eisenstein_coefficients_are_divisor_sums(k in (2i64..8).prop_map(|h| 2 * h)) {
        let e = eisenstein_qexp(k, 10).unwrap();
        let c1 = e.coeff(1).clone();
        for n in 1..=10usize {
            // a(n)/a(1) = σ_{k-1}(n)
            let sigma: Integer = (1..=n as u32).filter(|d| (n as u32).is_multiple_of(*d))
                .map(|d| Integer::from(d).pow(k as u32 - 1))
                .fold(Integer::new(), |acc, x| acc + x);
            prop_assert_eq!(Rational::from(e.coeff(n) / &c1), Rational::from(sigma));
        }
    }

    #[test]
    fn maass_parser_needs_consecutive_indices(n in 3usize..12, drop in 2usize..11) {
        prop_assume!(drop < n);
        let mut text = String::from("R 9.5 parity even prec 1e-30\n1 1\n");
        for m in 2..=n {
            if m != drop {
                text.push_str(&format!("{m} 0\n"));
            }
        }
        prop_assert!(parse_maass(&text, "p").is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn completed_eisenstein_is_symmetric_under_s_to_1_minus_s(
        x in -0.5f64..0.5, y in 0.9f64..2.0, sr in -1.0f64..2.0, si in 0.5f64..6.0,
    ) {
        let z = HpComplex::from_f64(x, y, 256).unwrap();
        let s = HpComplex::from_f64(sr, si, 256).unwrap();
        let s1 = HpComplex::new(Complex::with_val(256, 1 - s.as_complex())).unwrap();
        let a = eisenstein_star(&z, &s, 256).unwrap();
        let b = eisenstein_star(&z, &s1, 256).unwrap();
        let d = Complex::with_val(256, a.as_complex() - b.as_complex()).abs().real().to_f64();
        prop_assert!(d <= 1e-30 * a.abs().to_f64().max(1.0), "diff {d}");
    }

    #[test]
    fn complex_parse_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = HpComplex::from_f64(re, im, 256).unwrap();
        let [a, b] = z.to_strings();
        let back = HpComplex::parse(&format!("{a},{b}"), 256).unwrap();
        prop_assert_eq!(back.to_c64(), z.to_c64());
    }
}
