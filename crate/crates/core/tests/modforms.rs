use eiskern::modforms::{
    delta_qexp, dim_mk, dim_sk, eigenforms, eisenstein_qexp, hecke_operator, rankin_cohen, victor_miller_basis,
};
use eiskern::mpcore::{Integer, Rational};
use rug::ops::Pow;

fn sigma(r: u32, n: u64) -> Integer {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| Integer::from(d).pow(r)).fold(Integer::new(), |a, b| a + b)
}

/// q ∏ (1 - q^n)^24 by repeated multiplication.
fn tau_oracle(n_max: usize) -> Vec<i128> {
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

#[test]
fn eisenstein_coefficients_match_divisor_sums() {
    for (k, c) in [(4i64, 240i64), (6, -504), (8, 480)] {
        let e = eisenstein_qexp(k, 30).unwrap();
        assert_eq!(*e.coeff(0), 1);
        for n in 1..=30u64 {
            let want = Rational::from(sigma(k as u32 - 1, n) * c);
            assert_eq!(*e.coeff(n as usize), want, "E_{k} at q^{n}");
        }
    }
}

#[test]
fn delta_matches_product_formula() {
    let d = delta_qexp(40).unwrap();
    let t = tau_oracle(40);
    for n in 0..=40 {
        assert_eq!(*d.coeff(n), Rational::from(t[n]), "tau({n})");
    }
}

#[test]
fn ring_identities_between_eisenstein_series() {
    let n = 25;
    let e4 = eisenstein_qexp(4, n).unwrap();
    let e6 = eisenstein_qexp(6, n).unwrap();
    assert_eq!(e4.mul(&e4).series, eisenstein_qexp(8, n).unwrap().series);
    assert_eq!(e4.mul(&e6).series, eisenstein_qexp(10, n).unwrap().series);
    // 1728 Δ = E4^3 - E6^2
    let lhs = e4.mul(&e4).mul(&e4).series.sub(&e6.mul(&e6).series);
    let rhs = delta_qexp(n).unwrap().series.scale(&Rational::from(1728));
    assert_eq!(lhs, rhs);
}

#[test]
fn dimensions() {
    let mk = [(4, 1), (6, 1), (8, 1), (10, 1), (12, 2), (14, 1), (24, 3), (26, 2)];
    for (k, d) in mk {
        assert_eq!(dim_mk(k), d, "dim M_{k}");
        assert_eq!(dim_sk(k), d - 1, "dim S_{k}");
    }
    assert_eq!(victor_miller_basis(24, 10).unwrap().len(), 3);
}

#[test]
fn delta_is_a_hecke_eigenform() {
    let d = delta_qexp(60).unwrap();
    let t = tau_oracle(60);
    for m in [2u64, 3, 5] {
        let tm = hecke_operator(m, &d, Some(10)).unwrap();
        for n in 0..=10 {
            let want = Rational::from(t[m as usize] * t[n]);
            assert_eq!(*tm.coeff(n), want, "T_{m} Δ at q^{n}");
        }
    }
}

#[test]
fn odd_bracket_of_a_form_with_itself_vanishes() {
    let e4 = eisenstein_qexp(4, 20).unwrap();
    for n in [1u32, 3] {
        assert!(rankin_cohen(&e4, &e4, n).series.is_zero());
    }
    let e6 = eisenstein_qexp(6, 20).unwrap();
    assert_eq!(rankin_cohen(&e4, &e6, 2).weight, 14);
}

#[test]
fn weight_24_eigenforms_have_the_right_t2_polynomial() {
    let fs = eigenforms(24, 20, 256).unwrap();
    assert_eq!(fs.len(), 2);
    // roots 540 ± 12√144169
    let c0 = 540i64 * 540 - 144 * 144169;
    let want: Vec<Rational> = [c0, -1080, 1].iter().map(|&c| Rational::from(c)).collect();
    assert_eq!(fs[0].t2_charpoly, want);
    let sum = fs[0].t2_eigenvalue().to_f64() + fs[1].t2_eigenvalue().to_f64();
    assert!((sum - 1080.0).abs() < 1e-9);
    assert_eq!(fs[0].coeff(1).to_f64(), 1.0);
}

#[test]
fn bad_weights_are_rejected() {
    assert!(eisenstein_qexp(5, 10).is_err());
    assert!(eisenstein_qexp(2, 10).is_err());
    assert!(victor_miller_basis(-4, 10).is_err());
}

#[test]
fn json_round_trip() {
    let d = delta_qexp(12).unwrap();
    let v = d.to_json();
    assert_eq!(v["weight"], 12);
    assert_eq!(v["coeffs"][2], "-24/1");
    let back = eiskern::modforms::ModularForm::from_json(&v).unwrap();
    assert_eq!(back.series, d.series);
}
