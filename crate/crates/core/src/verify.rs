//! Acceptance checks, grouped into suites. Every check reports a residual against a tolerance.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dbleis::cohen::qseries_at;
use crate::dbleis::{
    bracket_poincare_check, dbl_eis_coeffs, dbl_eis_point_eval, hecke_action_identity_residual,
    rc_identity_residual, twist_inverse, twisted_dbl_eis_coeffs, zagier_kernel_residual,
    SpectralData,
};
use crate::error::{Error, Result};
use crate::lfunc::{lstar, lstar_twisted, lstar_twisted_all, petersson_norm, petersson_norm_rank, rankin_convolution_check};
use crate::modforms::eigenforms;
use crate::mpcore::quad::gauss_legendre;
use crate::mpcore::{cnum, cpow, log2_abs, Complex, HpComplex, PrecisionProfile};
use crate::nonhol::{
    divisor_identity_check, eisenstein_nonhol, eisenstein_star, EisMethod, hecke_kernel_check, kernel_k, kernel_k_bruteforce,
    kernel_laplace_residual, kernel_swap_sums, maass_eval, maass_lstar, nonhol_dbl_eis_direct,
    parse_maass, sharp_decay_check, MaassFormData,
};
use crate::periods::{kdkd_check, manin_table, RationalCertificate};

/// Weights with one-dimensional cusp space used by the period checks.
pub const ONE_DIM_WEIGHTS: [i64; 6] = [12, 16, 18, 20, 22, 26];

/// The synthetic Maass fixture shipped with the crate (Hecke-consistent, not a real eigenform).
pub const SYNTHETIC_MAASS: &str = include_str!("../tests/data/synthetic_maass.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Brackets,
    Lvalues,
    Dbleis,
    Periods,
    Nonhol,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Brackets, Suite::Lvalues, Suite::Dbleis, Suite::Periods, Suite::Nonhol];

    pub fn parse(s: &str) -> Result<Vec<Suite>> {
        Ok(match s {
            "brackets" => vec![Suite::Brackets],
            "lvalues" => vec![Suite::Lvalues],
            "dbleis" => vec![Suite::Dbleis],
            "periods" => vec![Suite::Periods],
            "nonhol" => vec![Suite::Nonhol],
            "all" => Suite::ALL.to_vec(),
            _ => return Err(Error::InvalidValue(format!("unknown suite {s:?}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Brackets => "brackets",
            Suite::Lvalues => "lvalues",
            Suite::Dbleis => "dbleis",
            Suite::Periods => "periods",
            Suite::Nonhol => "nonhol",
        }
    }

    pub fn criteria(self) -> &'static [u32] {
        match self {
            Suite::Brackets => &[1, 2, 10],
            Suite::Lvalues => &[3, 4, 5],
            Suite::Dbleis => &[8],
            Suite::Periods => &[6, 7],
            Suite::Nonhol => &[9],
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Smaller random samples and a single precision where the criterion allows it.
    pub quick: bool,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { quick: false, seed: 20240917 }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(criterion: u32, name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { criterion, name: name.into(), residual, tol, pass: residual <= tol, detail: String::new() }
    }

    fn with(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn failed(criterion: u32, name: impl Into<String>, tol: f64, e: &Error) -> Self {
        Check {
            criterion,
            name: name.into(),
            residual: f64::INFINITY,
            tol,
            pass: false,
            detail: e.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "criterion": self.criterion,
            "name": self.name,
            "residual": format!("{:.3e}", self.residual),
            "tol": format!("{:.1e}", self.tol),
            "pass": self.pass,
            "detail": self.detail,
        })
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:>2}  {:<4}  {:<52}  {:>10.3e}  {:>8.1e}  {}",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tol,
            self.detail
        )
    }
}

fn run(criterion: u32, name: String, tol: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    match f() {
        Ok(c) => c,
        Err(e) => Check::failed(criterion, name, tol, &e),
    }
}

fn hp(re: f64, im: f64, bits: u32) -> HpComplex {
    HpComplex::from_f64(re, im, bits).expect("finite literal")
}

fn hp_sub(a: i64, s: &HpComplex) -> HpComplex {
    HpComplex::new(Complex::with_val(s.prec(), a - s.as_complex())).expect("finite")
}

fn abs_diff(a: &Complex, b: &Complex) -> f64 {
    let p = a.prec().0.min(b.prec().0);
    2f64.powf(log2_abs(&Complex::with_val(p, a - b)))
}

fn rel_diff(a: &Complex, b: &Complex) -> f64 {
    let scale = log2_abs(a).max(log2_abs(b));
    if scale == f64::NEG_INFINITY {
        return 0.0;
    }
    abs_diff(a, b) / 2f64.powf(scale)
}

fn spectral(k: i64, prof: &PrecisionProfile) -> Result<SpectralData> {
    SpectralData::new(k, prof.qexp_order.max(prof.tail) + 8, prof)
}

/// Checks for one acceptance criterion (1..=10).
pub fn criterion(n: u32, prof: &PrecisionProfile, opts: &VerifyOptions) -> Vec<Check> {
    match n {
        1 => rankin_cohen_checks(prof),
        2 => zagier_checks(prof),
        3 => functional_equation_checks(prof, opts),
        4 => twisted_fe_checks(prof),
        5 => convolution_checks(prof),
        6 => manin_checks(prof, opts),
        7 => kdkd_checks(prof),
        8 => dbleis_checks(prof),
        9 => nonhol_checks(prof, opts),
        10 => poincare_checks(),
        _ => vec![Check::failed(n, "unknown criterion", 0.0, &Error::InvalidValue(n.to_string()))],
    }
}

pub const RC_GRID: [(i64, i64, i64); 4] = [(4, 6, 1), (4, 4, 2), (6, 6, 2), (4, 8, 1)];

fn rankin_cohen_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let mut p = prof.clone();
    p.qexp_order = 32;
    RC_GRID
        .iter()
        .map(|&(k1, k2, n)| {
            let name = format!("Rankin-Cohen [E{k1},E{k2}]_{n} vs double Eisenstein");
            run(1, name.clone(), 1e-30, || {
                let sd = spectral(k1 + k2 + 2 * n, &p)?;
                let r = rc_identity_residual(k1, k2, n, &sd)?;
                Ok(Check::new(1, name, r, 1e-30).with(format!("N_q = 32, dim S = {}", sd.forms.len())))
            })
        })
        .collect()
}

fn zagier_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let mut out = Vec::new();
    let mut grid: Vec<(i64, i64, i64)> = RC_GRID.to_vec();
    grid.extend([(4, 8, 0), (6, 6, 0), (4, 12, 0)]);
    for (k1, k2, n) in grid {
        let k = k1 + k2 + 2 * n;
        let name = format!("Zagier <[E{k1},E{k2}]_{n}, f> at weight {k}");
        let sd = match spectral(k, prof) {
            Ok(sd) => sd,
            Err(e) => {
                out.push(Check::failed(2, name, 1e-28, &e));
                continue;
            }
        };
        if sd.forms.is_empty() {
            out.push(Check::new(2, name, 0.0, 1e-28).with(format!("S_{k} = 0")));
            continue;
        }
        for f in &sd.forms {
            let nm = format!("{name} ({})", f.id());
            out.push(run(2, nm.clone(), 1e-28, || {
                let z = zagier_kernel_residual(k1, k2, n, f, &sd)?;
                Ok(Check::new(2, nm, z.residual, 1e-28))
            }));
        }
    }
    for k in [12i64, 16] {
        let name = format!("Petersson norm: quadrature vs Rankin identity, weight {k}");
        out.push(run(2, name.clone(), 1e-25, || {
            let fam = eigenforms(k, prof.qexp_order.max(prof.tail) + 8, prof.bits)?;
            let a = petersson_norm(&fam[0], prof)?;
            let b = petersson_norm_rank(&fam[0], &fam, prof)?;
            let d = Complex::with_val(prof.bits, &a.value - &b.value);
            let r = 2f64.powf(log2_abs(&d) - crate::mpcore::log2_abs_f(&a.value));
            Ok(Check::new(2, name, r, 1e-25))
        }));
    }
    out
}

fn functional_equation_checks(prof: &PrecisionProfile, opts: &VerifyOptions) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let count = if opts.quick { 3 } else { 10 };
    let mut out = Vec::new();
    for k in ONE_DIM_WEIGHTS {
        let samples: Vec<(f64, f64)> = (0..count)
            .map(|_| (rng.gen_range(-2.0..(k as f64 + 2.0)), rng.gen_range(-6.0..6.0)))
            .collect();
        let name = format!("L*(f,k-s) = (-1)^(k/2) L*(f,s), k = {k}, {count} random s");
        out.push(run(3, name.clone(), 1e-35, || {
            let f = &eigenforms(k, prof.tail + 8, prof.bits)?[0];
            let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
            let mut worst: f64 = 0.0;
            for &(x, y) in &samples {
                let s = hp(x, y, prof.bits);
                let a = lstar(f, &s, prof)?;
                let b = lstar(f, &hp_sub(k, &s), prof)?;
                let bs = Complex::with_val(prof.bits, b.value.as_complex() * sign);
                worst = worst.max(abs_diff(a.value.as_complex(), &bs));
            }
            Ok(Check::new(3, name, worst, 1e-35).with("absolute"))
        }));
        let name = format!("L*(f,s) at {} vs {} bits, k = {k}", prof.bits, 2 * prof.bits);
        out.push(run(3, name.clone(), 1e-35, || {
            let p2 = prof.doubled();
            let f = &eigenforms(k, prof.tail + 8, prof.bits)?[0];
            let f2 = &eigenforms(k, p2.tail + 8, p2.bits)?[0];
            let mut worst: f64 = 0.0;
            for &(x, y) in samples.iter().take(2) {
                let a = lstar(f, &hp(x, y, prof.bits), prof)?;
                let b = lstar(f2, &hp(x, y, p2.bits), &p2)?;
                worst = worst.max(abs_diff(a.value.as_complex(), b.value.as_complex()));
            }
            Ok(Check::new(3, name, worst, 1e-35).with("absolute, first two samples"))
        }));
    }
    out
}

fn twisted_fe_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let k = 12i64;
    let mut out = Vec::new();
    let f = match eigenforms(k, prof.tail * 5 + 8, prof.bits) {
        Ok(v) => v.into_iter().next().expect("S_12 is spanned by Δ"),
        Err(e) => return vec![Check::failed(4, "twisted functional equation", 1e-30, &e)],
    };
    for q in [2u64, 3, 5] {
        let name = format!("q^u L*(Δ,u;p/q) = q^(k-u) L*(Δ,k-u;-p'/q), q = {q}, u = 2..10");
        out.push(run(4, name.clone(), 1e-30, || {
            let mut worst: f64 = 0.0;
            let qc = cnum(prof.bits, q as f64, 0.0);
            for u in 2..=k - 2 {
                let su = hp(u as f64, 0.0, prof.bits);
                let left = lstar_twisted_all(&f, &su, q, prof)?;
                for l in &left {
                    let p = l.twist.0;
                    let pp = twist_inverse(p, q)?;
                    let r = lstar_twisted(&f, &hp((k - u) as f64, 0.0, prof.bits), -(pp as i64), q as i64, prof)?;
                    let lhs = cpow(&qc, su.as_complex(), prof.bits) * l.value.as_complex();
                    let rhs = cpow(&qc, &cnum(prof.bits, (k - u) as f64, 0.0), prof.bits) * r.value.as_complex();
                    // (-1)^{12/2} = 1.
                    worst = worst.max(rel_diff(&Complex::with_val(prof.bits, lhs), &Complex::with_val(prof.bits, rhs)));
                }
            }
            Ok(Check::new(4, name, worst, 1e-30).with("relative"))
        }));
    }
    out
}

fn convolution_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let mut out = Vec::new();
    let a_max = 30u64;
    let order = (prof.tail as u64 * a_max) as usize + 8;
    let f = match eigenforms(12, order.max(2000), prof.bits) {
        Ok(v) => v.into_iter().next().expect("Δ"),
        Err(e) => return vec![Check::failed(5, "convolution identities", 1e-25, &e)],
    };
    for (s, w) in [(3.0, 2.0), (4.0, 3.0), (5.0, 2.0)] {
        let name = format!("convolution identity, Δ, (s,w) = ({s},{w}), M = 2000");
        let base = name.clone();
        match rankin_convolution_check(&f, &hp(s, 0.0, prof.bits), &hp(w, 0.0, prof.bits), 2000, prof) {
            Ok(r) => {
                out.push(
                    Check::new(5, format!("{base}: residual within bound"), r.value, r.bound)
                        .with(format!("bound {:.2e}", r.bound)),
                );
                out.push(
                    Check::new(5, format!("{base}: bound at most 1e-25"), r.bound, 1e-25)
                        .with("polynomial tail; see notes in README"),
                );
            }
            Err(e) => out.push(Check::failed(5, name, 1e-25, &e)),
        }
    }
    let name = "Hecke-action identity, Δ, (s,w) = (5,1), A_max = 30".to_string();
    match hecke_action_identity_residual(&f, &hp(5.0, 0.0, prof.bits), &hp(1.0, 0.0, prof.bits), a_max, prof) {
        Ok(h) => {
            out.push(Check::new(5, format!("{name}: residual within bound"), h.residual, h.bound));
            out.push(Check::new(5, format!("{name}: bound at most 1e-6"), h.bound, 1e-6));
        }
        Err(e) => out.push(Check::failed(5, name, 1e-6, &e)),
    }
    out
}

fn same_rationals(a: &[RationalCertificate], b: &[RationalCertificate]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.reconstructed == y.reconstructed)
}

fn manin_checks(prof: &PrecisionProfile, opts: &VerifyOptions) -> Vec<Check> {
    let profs = if opts.quick { vec![prof.clone()] } else { vec![prof.clone(), prof.doubled()] };
    ONE_DIM_WEIGHTS
        .iter()
        .map(|&k| {
            let name = format!("Manin ratios rational and precision-stable, k = {k}");
            run(6, name.clone(), 0.0, || {
                let mut tables = Vec::new();
                for p in &profs {
                    let f = &eigenforms(k, p.qexp_order.max(p.tail) + 8, p.bits)?[0];
                    tables.push(manin_table(f, p)?);
                }
                let certs: Vec<Vec<RationalCertificate>> =
                    tables.iter().map(|t| t.iter().map(|e| e.cert.clone()).collect()).collect();
                let bad = certs[0].iter().filter(|c| !c.is_rational()).count()
                    + certs.iter().skip(1).map(|c| c.iter().filter(|x| !x.is_rational()).count()).sum::<usize>();
                let stable = certs.windows(2).all(|w| same_rationals(&w[0], &w[1]));
                let worst = certs.iter().flatten().map(|c| c.residual).fold(0.0, f64::max);
                let mut c = Check::new(6, name, worst, 0.0);
                c.pass = bad == 0 && stable;
                c.tol = 2f64.powi(prof.tol_log2);
                Ok(c.with(format!(
                    "{} ratios, {} inconclusive, stable across {:?} bits: {}",
                    certs[0].len(),
                    bad,
                    profs.iter().map(|p| p.bits).collect::<Vec<_>>(),
                    stable
                )))
            })
        })
        .collect()
}

fn kdkd_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let profs = [prof.clone(), prof.doubled()];
    let sds: Vec<Result<SpectralData>> = profs.iter().map(|p| spectral(12, p)).collect();
    [0i64, -2, 14, 16]
        .iter()
        .map(|&s| {
            let name = format!("Δ, s = {s}: both ratios rational and precision-stable");
            run(7, name.clone(), 0.0, || {
                let mut reps = Vec::new();
                for (sd, p) in sds.iter().zip(&profs) {
                    let sd = sd.as_ref().map_err(|e| e.clone())?;
                    reps.push(kdkd_check(sd, &hp(s as f64, 0.0, p.bits))?);
                }
                let rational = reps.iter().all(|r| r.plus.is_rational() && r.minus.is_rational());
                let stable = reps[0].plus.reconstructed == reps[1].plus.reconstructed
                    && reps[0].minus.reconstructed == reps[1].minus.reconstructed;
                let worst = reps.iter().map(|r| r.plus.residual.max(r.minus.residual)).fold(0.0, f64::max);
                let mut c = Check::new(7, name, worst, 2f64.powi(prof.tol_log2));
                c.pass = rational && stable;
                Ok(c.with(format!("+ {}  - {}", reps[0].plus.reconstructed, reps[0].minus.reconstructed)))
            })
        })
        .collect()
}

/// Interior parameter points for the k = 16 cross-method check.
pub const DBLEIS_POINTS: [((f64, f64), (f64, f64), (f64, f64)); 2] =
    [((7.5, 0.0), (3.0, 0.0), (0.1, 1.2)), ((6.0, 0.5), (2.5, -0.3), (-0.3, 1.05))];

fn dbleis_checks(prof: &PrecisionProfile) -> Vec<Check> {
    let k = 16i64;
    let sd = match spectral(k, prof) {
        Ok(sd) => sd,
        Err(e) => return vec![Check::failed(8, "double Eisenstein", 1e-6, &e)],
    };
    let bits = prof.bits;
    let mut out = Vec::new();
    for (s, w, z) in DBLEIS_POINTS {
        let name = format!("k = 16, s = {:?}, w = {:?}, z = {:?}: spectral vs direct", s, w, z);
        out.push(run(8, name.clone(), 1e-6, || {
            let (s, w, z) = (hp(s.0, s.1, bits), hp(w.0, w.1, bits), hp(z.0, z.1, bits));
            let c = dbl_eis_coeffs(&sd, &s, &w, prof.qexp_order)?;
            let a = qseries_at(&c.coeffs, &z);
            let b = dbl_eis_point_eval(&z, k, &s, &w, prof.height, 40)?;
            let r = rel_diff(&a, b.value.as_complex());
            Ok(Check::new(8, name, r, 1e-6).with(format!("direct err {:.1e}", b.err_est / b.value.abs().to_f64())))
        }));
    }
    let (s, w) = (hp(4.5, 1.0, bits), hp(2.5, -0.5, bits));
    let nq = 16;
    let base = dbl_eis_coeffs(&sd, &s, &w, nq);
    let fe: [(&str, Box<dyn Fn() -> Result<f64>>); 3] = [
        (
            "E*(s,w) = E*(w,s)",
            Box::new(|| Ok(base.clone()?.rel_distance(&dbl_eis_coeffs(&sd, &w, &s, nq)?))),
        ),
        (
            "E*(s,w) = (-1)^(k/2) E*(k-s,w)",
            Box::new(|| Ok(base.clone()?.rel_distance(&dbl_eis_coeffs(&sd, &hp_sub(k, &s), &w, nq)?))),
        ),
        (
            "E*(s,w) = (-1)^(k/2) E*(s,k-w)",
            Box::new(|| Ok(base.clone()?.rel_distance(&dbl_eis_coeffs(&sd, &s, &hp_sub(k, &w), nq)?))),
        ),
    ];
    for (label, f) in fe {
        let name = format!("k = 16 coefficient vectors: {label}");
        out.push(run(8, name.clone(), 1e-30, || Ok(Check::new(8, name, f()?, 1e-30))));
    }
    let name = "k = 18 twisted: q^s E*(k-s,w;p/q) = (-1)^(k/2) q^(k-s) E*(s,w;-p'/q), q = 3".to_string();
    out.push(run(8, name.clone(), 1e-30, || {
        let k = 18;
        let sd = SpectralData::for_twists(k, 3, prof)?;
        let (s, w) = (hp(5.5, 0.3, bits), hp(7.0, 0.0, bits));
        let mut worst: f64 = 0.0;
        for p in [1i64, 2] {
            let pp = twist_inverse(p as u64, 3)? as i64;
            let ks = hp_sub(k, &s);
            let lhs = twisted_dbl_eis_coeffs(&sd, &ks, &w, p, 3, 8)?;
            let rhs = twisted_dbl_eis_coeffs(&sd, &s, &w, -pp, 3, 8)?;
            let three = cnum(bits, 3.0, 0.0);
            let l = lhs.scaled(&cpow(&three, s.as_complex(), bits));
            let r = rhs.scaled(&(-cpow(&three, ks.as_complex(), bits)));
            worst = worst.max(l.rel_distance(&r));
        }
        Ok(Check::new(8, name, worst, 1e-30))
    }));
    out
}

/// E*(z,s) = E*(z,1-s) sample: z in a box over the fundamental domain, s off the poles.
fn eisenstein_sample(rng: &mut ChaCha8Rng) -> ((f64, f64), (f64, f64)) {
    let z = (rng.gen_range(-0.5..0.5), rng.gen_range(0.9..3.0));
    loop {
        let s = (rng.gen_range(-1.0..2.0), rng.gen_range(-6.0..6.0));
        let c = Complex64::new(s.0, s.1);
        if [0.0, 0.5, 1.0].iter().all(|p| (c - p).norm() > 0.05) {
            return (z, s);
        }
    }
}

/// ∫_1^Y u(iy)(y^{s-1/2} + y^{1/2-s}) dy/y by Gauss-Legendre panels in double precision.
pub fn maass_lstar_quadrature(data: &MaassFormData, s: Complex64) -> Result<Complex64> {
    let gl: Vec<(f64, f64)> = gauss_legendre(24, 64).iter().map(|(x, w)| (x.to_f64(), w.to_f64())).collect();
    let h = 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..30 {
        let a = 1.0 + j as f64 * h;
        for (x, w) in &gl {
            let y = a + h * (x + 1.0) / 2.0;
            let u = maass_eval(data, Complex64::new(0.0, y))?;
            let ker = Complex64::new(y, 0.0).powc(s - 0.5) + Complex64::new(y, 0.0).powc(0.5 - s);
            acc += u * ker / y * w * h / 2.0;
        }
    }
    Ok(acc)
}

fn nonhol_checks(prof: &PrecisionProfile, opts: &VerifyOptions) -> Vec<Check> {
    let bits = prof.bits;
    let c = Complex64::new;
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
    let count = if opts.quick { 5 } else { 20 };
    let samples: Vec<_> = (0..count).map(|_| eisenstein_sample(&mut rng)).collect();
    let name = format!("E*(z,s) = E*(z,1-s) at {count} random points");
    out.push(run(9, name.clone(), 1e-30, || {
        let mut worst: f64 = 0.0;
        for &(z, s) in &samples {
            let (z, s) = (hp(z.0, z.1, bits), hp(s.0, s.1, bits));
            let a = eisenstein_star(&z, &s, bits)?;
            let b = eisenstein_star(&z, &hp_sub(1, &s), bits)?;
            worst = worst.max(rel_diff(a.as_complex(), b.as_complex()));
        }
        Ok(Check::new(9, name, worst, 1e-30).with("relative"))
    }));

    let name = "E(z,s): Fourier expansion vs lattice sum at s = 2.5+1i, 4".to_string();
    out.push(run(9, name.clone(), 0.0, || {
        let (mut worst, mut tol, mut pass) = (0f64, 0f64, true);
        for (s, z) in [((2.5, 1.0), (0.2, 1.3)), ((4.0, 0.0), (-0.4, 0.95))] {
            let (s, z) = (hp(s.0, s.1, bits), hp(z.0, z.1, bits));
            let a = eisenstein_nonhol(&z, &s, EisMethod::Fourier, prof)?;
            let b = eisenstein_nonhol(&z, &s, EisMethod::Lattice, prof)?;
            let d = abs_diff(a.value.as_complex(), b.value.as_complex());
            let e = a.err_est + b.err_est;
            pass &= d <= e;
            worst = worst.max(d);
            tol = tol.max(e);
        }
        let mut ch = Check::new(9, name, worst, tol);
        ch.pass = pass;
        Ok(ch.with("tol is the lattice truncation estimate"))
    }));

    let sym_points = [c(0.0, 1.0), c(0.3, 1.1), c(-0.2, 1.5), c(0.45, 0.9), c(0.1, 2.0)];
    let name = "K(z;s,s') = K(z;s',s) at 5 points, (s,s') = (0.8,6.5)".to_string();
    out.push(run(9, name.clone(), 1e-10, || {
        let mut worst: f64 = 0.0;
        for z in sym_points {
            let (a, b, _) = kernel_swap_sums(z, c(0.8, 0.0), c(6.5, 0.0), 40.0)?;
            worst = worst.max((a - b).norm() / a.norm());
        }
        Ok(Check::new(9, name, worst, 1e-10).with("S-invariant truncation, both orderings"))
    }));

    for z in [c(0.1, 1.1), c(0.0, 1.0)] {
        let name = format!("K via decomposition vs raw group sum, (s,s') = (1.2,6.5), z = {z}");
        out.push(run(9, name.clone(), 1e-4, || {
            let k = kernel_k(z, c(1.2, 0.0), c(6.5, 0.0), prof.height)?;
            let (b, err) = kernel_k_bruteforce(z, c(1.2, 0.0), c(6.5, 0.0), 60.0, 400)?;
            Ok(Check::new(9, name, (k.value - b).norm() / b.norm(), 1e-4).with(format!("raw sum err {err:.1e}")))
        }));
    }

    let name = "Laplacian identity for K at z = i, (s,s') = (1.2,6.5)".to_string();
    out.push(run(9, name.clone(), 1e-6, || {
        let r = kernel_laplace_residual(c(0.0, 1.0), c(1.2, 0.0), c(6.5, 0.0), 0.01, prof.height)?;
        Ok(Check::new(9, name, r, 1e-6).with("7-point stencil, h = 0.01"))
    }));

    let (s, s2, w) = (c(1.5, 0.0), c(7.0, 0.0), c(4.0, 0.0));
    let z0 = c(0.1, 1.1);
    let name = "double series 𝓔(z,w;s,s') invariant under z+1 and -1/z".to_string();
    out.push(run(9, name.clone(), 0.0, || {
        let r = 40.0;
        let a = nonhol_dbl_eis_direct(z0, w, s, s2, r)?;
        let mut worst_ratio: f64 = 0.0;
        let mut worst: f64 = 0.0;
        for g in [z0 + 1.0, -1.0 / z0] {
            let b = nonhol_dbl_eis_direct(g, w, s, s2, r)?;
            let d = (a.value - b.value).norm();
            worst = worst.max(d);
            worst_ratio = worst_ratio.max(d / (a.err_est + b.err_est));
        }
        let mut ch = Check::new(9, name, worst, a.err_est);
        ch.pass = worst_ratio <= 1.0;
        Ok(ch.with(format!("(s,s',w) = (1.5,7,4), radius {r}; tol is the truncation estimate")))
    }));
    let name = "𝓔(z,w;s,s') = 𝓔(z,w;s',s)".to_string();
    out.push(run(9, name.clone(), 1e-12, || {
        let a = nonhol_dbl_eis_direct(z0, w, s, s2, 20.0)?;
        let b = nonhol_dbl_eis_direct(z0, w, s2, s, 20.0)?;
        Ok(Check::new(9, name, (a.value - b.value).norm() / a.value.norm(), 1e-12))
    }));
    let name = "ζζ𝓔 against the Hecke sum of K, n <= 10".to_string();
    out.push(run(9, name.clone(), 1e-3, || {
        let h = hecke_kernel_check(z0, s, s2, w, 10, 40.0, prof.height)?;
        Ok(Check::new(9, name, h.residual, 1e-3).with(format!("truncation estimate {:.1e}", h.lhs_err / h.lhs.norm())))
    }));
    let name = "K^♯(iy) decay slope at y = 2, 4, 8 within the growth exponent".to_string();
    out.push(run(9, name.clone(), 0.5, || {
        let d = sharp_decay_check(c(0.8, 0.0), c(6.5, 0.0), &[2.0, 4.0, 8.0], prof.height)?;
        let excess = d.slopes.iter().map(|m| m - d.exponent).fold(f64::NEG_INFINITY, f64::max);
        let mut ch = Check::new(9, name, excess.max(0.0), 0.5);
        ch.pass = d.ok;
        Ok(ch.with(format!("slopes {:?}, exponent {:.2}", d.slopes, d.exponent)))
    }));
    let name = "divisor-sum Dirichlet series of E(z,s), s = 0.7+0.3i, w = 4".to_string();
    out.push(run(9, name.clone(), 0.0, || {
        let d = divisor_identity_check(&hp(0.7, 0.3, bits), &hp(4.0, 0.0, bits), 2000, bits.min(128))?;
        let mut ch = Check::new(9, name, d.residual, d.bound);
        ch.pass = d.residual <= d.bound;
        Ok(ch.with("tol is the truncation bound"))
    }));

    match parse_maass(SYNTHETIC_MAASS, "synthetic fixture") {
        Err(e) => out.push(Check::failed(9, "Maass fixture", 0.0, &e)),
        Ok(data) => {
            for (a, b) in [(0.7, 0.0), (0.6, 2.0)] {
                let name = format!("Maass L*(u,1-s) = L*(u,s) on the fixture, s = {a}+{b}i");
                let tol = data.claimed_precision;
                out.push(run(9, name.clone(), tol, || {
                    let s = hp(a, b, bits);
                    let x = maass_lstar(&data, &s, prof)?;
                    let y = maass_lstar(&data, &hp_sub(1, &s), prof)?;
                    let r = abs_diff(x.value.as_complex(), y.value.as_complex());
                    let tol = (x.err_est + y.err_est).max(data.claimed_precision * x.value.abs().to_f64());
                    Ok(Check::new(9, name, r, tol).with("absolute, against combined error"))
                }));
            }
            let name = "Maass L*(u,0.7) vs double-precision quadrature of u(iy)".to_string();
            out.push(run(9, name.clone(), 1e-9, || {
                let x = maass_lstar(&data, &hp(0.7, 0.0, bits), prof)?.value.to_c64();
                let y = maass_lstar_quadrature(&data, c(0.7, 0.0))?;
                Ok(Check::new(9, name, (x - y).norm() / x.norm(), 1e-9))
            }));
        }
    }
    out
}

/// The double Poincaré tuple (k1,k2,n,m1,m2) used for the point check.
pub const POINCARE_TUPLE: (i64, i64, i64, i64, i64) = (12, 12, 2, 1, 1);

fn poincare_checks() -> Vec<Check> {
    let (k1, k2, n, m1, m2) = POINCARE_TUPLE;
    let name = format!("bracket of Poincaré series ({k1},{k2},{n},{m1},{m2}) at z = 2i, H = 300");
    vec![run(10, name.clone(), 1e-4, || {
        let r = bracket_poincare_check(&hp(0.0, 2.0, 64), k1, k2, n, m1, m2, 300)?;
        Ok(Check::new(10, name, r.residual, 1e-4).with(format!("truncation estimate {:.1e}", r.err_est / r.scale)))
    })]
}

/// Checks of every criterion belonging to the suite, in order.
pub fn run_suite(suite: Suite, prof: &PrecisionProfile, opts: &VerifyOptions) -> Vec<Check> {
    suite.criteria().iter().flat_map(|&n| criterion(n, prof, opts)).collect()
}

/// The pass/fail table printed by the command line.
pub fn format_table(checks: &[Check]) -> String {
    let mut s = format!(
        "{:>2}  {:<4}  {:<52}  {:>10}  {:>8}  {}\n",
        "#", "", "check", "residual", "tol", "detail"
    );
    for c in checks {
        s.push_str(&c.table_row());
        s.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    s
}
