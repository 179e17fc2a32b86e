use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use eiskern::dbleis::{dbl_eis_coeffs, dbl_eis_point_eval, twisted_dbl_eis_coeffs, SpectralData};
use eiskern::dbleis::cohen::qseries_at;
use eiskern::lfunc::{lstar, lstar_twisted};
use eiskern::modforms::{
    delta_qexp, eigenforms, eisenstein_qexp, rankin_cohen, victor_miller_basis, HeckeEigenform,
};
use eiskern::mpcore::{fmt_float, HpComplex, PrecisionProfile};
use eiskern::nonhol::{
    cpl_inner_product_check, eisenstein_nonhol, kernel_k, maass_load, maass_lstar, nonhol_dbl_eis_direct,
    EisMethod,
};
use eiskern::periods::{
    manin_table_quadratic, manin_table_with, period_pair, twisted_period_check,
};
use eiskern::verify::{format_table, run_suite, Check, Suite, VerifyOptions};
use eiskern::Error;

const SCHEMA: &str = "eiskern/1";
const QUADRATIC_D_MAX: u64 = 10_000_000_000_000_000;
const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_CONVERGENCE: u8 = 3;
const EXIT_CHECKS_FAILED: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "eiskern", version, about = "Kernels for products of L-values: modular forms, double Eisenstein series, periods")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// q-expansion order.
    #[arg(long, global = true)]
    qexp_order: Option<usize>,
    /// Cap on L-series terms.
    #[arg(long, global = true)]
    tail: Option<usize>,
    /// Height bound for group sums.
    #[arg(long, global = true)]
    height: Option<u32>,
    /// Acceptance tolerance, e.g. 1e-30.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = VerifyOptions::default().seed)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Md,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Md => "md",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact q-expansions.
    Qexp(QexpArgs),
    /// Hecke eigenforms of a weight with their T_2 data.
    Eigenforms(WeightArgs),
    /// Completed L-values L*(f,s), optionally twisted.
    Lvalue(LvalueArgs),
    /// Periods, Manin ratios and twisted period certificates.
    Periods(PeriodsArgs),
    /// Coefficients and point values of the holomorphic double Eisenstein series.
    Dbleis(DbleisArgs),
    /// Non-holomorphic objects.
    Nonhol {
        #[command(subcommand)]
        what: NonholCommand,
    },
    /// Run acceptance suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct QexpArgs {
    /// Normalized Eisenstein series E_k.
    #[arg(long, group = "which")]
    ek: Option<i64>,
    /// The discriminant Δ.
    #[arg(long, group = "which")]
    delta: bool,
    /// Victor–Miller basis of M_k.
    #[arg(long, group = "which")]
    basis: Option<i64>,
    /// Rankin–Cohen bracket [E_k1, E_k2]_n (θ-normalized), as `k1 k2 n` or `k1,k2,n`.
    #[arg(long, group = "which", value_delimiter = ',', num_args = 1..=3)]
    bracket: Option<Vec<i64>>,
    /// Number of coefficients.
    #[arg(short = 'N', long = "order", default_value_t = 16)]
    order: usize,
}

#[derive(Args, Debug)]
struct WeightArgs {
    #[arg(long)]
    weight: i64,
    #[arg(short = 'N', long = "order", default_value_t = 16)]
    order: usize,
}

#[derive(Args, Debug)]
struct LvalueArgs {
    #[arg(long)]
    weight: i64,
    /// s as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Additive twist p/q.
    #[arg(long, allow_hyphen_values = true)]
    twist: Option<String>,
    /// Index of the eigenform when dim S_k > 1.
    #[arg(long, default_value_t = 0)]
    form: usize,
}

#[derive(Args, Debug)]
struct PeriodsArgs {
    #[arg(long)]
    weight: i64,
    #[arg(long, default_value_t = 0)]
    form: usize,
    /// Twisted period check at this integer u (needs --twist).
    #[arg(long)]
    u: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    twist: Option<String>,
    /// Denominator bound for the quadratic-field reconstruction (dim S_k = 2).
    #[arg(long)]
    d_max: Option<f64>,
}

#[derive(Args, Debug)]
struct DbleisArgs {
    #[arg(long)]
    weight: i64,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, allow_hyphen_values = true)]
    w: String,
    #[arg(long, allow_hyphen_values = true)]
    twist: Option<String>,
    /// Also evaluate at z, spectrally and by direct summation.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(short = 'N', long = "order")]
    order: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum NonholCommand {
    /// E(z,s) by Fourier expansion or lattice sum.
    Eisenstein {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value = "fourier")]
        method: String,
    },
    /// The kernel K(z;s,s').
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long = "s-prime", allow_hyphen_values = true)]
        s_prime: String,
    },
    /// The double series 𝓔(z,w;s,s') by direct summation.
    Double {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long = "s-prime", allow_hyphen_values = true)]
        s_prime: String,
        #[arg(long, default_value_t = 20.0)]
        radius: f64,
    },
    /// L*(u,s) for an ingested even Maass form.
    Maass {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
    },
    /// Fundamental-domain quadrature of the double series against a Maass form.
    Cpl {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long = "s-prime", allow_hyphen_values = true)]
        s_prime: String,
        #[arg(long, default_value_t = 24)]
        nodes: usize,
        #[arg(long, default_value_t = 12.0)]
        radius: f64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// brackets, lvalues, dbleis, periods, nonhol or all.
    suite: String,
    #[arg(long)]
    quick: bool,
}

fn profile(g: &Global) -> Result<PrecisionProfile, Error> {
    let mut prof = match std::env::var_os("EISKERN_PROFILE") {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::InvalidValue(format!("EISKERN_PROFILE {}: {e}", PathBuf::from(&path).display())))?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidValue(format!("EISKERN_PROFILE is not JSON: {e}")))?;
            PrecisionProfile::from_json(&v)?
        }
        None => PrecisionProfile::default(),
    };
    if let Some(b) = g.precision_bits {
        let fresh = PrecisionProfile::with_bits(b);
        prof.bits = b;
        prof.tail = prof.tail.max(fresh.tail);
        prof.tol_log2 = fresh.tol_log2;
    }
    if let Some(n) = g.qexp_order {
        prof.qexp_order = n;
    }
    if let Some(t) = g.tail {
        prof.tail = t;
    }
    if let Some(h) = g.height {
        prof.height = h;
    }
    if let Some(t) = g.tol {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidValue("--tol must lie in (0,1)".into()));
        }
        prof.tol_log2 = t.log2().floor() as i32;
    }
    prof.validate()?;
    Ok(prof)
}

fn cx(text: &str, prof: &PrecisionProfile) -> Result<HpComplex, Error> {
    HpComplex::parse(text, prof.bits)
}

fn c64(text: &str) -> Result<Complex64, Error> {
    Ok(HpComplex::parse(text, 64)?.to_c64())
}

fn twist(text: &Option<String>) -> Result<(i64, i64), Error> {
    let Some(t) = text else { return Ok((0, 1)) };
    let (p, q) = t
        .split_once('/')
        .ok_or_else(|| Error::InvalidValue(format!("twist must be p/q, got {t:?}")))?;
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::InvalidValue(format!("bad twist {t:?}")));
    Ok((parse(p)?, parse(q)?))
}

fn pick_form(k: i64, order: usize, idx: usize, bits: u32) -> Result<HeckeEigenform, Error> {
    let mut forms = eigenforms(k, order, bits)?;
    if forms.is_empty() {
        return Err(Error::Domain(format!("S_{k} = 0")));
    }
    if idx >= forms.len() {
        return Err(Error::InvalidValue(format!("form index {idx} but dim S_{k} = {}", forms.len())));
    }
    Ok(forms.swap_remove(idx))
}

fn eigenform_json(f: &HeckeEigenform, n: usize) -> Value {
    let digits = (f.prec as f64 * std::f64::consts::LOG10_2) as usize;
    let coeffs: Vec<String> = match &f.exact {
        Some(q) => (1..=n).map(|i| q.coeff(i).to_string()).collect(),
        None => (1..=n).map(|i| fmt_float(f.coeff(i), digits)).collect(),
    };
    json!({
        "id": f.id(),
        "weight": f.weight,
        "dim": f.dim_sk,
        "exact": f.exact.is_some(),
        "t2_charpoly": f.t2_charpoly.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "coeffs": coeffs,
    })
}

fn cmd_qexp(a: &QexpArgs) -> Result<Value, Error> {
    let n = a.order;
    if let Some(k) = a.ek {
        return Ok(eisenstein_qexp(k, n)?.to_json());
    }
    if a.delta {
        return Ok(delta_qexp(n)?.to_json());
    }
    if let Some(k) = a.basis {
        let b = victor_miller_basis(k, n)?;
        return Ok(json!({ "weight": k, "basis": b.iter().map(|f| f.to_json()).collect::<Vec<_>>() }));
    }
    if let Some(v) = &a.bracket {
        let &[k1, k2, m] = v.as_slice() else {
            return Err(Error::InvalidValue("--bracket takes k1 k2 n".into()));
        };
        if m < 0 {
            return Err(Error::Domain("bracket order must be >= 0".into()));
        }
        let g = rankin_cohen(&eisenstein_qexp(k1, n)?, &eisenstein_qexp(k2, n)?, m as u32);
        return Ok(g.to_json());
    }
    Err(Error::InvalidValue("choose one of --ek, --delta, --basis, --bracket".into()))
}

fn cmd_eigenforms(a: &WeightArgs, prof: &PrecisionProfile) -> Result<Value, Error> {
    let forms = eigenforms(a.weight, a.order.max(2), prof.bits)?;
    Ok(json!({ "weight": a.weight, "forms": forms.iter().map(|f| eigenform_json(f, a.order)).collect::<Vec<_>>() }))
}

fn cmd_lvalue(a: &LvalueArgs, prof: &PrecisionProfile) -> Result<Value, Error> {
    let (p, q) = twist(&a.twist)?;
    let order = prof.qexp_order.max(prof.tail * q.unsigned_abs() as usize + 8);
    let f = pick_form(a.weight, order, a.form, prof.bits)?;
    let s = cx(&a.s, prof)?;
    let v = if q == 1 && p == 0 { lstar(&f, &s, prof)? } else { lstar_twisted(&f, &s, p, q, prof)? };
    Ok(v.to_json())
}

fn cmd_periods(a: &PeriodsArgs, prof: &PrecisionProfile) -> Result<Value, Error> {
    let (p, q) = twist(&a.twist)?;
    let order = prof.qexp_order.max(prof.tail * q.unsigned_abs() as usize + 8);
    let dim = eiskern::modforms::dim_sk(a.weight);
    if let Some(d) = a.d_max {
        if !(d >= 1.0 && d <= u64::MAX as f64) {
            return Err(Error::InvalidValue(format!("--d-max must be at least 1, got {d}")));
        }
    }
    if dim == 2 && a.u.is_none() {
        let sd = SpectralData::new(a.weight, order, prof)?;
        let t = manin_table_quadratic(&sd, a.d_max.map_or(QUADRATIC_D_MAX, |d| d as u64))?;
        return Ok(json!({
            "weight": a.weight,
            "field": "Q(a_f(2))",
            "certified": t.iter().all(|e| e.cert.is_certified()),
            "table": t.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
        }));
    }
    let f = pick_form(a.weight, order, a.form, prof.bits)?;
    let pair = period_pair(&f, prof)?;
    if let Some(u) = a.u {
        let r = twisted_period_check(&f, u, p, q, &pair, prof)?;
        return Ok(json!({ "periods": pair.to_json(), "twisted": r.to_json() }));
    }
    if dim != 1 {
        return Err(Error::Domain(format!("rational Manin tables need dim S_k = 1 (dim S_{} = {dim})", a.weight)));
    }
    let t = manin_table_with(&f, &pair, prof)?;
    Ok(json!({
        "periods": pair.to_json(),
        "all_rational": t.iter().all(|e| e.cert.is_rational()),
        "table": t.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
    }))
}

fn cmd_dbleis(a: &DbleisArgs, prof: &PrecisionProfile) -> Result<Value, Error> {
    let (p, q) = twist(&a.twist)?;
    let n_q = a.order.unwrap_or(prof.qexp_order);
    let mut pp = prof.clone();
    pp.qexp_order = pp.qexp_order.max(n_q);
    let sd = SpectralData::for_twists(a.weight, q.unsigned_abs().max(1), &pp)?;
    let (s, w) = (cx(&a.s, prof)?, cx(&a.w, prof)?);
    let c = if q == 1 && p == 0 {
        dbl_eis_coeffs(&sd, &s, &w, n_q)?
    } else {
        twisted_dbl_eis_coeffs(&sd, &s, &w, p, q, n_q)?
    };
    let mut out = json!({ "coefficients": c.to_json() });
    if let Some(zt) = &a.z {
        let z = cx(zt, prof)?;
        let spectral = HpComplex::new(qseries_at(&c.coeffs, &z))?;
        out["at_z"] = json!({ "z": z.to_strings(), "spectral": spectral.to_strings() });
        if q == 1 {
            out["at_z"]["direct"] = match dbl_eis_point_eval(&z, a.weight, &s, &w, prof.height, 40) {
                Ok(d) => d.to_json(),
                Err(Error::Domain(msg)) => json!({ "skipped": msg }),
                Err(e) => return Err(e),
            };
        }
    }
    Ok(out)
}

fn cmd_nonhol(what: &NonholCommand, prof: &PrecisionProfile) -> Result<Value, Error> {
    match what {
        NonholCommand::Eisenstein { z, s, method } => {
            let m = EisMethod::parse(method)?;
            Ok(eisenstein_nonhol(&cx(z, prof)?, &cx(s, prof)?, m, prof)?.to_json())
        }
        NonholCommand::Kernel { z, s, s_prime } => {
            Ok(kernel_k(c64(z)?, c64(s)?, c64(s_prime)?, prof.height)?.to_json())
        }
        NonholCommand::Double { z, w, s, s_prime, radius } => {
            Ok(nonhol_dbl_eis_direct(c64(z)?, c64(w)?, c64(s)?, c64(s_prime)?, *radius)?.to_json())
        }
        NonholCommand::Maass { data, s } => {
            let d = maass_load(data)?;
            Ok(maass_lstar(&d, &cx(s, prof)?, prof)?.to_json())
        }
        NonholCommand::Cpl { data, s, s_prime, nodes, radius } => {
            let d = maass_load(data)?;
            Ok(cpl_inner_product_check(&d, c64(s)?, c64(s_prime)?, *nodes, *radius, prof)?.to_json())
        }
    }
}

/// Runs every criterion of the selected suites on its own thread; results keep declaration order.
fn cmd_verify(a: &VerifyArgs, prof: &PrecisionProfile, seed: u64) -> Result<(Value, Vec<Check>), Error> {
    let suites = Suite::parse(&a.suite)?;
    let opts = VerifyOptions { quick: a.quick, seed };
    let results: Vec<(Suite, Vec<Check>)> = std::thread::scope(|sc| {
        let handles: Vec<_> = suites
            .iter()
            .map(|&s| (s, sc.spawn(move || run_suite(s, prof, &opts))))
            .collect();
        handles.into_iter().map(|(s, h)| (s, h.join().expect("suite thread panicked"))).collect()
    });
    let checks: Vec<Check> = results.iter().flat_map(|(_, c)| c.clone()).collect();
    let v = json!({
        "suites": results.iter().map(|(s, c)| json!({
            "suite": s.name(),
            "passed": c.iter().all(|x| x.pass),
            "checks": c.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "quick": a.quick,
        "passed": checks.iter().all(|c| c.pass),
    });
    Ok((v, checks))
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render(format: Format, doc: &Value, checks: Option<&[Check]>) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(doc).expect("serializable") + "\n",
        Format::Csv => {
            let mut s = String::new();
            if let Some(cs) = checks {
                s.push_str("criterion,check,pass,residual,tol,detail\n");
                for c in cs {
                    s.push_str(&format!(
                        "{},{},{},{:.3e},{:.1e},{}\n",
                        c.criterion,
                        csv_field(&c.name),
                        c.pass,
                        c.residual,
                        c.tol,
                        csv_field(&c.detail)
                    ));
                }
            } else {
                let mut rows = Vec::new();
                flatten("", doc, &mut rows);
                s.push_str("key,value\n");
                for (k, v) in rows {
                    s.push_str(&format!("{},{}\n", csv_field(&k), csv_field(&v)));
                }
            }
            s
        }
        Format::Md => {
            let mut s = format!("schema {SCHEMA}\nconfig {}\n\n", doc["config"]);
            if let Some(cs) = checks {
                s.push_str(&format_table(cs));
            } else {
                let mut rows = Vec::new();
                flatten("", &doc["result"], &mut rows);
                s.push_str("| key | value |\n|---|---|\n");
                for (k, v) in rows {
                    s.push_str(&format!("| {k} | {v} |\n"));
                }
            }
            s
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    if matches!(e, Error::InvalidValue(_)) {
        EXIT_USAGE
    } else if e.is_convergence() {
        EXIT_CONVERGENCE
    } else {
        EXIT_DOMAIN
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let prof = match profile(&cli.global) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let (name, default_format) = match &cli.command {
        Command::Qexp(_) => ("qexp", Format::Json),
        Command::Eigenforms(_) => ("eigenforms", Format::Json),
        Command::Lvalue(_) => ("lvalue", Format::Json),
        Command::Periods(_) => ("periods", Format::Json),
        Command::Dbleis(_) => ("dbleis", Format::Json),
        Command::Nonhol { .. } => ("nonhol", Format::Json),
        Command::Verify(_) => ("verify", Format::Md),
    };
    let format = cli.global.format.unwrap_or(default_format);
    let mut checks = None;
    let result = match &cli.command {
        Command::Qexp(a) => cmd_qexp(a),
        Command::Eigenforms(a) => cmd_eigenforms(a, &prof),
        Command::Lvalue(a) => cmd_lvalue(a, &prof),
        Command::Periods(a) => cmd_periods(a, &prof),
        Command::Dbleis(a) => cmd_dbleis(a, &prof),
        Command::Nonhol { what } => cmd_nonhol(what, &prof),
        Command::Verify(a) => cmd_verify(a, &prof, cli.global.seed).map(|(v, c)| {
            checks = Some(c);
            v
        }),
    };
    let result = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_for(&e));
        }
    };
    let doc = json!({
        "schema": SCHEMA,
        "config": {
            "command": name,
            "parameters": args[1..].to_vec(),
            "profile": prof.to_json(),
            "format": format.name(),
            "seed": cli.global.seed,
        },
        "result": result,
    });
    print!("{}", render(format, &doc, checks.as_deref()));
    match &checks {
        Some(cs) if cs.iter().any(|c| !c.pass) => ExitCode::from(EXIT_CHECKS_FAILED),
        _ => ExitCode::SUCCESS,
    }
}
