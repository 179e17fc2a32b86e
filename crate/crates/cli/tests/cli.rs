use std::process::{Command, Output};

use eiskern::lfunc::lstar;
use eiskern::modforms::eigenforms;
use eiskern::mpcore::{HpComplex, PrecisionProfile};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eiskern"))
        .args(args)
        .env_remove("EISKERN_PROFILE")
        .output()
        .expect("spawn eiskern")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn lvalue_of_delta_at_six() {
    let v = json(&run(&["lvalue", "--weight", "12", "--s", "6"]));
    assert_eq!(v["schema"], "eiskern/1");
    assert_eq!(v["config"]["command"], "lvalue");
    assert_eq!(v["config"]["profile"]["precision_bits"], 256);
    assert_eq!(v["result"]["form"], "k12#0");

    let prof = PrecisionProfile::default();
    let f = eigenforms(12, prof.qexp_order, prof.bits).unwrap().remove(0);
    let want = lstar(&f, &HpComplex::from_f64(6.0, 0.0, prof.bits).unwrap(), &prof).unwrap();
    assert_eq!(v["result"]["value"][0], want.value.to_strings()[0].as_str());
    let x: f64 = v["result"]["value"][0].as_str().unwrap().parse().unwrap();
    assert!((x - 1.544_879_360_395_027e-3).abs() < 1e-15);
}

#[test]
fn qexp_of_e4_is_exact() {
    let v = json(&run(&["qexp", "--ek", "4", "-N", "8"]));
    let got: Vec<&str> = v["result"]["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    let sigma3 = |n: u64| (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| d * d * d).sum::<u64>();
    let mut want = vec!["1/1".to_string()];
    want.extend((1..=8).map(|n| format!("{}/1", 240 * sigma3(n))));
    assert_eq!(got, want);
    assert_eq!(v["result"]["weight"], 4);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["lvalue", "--weight", "12", "--s", "6", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["lvalue", "--weight", "12", "--s", "six"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn domain_and_convergence_errors() {
    assert_eq!(run(&["lvalue", "--weight", "10", "--s", "6"]).status.code(), Some(2));
    assert_eq!(run(&["qexp", "--ek", "5"]).status.code(), Some(2));
    let out = run(&["nonhol", "kernel", "--z", "0,1", "--s", "3", "--s-prime", "4"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["qexp", "--bracket", "4,6,1", "-N", "10", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["qexp", "--bracket", "4", "6", "1", "-N", "10", "--format", "csv"]);
    assert!(c.status.success());
    assert_eq!(run(&["qexp", "--bracket", "4,6", "-N", "10"]).status.code(), Some(1));
}

#[test]
fn profile_file_and_flag_overrides() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("profile.json");
    std::fs::write(&path, r#"{"precision_bits": 320, "qexp_order": 40, "tail": 50, "height": 120, "tol_log2": -150}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_eiskern"))
        .args(["--height", "90", "qexp", "--delta", "-N", "3"])
        .env("EISKERN_PROFILE", &path)
        .output()
        .unwrap();
    let v = json(&out);
    let p = &v["config"]["profile"];
    assert_eq!(p["precision_bits"], 320);
    assert_eq!(p["qexp_order"], 40);
    assert_eq!(p["height"], 90);
    assert_eq!(p["tol_log2"], -150);

    let out = Command::new(env!("CARGO_BIN_EXE_eiskern"))
        .args(["qexp", "--delta"])
        .env("EISKERN_PROFILE", "/nonexistent/profile.json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_flag_sets_the_exponent() {
    let v = json(&run(&["--tol", "1e-30", "qexp", "--delta", "-N", "2"]));
    assert_eq!(v["config"]["profile"]["tol_log2"], -100);
}

#[test]
fn maass_lvalue_from_a_data_file() {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/data/synthetic_maass.txt");
    let v = json(&run(&["nonhol", "maass", "--data", data, "--s", "0.5,2"]));
    assert!(v["result"]["form"].as_str().unwrap().starts_with("maass:"));
    let out = run(&["nonhol", "maass", "--data", "/nonexistent", "--s", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn markdown_output_carries_the_schema() {
    let out = run(&["eigenforms", "--weight", "24", "-N", "3", "--format", "md"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("schema eiskern/1"));
    assert!(text.contains("| forms[0].id | k24#0 |"), "{text}");
}

#[test]
fn verify_nonhol_quick_passes() {
    let out = run(&["verify", "nonhol", "--quick"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("0 failed"));
    assert!(text.contains("precision_bits"));
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(1));
}
