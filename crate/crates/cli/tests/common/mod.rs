//! Helpers for driving the binary, plus reference computations that do not
//! share code with the library.

#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eps-lab"));
    cmd.env_remove("EPS_LAB_DATA");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

/// Runs with `--format json --no-timestamp` and parses the single record.
pub fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json", "--no-timestamp"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{args:?} failed: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "expected one record, got {text}");
    serde_json::from_str(&text).expect("valid json")
}

pub fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    adaptive(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 50)
}

/// Two-tailed Student-t p-value. Substituting `t = sqrt(df) tan θ` turns the
/// density into `cos^(df-1) θ` on `[0, π/2)`, so no gamma function is needed.
pub fn t_two_tailed_by_quadrature(t: f64, df: u32) -> f64 {
    let v = df as f64;
    let kernel = move |theta: f64| theta.cos().powf(v - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let theta0 = (t.abs() / v.sqrt()).atan();
    integrate(&kernel, theta0, half_pi, 1e-14) / integrate(&kernel, 0.0, half_pi, 1e-14)
}
