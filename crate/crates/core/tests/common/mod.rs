//! Test-only reference computations, kept independent of the library paths
//! they check.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eps_core::ModelParams;

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
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Two-tailed Student-t p-value by quadrature of the density.
///
/// With `t = sqrt(df) tan θ` the unnormalised density
/// `(1 + t²/df)^(-(df+1)/2) dt` becomes `cos^(df-1) θ dθ` on `[0, π/2)`, so
/// the tail mass is a ratio of two smooth finite integrals and no gamma
/// function is needed.
pub fn t_two_tailed_by_quadrature(t: f64, df: u32) -> f64 {
    let v = df as f64;
    let kernel = move |theta: f64| theta.cos().powf(v - 1.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let theta0 = (t.abs() / v.sqrt()).atan();
    let tail = integrate(&kernel, theta0, half_pi, 1e-14);
    let half = integrate(&kernel, 0.0, half_pi, 1e-14);
    tail / half
}

/// Log-uniform `s0` in `[lo, hi]` and `s1 = u s0` with `u` uniform in
/// `[u_lo, u_hi]`; `w0 = M = 0`.
pub fn random_params(seed: u64, n: usize, lo: f64, hi: f64, u_lo: f64, u_hi: f64) -> Vec<ModelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let s0 = (rng.gen_range(lo.ln()..hi.ln())).exp();
            let u = rng.gen_range(u_lo..u_hi);
            ModelParams::new(0.0, s0, u * s0, 0.0).unwrap()
        })
        .collect()
}
