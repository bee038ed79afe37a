//! Number formatting shared by every output channel.

use serde_json::{Number, Value};

pub const SIG_DIGITS: usize = 6;

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

/// Rounds to a fixed number of decimal places.
pub fn round_dp(x: f64, places: usize) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.places$}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Six significant digits with trailing zeros dropped, switching to
/// exponent notation like C's `%g`: `2`, `0.5`, `3.53145`, `1.23457e-12`.
pub fn sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig(x, SIG_DIGITS);
    if r == 0.0 {
        return "0".into();
    }
    let exp = r.abs().log10().floor() as i32;
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Rounds every float in a JSON tree to six significant digits. Non-finite
/// values become `null`.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            *v = Number::from_f64(round_sig(x, SIG_DIGITS))
                .map(Value::Number)
                .unwrap_or(Value::Null);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}
