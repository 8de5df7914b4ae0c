//! Deterministic rendering: floats at 12 significant digits, JSON with
//! sorted keys.

use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`-style rendering: fixed notation for exponents in `[-5, 12)`,
/// scientific otherwise, trailing zeros trimmed.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exponent)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rounds to 12 significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x.is_finite() {
        fmt_float(x).parse().unwrap_or(x)
    } else {
        x
    }
}

fn round_value(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            if let Some(rounded) = serde_json::Number::from_f64(x) {
                *n = rounded;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with lexicographically ordered keys and rounded floats.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_value(&mut v);
    serde_json::to_string_pretty(&v).expect("values serialize")
}

/// Comma-joined list.
pub fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_float(0.1 + 0.2), "0.3");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_float(4.0), "4");
        assert_eq!(fmt_float(-0.0), "0");
        assert_eq!(fmt_float(1e-300), "1e-300");
        assert_eq!(fmt_float((-1f64).exp() / 3628800.0), "1.01377711963e-7");
        assert_eq!(fmt_float(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_float(0.0001234), "0.0001234");
    }

    #[test]
    fn canonical_json_sorts_and_rounds() {
        #[derive(Serialize)]
        struct S {
            zeta: f64,
            alpha: u32,
        }
        let text = to_canonical_json(&S {
            zeta: 0.1 + 0.2,
            alpha: 1,
        });
        assert_eq!(text, "{\n  \"alpha\": 1,\n  \"zeta\": 0.3\n}");
    }
}
