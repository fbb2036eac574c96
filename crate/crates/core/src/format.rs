//! Locale-free, fixed-precision number formatting for CSV and JSON output.

use serde::Serialize;
use serde_json::Value;

/// Significant digits kept in every emitted float.
pub const SIGNIFICANT_DIGITS: usize = 15;

/// Round to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal of the 15-digit rounded value: plain notation for
/// exponents in `[-5, 15)`, scientific otherwise.
pub fn fmt_f64(x: f64) -> String {
    let y = round_sig(x);
    if y == 0.0 {
        return "0".to_string();
    }
    if !y.is_finite() {
        return y.to_string();
    }
    let exponent = y.abs().log10().floor() as i32;
    if (-5..15).contains(&exponent) {
        format!("{y}")
    } else {
        format!("{y:e}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to [`SIGNIFICANT_DIGITS`] digits.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Comma-separated table with a header line.
#[derive(Debug, Clone, Default)]
pub struct CsvTable {
    out: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        CsvTable { out, columns: header.len() }
    }

    pub fn row(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt_f64(PI), "3.14159265358979");
        assert_eq!(fmt_f64(2.0 * PI), "6.28318530717959");
        assert_eq!(fmt_f64(4.0), "4");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(-1.5e-20), "-1.5e-20");
        assert_eq!(fmt_f64(3.17395361941e-11), "3.17395361941e-11");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn json_floats_are_rounded() {
        let s = to_json(&serde_json::json!({"x": PI, "n": 3})).unwrap();
        assert!(s.contains("3.14159265358979"));
        assert!(!s.contains("3.141592653589793"));
        assert!(s.contains("\"n\": 3"));
    }
}
