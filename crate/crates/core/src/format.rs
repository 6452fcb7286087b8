//! Number formatting for CSV and JSON output: 15 significant digits, trailing
//! zeros trimmed, in the manner of C's `%.15g`.

/// Formats `x` with 15 significant digits.
pub fn g15(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (14 - exp) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 15 significant digits, for embedding in JSON.
pub fn round15(x: f64) -> f64 {
    if x.is_finite() {
        g15(x).parse().expect("g15 output parses")
    } else {
        x
    }
}

/// Rounds every number inside a JSON value to 15 significant digits.
pub fn round_json(value: &mut serde_json::Value) {
    use serde_json::Value;
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(r) = n.as_f64().map(round15).and_then(serde_json::Number::from_f64) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

/// Writes rows as CSV with a header, `,` separators and `\n` line endings.
pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| g15(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn g15_examples() {
        assert_eq!(g15(0.5), "0.5");
        assert_eq!(g15(0.0), "0");
        assert_eq!(g15(-0.0), "0");
        assert_eq!(g15(1.0 / (PI * PI)), "0.101321183642338");
        assert_eq!(g15(PI), "3.14159265358979");
        assert_eq!(g15(100.0), "100");
        assert_eq!(g15(-2.5), "-2.5");
        assert_eq!(g15(1e-5), "1e-05");
        assert_eq!(g15(1.23456e-7), "1.23456e-07");
        assert_eq!(g15(1e15), "1e+15");
        assert_eq!(g15(123456789012345.0), "123456789012345");
        assert_eq!(g15(0.0001), "0.0001");
    }

    #[test]
    fn g15_roundtrip_is_close() {
        for x in [1.0 / 3.0, 2.0f64.sqrt() * 1e-9, 6.02214076e23, -7.77e-300] {
            let y: f64 = g15(x).parse().unwrap();
            assert!(((x - y) / x).abs() < 1e-14);
        }
    }

    #[test]
    fn csv_layout() {
        let s = csv_table(&["a", "b"], vec![vec![1.0, 0.25], vec![-3.0, 1e-20]]);
        assert_eq!(s, "a,b\n1,0.25\n-3,1e-20\n");
    }

    #[test]
    fn json_rounding() {
        let mut v = serde_json::json!({"x": 0.1 + 0.2, "n": 3, "nested": [PI]});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"n":3,"nested":[3.14159265358979],"x":0.3}"#);
    }
}
