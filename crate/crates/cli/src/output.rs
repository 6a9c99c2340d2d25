//! Deterministic output encoding: JSON with sorted keys, CSV with RFC-4180
//! line conventions. Numbers print in shortest round-trip form so repeated
//! runs are byte-identical.

use serde::Serialize;

/// Canonical JSON: serialize through `serde_json::Value`, whose map type
/// keeps keys sorted, then pretty-print.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, String> {
    let v = serde_json::to_value(value).map_err(|e| format!("serialization failed: {e}"))?;
    let mut s =
        serde_json::to_string_pretty(&v).map_err(|e| format!("serialization failed: {e}"))?;
    s.push('\n');
    Ok(s)
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Assemble a CSV document with CRLF record separators.
pub fn to_csv(header: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let mut push_row = |cells: &[String]| {
        let encoded: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
        out.push_str(&encoded.join(","));
        out.push_str("\r\n");
    };
    push_row(header);
    for row in rows {
        push_row(row);
    }
    out
}

/// Shortest round-trip decimal form of a float.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_crlf_and_quotes_only_when_needed() {
        let doc = to_csv(
            &["a".into(), "b,c".into()],
            &[vec!["1".into(), "x\"y".into()]],
        );
        assert_eq!(doc, "a,\"b,c\"\r\n1,\"x\"\"y\"\r\n");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2.5e-8, 123456.789] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_keys_sorted() {
        #[derive(serde::Serialize)]
        struct T {
            zebra: u32,
            apple: u32,
        }
        let s = to_canonical_json(&T { zebra: 1, apple: 2 }).unwrap();
        assert!(s.find("apple").unwrap() < s.find("zebra").unwrap());
    }
}
