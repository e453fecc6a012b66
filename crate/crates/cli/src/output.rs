//! Output plumbing: JSON with 17-significant-digit floats (so every value
//! parses back to the identical bit pattern) and small CSV writers.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::fail::CliResult;

/// serde_json formatter that prints every finite f64 with 17 significant
/// digits; non-finite values become null.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| crate::numerical(format!("JSON serialization failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json emits utf8"))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let s = to_json_string(value)?;
    std::fs::write(path, s + "\n")?;
    Ok(())
}

/// Reads a CSV of statistics: every row one float, or every row `t,df`.
/// Returns (first column, optional second column). Mixing widths, blank
/// interior lines, or unparsable fields fail with the 1-based line number.
pub fn read_stat_csv(path: &Path, skip_header: bool) -> CliResult<(Vec<f64>, Option<Vec<f64>>)> {
    let content = std::fs::read_to_string(path)?;
    let mut col1 = Vec::new();
    let mut col2 = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if idx == 0 && skip_header {
            continue;
        }
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match width {
            None => {
                if fields.len() > 2 {
                    return Err(crate::validation(format!(
                        "line {line_no}: expected 1 or 2 columns, found {}",
                        fields.len()
                    )));
                }
                width = Some(fields.len());
            }
            Some(w) if w != fields.len() => {
                return Err(crate::validation(format!(
                    "line {line_no}: expected {w} column(s), found {}",
                    fields.len()
                )));
            }
            _ => {}
        }
        let parse = |f: &str| -> CliResult<f64> {
            let v: f64 = f.parse().map_err(|_| {
                crate::validation(format!("line {line_no}: cannot parse '{f}' as a number"))
            })?;
            if !v.is_finite() {
                return Err(crate::validation(format!(
                    "line {line_no}: non-finite value {v}"
                )));
            }
            Ok(v)
        };
        col1.push(parse(fields[0])?);
        if fields.len() == 2 {
            col2.push(parse(fields[1])?);
        }
    }
    if col1.is_empty() {
        return Err(crate::validation("input file contains no data rows"));
    }
    Ok((col1, if col2.is_empty() { None } else { Some(col2) }))
}

/// Writes the per-hypothesis rejection table.
pub fn write_rejections_csv(
    path: &Path,
    stats: &[f64],
    pvalues: &[f64],
    reject: &[bool],
) -> CliResult<()> {
    let mut out = String::with_capacity(stats.len() * 32);
    out.push_str("index,statistic,p_value,rejected\n");
    for (i, ((&x, &p), &r)) in stats.iter().zip(pvalues).zip(reject).enumerate() {
        out.push_str(&format!("{i},{x:.17e},{p:.17e},{}\n", u8::from(r)));
    }
    std::fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits_roundtrip_exactly() {
        #[derive(Serialize)]
        struct S {
            a: f64,
            b: f64,
        }
        let v = S {
            a: std::f64::consts::PI,
            b: 1.0 / 3.0,
        };
        let s = to_json_string(&v).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["a"].as_f64().unwrap().to_bits(), v.a.to_bits());
        assert_eq!(parsed["b"].as_f64().unwrap().to_bits(), v.b.to_bits());
    }

    #[test]
    fn non_finite_becomes_null() {
        #[derive(Serialize)]
        struct S {
            a: f64,
        }
        let s = to_json_string(&S { a: f64::INFINITY }).unwrap();
        assert!(s.contains("null"));
    }
}
