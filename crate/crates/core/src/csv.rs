//! CSV output for sweep results.
//!
//! Layout: a block of `# key=value` comment lines, a header line, then one
//! line per row. Numbers are printed with 9 significant digits in the
//! style of C's `%.9g`; lines end in `\n`.

use std::io::Write;

use crate::error::Result;
use crate::sweep::SweepResult;

/// Formats `v` like `printf("%.9g", v)`.
pub fn format_sig9(v: f64) -> String {
    const SIG: i32 = 9;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    // Round once to SIG digits and read back the decimal exponent.
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        strip_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa.to_owned()), exp.abs())
    }
}

fn strip_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

/// Writes `result` to `sink` and returns the number of bytes written.
pub fn write_csv<W: Write>(result: &SweepResult, mut sink: W) -> Result<u64> {
    let mut out = String::new();
    for (key, value) in &result.metadata {
        // Keep every comment on one line.
        let value = value.replace(['\n', '\r'], " ");
        out.push_str(&format!("# {key}={value}\n"));
    }
    out.push_str(&result.columns.join(","));
    out.push('\n');
    for row in &result.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_sig9(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    sink.flush()?;
    Ok(out.len() as u64)
}
