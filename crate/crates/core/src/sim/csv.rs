use std::fmt::Write as _;
use std::path::Path;

use super::ResultTable;
use crate::error::{Error, Result};

pub const HEADER: &str = "scheme,snr_db,mean_capacity_bits,stderr_bits,trials";

/// Formats with 9 significant digits, like C's `%.9g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn to_csv_string(table: &ResultTable) -> String {
    let mut out = String::with_capacity(64 * (table.rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            row.scheme.name(),
            format_sig(row.snr_db),
            format_sig(row.mean_capacity_bits),
            format_sig(row.stderr_bits),
            row.trials
        );
    }
    out
}

pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    std::fs::write(path, to_csv_string(table)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (1.0, "1"),
            (2.9631234567891, "2.96312346"),
            (30.0, "30"),
            (0.00012345678912, "0.000123456789"),
            (0.000012345678912, "1.23456789e-05"),
            (1234567890123.0, "1.23456789e+12"),
            (-2.5, "-2.5"),
            (999999999.6, "1e+09"),
            (0.1, "0.1"),
        ];
        for (x, want) in cases {
            assert_eq!(format_sig(x), want, "{x}");
        }
    }
}
