use std::io::{self, Write};

use super::SweepTable;

pub const CSV_HEADER: &str = "axis,value,metric,result,err,status";

/// C `%.9g`: nine significant digits, trailing zeros dropped, exponent form
/// outside `[1e-4, 1e9)`.
pub fn format_g9(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // rounding to nine digits may carry into the next decade
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            table.axis,
            format_g9(r.value),
            r.metric,
            format_g9(r.result),
            format_g9(r.err),
            r.status.name()
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{Status, SweepRow};

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-10.0, "-10"),
            (0.5602, "0.5602"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (999999999.6, "1e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (0.56009915, "0.56009915"),
            (2.0f64.sqrt() * 1e-7, "1.41421356e-07"),
            (f64::NAN, "nan"),
            (1e300, "1e+300"),
        ];
        for (v, want) in cases {
            assert_eq!(format_g9(v), want, "{v}");
        }
    }

    #[test]
    fn csv_layout() {
        let t = SweepTable {
            axis: "bs_density".into(),
            rows: vec![SweepRow {
                value: 4.0,
                metric: "coverage_analytic".into(),
                result: 0.25,
                err: 1e-9,
                status: Status::Ok,
            }],
        };
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "axis,value,metric,result,err,status\nbs_density,4,coverage_analytic,0.25,1e-09,ok\n"
        );
    }
}
