use std::fmt::Write as _;
use std::path::Path;

use super::SweepRow;
use crate::error::{QfiError, Result};

pub const CSV_HEADER: &str = "p,mode,c_xx,c_yy,c_zz,c_max,f_max,mean_f,qcrb,classification";

/// Formats `x` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_string(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let f = |x: f64| format_sig(x, 12);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            f(r.p),
            r.mode.label(),
            f(r.c_xx),
            f(r.c_yy),
            f(r.c_zz),
            f(r.c_max),
            f(r.f_max),
            f(r.mean_f),
            r.qcrb.map_or_else(|| "inf".to_string(), f),
            r.classification.label(),
        );
    }
    out
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(QfiError::EmptyResult);
    }
    std::fs::write(path, csv_string(rows)).map_err(|e| QfiError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfi::{Classification, SummationMode};

    fn row(mean_f: f64) -> SweepRow {
        SweepRow {
            channel: "adc".into(),
            p: 0.25,
            mode: SummationMode::PaperSupport,
            c_xx: 3.0 * mean_f,
            c_yy: 3.0 * mean_f,
            c_zz: 0.0,
            c_off: 0.0,
            c_max: 3.0 * mean_f,
            f_max: 3.0 * mean_f,
            mean_f,
            qcrb: if mean_f > 0.0 {
                Some(1.0 / (3.0 * mean_f).sqrt())
            } else {
                None
            },
            classification: Classification::of(mean_f, 3),
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(7.0 / 3.0, 12), "2.33333333333");
        assert_eq!(format_sig(0.25, 12), "0.25");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(-1.5e-17, 12), "-1.5e-17");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e14");
        assert_eq!(format_sig(f64::INFINITY, 12), "inf");
        assert_eq!(format_sig(0.000123, 12), "0.000123");
    }

    #[test]
    fn single_row_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        emit_csv(&[row(0.25)], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with('\n'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(
            lines[1],
            "0.25,paper,0.75,0.75,0,0.75,0.75,0.25,1.15470053838,below_shot_noise"
        );
    }

    #[test]
    fn empty_rows_refused() {
        let dir = tempfile::tempdir().unwrap();
        let err = emit_csv(&[], &dir.path().join("e.csv")).unwrap_err();
        assert!(matches!(err, QfiError::EmptyResult));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unwritable_path() {
        let err = emit_csv(&[row(1.0)], Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn zero_fisher_information_prints_inf_bound() {
        let text = csv_string(&[row(0.0)]);
        assert!(text.lines().nth(1).unwrap().contains(",inf,"));
    }

    proptest::proptest! {
        #[test]
        fn prop_mean_round_trips(mean in 0.0f64..3.0) {
            let text = csv_string(&[row(mean)]);
            let line = text.lines().nth(1).unwrap();
            let parsed: f64 = line.split(',').nth(7).unwrap().parse().unwrap();
            proptest::prop_assert!((parsed - mean).abs() <= 1e-11);
        }
    }
}
