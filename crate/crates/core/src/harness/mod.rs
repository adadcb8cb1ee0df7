//! Files, sweeps, plots, and verification suites driven by the command line.

pub mod instance_file;
pub mod plot;
pub mod sweep;
pub mod verify;

pub use instance_file::InstanceFile;
pub use plot::render_svg;
pub use sweep::{run_sweep, write_csv, Figure, SweepMode, SweepOverrides, SweepRow, SweepSpec};
pub use verify::{run_suite, Budget, Suite, SuiteReport, Verdict as SuiteVerdict};

/// `x` to 12 significant digits, without trailing zeros or exponent noise.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    // digits holds d.ddddddddddd; place the point exp places after the first.
    let point = exp + 1;
    let mut out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    if out.contains('.') {
        out = out.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if negative {
        out.insert(0, '-');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::format_sig;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.04), "0.04");
        assert_eq!(format_sig(2.0), "2");
        assert_eq!(format_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig(-1234567.891234567), "-1234567.89123");
        assert_eq!(format_sig(0.000012345678901234), "0.0000123456789012");
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1e15), "1000000000000000");
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
    }
}
