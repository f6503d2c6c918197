//! Locale-independent number formatting for reports and CSV output.

/// Significant digits used in every emitted number.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits.
///
/// Fixed notation is used for magnitudes in `[1e-5, 1e12)`, scientific
/// otherwise; trailing zeros are trimmed so that `2.0` prints as `2`.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..12).contains(&mag) {
        let decimals = (SIG_DIGITS as i32 - 1 - mag).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        let s = trim_zeros(&s);
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{:.*e}", SIG_DIGITS - 1, x);
        match s.split_once('e') {
            Some((mant, exp)) => format!("{}e{}", trim_zeros(mant), exp),
            None => s,
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
