//! Locale-free number output with a fixed number of significant digits,
//! following C's `%.{p}g`.

pub const SIG_DIGITS: usize = 15;

/// `%.15g`.
pub fn g15(v: f64) -> String {
    fmt_g(v, SIG_DIGITS)
}

/// `v` rounded to 15 significant digits, for JSON output.
pub fn round15(v: f64) -> f64 {
    if v.is_finite() {
        g15(v).parse().unwrap_or(v)
    } else {
        v
    }
}

pub fn fmt_g(v: f64, precision: usize) -> String {
    let p = precision.max(1);
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", strip_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
