//! Fixed-precision number formatting shared by the CSV writers and the CLI.

/// Scientific notation with 17 significant digits; infinities as `inf`.
pub fn sci17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// Parse a value written by [`sci17`].
pub fn parse_f64(token: &str) -> Option<f64> {
    match token.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        t => t.parse().ok(),
    }
}

/// Plain decimal rounded to `digits` significant digits, falling back to
/// scientific notation for very large or small magnitudes.
pub fn significant(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return sci17(x);
    }
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    // round first so that e.g. 9.9999 -> 10.000 picks the right exponent
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if !(-5..=15).contains(&exp) {
        return sci;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}
