//! Number formatting for CSV output.

/// C-style scientific notation: `decimals` digits after the point and a
/// signed exponent of at least two digits, as `printf("%.*e")` prints.
pub fn sci(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let raw = format!("{x:.decimals$e}");
    let (mantissa, exponent) = raw.split_once('e').expect("exponent present");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let sign = if exponent < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exponent.abs())
}

/// Error values: six significant digits.
pub fn error(x: f64) -> String {
    sci(x, 5)
}

/// Sampled function values.
pub fn value(x: f64) -> String {
    sci(x, 12)
}

/// EOC to two decimals; undefined rates print as `nan`.
pub fn eoc(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.2}")
    }
}

/// Plain decimal, shortest round-trip representation.
pub fn plain(x: f64) -> String {
    format!("{x}")
}
