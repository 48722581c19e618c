//! Locale-independent numeric output with 9 significant digits.

/// Fixed notation when the decimal exponent lies in `[-5, 9)`, otherwise
/// scientific; zero (either sign) is `0.00000000`. Returns `None` for
/// non-finite input so callers cannot print `NaN` or `inf`.
pub fn num(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some("0.00000000".to_owned());
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e')? + 1..].parse().ok()?;
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        Some(format!("{x:.decimals$}"))
    } else {
        Some(sci)
    }
}
