//! Number formatting shared by every emitted table.

/// `x` rounded to 9 significant digits, printed without trailing noise.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(num(1.0 / 3.0), "0.333333333");
        assert_eq!(num(2.0 / 3.0 * 1e-6), "0.000000666666667");
        assert_eq!(num(12.5), "12.5");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(f64::NAN), "NaN");
    }
}
