use serde::Serialize;
use serde_json::Value;

use numrad_core::inequality::{round_floats, REPORT_DIGITS};

/// `x` with `digits` significant digits, positional between `1e-5` and
/// `1e{digits}`, scientific outside.
pub fn format_sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if x == 0.0 || (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let rounded: f64 = sci.parse().expect("round trip");
        if x == 0.0 {
            return format!("{:.*}", digits - 1, 0.0);
        }
        return format!("{rounded:.decimals$}");
    }
    format!("{mantissa}e{exp}")
}

/// Pretty JSON with report rounding applied.
pub fn rounded_json<T: Serialize>(value: &T) -> String {
    let mut v: Value = serde_json::to_value(value).expect("serializable output");
    round_floats(&mut v, REPORT_DIGITS);
    serde_json::to_string_pretty(&v).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(format_sig(1.0, 12), "1.00000000000");
        assert_eq!(format_sig(0.5, 12), "0.500000000000");
        assert_eq!(format_sig(0.0, 12), "0.00000000000");
        assert_eq!(format_sig(-123.456, 12), "-123.456000000");
        assert_eq!(format_sig(9.9999999999999, 12), "10.0000000000");
        assert_eq!(format_sig(std::f64::consts::SQRT_2 / 2.0, 12), "0.707106781187");
        assert_eq!(format_sig(1.5e-9, 12), "1.50000000000e-9");
        assert_eq!(format_sig(2.5e20, 12), "2.50000000000e20");
    }
}
