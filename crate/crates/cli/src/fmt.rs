//! Fixed-precision number formatting for reports.

/// `x` with 15 significant digits, trailing zeros trimmed; positional
/// notation for exponents in `[-5, 15)`, scientific otherwise.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.14e}", x);
    let (mant, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, digits) = match mant.strip_prefix('-') {
        Some(m) => ("-", m.replace('.', "")),
        None => ("", mant.replace('.', "")),
    };
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    if (-5..15).contains(&exp) {
        let out = if exp < 0 {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        } else {
            let point = exp as usize + 1;
            if digits.len() <= point {
                format!("{}{}", digits, "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        };
        format!("{sign}{out}")
    } else {
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// Shortest round-trip representation, for values that must be read back
/// bit-for-bit.
pub fn exact(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        assert_eq!(sig15(2.618033988749895), "2.61803398874989");
        assert_eq!(sig15(1.0), "1");
        assert_eq!(sig15(-0.5), "-0.5");
        assert_eq!(sig15(20.0), "20");
        assert_eq!(sig15(123456.0), "123456");
        assert_eq!(sig15(1e-7), "1e-7");
        assert_eq!(sig15(1.25e-13), "1.25e-13");
        assert_eq!(sig15(0.000123), "0.000123");
        assert_eq!(sig15(1e20), "1e20");
        assert_eq!(sig15(0.1 + 0.2), "0.3");
        assert_eq!(exact(0.1 + 0.2), "0.30000000000000004");
    }
}
