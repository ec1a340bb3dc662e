//! Fixed-precision number formatting for tables and reports.

/// Significant digits used for every printed number.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` with [`SIG_DIGITS`] significant digits, `%g` style.
pub fn sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_fraction(&s).to_string()
    } else {
        let s = format!("{x:.prec$e}", prec = SIG_DIGITS - 1);
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{}", trim_fraction(mantissa), e),
            None => s,
        }
    }
}

/// Rounds to [`SIG_DIGITS`] significant digits, for JSON emission.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.prec$e}", prec = SIG_DIGITS - 1).parse().unwrap_or(x)
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig(0.5), "0.5");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(-1234.5), "-1234.5");
        assert_eq!(sig(1e-12), "1e-12");
        assert_eq!(sig(3.0e15), "3e15");
        assert_eq!(sig(0.0), "0");
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
    }
}
