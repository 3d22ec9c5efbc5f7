/// C's `%.15g`: 15 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-4, 1e15)`.
pub fn g15(v: f64) -> String {
    const P: i32 = 15;
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..P).contains(&exp) {
        let fixed = format!("{:.*}", (P - 1 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::g15;

    #[test]
    fn matches_printf() {
        assert_eq!(g15(0.5), "0.5");
        assert_eq!(g15(1.0), "1");
        assert_eq!(g15(0.1 + 0.2), "0.3");
        assert_eq!(g15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(g15(123456.0), "123456");
        assert_eq!(g15(1e15), "1e+15");
        assert_eq!(g15(999999999999999.0), "999999999999999");
        assert_eq!(g15(0.0001), "0.0001");
        assert_eq!(g15(0.00001234), "1.234e-05");
        assert_eq!(g15(-2.5e-300), "-2.5e-300");
        assert_eq!(g15(0.0), "0");
        assert_eq!(g15(f64::INFINITY), "inf");
    }
}
