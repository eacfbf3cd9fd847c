use qguess::C64;

/// C `%.{sig}g`: `sig` significant digits, trailing zeros dropped, scientific
/// notation outside `1e-4 ≤ |x| < 10^sig`.
pub fn fmt_g(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `re+imj` with 12 significant digits per part.
pub fn fmt_complex(c: C64) -> String {
    let clean = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    let (re, im) = (clean(c.re), clean(c.im));
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{}{sign}{}j", fmt_g(re, 12), fmt_g(im.abs(), 12))
}
