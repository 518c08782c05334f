//! Six-significant-digit decimal rendering.
//!
//! Rationals are rounded exactly (half away from zero); floats go through
//! the standard library's correctly rounded scientific formatting. Trailing
//! zeros after the decimal point are dropped.

use num_rational::Ratio;

pub const DIGITS: u32 = 6;

fn pow10(e: u32) -> u128 {
    10u128.pow(e)
}

/// Renders `r` with six significant digits.
pub fn format_ratio(r: Ratio<u64>) -> String {
    let (p, q) = (u128::from(*r.numer()), u128::from(*r.denom()));
    if p == 0 {
        return "0".to_string();
    }
    // e = floor(log10(p / q))
    let mut e: i32 = p.ilog10() as i32 - q.ilog10() as i32;
    let ge = |e: i32| -> bool {
        // p/q >= 10^e
        if e >= 0 {
            p >= q * pow10(e as u32)
        } else {
            p * pow10((-e) as u32) >= q
        }
    };
    while !ge(e) {
        e -= 1;
    }
    while ge(e + 1) {
        e += 1;
    }
    let shift = DIGITS as i32 - 1 - e;
    let (num, den) = if shift >= 0 {
        (p * pow10(shift as u32), q)
    } else {
        (p, q * pow10((-shift) as u32))
    };
    let mut digits = (2 * num + den) / (2 * den);
    if digits == pow10(DIGITS) {
        digits /= 10;
        e += 1;
    }
    place_point(&digits.to_string(), e)
}

/// Renders a finite float with six significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    let sci = format!("{:.*e}", DIGITS as usize - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let body = place_point(&digits, exp.parse().expect("integer exponent"));
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

/// `digits` (six of them) times `10^(e - 5)` in positional notation.
fn place_point(digits: &str, e: i32) -> String {
    let n = digits.len() as i32;
    let raw = if e >= n - 1 {
        format!("{digits}{}", "0".repeat((e - n + 1) as usize))
    } else if e < 0 {
        format!("0.{}{digits}", "0".repeat((-e - 1) as usize))
    } else {
        let (int, frac) = digits.split_at(e as usize + 1);
        format!("{int}.{frac}")
    };
    if raw.contains('.') {
        raw.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        raw
    }
}
