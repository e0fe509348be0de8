//! Hexadecimal `f64` literals (`0x1.8p+1`), the same notation as C's `%a`.

use std::fmt::Write;

/// Formats a finite `f64` as a hex-float literal that parses back bit-exactly.
pub fn format_hex(x: f64, out: &mut String) {
    let bits = x.to_bits();
    if bits >> 63 == 1 {
        out.push('-');
    }
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, e) = match (exp, frac) {
        (0, 0) => {
            out.push_str("0x0p+0");
            return;
        }
        (0, _) => (0, -1022),
        _ => (1, exp - 1023),
    };
    let _ = write!(out, "0x{lead}");
    if frac != 0 {
        let digits = format!("{frac:013x}");
        out.push('.');
        out.push_str(digits.trim_end_matches('0'));
    }
    let _ = write!(out, "p{e:+}");
}

pub fn to_hex(x: f64) -> String {
    let mut s = String::new();
    format_hex(x, &mut s);
    s
}

/// Parses a hex-float literal, or a decimal literal as a fallback.
/// Non-finite results are rejected.
pub fn parse_float(token: &str) -> Option<f64> {
    let (neg, body) = match token.as_bytes().first()? {
        b'-' => (true, &token[1..]),
        b'+' => (false, &token[1..]),
        _ => (false, token),
    };
    let value = if let Some(hex) = body.strip_prefix("0x").or_else(|| body.strip_prefix("0X")) {
        parse_hex_body(hex)?
    } else {
        if !body.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            return None;
        }
        body.parse::<f64>().ok()?
    };
    if !value.is_finite() {
        return None;
    }
    Some(if neg { -value } else { value })
}

fn parse_hex_body(s: &str) -> Option<f64> {
    let (mantissa, exp) = match s.find(['p', 'P']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut m: u128 = 0;
    let mut exp2 = exp;
    let mut started = false;
    let mut sticky = false;
    for (i, c) in int_part.chars().chain(frac_part.chars()).enumerate() {
        let d = c.to_digit(16)? as u128;
        let in_frac = i >= int_part.len();
        if !started && d == 0 {
            if in_frac {
                exp2 = exp2.checked_sub(4)?;
            }
            continue;
        }
        started = true;
        if m >> 120 != 0 {
            // Out of room: the remaining digits only matter for rounding.
            sticky |= d != 0;
            if !in_frac {
                exp2 = exp2.checked_add(4)?;
            }
            continue;
        }
        m = (m << 4) | d;
        if in_frac {
            exp2 = exp2.checked_sub(4)?;
        }
    }
    if sticky {
        m |= 1;
    }
    compose(m, exp2)
}

/// Correctly rounded (ties-to-even) value of `m * 2^exp2`.
fn compose(m: u128, exp2: i32) -> Option<f64> {
    if m == 0 {
        return Some(0.0);
    }
    let nbits = 128 - m.leading_zeros() as i32;
    let top = nbits - 1 + exp2;
    if top > 1023 {
        return None;
    }
    let precision = if top >= -1022 { 53 } else { 53 - (-1022 - top) };
    let shift = nbits - precision;
    let (q, k) = if shift <= 0 {
        (m, exp2)
    } else if shift > nbits {
        return Some(0.0);
    } else {
        let q = if shift == 128 { 0 } else { m >> shift };
        let rem = if shift == 128 { m } else { m & ((1u128 << shift) - 1) };
        let half = 1u128 << (shift - 1);
        let up = rem > half || (rem == half && q & 1 == 1);
        (q + up as u128, exp2 + shift)
    };
    let value = scale(q as f64, k);
    value.is_finite().then_some(value)
}

fn pow2(j: i32) -> f64 {
    f64::from_bits(((j + 1023) as u64) << 52)
}

fn scale(mut x: f64, mut k: i32) -> f64 {
    while k > 1000 {
        x *= pow2(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= pow2(-1000);
        k += 1000;
    }
    x * pow2(k)
}
