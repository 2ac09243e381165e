//! Exact rational carrier used for densities, measures and vdC values.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

pub fn ratio(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn to_f64(r: &Rational) -> f64 {
    // correctly rounded while both parts stay below 2^53
    *r.numer() as f64 / *r.denom() as f64
}

pub fn checked_add(a: &Rational, b: &Rational, ctx: &'static str) -> Result<Rational> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

pub fn checked_sub(a: &Rational, b: &Rational, ctx: &'static str) -> Result<Rational> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

pub fn checked_mul(a: &Rational, b: &Rational, ctx: &'static str) -> Result<Rational> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

/// `2^-k` as an exact rational.
pub fn pow2_inv(k: u32) -> Result<Rational> {
    if k > 126 {
        return Err(Error::Overflow("power of two"));
    }
    Ok(Rational::new(1, 1i128 << k))
}

/// Parses `3`, `-1/3`, `0.125` or `2.5e-1` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational literal: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let ten = |k: u32| 10i128.checked_pow(k).ok_or(Error::Overflow("decimal literal"));
    let mut denom = 1i128;
    if scale >= 0 {
        numer = numer.checked_mul(ten(scale as u32)?).ok_or(Error::Overflow("decimal literal"))?;
    } else {
        denom = ten((-scale) as u32)?;
    }
    if neg {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / a.gcd(&b)).checked_mul(b)
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::{format_rational, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_str(&format_rational(r)),
                None => s.serialize_none(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), ratio(-1, 8));
        assert_eq!(parse_rational("2.5e-1").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("3").unwrap(), ratio(3, 1));
        assert_eq!(parse_rational("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("1e3").unwrap(), ratio(1000, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "-", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn formats() {
        assert_eq!(format_rational(&ratio(7, 64)), "7/64");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
    }
}
