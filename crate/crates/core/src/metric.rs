//! The polyadic metric `d(a,b) = sum_{n>=1} psi_n(a-b) / 2^n`, where
//! `psi_n(x) = 0` if `n | x` and `1` otherwise.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{pow2_inv, Rational};

/// Largest truncation depth; `2^-n` must fit the rational carrier.
pub const MAX_TERMS: u32 = 126;

/// A truncated distance: the true value lies in `[value, value + tail_bound]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceBound {
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub tail_bound: Rational,
}

impl DistanceBound {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.value <= x && *x <= self.value + self.tail_bound
    }
}

fn psi(n: u32, diff: i128) -> bool {
    diff % n as i128 != 0
}

/// Partial sum over `n = 1..=n_max` with its geometric tail bound `2^-n_max`.
pub fn polyadic_distance(a: i64, b: i64, n_max: u32) -> Result<DistanceBound> {
    if n_max == 0 || n_max > MAX_TERMS {
        return Err(Error::InvalidArgument(format!(
            "n_max must lie in 1..={MAX_TERMS}, got {n_max}"
        )));
    }
    let diff = a as i128 - b as i128;
    let numer: i128 = (1..=n_max)
        .filter(|&n| psi(n, diff))
        .map(|n| 1i128 << (n_max - n))
        .sum();
    Ok(DistanceBound {
        value: Rational::new(numer, 1i128 << n_max),
        tail_bound: pow2_inv(n_max)?,
    })
}

/// The exact limit. For `a != b` only the finitely many divisors of `|a-b|`
/// drop out, so `d(a,b) = 1 - sum_{n | a-b} 2^-n`.
pub fn distance_limit(a: i64, b: i64) -> Result<Rational> {
    let diff = (a as i128 - b as i128).unsigned_abs();
    if diff == 0 {
        return Ok(Rational::from_integer(0));
    }
    if diff > MAX_TERMS as u128 {
        return Err(Error::Overflow("polyadic distance limit"));
    }
    let d = diff as u32;
    let divisor_mass: i128 = (1..=d).filter(|n| d.is_multiple_of(*n)).map(|n| 1i128 << (d - n)).sum();
    Ok(Rational::from_integer(1) - Rational::new(divisor_mass, 1i128 << d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn equal_points() {
        for n_max in [1, 7, 30] {
            let d = polyadic_distance(5, 5, n_max).unwrap();
            assert_eq!(d.value, ratio(0, 1));
            assert_eq!(d.tail_bound, pow2_inv(n_max).unwrap());
        }
        assert_eq!(distance_limit(-3, -3).unwrap(), ratio(0, 1));
    }

    #[test]
    fn zero_one() {
        // psi_n(-1) = 1 for all n >= 2: partial sum 1/2 - 2^-30
        let d = polyadic_distance(0, 1, 30).unwrap();
        assert_eq!(d.value, ratio(1, 2) - ratio(1, 1 << 30));
        assert_eq!(distance_limit(0, 1).unwrap(), ratio(1, 2));
        assert!(d.contains(&ratio(1, 2)));
    }

    #[test]
    fn zero_six() {
        // divisors 1,2,3,6 vanish; n = 4,5 contribute 1/16 + 1/32
        let d = polyadic_distance(0, 6, 6).unwrap();
        assert_eq!(d.value, ratio(3, 32));
        let limit = distance_limit(0, 6).unwrap();
        assert_eq!(limit, ratio(7, 64));
        assert!(d.contains(&limit));
    }

    #[test]
    fn bad_depth() {
        assert!(polyadic_distance(0, 1, 0).is_err());
        assert!(polyadic_distance(0, 1, 127).is_err());
        assert_eq!(distance_limit(0, 1000), Err(Error::Overflow("polyadic distance limit")));
    }

    #[test]
    fn partial_sums_bracket_limit() {
        for a in -20i64..20 {
            for b in -20i64..20 {
                let limit = distance_limit(a, b).unwrap();
                for n_max in [1, 5, 13, 40, 80] {
                    assert!(polyadic_distance(a, b, n_max).unwrap().contains(&limit));
                }
            }
        }
    }
}
