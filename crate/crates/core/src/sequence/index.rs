//! Index sequences `k_n` used to sample arithmetic functions.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::par;

/// Irrational slopes available for Beatty sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BeattyConstant {
    Sqrt2,
    Sqrt3,
    Sqrt5,
    Golden,
    E,
    Pi,
}

// Leading partial quotients of π.
const PI_CF: [u64; 40] = [
    3, 7, 15, 1, 292, 1, 1, 1, 2, 1, 3, 1, 14, 2, 1, 1, 2, 2, 2, 2, 1, 84, 2, 1, 1, 15, 3, 13, 1,
    4, 2, 6, 6, 99, 1, 2, 2, 6, 3, 5,
];

/// Convergent denominators stay below this so `n * p` fits in 128 bits.
const MAX_DENOM: u128 = 1 << 60;

impl BeattyConstant {
    const ALL: [BeattyConstant; 6] = [
        BeattyConstant::Sqrt2,
        BeattyConstant::Sqrt3,
        BeattyConstant::Sqrt5,
        BeattyConstant::Golden,
        BeattyConstant::E,
        BeattyConstant::Pi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BeattyConstant::Sqrt2 => "sqrt2",
            BeattyConstant::Sqrt3 => "sqrt3",
            BeattyConstant::Sqrt5 => "sqrt5",
            BeattyConstant::Golden => "golden",
            BeattyConstant::E => "e",
            BeattyConstant::Pi => "pi",
        }
    }

    fn partial_quotient(self, i: usize) -> Option<u64> {
        Some(match (self, i) {
            (BeattyConstant::Sqrt2, 0) => 1,
            (BeattyConstant::Sqrt2, _) => 2,
            (BeattyConstant::Sqrt3, 0) => 1,
            (BeattyConstant::Sqrt3, i) => 1 + (i % 2 == 0) as u64,
            (BeattyConstant::Sqrt5, 0) => 2,
            (BeattyConstant::Sqrt5, _) => 4,
            (BeattyConstant::Golden, _) => 1,
            (BeattyConstant::E, 0) => 2,
            (BeattyConstant::E, i) if i % 3 == 2 => 2 * (i as u64 + 1) / 3,
            (BeattyConstant::E, _) => 1,
            (BeattyConstant::Pi, i) => return PI_CF.get(i).copied(),
        })
    }

    /// The two deepest convergents `p/q` with `q < 2^60`, ordered so that
    /// `lower < α < upper`.
    pub fn bracket(self) -> ((u128, u128), (u128, u128)) {
        static TABLE: OnceLock<Vec<((u128, u128), (u128, u128))>> = OnceLock::new();
        let table = TABLE.get_or_init(|| Self::ALL.iter().map(|c| c.compute_bracket()).collect());
        table[Self::ALL.iter().position(|&c| c == self).unwrap()]
    }

    fn compute_bracket(self) -> ((u128, u128), (u128, u128)) {
        let (mut h2, mut h1) = (0u128, 1u128);
        let (mut k2, mut k1) = (1u128, 0u128);
        let mut convergents = Vec::new();
        let mut i = 0;
        while let Some(a) = self.partial_quotient(i) {
            let (h, k) = (a as u128 * h1 + h2, a as u128 * k1 + k2);
            if k >= MAX_DENOM {
                break;
            }
            convergents.push(((h, k), i));
            (h2, h1, k2, k1) = (h1, h, k1, k);
            i += 1;
        }
        let n = convergents.len();
        let (a, b) = (convergents[n - 2], convergents[n - 1]);
        // even-index convergents lie below the limit
        if a.1 % 2 == 0 {
            (a.0, b.0)
        } else {
            (b.0, a.0)
        }
    }

    pub fn approx(self) -> f64 {
        let ((p, q), _) = self.bracket();
        p as f64 / q as f64
    }
}

impl fmt::Display for BeattyConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BeattyConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown beatty constant {s:?}")))
    }
}

/// A non-decreasing sequence of positive integers `k_1, k_2, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSequence {
    Identity,
    /// `k_n = scale * n + offset`
    Affine { scale: u64, offset: i64 },
    /// `k_n = floor(n * α)`
    Beatty(BeattyConstant),
}

impl IndexSequence {
    pub fn affine(scale: u64, offset: i64) -> Result<Self> {
        if scale == 0 || scale as i128 + (offset as i128) < 1 {
            return Err(Error::InvalidArgument(format!(
                "affine index {scale}n{offset:+} is not a positive increasing sequence"
            )));
        }
        Ok(IndexSequence::Affine { scale, offset })
    }

    pub fn value(&self, n: u64) -> Result<u64> {
        index_value(self, n)
    }
}

/// The `n`-th term, `n >= 1`.
pub fn index_value(seq: &IndexSequence, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("index sequences start at n = 1".into()));
    }
    match *seq {
        IndexSequence::Identity => Ok(n),
        IndexSequence::Affine { scale, offset } => {
            let k = scale as i128 * n as i128 + offset as i128;
            u64::try_from(k).map_err(|_| Error::Overflow("affine index"))
        }
        IndexSequence::Beatty(alpha) => {
            let ((pl, ql), (pu, qu)) = alpha.bracket();
            let lower = n as u128 * pl / ql;
            let upper = n as u128 * pu / qu;
            if lower != upper {
                return Err(Error::PrecisionExhausted { n });
            }
            u64::try_from(lower).map_err(|_| Error::Overflow("beatty index"))
        }
    }
}

/// `max_r |#{n <= N : k_n ≡ r (mod m)} / N - 1/m|`.
pub fn ud_mod_check(seq: &IndexSequence, m: u64, window: u64) -> Result<f64> {
    if m == 0 || window < m {
        return Err(Error::InvalidArgument(format!("need 1 <= m <= N, got m = {m}, N = {window}")));
    }
    let parts = par::map_chunks(window as usize, |r| -> Result<Vec<u64>> {
        let mut counts = vec![0u64; m as usize];
        for i in r {
            counts[(index_value(seq, i as u64 + 1)? % m) as usize] += 1;
        }
        Ok(counts)
    });
    let mut counts = vec![0u64; m as usize];
    for part in parts {
        for (c, p) in counts.iter_mut().zip(part?) {
            *c += p;
        }
    }
    let target = 1.0 / m as f64;
    Ok(counts
        .iter()
        .map(|&c| (c as f64 / window as f64 - target).abs())
        .fold(0.0, f64::max))
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSequence::Identity => f.write_str("identity"),
            IndexSequence::Affine { scale, offset } => write!(f, "affine:{scale},{offset}"),
            IndexSequence::Beatty(c) => write!(f, "beatty:{c}"),
        }
    }
}

impl FromStr for IndexSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" {
            return Ok(IndexSequence::Identity);
        }
        if let Some(c) = s.strip_prefix("beatty:") {
            return Ok(IndexSequence::Beatty(c.parse()?));
        }
        if let Some(rest) = s.strip_prefix("affine:") {
            let bad = || Error::Parse(format!("expected affine:a,b, got {s:?}"));
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            return Self::affine(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        }
        Err(Error::Parse(format!("unknown index sequence {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(index_value(&IndexSequence::Identity, 7).unwrap(), 7);
        assert_eq!(index_value(&"beatty:sqrt2".parse().unwrap(), 5).unwrap(), 7);
        assert_eq!(index_value(&"affine:2,0".parse().unwrap(), 5).unwrap(), 10);
        assert!(index_value(&IndexSequence::Identity, 0).is_err());
    }

    #[test]
    fn beatty_sqrt2_matches_integer_sqrt() {
        // floor(n√2) = isqrt(2n²)
        let seq = IndexSequence::Beatty(BeattyConstant::Sqrt2);
        for n in (1..200_000u64).chain((1u64 << 40)..(1u64 << 40) + 1000) {
            assert_eq!(seq.value(n).unwrap() as u128, (2 * n as u128 * n as u128).isqrt());
        }
    }

    #[test]
    fn brackets_are_tight() {
        let reference = [
            (BeattyConstant::Sqrt2, std::f64::consts::SQRT_2),
            (BeattyConstant::Sqrt3, 3f64.sqrt()),
            (BeattyConstant::Sqrt5, 5f64.sqrt()),
            (BeattyConstant::Golden, (1.0 + 5f64.sqrt()) / 2.0),
            (BeattyConstant::E, std::f64::consts::E),
            (BeattyConstant::Pi, std::f64::consts::PI),
        ];
        for (c, x) in reference {
            let ((pl, ql), (pu, qu)) = c.bracket();
            assert!(pl * qu < pu * ql, "{c}");
            assert!(ql > 1 << 40 && qu > 1 << 40, "{c}");
            assert!((c.approx() - x).abs() < 1e-15, "{c}");
            assert_eq!(c.to_string().parse::<BeattyConstant>().unwrap(), c);
        }
    }

    #[test]
    fn precision_exhausts_eventually() {
        // Fibonacci numbers beyond the stored convergents make n·φ nearly integral
        let seq = IndexSequence::Beatty(BeattyConstant::Golden);
        let (mut a, mut b) = (1u64, 2u64);
        let mut failures = 0;
        while let Some(c) = a.checked_add(b) {
            if let Err(e) = seq.value(c) {
                assert_eq!(e, Error::PrecisionExhausted { n: c });
                failures += 1;
            }
            (a, b) = (b, c);
        }
        assert!(failures > 0);
    }

    #[test]
    fn ud_checks() {
        assert_eq!(ud_mod_check(&IndexSequence::Identity, 4, 4000).unwrap(), 0.0);
        let beatty = IndexSequence::Beatty(BeattyConstant::Sqrt2);
        for m in 1..=12 {
            assert!(ud_mod_check(&beatty, m, 100_000).unwrap() <= 0.01);
        }
        let evens = IndexSequence::affine(2, 0).unwrap();
        assert_eq!(ud_mod_check(&evens, 2, 999).unwrap(), 0.5);
        assert!(ud_mod_check(&evens, 5, 4).is_err());
    }

    #[test]
    fn monotone() {
        for seq in ["identity", "beatty:pi", "affine:3,-2", "beatty:e"] {
            let seq: IndexSequence = seq.parse().unwrap();
            let v: Vec<u64> = (1..5000).map(|n| seq.value(n).unwrap()).collect();
            assert!(v[0] >= 1 && v.windows(2).all(|w| w[0] <= w[1]), "{seq}");
            assert_eq!(seq.to_string().parse::<IndexSequence>().unwrap(), seq);
        }
        assert!(IndexSequence::affine(1, -1).is_err());
        assert!("affine:0,3".parse::<IndexSequence>().is_err());
        assert!("beatty:tau".parse::<IndexSequence>().is_err());
    }
}
