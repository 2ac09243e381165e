//! Divisibility chains `1 = Q_0 | Q_1 | ... | Q_K` and mixed-radix digits.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Rule {
    Explicit,
    Geometric { base: u64 },
    Factorial,
}

/// A finite divisibility chain. Each ratio `Q_{k+1}/Q_k` is at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisibilityChain {
    terms: Vec<u64>,
    radices: Vec<u64>,
    rule: Rule,
}

impl DivisibilityChain {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        Self::with_rule(terms, Rule::Explicit)
    }

    fn with_rule(terms: Vec<u64>, rule: Rule) -> Result<Self> {
        match terms.first() {
            Some(1) => {}
            Some(q) => return Err(Error::InvalidChain(format!("Q_0 must be 1, got {q}"))),
            None => return Err(Error::InvalidChain("empty chain".into())),
        }
        let mut radices = Vec::with_capacity(terms.len() - 1);
        for (k, w) in terms.windows(2).enumerate() {
            let (q, next) = (w[0], w[1]);
            if next <= q || next % q != 0 {
                return Err(Error::InvalidChain(format!(
                    "Q_{k} = {q} does not properly divide Q_{} = {next}",
                    k + 1
                )));
            }
            radices.push(next / q);
        }
        Ok(Self { terms, radices, rule })
    }

    /// `Q_k = base^k` for `k = 0..=depth`.
    pub fn geometric(base: u64, depth: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidChain(format!("geometric base {base} < 2")));
        }
        let mut terms = vec![1u64];
        for _ in 0..depth {
            let next = terms.last().unwrap().checked_mul(base).ok_or_else(|| {
                Error::InvalidChain(format!("{base}^{depth} does not fit in 64 bits"))
            })?;
            terms.push(next);
        }
        Self::with_rule(terms, Rule::Geometric { base })
    }

    /// Longest geometric chain representable in 64 bits.
    pub fn geometric_max(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidChain(format!("geometric base {base} < 2")));
        }
        let depth = u64::MAX.ilog(base);
        Self::geometric(base, depth)
    }

    /// `Q_k = (k+1)!` for `k = 0..=depth`, i.e. `1, 2, 6, 24, ...`.
    pub fn factorial(depth: u32) -> Result<Self> {
        let mut terms = vec![1u64];
        for k in 0..depth as u64 {
            let next = terms.last().unwrap().checked_mul(k + 2).ok_or_else(|| {
                Error::InvalidChain(format!("({})! does not fit in 64 bits", depth + 1))
            })?;
            terms.push(next);
        }
        Self::with_rule(terms, Rule::Factorial)
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// `Q_{k+1} / Q_k` for `k = 0..K`.
    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    /// Largest index `K`.
    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }

    /// Integers `0..capacity` have a digit expansion over this chain.
    pub fn capacity(&self) -> u64 {
        *self.terms.last().unwrap()
    }

    pub fn check_capacity(&self, n: u64) -> Result<()> {
        if n >= self.capacity() {
            Err(Error::CapacityExceeded { value: n, capacity: self.capacity() })
        } else {
            Ok(())
        }
    }

    /// Pairwise coprimality of two chains (all terms share no prime).
    pub fn is_coprime_to(&self, other: &Self) -> bool {
        self.capacity().gcd(&other.capacity()) == 1
    }

    /// Van der Corput value of `n` as `(numerator, denominator)` with
    /// denominator `Q_L`, where `L` is the number of digits of `n`.
    pub(crate) fn reflect(&self, n: u64) -> Result<(u128, u128)> {
        self.check_capacity(n)?;
        let mut digits = [0u64; 64];
        let mut len = 0;
        let mut rest = n;
        while rest > 0 {
            let r = self.radices[len];
            digits[len] = rest % r;
            rest /= r;
            len += 1;
        }
        let mut numer: u128 = 0;
        for j in 0..len {
            numer = numer * self.radices[j] as u128 + digits[j] as u128;
        }
        Ok((numer, self.terms[len] as u128))
    }
}

impl fmt::Display for DivisibilityChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Rule::Geometric { base } => write!(f, "geometric:{base},{}", self.depth()),
            Rule::Factorial => write!(f, "factorial:{}", self.depth()),
            Rule::Explicit => {
                let parts: Vec<String> = self.terms.iter().map(u64::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl FromStr for DivisibilityChain {
    type Err = Error;

    /// Accepts `1,2,4,8`, `geometric:p`, `geometric:p,K`, `factorial` and
    /// `factorial:K`. Without `K` the longest 64-bit chain is used.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let int = |t: &str| -> Result<u64> {
            t.trim().parse().map_err(|_| Error::Parse(format!("bad integer {t:?} in chain {s:?}")))
        };
        if let Some(rest) = s.strip_prefix("geometric:") {
            let mut parts = rest.split(',');
            let base = int(parts.next().unwrap_or(""))?;
            match (parts.next(), parts.next()) {
                (None, _) => Self::geometric_max(base),
                (Some(k), None) => Self::geometric(base, int(k)? as u32),
                _ => Err(Error::Parse(format!("geometric chain takes base and depth: {s:?}"))),
            }
        } else if s == "factorial" {
            Self::factorial(19)
        } else if let Some(rest) = s.strip_prefix("factorial:") {
            Self::factorial(int(rest)? as u32)
        } else {
            let terms = s.split(',').map(int).collect::<Result<Vec<_>>>()?;
            Self::new(terms)
        }
    }
}

/// Canonical digits `a_0..a_k` of an integer over a chain, `a_j < Q_{j+1}/Q_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedRadixDigits {
    digits: Vec<u64>,
    chain: DivisibilityChain,
}

impl MixedRadixDigits {
    /// Validates digit ranges; trailing zeros are dropped.
    pub fn new(mut digits: Vec<u64>, chain: DivisibilityChain) -> Result<Self> {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.len() > chain.radices.len() {
            return Err(Error::InvalidArgument(format!(
                "{} digits over a chain with {} radices",
                digits.len(),
                chain.radices.len()
            )));
        }
        for (position, (&digit, &radix)) in digits.iter().zip(&chain.radices).enumerate() {
            if digit >= radix {
                return Err(Error::DigitOutOfRange { position, digit, radix });
            }
        }
        Ok(Self { digits, chain })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn chain(&self) -> &DivisibilityChain {
        &self.chain
    }
}

/// Expands `n = a_0 + a_1 Q_1 + ... + a_k Q_k`.
pub fn decompose(n: u64, chain: &DivisibilityChain) -> Result<MixedRadixDigits> {
    chain.check_capacity(n)?;
    let mut digits = Vec::new();
    let mut rest = n;
    for &r in chain.radices() {
        if rest == 0 {
            break;
        }
        digits.push(rest % r);
        rest /= r;
    }
    Ok(MixedRadixDigits { digits, chain: chain.clone() })
}

/// Inverse of [`decompose`].
pub fn compose(digits: &MixedRadixDigits) -> u64 {
    // digits are validated, so the sum stays below Q_K
    digits.digits.iter().zip(digits.chain.terms()).map(|(&a, &q)| a * q).sum()
}
