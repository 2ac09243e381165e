//! Continuity moduli and values of the continuous extension `ṽ` on Ω.

use serde::Serialize;

use super::SequenceSpec;
use crate::chain::DivisibilityChain;
use crate::error::{Error, Result};

/// Window certificate: on `1..=window`, `a ≡ b (mod modulus)` implies
/// `|v(a) - v(b)| <= worst_gap < ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityCertificate {
    pub modulus: u64,
    pub worst_gap: f64,
    pub window: u64,
}

/// Smallest chain term `Q_k` whose congruence classes keep the value spread
/// below `epsilon` on `1..=window`. Only moduli with at least two
/// representatives per class (`2 Q_k <= window`) are examined.
pub fn continuity_modulus(
    spec: &SequenceSpec,
    epsilon: f64,
    chain: &DivisibilityChain,
    window: u64,
) -> Result<ContinuityCertificate> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let values = spec.values(1, window + 1)?;
    let mut largest = 0;
    for &m in chain.terms().iter().take_while(|&&m| 2 * m <= window) {
        largest = m;
        let mut lo = vec![f64::INFINITY; m as usize];
        let mut hi = vec![f64::NEG_INFINITY; m as usize];
        for (i, &v) in values.iter().enumerate() {
            let r = ((i as u64 + 1) % m) as usize;
            lo[r] = lo[r].min(v);
            hi[r] = hi[r].max(v);
        }
        let gap = lo.iter().zip(&hi).map(|(l, h)| h - l).fold(0.0, f64::max);
        if gap < epsilon {
            return Ok(ContinuityCertificate { modulus: m, worst_gap: gap, window });
        }
    }
    Err(Error::NoModulusFound { epsilon, largest })
}

/// Known moduli for leaves: a vdC leaf needs the first `Q_k >= 1/ε` of its
/// own chain (congruent inputs share `k` digits, so the gap is below `1/Q_k`);
/// an indicator needs its period once `ε <= 1`; constants need nothing.
pub fn analytic_modulus(spec: &SequenceSpec, epsilon: f64) -> Option<u64> {
    match spec {
        SequenceSpec::Constant(_) => Some(1),
        SequenceSpec::Indicator(set) => Some(if epsilon > 1.0 { 1 } else { set.modulus() }),
        SequenceSpec::VdC(chain) => chain.terms().iter().copied().find(|&q| 1.0 / q as f64 <= epsilon),
        _ => None,
    }
}

/// Approximant of a polyadic integer: coherent residues `s_k mod Q_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderPoint {
    chain: DivisibilityChain,
    residues: Vec<u64>,
}

impl CylinderPoint {
    pub fn new(chain: DivisibilityChain, residues: Vec<u64>) -> Result<Self> {
        if residues.len() != chain.terms().len() {
            return Err(Error::InvalidArgument(format!(
                "{} residues for a chain of {} terms",
                residues.len(),
                chain.terms().len()
            )));
        }
        for (k, (&s, &q)) in residues.iter().zip(chain.terms()).enumerate() {
            if s >= q {
                return Err(Error::InvalidArgument(format!("s_{k} = {s} is not below Q_{k} = {q}")));
            }
            if k > 0 && s % chain.terms()[k - 1] != residues[k - 1] {
                return Err(Error::InvalidArgument(format!("s_{k} = {s} is not coherent with s_{}", k - 1)));
            }
        }
        Ok(Self { chain, residues })
    }

    /// The image of an integer (negative values included) in Ω.
    pub fn from_integer(chain: DivisibilityChain, n: i128) -> Self {
        let residues = chain.terms().iter().map(|&q| n.rem_euclid(q as i128) as u64).collect();
        Self { chain, residues }
    }

    pub fn chain(&self) -> &DivisibilityChain {
        &self.chain
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// `v(s_k)`, the depth-`k` approximant of `ṽ` at the point.
pub fn extension_value(spec: &SequenceSpec, point: &CylinderPoint, depth: usize) -> Result<f64> {
    let s = *point.residues.get(depth).ok_or_else(|| {
        Error::InvalidArgument(format!("depth {depth} exceeds the point's chain depth {}", point.chain.depth()))
    })?;
    spec.eval(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::PeriodicSet;
    use crate::rational::ratio;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    fn binary() -> DivisibilityChain {
        "geometric:2".parse().unwrap()
    }

    // Oracle: all pairs a ≡ b (mod m) on the window, no class bookkeeping.
    fn pair_scan(spec: &SequenceSpec, m: u64, window: u64) -> f64 {
        let v: Vec<f64> = (1..=window).map(|n| spec.eval(n).unwrap()).collect();
        let mut worst = 0.0f64;
        for a in 1..=window {
            let mut b = a + m;
            while b <= window {
                worst = worst.max((v[a as usize - 1] - v[b as usize - 1]).abs());
                b += m;
            }
        }
        worst
    }

    #[test]
    fn vdc_modulus() {
        let s = spec("vdc(geometric:2)");
        let cert = continuity_modulus(&s, 0.125 + 1e-9, &binary(), 1 << 12).unwrap();
        assert_eq!(cert.modulus, 8);
        assert!(cert.worst_gap < 0.125);
        assert_eq!(cert.worst_gap, pair_scan(&s, 8, 1 << 12));
        assert!(pair_scan(&s, 4, 1 << 12) >= 0.125 + 1e-9);
        assert_eq!(analytic_modulus(&s, 0.125 + 1e-9), Some(8));
    }

    #[test]
    fn agrees_with_analytic_moduli() {
        let cases = [
            ("vdc(geometric:2)", "geometric:2"),
            ("vdc(geometric:3)", "geometric:3"),
            ("vdc(factorial)", "factorial"),
            ("indicator(0 mod 2)", "geometric:2"),
            ("indicator(1,3 mod 6)", "factorial"),
            ("const(3)", "geometric:2"),
        ];
        for (s, c) in cases {
            let s = spec(s);
            let c: DivisibilityChain = c.parse().unwrap();
            for eps in [0.9, 0.5, 0.3, 0.1, 0.04, 0.01] {
                let cert = continuity_modulus(&s, eps, &c, 1 << 13).unwrap();
                assert_eq!(Some(cert.modulus), analytic_modulus(&s, eps), "{s} eps {eps}");
            }
        }
    }

    #[test]
    fn trivial_cases() {
        let cert = continuity_modulus(&spec("const(0.7)"), 1e-6, &binary(), 100).unwrap();
        assert_eq!((cert.modulus, cert.worst_gap), (1, 0.0));
        let cert = continuity_modulus(&spec("indicator(0 mod 2)"), 0.5, &binary(), 100).unwrap();
        assert_eq!((cert.modulus, cert.worst_gap), (2, 0.0));
    }

    #[test]
    fn failures() {
        let s = spec("vdc(geometric:2)");
        assert_eq!(
            continuity_modulus(&s, 1e-6, &binary(), 64),
            Err(Error::NoModulusFound { epsilon: 1e-6, largest: 32 })
        );
        assert!(continuity_modulus(&s, 0.0, &binary(), 64).is_err());
        let s = SequenceSpec::Indicator(PeriodicSet::class(0, 3).unwrap());
        assert!(continuity_modulus(&s, 0.5, &binary(), 1 << 10).is_err());
    }

    #[test]
    fn extension_at_minus_one() {
        let chain: DivisibilityChain = "geometric:2,12".parse().unwrap();
        let minus_one = CylinderPoint::from_integer(chain.clone(), -1);
        let s = spec("vdc(geometric:2)");
        assert_eq!(extension_value(&s, &minus_one, 10).unwrap(), 1023.0 / 1024.0);
        assert_eq!(s.eval_exact(minus_one.residues()[10]).unwrap(), ratio(1023, 1024));
        // successive approximants move by at most 1/Q_k
        for k in 0..12 {
            let a = extension_value(&s, &minus_one, k).unwrap();
            let b = extension_value(&s, &minus_one, k + 1).unwrap();
            assert!((b - a).abs() <= 1.0 / chain.terms()[k] as f64);
        }
        assert_eq!(extension_value(&s, &minus_one, 0).unwrap(), s.eval(0).unwrap());
        assert!(extension_value(&s, &minus_one, 13).is_err());
    }

    #[test]
    fn extension_at_integer() {
        let chain: DivisibilityChain = "factorial:6".parse().unwrap();
        let one = CylinderPoint::from_integer(chain, 1);
        let s = spec("sum(vdc(geometric:3),const(1/2))");
        for k in 1..=6 {
            assert_eq!(extension_value(&s, &one, k).unwrap(), s.eval(1).unwrap());
        }
    }

    #[test]
    fn coherence_is_checked() {
        let chain: DivisibilityChain = "1,2,4,8".parse().unwrap();
        assert!(CylinderPoint::new(chain.clone(), vec![0, 1, 3, 7]).is_ok());
        assert!(CylinderPoint::new(chain.clone(), vec![0, 1, 2, 6]).is_err());
        assert!(CylinderPoint::new(chain.clone(), vec![0, 1, 3]).is_err());
        assert!(CylinderPoint::new(chain, vec![0, 1, 3, 9]).is_err());
    }
}
