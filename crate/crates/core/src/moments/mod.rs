//! Means, dispersions and the limit-theorem checks built on them.
//!
//! Averages come in three flavours: prefix averages `(1/N) Σ_{n<=N} v(n)`,
//! modulus averages `(1/m) Σ_{s<m} v(s)` (the integral of the period-`m`
//! discretisation over Ω), and averages along an index sequence
//! `(1/N) Σ v(k_n)`. Up to [`EXACT_TERMS`] terms the average is also
//! accumulated in exact rationals and the reported estimate is the rounded
//! exact value.

mod clt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par;
use num_integer::Integer;

use crate::rational::{checked_mul, checked_sub, to_f64, Rational};
use crate::sequence::{index_value, ud_mod_check, IndexSequence, SequenceSpec, Transform};

pub use clt::{clt_experiment, clt_experiment_with_chains, CltOptions, CltReport, CltRow, CLT_PRIMES};

/// Averages over at most this many terms are also computed exactly.
pub const EXACT_TERMS: usize = 1 << 20;

/// Residue-frequency deviation above which an index sequence is flagged as
/// not uniformly distributed in Z.
pub const UD_WARN_THRESHOLD: f64 = 0.02;

/// Moduli probed by the uniform-distribution check in [`weighted_mean`].
pub const UD_CHECK_MODULI: std::ops::RangeInclusive<u64> = 2..=12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum MomentMethod {
    Prefix { window: u64 },
    Modulus { modulus: u64 },
    Weighted { index: String, window: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub estimate: f64,
    #[serde(with = "crate::rational::serde_str::opt")]
    pub exact: Option<Rational>,
    #[serde(flatten)]
    pub method: MomentMethod,
    pub spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Which average a dispersion is taken under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Averaging {
    Prefix(u64),
    Modulus(u64),
}

impl Averaging {
    fn points(self) -> (u64, u64) {
        match self {
            Averaging::Prefix(n) => (1, n + 1),
            Averaging::Modulus(m) => (0, m),
        }
    }

    fn method(self) -> MomentMethod {
        match self {
            Averaging::Prefix(window) => MomentMethod::Prefix { window },
            Averaging::Modulus(modulus) => MomentMethod::Modulus { modulus },
        }
    }
}

/// `(1/len) Σ_i f(point(i))` in floating point, plus the exact value when
/// the term count allows and the carrier does not overflow.
fn average(
    len: usize,
    point: impl Fn(usize) -> Result<u64> + Sync + Send,
    value: impl Fn(u64) -> Result<f64> + Sync + Send,
    exact_value: impl Fn(u64) -> Result<Rational> + Sync + Send,
) -> Result<(f64, Option<Rational>)> {
    if len == 0 {
        return Err(Error::InvalidArgument("average over an empty range".into()));
    }
    let values = par::try_map_range(0, len as u64, |i| value(point(i as usize)?))?;
    let float = par::sum_f64(len, |i| values[i]) / len as f64;
    let exact = if len <= EXACT_TERMS {
        exact_sum(len, &point, &exact_value)
            .ok()
            .map(|s| s / Rational::from_integer(len as i128))
    } else {
        None
    };
    Ok((exact.as_ref().map(to_f64).unwrap_or(float), exact))
}

fn exact_sum(
    len: usize,
    point: &(impl Fn(usize) -> Result<u64> + Sync + Send),
    exact_value: &(impl Fn(u64) -> Result<Rational> + Sync + Send),
) -> Result<Rational> {
    let parts = par::map_chunks(len, |r| {
        r.map(|i| exact_value(point(i)?))
            .try_fold(ExactSum::default(), |acc, v| acc.add(&v?))
    });
    let total = parts.into_iter().try_fold(ExactSum::default(), |acc, p| acc.add(&p?.finish()))?;
    Ok(total.finish())
}

/// Running sum over a common denominator, reduced only at the end.
#[derive(Clone, Copy)]
struct ExactSum {
    numer: i128,
    denom: i128,
}

impl Default for ExactSum {
    fn default() -> Self {
        Self { numer: 0, denom: 1 }
    }
}

impl ExactSum {
    fn add(self, v: &Rational) -> Result<Self> {
        const CTX: &str = "exact average";
        let overflow = || Error::Overflow(CTX);
        let (p, q) = (*v.numer(), *v.denom());
        let denom = if self.denom % q == 0 {
            self.denom
        } else {
            (self.denom / self.denom.gcd(&q)).checked_mul(q).ok_or_else(overflow)?
        };
        let numer = self
            .numer
            .checked_mul(denom / self.denom)
            .and_then(|a| p.checked_mul(denom / q).and_then(|b| a.checked_add(b)))
            .ok_or_else(overflow)?;
        Ok(Self { numer, denom })
    }

    fn finish(self) -> Rational {
        Rational::new(self.numer, self.denom)
    }
}

fn check_window(spec: &SequenceSpec, lo: u64, hi: u64) -> Result<()> {
    if hi <= lo {
        return Err(Error::InvalidArgument("averaging window must be non-empty".into()));
    }
    spec.check_range(hi - 1)
}

/// `(1/N) Σ_{n=1}^{N} v(n)`.
pub fn mean_prefix(spec: &SequenceSpec, window: u64) -> Result<MomentReport> {
    mean_over(spec, Averaging::Prefix(window))
}

/// `(1/m) Σ_{s=0}^{m-1} v(s)`.
pub fn mean_modulus(spec: &SequenceSpec, modulus: u64) -> Result<MomentReport> {
    mean_over(spec, Averaging::Modulus(modulus))
}

fn mean_over(spec: &SequenceSpec, how: Averaging) -> Result<MomentReport> {
    let (lo, hi) = how.points();
    check_window(spec, lo, hi)?;
    let (estimate, exact) = average(
        (hi - lo) as usize,
        |i| Ok(lo + i as u64),
        |n| spec.eval(n),
        |n| spec.eval_exact(n),
    )?;
    Ok(MomentReport { estimate, exact, method: how.method(), spec: spec.to_string(), warning: None })
}

/// Second central moment under the chosen averaging.
pub fn dispersion(spec: &SequenceSpec, how: Averaging) -> Result<MomentReport> {
    let (lo, hi) = how.points();
    check_window(spec, lo, hi)?;
    let len = (hi - lo) as usize;
    let mean = mean_over(spec, how)?;
    let values = spec.values(lo, hi)?;
    let float = par::sum_f64(len, |i| (values[i] - mean.estimate).powi(2)) / len as f64;
    let exact = mean.exact.and_then(|m| {
        let (_, second) = average(len, |i| Ok(lo + i as u64), |_| Ok(0.0), |n| {
            let v = spec.eval_exact(n)?;
            checked_mul(&v, &v, "exact dispersion")
        })
        .ok()?;
        checked_sub(&second?, &checked_mul(&m, &m, "exact dispersion").ok()?, "exact dispersion").ok()
    });
    Ok(MomentReport {
        estimate: exact.as_ref().map(to_f64).unwrap_or(float),
        exact,
        method: how.method(),
        spec: spec.to_string(),
        warning: None,
    })
}

/// `(1/N) Σ_{n=1}^{N} v(k_n)`. A warning is attached when the index
/// sequence visibly fails to be uniformly distributed in Z.
pub fn weighted_mean(spec: &SequenceSpec, index: &IndexSequence, window: u64) -> Result<MomentReport> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    // index sequences are non-decreasing, so k_N is the largest argument
    spec.check_range(index_value(index, window)?)?;
    let (estimate, exact) = average(
        window as usize,
        |i| index_value(index, i as u64 + 1),
        |n| spec.eval(n),
        |n| spec.eval_exact(n),
    )?;
    let mut warning = None;
    for m in UD_CHECK_MODULI.filter(|&m| m <= window) {
        let dev = ud_mod_check(index, m, window)?;
        if dev > UD_WARN_THRESHOLD {
            warning = Some(format!(
                "index sequence {index} is not uniformly distributed in Z: residue frequencies mod {m} deviate from 1/{m} by {dev}"
            ));
            break;
        }
    }
    Ok(MomentReport {
        estimate,
        exact,
        method: MomentMethod::Weighted { index: index.to_string(), window },
        spec: spec.to_string(),
        warning,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevReport {
    pub epsilon: f64,
    /// Prefix frequency of `|v(n) - E| >= ε`.
    pub lhs: f64,
    /// `D² / ε²`
    pub bound: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub mean: f64,
    pub dispersion: f64,
    #[serde(rename = "N")]
    pub window: u64,
}

/// Sampling slack added to the bound: `3/√N`.
pub fn chebyshev_slack(window: u64) -> f64 {
    3.0 / (window as f64).sqrt()
}

pub fn chebyshev_check(spec: &SequenceSpec, epsilon: f64, window: u64) -> Result<ChebyshevReport> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    let mean = mean_prefix(spec, window)?.estimate;
    let disp = dispersion(spec, Averaging::Prefix(window))?.estimate;
    let values = spec.values(1, window + 1)?;
    let hits = par::count_range(0, window, |i| (values[i as usize] - mean).abs() >= epsilon);
    let lhs = hits as f64 / window as f64;
    let bound = disp / (epsilon * epsilon);
    let slack = chebyshev_slack(window);
    Ok(ChebyshevReport {
        epsilon,
        lhs,
        bound,
        slack,
        satisfied: lhs <= bound + slack,
        mean,
        dispersion: disp,
        window,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductReport {
    /// `(1/N) Σ Π_j g_j(v_j(k_n))`
    pub lhs: f64,
    /// `Π_j (1/N) Σ g_j(v_j(k_n))`
    pub rhs: f64,
    pub gap: f64,
    pub marginals: Vec<f64>,
    #[serde(rename = "N")]
    pub window: u64,
}

/// Joint average of `g_1(v_1) ... g_k(v_k)` along `k_n` against the product
/// of the separate averages.
pub fn moment_product_check(
    specs: &[SequenceSpec],
    transforms: &[Transform],
    index: &IndexSequence,
    window: u64,
) -> Result<ProductReport> {
    if specs.is_empty() || specs.len() != transforms.len() {
        return Err(Error::InvalidArgument(format!(
            "need one transform per sequence, got {} sequences and {} transforms",
            specs.len(),
            transforms.len()
        )));
    }
    let factors: Vec<SequenceSpec> = specs
        .iter()
        .zip(transforms)
        .map(|(s, t)| SequenceSpec::transform(t.clone(), s.clone()))
        .collect();
    let joint = weighted_mean(&SequenceSpec::Product(factors.clone()), index, window)?;
    let marginals = factors
        .iter()
        .map(|f| weighted_mean(f, index, window))
        .collect::<Result<Vec<_>>>()?;
    let rhs: f64 = marginals.iter().map(|m| m.estimate).product();
    let exact_rhs = marginals.iter().try_fold(Rational::from_integer(1), |acc, m| {
        m.exact.as_ref().and_then(|e| checked_mul(&acc, e, "moment product").ok())
    });
    let gap = match (&joint.exact, &exact_rhs) {
        (Some(l), Some(r)) => to_f64(&checked_sub(l, r, "moment product")?).abs(),
        _ => (joint.estimate - rhs).abs(),
    };
    Ok(ProductReport {
        lhs: joint.estimate,
        rhs,
        gap,
        marginals: marginals.iter().map(|m| m.estimate).collect(),
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_means() {
        let r = mean_prefix(&spec("vdc(geometric:2)"), 1 << 20).unwrap();
        assert!((r.estimate - 0.5).abs() <= 1e-3);
        let r = mean_prefix(&spec("const(0.1)"), 1000).unwrap();
        assert_eq!(r.exact, Some(ratio(1, 10)));
        assert_eq!(r.estimate, 0.1);
        let r = mean_prefix(&spec("indicator(0 mod 2)"), 1000).unwrap();
        assert_eq!(r.exact, Some(ratio(1, 2)));
        assert!(mean_prefix(&spec("vdc(1,2,4,8)"), 8).is_err());
        assert!(mean_prefix(&spec("const(1)"), 0).is_err());
    }

    #[test]
    fn modulus_means() {
        let r = mean_modulus(&spec("vdc(geometric:2)"), 8).unwrap();
        assert_eq!(r.exact, Some(ratio(7, 16)));
        assert_eq!(r.estimate, 7.0 / 16.0);
        assert_eq!(mean_modulus(&spec("const(2/3)"), 9).unwrap().exact, Some(ratio(2, 3)));
        let v = spec("sum(vdc(geometric:3),const(5))");
        assert_eq!(mean_modulus(&v, 1).unwrap().estimate, v.eval(0).unwrap());
    }

    #[test]
    fn prefix_and_modulus_differ_by_one_boundary_term() {
        // n = 1..Q_k replaces γ(0) = 0 with γ(Q_k) = 1/Q_{k+1}
        let v = spec("vdc(geometric:2)");
        for k in 1..12u32 {
            let q = 1i128 << k;
            let prefix = mean_prefix(&v, q as u64).unwrap().exact.unwrap();
            let modulus = mean_modulus(&v, q as u64).unwrap().exact.unwrap();
            assert_eq!(modulus, ratio(q - 1, 2 * q));
            assert_eq!(prefix - modulus, ratio(1, 2 * q * q));
        }
    }

    #[test]
    fn dispersions() {
        let r = dispersion(&spec("vdc(geometric:2)"), Averaging::Prefix(1 << 20)).unwrap();
        assert!((r.estimate - 1.0 / 12.0).abs() <= 1e-3);
        assert_eq!(dispersion(&spec("const(3)"), Averaging::Prefix(100)).unwrap().estimate, 0.0);
        let r = dispersion(&spec("indicator(0 mod 2)"), Averaging::Modulus(2)).unwrap();
        assert_eq!(r.exact, Some(ratio(1, 4)));
        // full period of vdC: variance of the grid {j/8}
        let r = dispersion(&spec("vdc(geometric:2)"), Averaging::Modulus(8)).unwrap();
        assert_eq!(r.exact, Some(ratio(63, 768)));
    }

    #[test]
    fn weighted_means() {
        let v = spec("vdc(geometric:2)");
        let id = weighted_mean(&v, &IndexSequence::Identity, 5000).unwrap();
        assert_eq!(id.estimate, mean_prefix(&v, 5000).unwrap().estimate);
        assert!(id.warning.is_none());

        let beatty = weighted_mean(&v, &"beatty:sqrt2".parse().unwrap(), 1_000_000).unwrap();
        assert!((beatty.estimate - 0.5).abs() <= 5e-3);
        assert!(beatty.warning.is_none());

        let evens = weighted_mean(&v, &"affine:2,0".parse().unwrap(), 100_000).unwrap();
        assert!((evens.estimate - 0.25).abs() <= 5e-3);
        assert!(evens.warning.unwrap().contains("mod 2"));
    }

    #[test]
    fn chebyshev() {
        let v = spec("vdc(geometric:2)");
        let r = chebyshev_check(&v, 0.25, 1_000_000).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-2);
        assert!((r.bound - 4.0 / 3.0).abs() < 1e-2);
        assert!(r.satisfied);
        let r = chebyshev_check(&v, 0.5, 1_000_000).unwrap();
        assert!(r.lhs < 1e-5 && r.satisfied);
        let r = chebyshev_check(&v, 0.2, 10_000).unwrap();
        assert!(r.bound >= 1.0 || r.satisfied);
        assert!(chebyshev_check(&v, 0.0, 10).is_err());
    }

    #[test]
    fn product_moments() {
        let specs = [spec("vdc(geometric:2)"), spec("vdc(geometric:3)")];
        let id = IndexSequence::Identity;
        let r = moment_product_check(&specs, &[Transform::Identity, Transform::Identity], &id, 1_000_000).unwrap();
        assert!((r.lhs - 0.25).abs() <= 5e-3 && (r.rhs - 0.25).abs() <= 5e-3 && r.gap <= 5e-3);

        let r = moment_product_check(&specs, &[Transform::Square, Transform::Square], &id, 1_000_000).unwrap();
        assert!((r.lhs - 1.0 / 9.0).abs() <= 5e-3 && r.gap <= 5e-3);

        let consts: Vec<Transform> = ["poly(3/7)", "affine(0,0.3)"].iter().map(|t| t.parse().unwrap()).collect();
        let r = moment_product_check(&specs, &consts, &id, 10_000).unwrap();
        assert_eq!(r.gap, 0.0);

        assert!(moment_product_check(&specs, &[Transform::Square], &id, 10).is_err());
    }
}
