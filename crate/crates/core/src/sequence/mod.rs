//! Arithmetic functions that are polyadically continuous by construction.
//!
//! Leaves are van der Corput sequences, indicators of periodic sets and
//! constants. Sums, products and the named continuous transforms keep a tree
//! bounded and polyadically continuous.

mod continuity;
mod index;
mod vdc;

use std::fmt;
use std::str::FromStr;

use crate::chain::DivisibilityChain;
use crate::error::{Error, Result};
use crate::grammar::{parse_call, split_args};
use crate::periodic::PeriodicSet;
use crate::rational::{checked_add, checked_mul, format_rational, parse_rational, to_f64, Rational};

pub use continuity::{
    analytic_modulus, continuity_modulus, extension_value, ContinuityCertificate, CylinderPoint,
};
pub use index::{index_value, ud_mod_check, BeattyConstant, IndexSequence};
pub use vdc::{vdc, vdc_f64};

/// A rational coefficient with its cached floating point value.
#[derive(Debug, Clone, PartialEq)]
pub struct Coef {
    exact: Rational,
    value: f64,
}

impl Coef {
    pub fn new(exact: Rational) -> Self {
        Self { value: to_f64(&exact), exact }
    }

    pub fn exact(&self) -> &Rational {
        &self.exact
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.exact))
    }
}

/// Continuous maps applied pointwise to a bounded sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum Transform {
    Identity,
    Square,
    /// `x -> scale * x + shift`
    Affine { scale: Coef, shift: Coef },
    /// Coefficients in increasing degree.
    Polynomial(Vec<Coef>),
}

impl Transform {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Square => x * x,
            Transform::Affine { scale, shift } => scale.value * x + shift.value,
            Transform::Polynomial(c) => c.iter().rev().fold(0.0, |acc, c| acc * x + c.value),
        }
    }

    pub fn apply_exact(&self, x: &Rational) -> Result<Rational> {
        const CTX: &str = "transform";
        match self {
            Transform::Identity => Ok(*x),
            Transform::Square => checked_mul(x, x, CTX),
            Transform::Affine { scale, shift } => checked_add(&checked_mul(&scale.exact, x, CTX)?, &shift.exact, CTX),
            Transform::Polynomial(c) => c.iter().rev().try_fold(Rational::from_integer(0), |acc, c| {
                checked_add(&checked_mul(&acc, x, CTX)?, &c.exact, CTX)
            }),
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transform::Identity => f.write_str("identity"),
            Transform::Square => f.write_str("square"),
            Transform::Affine { scale, shift } => write!(f, "affine({scale},{shift})"),
            Transform::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(Coef::to_string).collect();
                write!(f, "poly({})", parts.join(","))
            }
        }
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, inner) = parse_call(s)?;
        let coefs = |inner: Option<&str>| -> Result<Vec<Coef>> {
            let inner = inner.ok_or_else(|| Error::Parse(format!("{name} needs coefficients")))?;
            split_args(inner)?.into_iter().map(|c| parse_rational(c).map(Coef::new)).collect()
        };
        match (name, inner) {
            ("identity", None) => Ok(Transform::Identity),
            ("square", None) => Ok(Transform::Square),
            ("affine", inner) => match <[Coef; 2]>::try_from(coefs(inner)?) {
                Ok([scale, shift]) => Ok(Transform::Affine { scale, shift }),
                Err(_) => Err(Error::Parse(format!("affine takes two coefficients: {s:?}"))),
            },
            ("poly", inner) => {
                let c = coefs(inner)?;
                if c.is_empty() {
                    return Err(Error::Parse("poly needs at least one coefficient".into()));
                }
                Ok(Transform::Polynomial(c))
            }
            _ => Err(Error::Parse(format!("unknown transform {s:?}"))),
        }
    }
}

/// Expression tree describing an arithmetic function `v(n)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    VdC(DivisibilityChain),
    Indicator(PeriodicSet),
    Constant(Coef),
    Sum(Vec<SequenceSpec>),
    Product(Vec<SequenceSpec>),
    Transform(Transform, Box<SequenceSpec>),
}

impl SequenceSpec {
    pub fn vdc(chain: DivisibilityChain) -> Self {
        SequenceSpec::VdC(chain)
    }

    pub fn constant(c: Rational) -> Self {
        SequenceSpec::Constant(Coef::new(c))
    }

    pub fn transform(t: Transform, inner: SequenceSpec) -> Self {
        SequenceSpec::Transform(t, Box::new(inner))
    }

    /// Evaluates `v(n)` in floating point.
    pub fn eval(&self, n: u64) -> Result<f64> {
        match self {
            SequenceSpec::VdC(chain) => vdc_f64(n, chain),
            SequenceSpec::Indicator(set) => Ok(if set.contains_residue(n) { 1.0 } else { 0.0 }),
            SequenceSpec::Constant(c) => Ok(c.value),
            SequenceSpec::Sum(parts) => parts.iter().try_fold(0.0, |acc, p| Ok(acc + p.eval(n)?)),
            SequenceSpec::Product(parts) => parts.iter().try_fold(1.0, |acc, p| Ok(acc * p.eval(n)?)),
            SequenceSpec::Transform(t, inner) => Ok(t.apply(inner.eval(n)?)),
        }
    }

    /// Evaluates `v(n)` exactly; fails with [`Error::Overflow`] if the
    /// rational carrier cannot hold the result.
    pub fn eval_exact(&self, n: u64) -> Result<Rational> {
        const CTX: &str = "sequence evaluation";
        match self {
            SequenceSpec::VdC(chain) => vdc(n, chain),
            SequenceSpec::Indicator(set) => Ok(Rational::from_integer(set.contains_residue(n) as i128)),
            SequenceSpec::Constant(c) => Ok(c.exact),
            SequenceSpec::Sum(parts) => parts.iter().try_fold(Rational::from_integer(0), |acc, p| {
                checked_add(&acc, &p.eval_exact(n)?, CTX)
            }),
            SequenceSpec::Product(parts) => parts.iter().try_fold(Rational::from_integer(1), |acc, p| {
                checked_mul(&acc, &p.eval_exact(n)?, CTX)
            }),
            SequenceSpec::Transform(t, inner) => t.apply_exact(&inner.eval_exact(n)?),
        }
    }

    /// Smallest capacity over all embedded chains (`u64::MAX` if none).
    pub fn capacity(&self) -> u64 {
        match self {
            SequenceSpec::VdC(chain) => chain.capacity(),
            SequenceSpec::Indicator(_) | SequenceSpec::Constant(_) => u64::MAX,
            SequenceSpec::Sum(parts) | SequenceSpec::Product(parts) => {
                parts.iter().map(Self::capacity).min().unwrap_or(u64::MAX)
            }
            SequenceSpec::Transform(_, inner) => inner.capacity(),
        }
    }

    /// Fails if `0..=last` is not evaluable.
    pub fn check_range(&self, last: u64) -> Result<()> {
        let capacity = self.capacity();
        if last >= capacity {
            return Err(Error::CapacityExceeded { value: last, capacity });
        }
        Ok(())
    }

    /// Values `v(lo), ..., v(hi - 1)`.
    pub fn values(&self, lo: u64, hi: u64) -> Result<Vec<f64>> {
        if hi > lo {
            self.check_range(hi - 1)?;
        }
        crate::par::try_map_range(lo, hi, |n| self.eval(n))
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, parts: &[SequenceSpec]| {
            let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
            write!(f, "{name}({})", parts.join(","))
        };
        match self {
            SequenceSpec::VdC(chain) => write!(f, "vdc({chain})"),
            SequenceSpec::Indicator(set) => write!(f, "indicator({set})"),
            SequenceSpec::Constant(c) => write!(f, "const({c})"),
            SequenceSpec::Sum(parts) => list(f, "sum", parts),
            SequenceSpec::Product(parts) => list(f, "prod", parts),
            SequenceSpec::Transform(t, inner) => write!(f, "transform({t},{inner})"),
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, inner) = parse_call(s)?;
        let inner = inner.ok_or_else(|| Error::Parse(format!("unknown sequence {s:?}")))?;
        let children = || -> Result<Vec<SequenceSpec>> {
            let parts = split_args(inner)?;
            if parts.iter().any(|p| p.is_empty()) {
                return Err(Error::Parse(format!("empty operand in {s:?}")));
            }
            parts.into_iter().map(str::parse).collect()
        };
        match name {
            "vdc" => Ok(SequenceSpec::VdC(inner.parse()?)),
            "indicator" => Ok(SequenceSpec::Indicator(inner.parse()?)),
            "const" => Ok(SequenceSpec::constant(parse_rational(inner)?)),
            "sum" => Ok(SequenceSpec::Sum(children()?)),
            "prod" => Ok(SequenceSpec::Product(children()?)),
            "transform" => {
                let parts = split_args(inner)?;
                match parts.as_slice() {
                    [t, x] => Ok(SequenceSpec::transform(t.parse()?, x.parse()?)),
                    _ => Err(Error::Parse(format!("transform takes a map and a sequence: {s:?}"))),
                }
            }
            _ => Err(Error::Parse(format!("unknown sequence {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    #[test]
    fn eval_examples() {
        let s = spec("sum(vdc(geometric:2),vdc(geometric:3))");
        assert_eq!(s.eval_exact(1).unwrap(), ratio(5, 6));
        assert!((s.eval(1).unwrap() - 5.0 / 6.0).abs() < 1e-15);

        let c = spec("const(0.5)");
        for n in [0, 7, 1 << 40] {
            assert_eq!(c.eval(n).unwrap(), 0.5);
            assert_eq!(c.eval_exact(n).unwrap(), ratio(1, 2));
        }

        let sq = spec("transform(square,vdc(geometric:2))");
        assert_eq!(sq.eval(3).unwrap(), 9.0 / 16.0);
        assert_eq!(sq.eval_exact(3).unwrap(), ratio(9, 16));
    }

    #[test]
    fn transforms() {
        let t: Transform = "affine(2,-1/2)".parse().unwrap();
        assert_eq!(t.apply(0.25), 0.0);
        assert_eq!(t.apply_exact(&ratio(1, 4)).unwrap(), ratio(0, 1));
        let p: Transform = "poly(1,0,3)".parse().unwrap();
        assert_eq!(p.apply(2.0), 13.0);
        assert_eq!(p.apply_exact(&ratio(1, 2)).unwrap(), ratio(7, 4));
        assert!("affine(1)".parse::<Transform>().is_err());
        assert!("cube".parse::<Transform>().is_err());
        assert!("poly()".parse::<Transform>().is_err());
    }

    #[test]
    fn indicator_and_product() {
        let s = spec("prod(indicator(0 mod 2),vdc(1,2,4,8))");
        assert_eq!(s.eval(6).unwrap(), 0.375);
        assert_eq!(s.eval(5).unwrap(), 0.0);
    }

    #[test]
    fn capacity_propagates() {
        let s = spec("sum(vdc(1,2,4,8),const(1))");
        assert_eq!(s.capacity(), 8);
        assert_eq!(s.eval(8), Err(Error::CapacityExceeded { value: 8, capacity: 8 }));
        assert!(s.values(1, 9).is_err());
        assert_eq!(s.values(0, 3).unwrap(), vec![1.0, 1.5, 1.25]);
    }

    #[test]
    fn grammar_round_trip() {
        for s in [
            "vdc(geometric:2,63)",
            "sum(vdc(geometric:2,63),vdc(factorial:5))",
            "prod(indicator(0 mod 2),const(1/3))",
            "transform(affine(2,1),vdc(1,2,6))",
            "transform(poly(0,1,1),vdc(geometric:5,3))",
        ] {
            assert_eq!(spec(s).to_string(), s);
        }
        for bad in ["vdc", "sum(vdc(geometric:2),)", "foo(1)", "transform(square)", "const(x)"] {
            assert!(bad.parse::<SequenceSpec>().is_err(), "{bad}");
        }
    }
}
