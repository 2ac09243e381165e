//! Cylinders `s + mΩ` and periodic subsets of the positive integers.
//!
//! A periodic set is a finite union of residue classes. It is stored with
//! its minimal period, so two sets are equal exactly when their canonical
//! forms are.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{lcm_u64, Rational};

/// Largest modulus a periodic set may carry.
pub const MAX_MODULUS: u64 = 1 << 24;

/// The clopen set `s + mΩ` of polyadic integers congruent to `s` mod `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cylinder {
    residue: u64,
    modulus: u64,
}

impl Cylinder {
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 || residue >= modulus {
            return Err(Error::InvalidCylinder { residue, modulus });
        }
        Ok(Self { residue, modulus })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, n: i128) -> bool {
        n.rem_euclid(self.modulus as i128) as u64 == self.residue
    }
}

/// Haar measure `P(s + mΩ) = 1/m`.
pub fn cylinder_measure(c: &Cylinder) -> Rational {
    Rational::new(1, c.modulus as i128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Complement,
}

/// A subset of the positive integers whose membership depends on `n mod M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSet {
    modulus: u64,
    members: Vec<bool>,
}

impl PeriodicSet {
    /// Builds the union of the classes `r mod modulus`; residues may be any integers.
    pub fn new(modulus: u64, residues: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_modulus(modulus)?;
        let mut members = vec![false; modulus as usize];
        for r in residues {
            members[r.rem_euclid(modulus as i64) as usize] = true;
        }
        Ok(Self::canonical(modulus, members))
    }

    pub fn from_fn(modulus: u64, f: impl Fn(u64) -> bool) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self::canonical(modulus, (0..modulus).map(f).collect()))
    }

    /// The progression `r + (m)`.
    pub fn class(residue: i64, modulus: u64) -> Result<Self> {
        Self::new(modulus, [residue])
    }

    pub fn empty() -> Self {
        Self { modulus: 1, members: vec![false] }
    }

    pub fn all() -> Self {
        Self { modulus: 1, members: vec![true] }
    }

    fn canonical(mut modulus: u64, mut members: Vec<bool>) -> Self {
        for p in prime_factors(modulus) {
            while modulus.is_multiple_of(p) {
                let period = (modulus / p) as usize;
                let invariant = (0..members.len()).all(|r| members[r] == members[r % period]);
                if !invariant {
                    break;
                }
                members.truncate(period);
                modulus /= p;
            }
        }
        Self { modulus, members }
    }

    /// Minimal period.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> Vec<u64> {
        (0..self.modulus).filter(|&r| self.members[r as usize]).collect()
    }

    pub fn count(&self) -> u64 {
        self.members.iter().filter(|&&b| b).count() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains(&self, n: i64) -> bool {
        self.members[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// Membership of the class `r mod modulus()`.
    pub fn contains_residue(&self, r: u64) -> bool {
        self.members[(r % self.modulus) as usize]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        let m = lcm_u64(self.modulus, other.modulus)
            .filter(|&m| m <= MAX_MODULUS)
            .ok_or_else(|| {
                Error::InvalidPeriodicSet(format!(
                    "combined modulus lcm({}, {}) exceeds {MAX_MODULUS}",
                    self.modulus, other.modulus
                ))
            })?;
        Self::from_fn(m, |r| f(self.contains_residue(r), other.contains_residue(r)))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn complement(&self) -> Self {
        Self { modulus: self.modulus, members: self.members.iter().map(|b| !b).collect() }
    }

    /// Exact density `|residues| / M`; this is both `d(A)` and `μ(A)`.
    pub fn density(&self) -> Rational {
        Rational::new(self.count() as i128, self.modulus as i128)
    }
}

fn check_modulus(modulus: u64) -> Result<()> {
    if modulus == 0 || modulus > MAX_MODULUS {
        return Err(Error::InvalidPeriodicSet(format!(
            "modulus {modulus} outside 1..={MAX_MODULUS}"
        )));
    }
    Ok(())
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Set algebra: `b` is required for union and intersection and ignored for complement.
pub fn periodic_combine(op: SetOp, a: &PeriodicSet, b: Option<&PeriodicSet>) -> Result<PeriodicSet> {
    let need_b = || {
        b.ok_or_else(|| Error::InvalidArgument("binary set operation needs two operands".into()))
    };
    match op {
        SetOp::Union => a.union(need_b()?),
        SetOp::Intersection => a.intersection(need_b()?),
        SetOp::Complement => Ok(a.complement()),
    }
}

pub fn periodic_density(a: &PeriodicSet) -> Rational {
    a.density()
}

impl fmt::Display for PeriodicSet {
    /// `none`, or `r1,r2,... mod M` in canonical form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let residues = self.residues();
        if residues.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = residues.iter().map(u64::to_string).collect();
        write!(f, "{} mod {}", parts.join(","), self.modulus)
    }
}

impl FromStr for PeriodicSet {
    type Err = Error;

    /// Unions of `r mod m` terms separated by `|`; a term may list several
    /// residues (`0,1,2,4 mod 6`). `none` is the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "none" || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut acc = Self::empty();
        for term in s.split('|') {
            let (rs, m) = term
                .split_once("mod")
                .ok_or_else(|| Error::Parse(format!("expected `r mod m`, got {term:?}")))?;
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in {term:?}")))?;
            let rs = rs
                .split(',')
                .map(|r| r.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Parse(format!("bad residue in {term:?}")))?;
            acc = acc.union(&Self::new(m, rs)?)?;
        }
        Ok(acc)
    }
}
