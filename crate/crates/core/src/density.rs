//! Asymptotic density on prefixes and Buck density upper bounds.
//!
//! `μ*(S)` is the infimum of `Σ 1/m_ℓ` over finite covers of `S` by
//! progressions `r_ℓ + (m_ℓ)`. Here covers are restricted to a single modulus
//! drawn from the divisors of a maximal modulus `M`, and occupied classes are
//! detected on the window `[1, N]`. For periodic sets whose period divides `M`
//! the bound is exact; otherwise it estimates `μ*` from the window.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grammar::{parse_call, split_args};
use crate::par;
use crate::periodic::{divisors, PeriodicSet};
use crate::rational::{format_rational, to_f64, Rational};

/// Members of a set listed in a file, decidable up to `limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    path: String,
    members: BTreeSet<u64>,
    limit: u64,
}

impl Bitmap {
    /// Reads one positive integer per line; blank lines and `#` comments are
    /// skipped. Without an explicit limit, membership is decidable up to the
    /// largest listed member.
    pub fn load(path: impl AsRef<Path>, limit: Option<u64>) -> Result<Self> {
        let path_ref = path.as_ref();
        let text = std::fs::read_to_string(path_ref)?;
        let mut members = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n: u64 = line.parse().map_err(|_| {
                Error::Parse(format!("{}:{}: not a positive integer: {line:?}", path_ref.display(), i + 1))
            })?;
            if n == 0 {
                return Err(Error::Parse(format!("{}:{}: members must be positive", path_ref.display(), i + 1)));
            }
            members.insert(n);
        }
        let largest = members.last().copied().unwrap_or(0);
        let limit = limit.unwrap_or(largest);
        if largest > limit {
            return Err(Error::InvalidArgument(format!("member {largest} exceeds declared window {limit}")));
        }
        Ok(Self { path: path_ref.display().to_string(), members, limit })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

/// A subset of the positive integers with decidable membership on a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetSpec {
    Periodic(PeriodicSet),
    Squares,
    Primes,
    Finite(BTreeSet<u64>),
    Bitmap(Bitmap),
    Complement(Box<SetSpec>),
    Union(Vec<SetSpec>),
}

impl SetSpec {
    pub fn complement(self) -> Self {
        SetSpec::Complement(Box::new(self))
    }

    /// Largest `N` for which membership on `[1, N]` is known.
    pub fn decidable_limit(&self) -> u64 {
        match self {
            SetSpec::Bitmap(b) => b.limit,
            SetSpec::Complement(s) => s.decidable_limit(),
            SetSpec::Union(parts) => parts.iter().map(Self::decidable_limit).min().unwrap_or(u64::MAX),
            _ => u64::MAX,
        }
    }

    /// Membership flags for `0..=window`; index 0 is always false.
    pub fn membership(&self, window: u64) -> Result<Vec<bool>> {
        let limit = self.decidable_limit();
        if window > limit {
            return Err(Error::WindowUndecidable { window, limit });
        }
        let len = window as usize + 1;
        let mut flags = match self {
            SetSpec::Periodic(set) => {
                par::map_chunks(len, |r| r.map(|n| set.contains_residue(n as u64)).collect::<Vec<_>>()).concat()
            }
            SetSpec::Squares => {
                let mut flags = vec![false; len];
                (1..).map(|k: u64| k * k).take_while(|&s| s <= window).for_each(|s| flags[s as usize] = true);
                flags
            }
            SetSpec::Primes => sieve(window),
            SetSpec::Finite(members) => mark(len, members.range(..=window)),
            SetSpec::Bitmap(b) => mark(len, b.members.range(..=window)),
            SetSpec::Complement(s) => s.membership(window)?.into_iter().map(|b| !b).collect(),
            SetSpec::Union(parts) => {
                let mut flags = vec![false; len];
                for p in parts {
                    for (f, b) in flags.iter_mut().zip(p.membership(window)?) {
                        *f |= b;
                    }
                }
                flags
            }
        };
        flags[0] = false;
        Ok(flags)
    }
}

fn mark<'a>(len: usize, members: impl Iterator<Item = &'a u64>) -> Vec<bool> {
    let mut flags = vec![false; len];
    for &n in members {
        flags[n as usize] = true;
    }
    flags
}

fn sieve(window: u64) -> Vec<bool> {
    let n = window as usize;
    let mut flags = vec![true; n + 1];
    flags[0] = false;
    if n >= 1 {
        flags[1] = false;
    }
    let mut p = 2;
    while p * p <= n {
        if flags[p] {
            (p * p..=n).step_by(p).for_each(|m| flags[m] = false);
        }
        p += 1;
    }
    flags
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Periodic(set) => write!(f, "periodic({set})"),
            SetSpec::Squares => f.write_str("squares"),
            SetSpec::Primes => f.write_str("primes"),
            SetSpec::Finite(members) => {
                let parts: Vec<String> = members.iter().map(u64::to_string).collect();
                write!(f, "finite({})", parts.join(","))
            }
            SetSpec::Bitmap(b) => write!(f, "bitmap({},{})", b.path, b.limit),
            SetSpec::Complement(s) => write!(f, "complement({s})"),
            SetSpec::Union(parts) => {
                let parts: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "union({})", parts.join(","))
            }
        }
    }
}

impl FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, inner) = parse_call(s)?;
        match (name, inner) {
            ("squares", None) => Ok(SetSpec::Squares),
            ("primes", None) => Ok(SetSpec::Primes),
            ("empty", None) => Ok(SetSpec::Finite(BTreeSet::new())),
            ("all", None) => Ok(SetSpec::Periodic(PeriodicSet::all())),
            ("periodic", Some(inner)) => Ok(SetSpec::Periodic(inner.parse()?)),
            ("finite", Some(inner)) => {
                let members = split_args(inner)?
                    .into_iter()
                    .filter(|t| !t.is_empty())
                    .map(|t| match t.parse::<u64>() {
                        Ok(n) if n > 0 => Ok(n),
                        _ => Err(Error::Parse(format!("finite set members must be positive integers: {t:?}"))),
                    })
                    .collect::<Result<_>>()?;
                Ok(SetSpec::Finite(members))
            }
            ("bitmap", Some(inner)) => {
                // an optional trailing `,N` declares the window
                match inner.rsplit_once(',').and_then(|(p, n)| Some((p, n.trim().parse::<u64>().ok()?))) {
                    Some((path, limit)) => Ok(SetSpec::Bitmap(Bitmap::load(path.trim(), Some(limit))?)),
                    None => Ok(SetSpec::Bitmap(Bitmap::load(inner.trim(), None)?)),
                }
            }
            ("complement", Some(inner)) => Ok(inner.parse::<SetSpec>()?.complement()),
            ("union", Some(inner)) => {
                Ok(SetSpec::Union(split_args(inner)?.into_iter().map(str::parse).collect::<Result<_>>()?))
            }
            _ => Err(Error::Parse(format!("unknown set {s:?}"))),
        }
    }
}

/// How a density value was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum DensityMethod {
    ExactPeriodic { modulus: u64 },
    Prefix { window: u64 },
    CoverBound { max_modulus: u64, window: u64, witness_modulus: u64, exact: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityEstimate {
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    #[serde(flatten)]
    pub method: DensityMethod,
}

impl DensityEstimate {
    pub fn value_f64(&self) -> f64 {
        to_f64(&self.value)
    }

    pub fn method_name(&self) -> &'static str {
        match self.method {
            DensityMethod::ExactPeriodic { .. } => "exact-periodic",
            DensityMethod::Prefix { .. } => "prefix",
            DensityMethod::CoverBound { .. } => "cover-bound",
        }
    }

    /// `key=value` parameters separated by `;`.
    pub fn params(&self) -> String {
        match &self.method {
            DensityMethod::ExactPeriodic { modulus } => format!("modulus={modulus}"),
            DensityMethod::Prefix { window } => format!("window={window}"),
            DensityMethod::CoverBound { max_modulus, window, witness_modulus, exact } => format!(
                "max_modulus={max_modulus};window={window};witness_modulus={witness_modulus};exact={exact}"
            ),
        }
    }
}

/// Progressions `r + (m)` witnessing `μ*(S) <= Σ 1/m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverCertificate {
    pub progressions: Vec<(u64, u64)>,
    #[serde(with = "crate::rational::serde_str")]
    pub bound: Rational,
}

impl CoverCertificate {
    /// Checks that every member of `S` in `[1, window]` lies in some progression.
    pub fn verify(&self, set: &SetSpec, window: u64) -> Result<bool> {
        let flags = set.membership(window)?;
        Ok(flags
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .all(|(n, _)| self.progressions.iter().any(|&(r, m)| n as u64 % m == r)))
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.progressions.iter().map(|(r, m)| format!("{r} mod {m}")).collect();
        format!("{} [{}]", format_rational(&self.bound), parts.join(" | "))
    }
}

/// Exact density of a periodic set, `None` for predicate sets.
pub fn exact_density(set: &SetSpec) -> Option<DensityEstimate> {
    match set {
        SetSpec::Periodic(p) => Some(DensityEstimate {
            value: p.density(),
            method: DensityMethod::ExactPeriodic { modulus: p.modulus() },
        }),
        _ => None,
    }
}

/// `card(S ∩ [1, N]) / N`.
pub fn prefix_density(set: &SetSpec, window: u64) -> Result<DensityEstimate> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let flags = set.membership(window)?;
    let count = par::map_chunks(flags.len(), |r| flags[r].iter().filter(|&&b| b).count() as u64)
        .into_iter()
        .sum::<u64>();
    Ok(DensityEstimate {
        value: Rational::new(count as i128, window as i128),
        method: DensityMethod::Prefix { window },
    })
}

/// Best single-modulus cover over the divisors of `max_modulus`.
pub fn buck_cover_bound(set: &SetSpec, max_modulus: u64, window: u64) -> Result<(DensityEstimate, CoverCertificate)> {
    if max_modulus == 0 {
        return Err(Error::InvalidArgument("max modulus must be positive".into()));
    }
    if window < max_modulus {
        return Err(Error::WindowTooSmall { window, modulus: max_modulus });
    }
    let flags = set.membership(window)?;
    let occupied = occupied_classes(&flags, max_modulus);

    let mut best: Option<(Rational, u64, Vec<bool>)> = None;
    for m in divisors(max_modulus) {
        let mut classes = vec![false; m as usize];
        for (r, &o) in occupied.iter().enumerate() {
            classes[r % m as usize] |= o;
        }
        let ratio = Rational::new(classes.iter().filter(|&&b| b).count() as i128, m as i128);
        if best.as_ref().is_none_or(|(b, _, _)| ratio < *b) {
            best = Some((ratio, m, classes));
        }
    }
    let (bound, witness, classes) = best.expect("1 divides every modulus");
    let progressions = classes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(r, _)| (r as u64, witness))
        .collect();
    let exact = matches!(set, SetSpec::Periodic(p) if max_modulus.is_multiple_of(p.modulus()));
    Ok((
        DensityEstimate {
            value: bound,
            method: DensityMethod::CoverBound { max_modulus, window, witness_modulus: witness, exact },
        },
        CoverCertificate { progressions, bound },
    ))
}

/// `occupied[r]` iff some member `n <= window` has `n ≡ r (mod m)`.
fn occupied_classes(flags: &[bool], m: u64) -> Vec<bool> {
    let window = flags.len() as u64 - 1;
    par::map_chunks(m as usize, |rs| {
        rs.map(|r| {
            let first = if r == 0 { m } else { r as u64 };
            (first..=window).step_by(m as usize).any(|n| flags[n as usize])
        })
        .collect::<Vec<_>>()
    })
    .concat()
}

/// `bound(S) + bound(N \ S) - 1`; zero for Buck measurable periodic sets.
pub fn measurability_gap(set: &SetSpec, max_modulus: u64, window: u64) -> Result<Rational> {
    let (inner, _) = buck_cover_bound(set, max_modulus, window)?;
    let (outer, _) = buck_cover_bound(&set.clone().complement(), max_modulus, window)?;
    Ok(inner.value + outer.value - Rational::from_integer(1))
}
