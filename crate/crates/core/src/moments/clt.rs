use serde::Serialize;

use crate::chain::DivisibilityChain;
use crate::distribution::{ks_distance, ClosedFormCdf, EmpiricalCdf};
use crate::error::{Error, Result};
use crate::par;
use crate::sequence::{vdc_f64, SequenceSpec};

use super::{dispersion, mean_prefix, Averaging};

/// Bases of the default coprime family, one geometric chain per prime.
pub const CLT_PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

#[derive(Debug, Clone, Default)]
pub struct CltOptions {
    /// Points at which the EDF and Φ are tabulated.
    pub grid: Vec<f64>,
    /// Replace E = 1/2 and D² = 1/12 by the prefix moments of the summands.
    pub estimate_moments: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltRow {
    pub x: f64,
    pub edf: f64,
    pub normal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub k: usize,
    #[serde(rename = "N")]
    pub window: u64,
    pub chains: Vec<String>,
    #[serde(rename = "E")]
    pub mean: f64,
    #[serde(rename = "D2")]
    pub dispersion: f64,
    pub ks_to_normal: f64,
    pub argmax_x: f64,
    pub rows: Vec<CltRow>,
}

impl CltReport {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,edf,normal")?;
        for r in &self.rows {
            writeln!(out, "{},{},{}", r.x, r.edf, r.normal)?;
        }
        Ok(())
    }
}

/// Standardised sums of `k` van der Corput sequences over the geometric
/// chains of the first `k` primes, compared with the standard normal law.
pub fn clt_experiment(k: usize, window: u64, options: &CltOptions) -> Result<CltReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > CLT_PRIMES.len() {
        return Err(Error::InsufficientCoprimeChains { requested: k, available: CLT_PRIMES.len() });
    }
    let chains = CLT_PRIMES[..k]
        .iter()
        .map(|&p| DivisibilityChain::geometric_max(p))
        .collect::<Result<Vec<_>>>()?;
    clt_experiment_with_chains(&chains, window, options)
}

pub fn clt_experiment_with_chains(
    chains: &[DivisibilityChain],
    window: u64,
    options: &CltOptions,
) -> Result<CltReport> {
    if chains.is_empty() {
        return Err(Error::InvalidArgument("need at least one chain".into()));
    }
    if window == 0 {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    for (i, a) in chains.iter().enumerate() {
        for b in &chains[i + 1..] {
            if !a.is_coprime_to(b) {
                return Err(Error::InvalidArgument(format!("chains {a} and {b} are not coprime")));
            }
        }
        a.check_capacity(window)?;
    }
    // summing in a canonical order makes the statistic independent of the
    // order the chains were given in
    let mut chains = chains.to_vec();
    chains.sort_by(|a, b| a.terms().cmp(b.terms()));
    let k = chains.len();

    let (mean, disp) = if options.estimate_moments {
        let mut m = 0.0;
        let mut d = 0.0;
        for c in &chains {
            let s = SequenceSpec::vdc(c.clone());
            m += mean_prefix(&s, window)?.estimate;
            d += dispersion(&s, Averaging::Prefix(window))?.estimate;
        }
        (m / k as f64, d / k as f64)
    } else {
        (0.5, 1.0 / 12.0)
    };
    if !(disp > 0.0) {
        return Err(Error::InvalidArgument("summands have zero dispersion".into()));
    }
    let centre = k as f64 * mean;
    let scale = (k as f64 * disp).sqrt();

    let z = par::try_map_range(1, window + 1, |n| {
        let mut s = 0.0;
        for c in &chains {
            s += vdc_f64(n, c)?;
        }
        Ok((s - centre) / scale)
    })?;
    let edf = EmpiricalCdf::from_values(z)?;
    let normal = ClosedFormCdf::StandardNormal;
    let ks = ks_distance(&edf, &normal);
    let rows = options
        .grid
        .iter()
        .map(|&x| CltRow { x, edf: edf.eval(x), normal: normal.eval(x) })
        .collect();
    Ok(CltReport {
        k,
        window,
        chains: chains.iter().map(|c| c.to_string()).collect(),
        mean,
        dispersion: disp,
        ks_to_normal: ks.statistic,
        argmax_x: ks.argmax_x,
        rows,
    })
}
