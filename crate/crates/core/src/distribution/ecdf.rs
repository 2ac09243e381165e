use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::par;
use crate::sequence::SequenceSpec;

/// Step function `F_N(x) = #{i : v_i < x} / N` over a finite sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empirical distribution of an empty sample".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument("sample contains NaN".into()));
        }
        par::sort_f64(&mut values);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// `#{v < x} / N`
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v < x) as f64 / self.len() as f64
    }

    /// `#{v <= x} / N`, the limit from the right.
    pub fn eval_right(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    /// Distinct sample values with the counts strictly below and up to each.
    pub fn jumps(&self) -> impl Iterator<Item = (f64, usize, usize)> + '_ {
        let mut i = 0;
        std::iter::from_fn(move || {
            let x = *self.sorted.get(i)?;
            let start = i;
            while i < self.sorted.len() && self.sorted[i] == x {
                i += 1;
            }
            Some((x, start, i))
        })
    }

    /// CSV `x,F` with one row per distinct value; `F` is the value taken on
    /// `(x, next x]`, i.e. `#{v <= x} / N`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,F")?;
        let n = self.len() as f64;
        for (x, _, upto) in self.jumps() {
            writeln!(out, "{x},{}", upto as f64 / n)?;
        }
        Ok(())
    }
}

/// EDF of `v(1), ..., v(N)`.
pub fn empirical_cdf(spec: &SequenceSpec, window: u64) -> Result<EmpiricalCdf> {
    empirical_cdf_range(spec, 1, window + 1)
}

/// EDF of `v(lo), ..., v(hi - 1)`.
pub fn empirical_cdf_range(spec: &SequenceSpec, lo: u64, hi: u64) -> Result<EmpiricalCdf> {
    EmpiricalCdf::from_values(spec.values(lo, hi)?)
}
