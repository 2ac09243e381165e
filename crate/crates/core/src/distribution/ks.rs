use serde::Serialize;

use super::{ClosedFormCdf, EmpiricalCdf};
use crate::par;

/// Either kind of distribution function.
#[derive(Debug, Clone, Copy)]
pub enum CdfRef<'a> {
    Empirical(&'a EmpiricalCdf),
    Closed(&'a ClosedFormCdf),
}

impl<'a> From<&'a EmpiricalCdf> for CdfRef<'a> {
    fn from(f: &'a EmpiricalCdf) -> Self {
        CdfRef::Empirical(f)
    }
}

impl<'a> From<&'a ClosedFormCdf> for CdfRef<'a> {
    fn from(f: &'a ClosedFormCdf) -> Self {
        CdfRef::Closed(f)
    }
}

/// Sup-norm distance and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsReport {
    pub statistic: f64,
    pub argmax_x: f64,
    /// Sample size when an empirical function is involved.
    #[serde(rename = "N")]
    pub n: Option<usize>,
}

/// Resolution of the sampling grid used between two closed forms.
const CLOSED_GRID_POINTS: usize = 1 << 16;

/// Half-width of the window used for unbounded supports.
const NORMAL_SPAN: f64 = 10.0;

pub fn ks_distance<'a, 'b>(a: impl Into<CdfRef<'a>>, b: impl Into<CdfRef<'b>>) -> KsReport {
    match (a.into(), b.into()) {
        (CdfRef::Empirical(e), CdfRef::Closed(c)) | (CdfRef::Closed(c), CdfRef::Empirical(e)) => empirical_vs_closed(e, c),
        (CdfRef::Empirical(e1), CdfRef::Empirical(e2)) => empirical_vs_empirical(e1, e2),
        (CdfRef::Closed(c1), CdfRef::Closed(c2)) => closed_vs_closed(c1, c2),
    }
}

fn better(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    // larger statistic wins, ties keep the smaller x
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// A continuous `F` is compared with both one-sided limits of the step
/// function at every sample: `|i/N - F(v_i)|` and `|(i+1)/N - F(v_i)|`.
fn empirical_vs_closed(e: &EmpiricalCdf, c: &ClosedFormCdf) -> KsReport {
    let values = e.sorted_values();
    let n = values.len() as f64;
    let (statistic, argmax_x) = par::map_chunks(values.len(), |r| {
        r.fold((0.0, f64::INFINITY), |acc, i| {
            let x = values[i];
            let f = c.eval(x);
            let d = (i as f64 / n - f).abs().max(((i + 1) as f64 / n - f).abs());
            better(acc, (d, x))
        })
    })
    .into_iter()
    .fold((0.0, f64::INFINITY), better);
    KsReport { statistic, argmax_x, n: Some(values.len()) }
}

fn empirical_vs_empirical(a: &EmpiricalCdf, b: &EmpiricalCdf) -> KsReport {
    let (va, vb) = (a.sorted_values(), b.sorted_values());
    let (na, nb) = (va.len() as f64, vb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut best = (0.0, f64::INFINITY);
    while i < va.len() || j < vb.len() {
        let x = match (va.get(i), vb.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        let left = (i as f64 / na - j as f64 / nb).abs();
        while i < va.len() && va[i] == x {
            i += 1;
        }
        while j < vb.len() && vb[j] == x {
            j += 1;
        }
        let right = (i as f64 / na - j as f64 / nb).abs();
        best = better(best, (left.max(right), x));
    }
    KsReport { statistic: best.0, argmax_x: best.1, n: Some(va.len().max(vb.len())) }
}

fn closed_vs_closed(a: &ClosedFormCdf, b: &ClosedFormCdf) -> KsReport {
    let span = |c: &ClosedFormCdf| c.support().unwrap_or((-NORMAL_SPAN, NORMAL_SPAN));
    let (a_lo, a_hi) = span(a);
    let (b_lo, b_hi) = span(b);
    let (lo, hi) = (a_lo.min(b_lo), a_hi.max(b_hi));
    let step = (hi - lo) / CLOSED_GRID_POINTS as f64;
    let mut xs: Vec<f64> = (0..=CLOSED_GRID_POINTS).map(|i| lo + i as f64 * step).collect();
    xs.extend(a.breakpoints());
    xs.extend(b.breakpoints());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let (statistic, argmax_x) = xs
        .iter()
        .map(|&x| ((a.eval(x) - b.eval(x)).abs(), x))
        .fold((0.0, f64::INFINITY), better);
    KsReport { statistic, argmax_x, n: None }
}
