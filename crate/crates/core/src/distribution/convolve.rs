use serde::Serialize;

use super::{ClosedFormCdf, GridCdf};
use crate::error::{Error, Result};
use crate::par;

/// Numeric `G(x) = ∫ F1(x - y) dF2(y)` on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convolution {
    #[serde(skip)]
    pub cdf: ClosedFormCdf,
    pub step: f64,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// An input was a grid approximation of a distribution with an atom.
    pub degenerate_input: bool,
}

impl Convolution {
    pub fn grid(&self) -> &GridCdf {
        match &self.cdf {
            ClosedFormCdf::NumericGrid(g) => g,
            _ => unreachable!("convolution results are numeric grids"),
        }
    }
}

/// Midpoint Stieltjes sum. The support of `F2` is cut into cells of width at
/// most `step`; each cell contributes `F1(x - midpoint) * ΔF2`. `G` is
/// tabulated on `[lo1 + lo2, hi1 + hi2]` with the same resolution.
pub fn convolve(f1: &ClosedFormCdf, f2: &ClosedFormCdf, step: f64) -> Result<Convolution> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let (a1, b1) = f1.support().ok_or(Error::UnboundedSupport)?;
    let (a2, b2) = f2.support().ok_or(Error::UnboundedSupport)?;

    let cells = ((b2 - a2) / step).ceil().max(1.0) as usize;
    let h2 = (b2 - a2) / cells as f64;
    let mass: Vec<(f64, f64)> = (0..cells)
        .map(|j| {
            let (y0, y1) = (a2 + j as f64 * h2, a2 + (j + 1) as f64 * h2);
            (0.5 * (y0 + y1), f2.eval(y1) - f2.eval(y0))
        })
        .filter(|&(_, dm)| dm != 0.0)
        .collect();

    let (lo, hi) = (a1 + a2, b1 + b2);
    let intervals = ((hi - lo) / step).ceil().max(1.0) as usize;
    let hx = (hi - lo) / intervals as f64;
    let xs: Vec<f64> = (0..=intervals).map(|i| lo + i as f64 * hx).collect();
    let mut fs: Vec<f64> = par::map_chunks(xs.len(), |r| {
        r.map(|i| mass.iter().map(|&(y, dm)| f1.eval(xs[i] - y) * dm).sum::<f64>())
            .collect::<Vec<_>>()
    })
    .concat();
    let mut running = 0.0f64;
    for f in fs.iter_mut() {
        running = running.max(f.clamp(0.0, 1.0));
        *f = running;
    }

    let degenerate = |f: &ClosedFormCdf| match f {
        ClosedFormCdf::NumericGrid(g) => g.xs()[g.xs().len() - 1] - g.xs()[0] < 2.0 * step,
        _ => false,
    };
    let points = xs.len();
    Ok(Convolution {
        cdf: ClosedFormCdf::NumericGrid(GridCdf::new(xs, fs)?),
        step,
        lo,
        hi,
        points,
        degenerate_input: degenerate(f1) || degenerate(f2),
    })
}
