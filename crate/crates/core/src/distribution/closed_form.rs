use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Piecewise linear distribution function through `(xs[i], fs[i])`, equal to
/// 0 left of the grid and 1 right of it.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCdf {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl GridCdf {
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        if xs.len() != fs.len() || xs.is_empty() {
            return Err(Error::InvalidArgument("grid needs matching, non-empty x and F columns".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid x values must be strictly increasing".into()));
        }
        if fs.windows(2).any(|w| w[0] > w[1]) || fs.iter().any(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::InvalidArgument("grid F values must be non-decreasing in [0, 1]".into()));
        }
        Ok(Self { xs, fs })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x < self.xs[0] {
            return 0.0;
        }
        if x >= self.xs[last] {
            return if x == self.xs[last] { self.fs[last] } else { 1.0 };
        }
        let i = self.xs.partition_point(|&g| g <= x) - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.fs[i] + t * (self.fs[i + 1] - self.fs[i])
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,F")?;
        for (x, f) in self.xs.iter().zip(&self.fs) {
            writeln!(out, "{x},{f}")?;
        }
        Ok(())
    }
}

/// Analytic distribution functions.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormCdf {
    /// `F(x) = x` on `[0, 1]`.
    BuckUniform,
    /// Sum of two independent uniforms: `x²/2` on `[0,1]`, `2x - x²/2 - 1` on `[1,2]`.
    SumOfTwoUniforms,
    /// Product of two independent uniforms: `x(1 - ln x)` on `(0,1)`.
    ProductOfTwoUniforms,
    StandardNormal,
    NumericGrid(GridCdf),
}

impl ClosedFormCdf {
    pub fn eval(&self, x: f64) -> f64 {
        cdf_value(self, x)
    }

    /// Interval outside which the function is 0 or 1, if bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            ClosedFormCdf::BuckUniform | ClosedFormCdf::ProductOfTwoUniforms => Some((0.0, 1.0)),
            ClosedFormCdf::SumOfTwoUniforms => Some((0.0, 2.0)),
            ClosedFormCdf::StandardNormal => None,
            ClosedFormCdf::NumericGrid(g) => Some((g.xs[0], *g.xs.last().unwrap())),
        }
    }

    /// Points where the formula changes branch.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ClosedFormCdf::BuckUniform | ClosedFormCdf::ProductOfTwoUniforms => vec![0.0, 1.0],
            ClosedFormCdf::SumOfTwoUniforms => vec![0.0, 1.0, 2.0],
            ClosedFormCdf::StandardNormal => vec![0.0],
            ClosedFormCdf::NumericGrid(g) => g.xs.clone(),
        }
    }
}

pub fn cdf_value(cdf: &ClosedFormCdf, x: f64) -> f64 {
    match cdf {
        ClosedFormCdf::BuckUniform => x.clamp(0.0, 1.0),
        ClosedFormCdf::SumOfTwoUniforms => {
            if x <= 0.0 {
                0.0
            } else if x <= 1.0 {
                x * x / 2.0
            } else if x <= 2.0 {
                2.0 * x - x * x / 2.0 - 1.0
            } else {
                1.0
            }
        }
        ClosedFormCdf::ProductOfTwoUniforms => {
            if x <= 0.0 {
                0.0
            } else if x < 1.0 {
                x * (1.0 - x.ln())
            } else {
                1.0
            }
        }
        ClosedFormCdf::StandardNormal => Normal::standard().cdf(x),
        ClosedFormCdf::NumericGrid(g) => g.eval(x),
    }
}

impl fmt::Display for ClosedFormCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedFormCdf::BuckUniform => "uniform",
            ClosedFormCdf::SumOfTwoUniforms => "sum",
            ClosedFormCdf::ProductOfTwoUniforms => "product",
            ClosedFormCdf::StandardNormal => "normal",
            ClosedFormCdf::NumericGrid(_) => "grid",
        })
    }
}

impl FromStr for ClosedFormCdf {
    type Err = Error;

    /// `uniform`, `sum`, `product`, `normal`, or `step:h` for a point mass at
    /// zero smeared over `[-h/2, h/2]`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "uniform" | "buck-uniform" => Ok(ClosedFormCdf::BuckUniform),
            "sum" => Ok(ClosedFormCdf::SumOfTwoUniforms),
            "product" => Ok(ClosedFormCdf::ProductOfTwoUniforms),
            "normal" => Ok(ClosedFormCdf::StandardNormal),
            other => match other.strip_prefix("step:").map(str::parse::<f64>) {
                Some(Ok(h)) if h > 0.0 => Ok(point_mass_at_zero(h)),
                _ => Err(Error::Parse(format!("unknown distribution {s:?}"))),
            },
        }
    }
}

/// Grid approximation of the unit step at 0 over a cell of width `h`.
pub fn point_mass_at_zero(h: f64) -> ClosedFormCdf {
    ClosedFormCdf::NumericGrid(GridCdf { xs: vec![-h / 2.0, h / 2.0], fs: vec![0.0, 1.0] })
}

#[cfg(test)]
mod tests {
    use super::*;

    const KINDS: [ClosedFormCdf; 4] = [
        ClosedFormCdf::BuckUniform,
        ClosedFormCdf::SumOfTwoUniforms,
        ClosedFormCdf::ProductOfTwoUniforms,
        ClosedFormCdf::StandardNormal,
    ];

    #[test]
    fn printed_values() {
        assert_eq!(cdf_value(&ClosedFormCdf::SumOfTwoUniforms, 1.0), 0.5);
        assert_eq!(cdf_value(&ClosedFormCdf::SumOfTwoUniforms, 2.0), 1.0);
        assert_eq!(cdf_value(&ClosedFormCdf::ProductOfTwoUniforms, 1.0), 1.0);
        assert_eq!(cdf_value(&ClosedFormCdf::BuckUniform, 0.3), 0.3);
        assert_eq!(cdf_value(&ClosedFormCdf::BuckUniform, -0.3), 0.0);
        assert_eq!(cdf_value(&ClosedFormCdf::StandardNormal, 0.0), 0.5);
        let v = cdf_value(&ClosedFormCdf::StandardNormal, 1.96);
        assert!((v - 0.975_002_104_851_779_5).abs() < 1e-10, "{v}");
    }

    #[test]
    fn monotone_continuous_with_limits() {
        for kind in KINDS {
            let xs: Vec<f64> = (0..=40_000).map(|i| -10.0 + i as f64 * 5e-4).collect();
            let fs: Vec<f64> = xs.iter().map(|&x| kind.eval(x)).collect();
            assert!(fs.windows(2).all(|w| w[0] <= w[1]), "{kind}");
            // Lipschitz-scale continuity on the dense grid
            assert!(fs.windows(2).all(|w| w[1] - w[0] < 5e-3), "{kind}");
            assert_eq!(kind.eval(-1e9), 0.0);
            assert_eq!(kind.eval(1e9), 1.0);
        }
        // both branches of the sum formula agree at the seam, likewise x → 1⁻ for the product
        let left = cdf_value(&ClosedFormCdf::ProductOfTwoUniforms, 1.0 - 1e-12);
        assert!((left - 1.0).abs() < 1e-11);
    }

    #[test]
    fn grid_interpolates() {
        let g = GridCdf::new(vec![0.0, 1.0, 3.0], vec![0.0, 0.5, 1.0]).unwrap();
        assert_eq!(g.eval(-1.0), 0.0);
        assert_eq!(g.eval(0.5), 0.25);
        assert_eq!(g.eval(2.0), 0.75);
        assert_eq!(g.eval(3.0), 1.0);
        assert_eq!(g.eval(4.0), 1.0);
        assert!(GridCdf::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(GridCdf::new(vec![0.0, 1.0], vec![0.6, 0.5]).is_err());
        assert!(GridCdf::new(vec![], vec![]).is_err());
    }

    #[test]
    fn names() {
        for s in ["uniform", "sum", "product", "normal"] {
            assert_eq!(s.parse::<ClosedFormCdf>().unwrap().to_string(), s);
        }
        assert_eq!("step:0.01".parse::<ClosedFormCdf>().unwrap().support(), Some((-0.005, 0.005)));
        assert!("step:0".parse::<ClosedFormCdf>().is_err());
        assert!("cauchy".parse::<ClosedFormCdf>().is_err());
    }
}
