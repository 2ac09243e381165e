//! Empirical and closed-form distribution functions, KS distances,
//! Stieltjes convolution and empirical independence checks.
//!
//! All frequencies use the strict convention `#{n : v(n) < x}`.

mod closed_form;
mod convolve;
mod ecdf;
mod independence;
mod ks;

pub use closed_form::{cdf_value, point_mass_at_zero, ClosedFormCdf, GridCdf};
pub use convolve::{convolve, Convolution};
pub use ecdf::{empirical_cdf, empirical_cdf_range, EmpiricalCdf};
pub use independence::{independence_test, IndependenceReport};
pub use ks::{ks_distance, CdfRef, KsReport};
