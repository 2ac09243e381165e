//! Polyadically continuous sequences and their distribution.
//!
//! The crate covers van der Corput sequences over divisibility chains, the
//! polyadic metric, exact densities of periodic sets, Buck density upper
//! bounds from arithmetic-progression covers, empirical and closed-form
//! distribution functions, Stieltjes convolution, and moment and
//! limit-theorem experiments over prefixes of the positive integers.
//!
//! Scans over large index ranges run on rayon when the `parallel` feature is
//! enabled (the default). Results do not depend on the thread count.

pub mod chain;
pub mod density;
pub mod distribution;
mod error;
mod grammar;
pub mod metric;
pub mod moments;
pub mod par;
pub mod periodic;
pub mod rational;
pub mod sequence;

pub use chain::{compose, decompose, DivisibilityChain, MixedRadixDigits};
pub use error::{Error, Result};
pub use metric::{distance_limit, polyadic_distance, DistanceBound};
pub use periodic::{cylinder_measure, periodic_combine, periodic_density, Cylinder, PeriodicSet, SetOp};
pub use rational::Rational;
pub use sequence::{IndexSequence, SequenceSpec};
