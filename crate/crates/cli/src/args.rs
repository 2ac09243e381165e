use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "polyadic", version, about = "Experiments on polyadically continuous sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// key=value file whose entries act as flags; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Run every scan on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Mixed-radix digits of n and its van der Corput value.
    Digits(DigitsArgs),
    /// Polyadic distance: partial sum, tail bound and exact limit.
    Metric(MetricArgs),
    /// van der Corput values for a chain.
    Vdc(VdcArgs),
    /// Empirical distribution function of a sequence.
    Edf(EdfArgs),
    /// KS distance between a sequence's EDF and a closed-form CDF.
    Ks(KsArgs),
    /// Exact or prefix density of a set.
    Density(DensityArgs),
    /// Buck cover bound with its certificate.
    Buck(BuckArgs),
    /// Measurability gap of a set.
    Gap(GapArgs),
    /// Numeric Stieltjes convolution of two CDFs.
    Convolve(ConvolveArgs),
    /// Factorization test for the joint distribution of several sequences.
    Independence(IndependenceArgs),
    /// Prefix or modulus means.
    Mean(MeanArgs),
    /// Prefix or modulus dispersions.
    Dispersion(DispersionArgs),
    /// Means along index sequences.
    WeightedMean(WeightedMeanArgs),
    /// Chebyshev inequality check.
    Chebyshev(ChebyshevArgs),
    /// Joint moment against the product of separate moments.
    Products(ProductsArgs),
    /// Standardised sums of coprime van der Corput sequences against Φ.
    Clt(CltArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DigitsArgs {
    #[arg(long)]
    pub chain: String,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub a: Vec<i64>,
    #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub b: Vec<i64>,
    #[arg(long, default_value_t = 64)]
    pub n_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct VdcArgs {
    #[arg(long)]
    pub chain: String,
    /// Explicit arguments.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
    pub n: Vec<u64>,
    /// First argument of a half-open range.
    #[arg(long, requires = "to")]
    pub from: Option<u64>,
    #[arg(long, requires = "from")]
    pub to: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct EdfArgs {
    #[arg(long)]
    pub seq: String,
    /// Number of terms.
    #[arg(long)]
    pub n: u64,
    /// First index; the window is from..from+n.
    #[arg(long, default_value_t = 1)]
    pub from: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct KsArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 1)]
    pub from: u64,
    /// uniform, sum, product, normal or step:h
    #[arg(long)]
    pub against: String,
    /// Points at which the reference CDF is also reported.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub at: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub set: String,
    /// Prefix window; the exact periodic density is used when absent.
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct BuckArgs {
    #[arg(long, required_unless_present = "random")]
    pub set: Option<String>,
    #[arg(long)]
    pub max_modulus: u64,
    /// Window; defaults to 10 * max-modulus.
    #[arg(long)]
    pub n: Option<u64>,
    /// Draw this many random periodic sets with modulus <= max-modulus.
    #[arg(long, conflicts_with = "set")]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub max_modulus: u64,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvolveArgs {
    #[arg(long)]
    pub f1: String,
    #[arg(long)]
    pub f2: String,
    #[arg(long)]
    pub step: f64,
    /// Closed form to measure the sup-norm error against.
    #[arg(long)]
    pub compare: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct IndependenceArgs {
    #[arg(long, required = true, num_args = 1)]
    pub seq: Vec<String>,
    /// Axis thresholds as start:stop:step or a comma list; one per
    /// sequence, or one shared by all.
    #[arg(long, required = true, allow_hyphen_values = true)]
    pub grid: Vec<String>,
    #[arg(long)]
    pub n: u64,
    /// Also test the first sequence against itself.
    #[arg(long)]
    pub control: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MeanArgs {
    #[arg(long)]
    pub seq: String,
    /// Prefix window.
    #[arg(long)]
    pub n: Option<u64>,
    /// Moduli for full-period averages.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Vec<u64>,
    /// Report the dispersion next to each mean.
    #[arg(long)]
    pub dispersion: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DispersionArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub modulus: Vec<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct WeightedMeanArgs {
    #[arg(long)]
    pub seq: String,
    /// identity, beatty:<const> or affine:a,b (repeatable).
    #[arg(long, default_value = "identity")]
    pub index: Vec<String>,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ChebyshevArgs {
    #[arg(long)]
    pub seq: String,
    #[arg(long, required = true, value_delimiter = ',')]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ProductsArgs {
    #[arg(long, required = true)]
    pub seq: Vec<String>,
    /// One per sequence: identity, square, affine(a,b) or poly(c0,...).
    #[arg(long, required = true)]
    pub transform: Vec<String>,
    #[arg(long, default_value = "identity")]
    pub index: String,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CltArgs {
    /// Numbers of summands, each using the first k prime bases.
    #[arg(long, value_delimiter = ',', conflicts_with = "chain")]
    pub k: Vec<usize>,
    /// Explicit pairwise coprime chains (repeatable).
    #[arg(long)]
    pub chain: Vec<String>,
    #[arg(long)]
    pub n: u64,
    /// Points at which EDF and Φ are tabulated.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Estimate E and D² from the summands.
    #[arg(long)]
    pub estimate_moments: bool,
}
