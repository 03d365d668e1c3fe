//! Plug-in entropy estimators `Ĥ₁`–`Ĥ₄`.

mod blockmodel;
mod constant;
mod linalg;
mod lowrank;
mod separable;

use std::fmt;
use std::str::FromStr;

pub use blockmodel::{blockmodel_variance, entropy_blockmodel, entropy_blockmodel_at, BlockCount};
pub use constant::{constant_variance, entropy_constant, estimate_rho};
pub use linalg::symmetric_eigen;
pub use lowrank::{
    entropy_lowrank, matrix_entropy, usvt, usvt_threshold, ProbabilityMatrix, UsvtOptions, DEFAULT_ETA,
    DEFAULT_SVD_TOL,
};
pub use separable::{compute_g_hat, entropy_separable, separable_variance, DegreeData, Normalization};

use crate::blockfit::FitOptions;
use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::Scalar;

/// Probabilities are clipped into `[ε, 1−ε]` before entering `h` in plug-in sums.
pub const PROBABILITY_CLIP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    /// Erdős–Rényi plug-in.
    H1,
    /// Separable plug-in.
    H2,
    /// Stochastic block model (network histogram) plug-in.
    H3,
    /// USVT low-rank plug-in.
    H4,
}

impl Estimator {
    pub const ALL: [Estimator; 4] = [Estimator::H1, Estimator::H2, Estimator::H3, Estimator::H4];

    /// Parses a comma separated list such as `h1,h3`.
    pub fn parse_list(s: &str) -> Result<Vec<Estimator>> {
        let mut out = Vec::new();
        for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let e: Estimator = tok.parse()?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        if out.is_empty() {
            return Err(domain("no estimators given"));
        }
        Ok(out)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::H1 => "H1",
            Estimator::H2 => "H2",
            Estimator::H3 => "H3",
            Estimator::H4 => "H4",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(Estimator::H1),
            "h2" => Ok(Estimator::H2),
            "h3" => Ok(Estimator::H3),
            "h4" => Ok(Estimator::H4),
            other => Err(domain(format!("unknown estimator {other:?} (expected h1, h2, h3 or h4)"))),
        }
    }
}

/// A point estimate of graphon entropy in nats.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate<T> {
    pub estimator: Estimator,
    pub value: T,
    pub asymptotic_variance: Option<T>,
    pub n: usize,
    pub rho_hat: T,
}

impl<T: Scalar> EntropyEstimate<T> {
    pub const CSV_HEADER: &'static str = "estimator,n,rho_hat,value,variance";

    /// `estimator,n,rho_hat,value,variance`; the variance is empty when unavailable.
    /// With `bits`, value and variance are converted from nats.
    pub fn csv_row(&self, bits: bool) -> String {
        let (scale, scale2) = if bits {
            let s = 1.0 / std::f64::consts::LN_2;
            (s, s * s)
        } else {
            (1.0, 1.0)
        };
        let var = self.asymptotic_variance.map(|v| format!("{:e}", v.as_f64() * scale2)).unwrap_or_default();
        format!("{},{},{},{},{}", self.estimator, self.n, self.rho_hat.as_f64(), self.value.as_f64() * scale, var)
    }
}

/// Tuning knobs shared by all estimators.
#[derive(Clone, Debug, Default)]
pub struct EstimatorOptions {
    pub normalization: Normalization,
    pub k: BlockCount,
    pub fit: FitOptions,
    pub usvt: UsvtOptions,
}

/// Runs one estimator on `g`.
pub fn estimate<T: Scalar>(g: &Graph, estimator: Estimator, opts: &EstimatorOptions) -> Result<EntropyEstimate<T>> {
    match estimator {
        Estimator::H1 => entropy_constant(g),
        Estimator::H2 => entropy_separable(g, opts.normalization),
        Estimator::H3 => entropy_blockmodel(g, opts.k, &opts.fit).map(|(e, _)| e),
        Estimator::H4 => entropy_lowrank(g, &opts.usvt),
    }
}
