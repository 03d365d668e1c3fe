//! Entropy estimation for exchangeable random graphs.
//!
//! A graph is modelled as `A_ij ~ Bernoulli(ρₙ f(ξ_i, ξ_j))` with latent `ξ_i ~ U(0, 1)`
//! and a graphon `f`; the target is `H(f) = ∬ h(ρₙ f(x, y)) dx dy` with `h` the binary
//! entropy in nats. The crate provides graphon models and their exact entropy, a
//! sampler, four plug-in estimators, block model fitting, a Monte-Carlo harness and
//! temporal edge-list ingestion.
//!
//! Numerical routines are generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the precision for common use.

pub mod blockfit;
pub mod config;
pub mod entropy;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod graphon;
pub mod ingest;
pub mod numeric;
pub mod sampler;
pub mod scalar;
pub mod simharness;
pub mod special;
pub mod stats;

pub use blockfit::{default_k, fit_labels, theta_mle, BlockFit, FitOptions};
pub use entropy::{binary_entropy, block_entropy};
pub use error::{Error, Result};
pub use estimators::{
    estimate, BlockCount, DegreeData, EntropyEstimate, Estimator, EstimatorOptions, Normalization, UsvtOptions,
};
pub use graph::Graph;
pub use graphon::{graphon_entropy, make_f1, make_f2, GraphonKind, GraphonSpec};
pub use sampler::{rho_schedule, sample_graph, sample_latents, LatentVector, Regime};
pub use scalar::Scalar;

pub type GraphonSpecF64 = GraphonSpec<f64>;
pub type GraphonSpecF32 = GraphonSpec<f32>;
pub type EntropyEstimateF64 = EntropyEstimate<f64>;
pub type EntropyEstimateF32 = EntropyEstimate<f32>;
pub type BlockFitF64 = BlockFit<f64>;
pub type BlockFitF32 = BlockFit<f32>;
pub type DegreeDataF64 = DegreeData<f64>;
pub type DegreeDataF32 = DegreeData<f32>;
