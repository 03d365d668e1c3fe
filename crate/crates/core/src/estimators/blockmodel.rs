use std::fmt;
use std::str::FromStr;

use crate::blockfit::{default_k, fit_labels, BlockFit, FitOptions};
use crate::entropy::{binary_entropy_slope, block_entropy};
use crate::error::{domain, Error, Result};
use crate::graph::{pair_count, Graph};
use crate::numeric::order_free_sum;
use crate::Scalar;

use super::{EntropyEstimate, Estimator};

/// Number of blocks for `Ĥ₃`: a fixed count or `round(√n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BlockCount {
    #[default]
    Auto,
    Fixed(usize),
}

impl BlockCount {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            BlockCount::Auto => default_k(n),
            BlockCount::Fixed(k) => k,
        }
    }
}

impl fmt::Display for BlockCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockCount::Auto => f.write_str("auto"),
            BlockCount::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for BlockCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(BlockCount::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(BlockCount::Fixed(k)),
            _ => Err(domain(format!("block count must be a positive integer or auto, got {s:?}"))),
        }
    }
}

/// Delta-method variance of `Ĥ₃` at fixed labels.
///
/// Each block pair `a ≤ b` enters `Ĥ₃` with weight `w_ab = h_a h_b / n²` (doubled off the
/// diagonal); its edge average has variance `θ̂_ab(1−θ̂_ab)/P_ab` under a homogeneous
/// within-block plug-in, giving `Σ_{a≤b} w_ab² h'(θ̂_ab)² θ̂_ab(1−θ̂_ab)/P_ab`.
pub fn blockmodel_variance<T: Scalar>(fit: &BlockFit<T>, n: usize) -> T {
    let k = fit.k();
    let n_t = T::from_count(n);
    let mut terms = Vec::with_capacity(k * (k + 1) / 2);
    for a in 0..k {
        for b in a..k {
            let pairs = fit.pair_counts[a * k + b];
            if pairs == 0 {
                continue;
            }
            let th = fit.theta_hat[a * k + b];
            let mut w = (T::from_count(fit.block_sizes[a]) / n_t) * (T::from_count(fit.block_sizes[b]) / n_t);
            if a != b {
                w = w * T::two();
            }
            let s = binary_entropy_slope(th);
            let v = s * s * th * (T::one() - th) / T::from_count(pairs as usize);
            terms.push(w * w * v);
        }
    }
    order_free_sum(terms)
}

/// Block-model entropy `Ĥ₃` for fixed labels (no fitting).
pub fn entropy_blockmodel_at<T: Scalar>(g: &Graph, fit: &BlockFit<T>) -> Result<EntropyEstimate<T>> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!("block model entropy needs at least 2 nodes, got {n}")));
    }
    let value = block_entropy(&fit.theta_hat, &fit.block_sizes, n)?;
    Ok(EntropyEstimate {
        estimator: Estimator::H3,
        value,
        asymptotic_variance: Some(blockmodel_variance(fit, n)),
        n,
        rho_hat: T::from_count(g.edge_count()) / T::from_count(pair_count(n)),
    })
}

/// Network-histogram plug-in `Ĥ₃`: fit a `k`-block model and evaluate the block entropy
/// of its edge averages.
pub fn entropy_blockmodel<T: Scalar>(
    g: &Graph,
    k: BlockCount,
    opts: &FitOptions,
) -> Result<(EntropyEstimate<T>, BlockFit<T>)> {
    let n = g.node_count();
    let k = k.resolve(n);
    if k > n {
        return Err(domain(format!("k = {k} exceeds the node count {n}")));
    }
    let fit = fit_labels(g, k, opts)?;
    let est = entropy_blockmodel_at(g, &fit)?;
    Ok((est, fit))
}
