use crate::entropy::{binary_entropy_slope, binary_entropy_unchecked};
use crate::error::{domain, Result};
use crate::graph::{pair_count, Graph};
use crate::Scalar;

use super::{EntropyEstimate, Estimator};

/// Edge density `ρ̂ = Σ_{i<j} A_ij / C(n, 2)`.
pub fn estimate_rho<T: Scalar>(g: &Graph) -> Result<T> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!("edge density needs at least 2 nodes, got {n}")));
    }
    Ok(T::from_count(g.edge_count()) / T::from_count(pair_count(n)))
}

/// Delta-method variance of `h(ρ̂)`: `ln²((1−ρ̂)/ρ̂) · ρ̂(1−ρ̂) / C(n, 2)`.
pub fn constant_variance<T: Scalar>(rho_hat: T, pairs: usize) -> T {
    let s = binary_entropy_slope(rho_hat);
    s * s * rho_hat * (T::one() - rho_hat) / T::from_count(pairs)
}

/// Erdős–Rényi plug-in `Ĥ₁ = h(ρ̂)`.
pub fn entropy_constant<T: Scalar>(g: &Graph) -> Result<EntropyEstimate<T>> {
    let rho: T = estimate_rho(g)?;
    let n = g.node_count();
    Ok(EntropyEstimate {
        estimator: Estimator::H1,
        value: binary_entropy_unchecked(rho),
        asymptotic_variance: Some(constant_variance(rho, pair_count(n))),
        n,
        rho_hat: rho,
    })
}
