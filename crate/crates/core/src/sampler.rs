//! Exchangeable random graph generation: `ξ ~ U(0,1)ⁿ`, then `A_ij ~ Bernoulli(ρₙ f(ξ_i, ξ_j))`.

use std::fmt;
use std::str::FromStr;

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::graph::Graph;
use crate::graphon::GraphonSpec;
use crate::Scalar;

/// Latent node positions `ξ`, all strictly inside `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatentVector(Vec<f64>);

impl LatentVector {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if let Some(x) = xi.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
            return Err(domain(format!("latent positions must lie in (0, 1), found {x}")));
        }
        Ok(Self(xi))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Reorders entries: position `perm[i]` receives entry `i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = vec![0.0; self.0.len()];
        for (i, &p) in perm.iter().enumerate() {
            out[p] = self.0[i];
        }
        Self(out)
    }
}

/// SplitMix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `index` under `master`; distinct indices give independent streams.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master) ^ mix64(index.wrapping_mul(0xD1B5_4A32_D192_ED03)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sample_latents(n: usize, seed: u64) -> Result<LatentVector> {
    if n == 0 {
        return Err(domain("cannot sample latents for zero nodes"));
    }
    let mut rng = rng_from_seed(seed);
    Ok(LatentVector((0..n).map(|_| Open01.sample(&mut rng)).collect()))
}

/// Draws `A_ij ~ Bernoulli(ρₙ f(ξ_i, ξ_j))` independently for `i < j`.
///
/// The pair loop is sequential in row-major order, so the graph is a pure
/// function of `(spec, xi, seed)`.
pub fn sample_graph<T: Scalar>(spec: &GraphonSpec<T>, xi: &LatentVector, seed: u64) -> Graph {
    let n = xi.len();
    let pos: Vec<T> = xi.as_slice().iter().map(|&x| T::lit(x)).collect();
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let p = spec.eval(pos[i], pos[j]).as_f64();
            let u: f64 = rng.random();
            if u < p {
                g.add_edge(i, j);
            }
        }
    }
    g.with_latents(xi.as_slice().to_vec())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    Dense,
    Sparse,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Dense => "dense",
            Regime::Sparse => "sparse",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(Regime::Dense),
            "sparse" => Ok(Regime::Sparse),
            other => Err(domain(format!("unknown regime {other:?} (expected dense or sparse)"))),
        }
    }
}

/// Sparse-regime exponent on `log n`; any exponent above 3 gives `ρₙ = ω(n⁻¹ log³ n)`.
pub const SPARSE_LOG_EXPONENT: f64 = 3.5;

/// Sparsity scale for `n` nodes: `level` when dense, `min(level, (ln n)^3.5 / n)` when sparse.
///
/// For `n < 3` the sparse formula degenerates, so `level` is returned.
pub fn rho_schedule<T: Scalar>(n: usize, regime: Regime, level: T) -> Result<T> {
    if !(level > T::zero() && level <= T::one()) {
        return Err(domain(format!("rho level must lie in (0, 1], got {level}")));
    }
    Ok(match regime {
        Regime::Dense => level,
        Regime::Sparse if n < 3 => level,
        Regime::Sparse => {
            let nf = T::from_count(n);
            level.min(nf.ln().powf(T::lit(SPARSE_LOG_EXPONENT)) / nf)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::pair_count;

    #[test]
    fn latents_are_deterministic_and_open() {
        let a = sample_latents(1000, 42).unwrap();
        assert_eq!(a, sample_latents(1000, 42).unwrap());
        assert_ne!(a, sample_latents(1000, 43).unwrap());
        assert!(a.as_slice().iter().all(|&x| x > 0.0 && x < 1.0));
        assert!(sample_latents(0, 1).is_err());
    }

    #[test]
    fn latent_mean_within_three_sigma() {
        let n = 10_000;
        let xi = sample_latents(n, 7).unwrap();
        let mean = xi.as_slice().iter().sum::<f64>() / n as f64;
        let sigma = (1.0 / (12.0 * n as f64)).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "{mean}");
    }

    #[test]
    fn zero_and_one_probabilities() {
        let xi = sample_latents(30, 1).unwrap();
        let empty = GraphonSpec::block_constant(vec![0.0], vec![1.0], 1.0).unwrap();
        assert_eq!(sample_graph(&empty, &xi, 3).edge_count(), 0);
        let full = GraphonSpec::constant(1.0, 1.0).unwrap();
        assert_eq!(sample_graph(&full, &xi, 3).edge_count(), pair_count(30));
    }

    #[test]
    fn erdos_renyi_density_band() {
        let n = 500;
        let xi = sample_latents(n, 11).unwrap();
        let spec = GraphonSpec::constant(0.3, 1.0).unwrap();
        let g = sample_graph(&spec, &xi, 12);
        let pairs = pair_count(n) as f64;
        let density = g.edge_count() as f64 / pairs;
        assert!((density - 0.3).abs() < 3.0 * (0.3 * 0.7 / pairs).sqrt(), "{density}");
        assert_eq!(g, sample_graph(&spec, &xi, 12));
        assert_eq!(g.latents(), Some(xi.as_slice()));
    }

    #[test]
    fn schedule_values() {
        assert_eq!(rho_schedule(10_000, Regime::Dense, 0.25).unwrap(), 0.25);
        let s = rho_schedule(1000, Regime::Sparse, 1.0_f64).unwrap();
        assert!((s - 1000f64.ln().powf(3.5) / 1000.0).abs() < 1e-15);
        assert!((s - 0.866_321_917_502_772_8).abs() < 1e-12);
        assert_eq!(rho_schedule(1000, Regime::Sparse, 0.25).unwrap(), 0.25);
        let mut prev = f64::INFINITY;
        for n in 30..5000 {
            let r = rho_schedule(n, Regime::Sparse, 1.0_f64).unwrap();
            assert!(r <= prev);
            prev = r;
        }
        assert!(rho_schedule(10, Regime::Dense, 0.0_f64).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| derive_seed(5, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(derive_seed(5, 0), derive_seed(6, 0));
    }

    #[test]
    fn exchangeability_witness() {
        // permuting ξ leaves the edge-count distribution unchanged
        let n = 60;
        let spec = crate::graphon::make_f1(0.25).unwrap();
        let xi = sample_latents(n, 99).unwrap();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
        let xi_p = xi.permuted(&perm);
        let reps = 200;
        let counts = |x: &LatentVector, base: u64| -> Vec<f64> {
            (0..reps).map(|t| sample_graph(&spec, x, derive_seed(base, t)).edge_count() as f64).collect()
        };
        let a = counts(&xi, 1);
        let b = counts(&xi_p, 2);
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let var = |v: &[f64]| {
            let m = mean(v);
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
        };
        let se = ((var(&a) + var(&b)) / reps as f64).sqrt();
        assert!((mean(&a) - mean(&b)).abs() < 3.0 * se);
    }

    #[test]
    fn conditional_edge_independence() {
        let n = 6;
        let spec = GraphonSpec::constant(0.4, 1.0).unwrap();
        let xi = sample_latents(n, 5).unwrap();
        let reps = 10_000u64;
        let (mut s1, mut s2, mut s12) = (0.0, 0.0, 0.0);
        for t in 0..reps {
            let g = sample_graph(&spec, &xi, derive_seed(77, t));
            let a = g.has_edge(0, 1) as u8 as f64;
            let b = g.has_edge(2, 3) as u8 as f64;
            s1 += a;
            s2 += b;
            s12 += a * b;
        }
        let r = reps as f64;
        let cov = s12 / r - (s1 / r) * (s2 / r);
        // sd of the covariance estimate ≈ p(1−p)/√reps
        let sigma = 0.24 / r.sqrt();
        assert!(cov.abs() < 3.0 * sigma, "{cov}");
    }
}
