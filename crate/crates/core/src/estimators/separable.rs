//! Separable (configuration model) plug-in `Ĥ₂`.
//!
//! The fitted edge probability `ρ̂ ĝ_i ĝ_j` depends only on the two degrees, so every
//! sum over node pairs is carried out over pairs of distinct degree values weighted by
//! their multiplicities. This keeps the cost at `O(D²)` for `D` distinct degrees and
//! makes the result independent of node order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::entropy::clipped_binary_entropy;
use crate::error::{domain, Error, Result};
use crate::graph::{pair_count, Graph};
use crate::numeric::CompensatedSum;
use crate::Scalar;

use super::{EntropyEstimate, Estimator, PROBABILITY_CLIP};

/// Scale constant `C` in `ĝ_i = C d_i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// `C = (n+1)/√‖d‖₁`.
    Paper,
    /// `C = √(n(n−1))/‖d‖₁`, so that `ρ̂ ĝ_i ĝ_j = d_i d_j / ‖d‖₁`.
    #[default]
    Configuration,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Paper => "paper",
            Normalization::Configuration => "configuration",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(Normalization::Paper),
            "configuration" | "config" => Ok(Normalization::Configuration),
            other => Err(domain(format!("unknown normalization {other:?} (expected paper or configuration)"))),
        }
    }
}

/// Degrees and the fitted separable factor `ĝ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeData<T> {
    pub degrees: Vec<usize>,
    pub d_norm1: usize,
    pub g_hat: Vec<T>,
    pub normalization: Normalization,
}

impl<T: Scalar> DegreeData<T> {
    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    /// Factor `s` with `ρ̂ ĝ_i ĝ_j = s · d_i d_j`.
    fn pair_scale(&self) -> T {
        let n = self.node_count();
        let norm1 = T::from_count(self.d_norm1);
        match self.normalization {
            Normalization::Configuration => T::one() / norm1,
            Normalization::Paper => {
                let rho = norm1 / T::from_count(n * (n - 1));
                let c = T::from_count(n + 1);
                rho * c * c / norm1
            }
        }
    }

    /// Distinct degrees with their multiplicities, in increasing degree order.
    fn degree_classes(&self) -> Vec<(usize, usize)> {
        let mut map = BTreeMap::new();
        for &d in &self.degrees {
            *map.entry(d).or_insert(0usize) += 1;
        }
        map.into_iter().collect()
    }
}

pub fn compute_g_hat<T: Scalar>(g: &Graph, normalization: Normalization) -> Result<DegreeData<T>> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!("degree estimate needs at least 2 nodes, got {n}")));
    }
    if g.edge_count() == 0 {
        return Err(Error::Degenerate("separable fit needs at least one edge".into()));
    }
    let degrees = g.degrees();
    let d_norm1: usize = degrees.iter().sum();
    let norm1 = T::from_count(d_norm1);
    let c = match normalization {
        Normalization::Paper => T::from_count(n + 1) / norm1.sqrt(),
        Normalization::Configuration => T::from_count(n * (n - 1)).sqrt() / norm1,
    };
    let g_hat = degrees.iter().map(|&d| c * T::from_count(d)).collect();
    Ok(DegreeData { degrees, d_norm1, g_hat, normalization })
}

/// Kernel values `h(clip(s d_a d_b))` on the degree classes (row-major).
fn class_kernel<T: Scalar>(dd: &DegreeData<T>, classes: &[(usize, usize)]) -> Vec<T> {
    let s = dd.pair_scale();
    let eps = T::lit(PROBABILITY_CLIP);
    let m = classes.len();
    let mut k = vec![T::zero(); m * m];
    for a in 0..m {
        for b in a..m {
            let p = s * T::from_count(classes[a].0) * T::from_count(classes[b].0);
            let v = clipped_binary_entropy(p, eps);
            k[a * m + b] = v;
            k[b * m + a] = v;
        }
    }
    k
}

/// Number of unordered node pairs between degree classes `a` and `b`.
#[inline]
fn class_pairs(classes: &[(usize, usize)], a: usize, b: usize) -> usize {
    if a == b {
        pair_count(classes[a].1)
    } else {
        classes[a].1 * classes[b].1
    }
}

fn separable_value<T: Scalar>(dd: &DegreeData<T>, classes: &[(usize, usize)], kernel: &[T]) -> T {
    let m = classes.len();
    let mut acc = CompensatedSum::new();
    for a in 0..m {
        for b in a..m {
            acc.add(T::from_count(class_pairs(classes, a, b)) * kernel[a * m + b]);
        }
    }
    acc.value() / T::from_count(pair_count(dd.node_count()))
}

/// U-statistic variance `(2(n−2)ζ₁ + ζ₂)/C(n, 2)` with `ζ₁ = Var(E[h̃ | ξ_i])` and
/// `ζ₂ = Var(h̃)`, where the kernel `h̃(ξ_i, ξ_j) = h(ρ ĝ(ξ_i) ĝ(ξ_j))` and every
/// expectation over latent positions is replaced by the empirical measure on nodes.
pub fn separable_variance<T: Scalar>(dd: &DegreeData<T>, rho_hat: T, n: usize) -> T {
    if rho_hat <= T::zero() || n < 2 || dd.d_norm1 == 0 {
        return T::zero();
    }
    let classes = dd.degree_classes();
    let kernel = class_kernel(dd, &classes);
    separable_variance_from(dd, &classes, &kernel, n)
}

fn separable_variance_from<T: Scalar>(dd: &DegreeData<T>, classes: &[(usize, usize)], kernel: &[T], n: usize) -> T {
    let m = classes.len();
    let nodes = dd.node_count();
    let pairs = T::from_count(pair_count(nodes));
    let mean = separable_value(dd, classes, kernel);

    // ψ_a = average kernel value from a node of class a to every other node
    let others = T::from_count(nodes - 1);
    let psi: Vec<T> = (0..m)
        .map(|a| {
            let mut acc = CompensatedSum::new();
            for b in 0..m {
                let count = classes[b].1 - usize::from(a == b);
                acc.add(T::from_count(count) * kernel[a * m + b]);
            }
            acc.value() / others
        })
        .collect();
    let mut zeta1 = CompensatedSum::new();
    for a in 0..m {
        let dev = psi[a] - mean;
        zeta1.add(T::from_count(classes[a].1) * dev * dev);
    }
    let zeta1 = zeta1.value() / T::from_count(nodes);

    let mut zeta2 = CompensatedSum::new();
    for a in 0..m {
        for b in a..m {
            let dev = kernel[a * m + b] - mean;
            zeta2.add(T::from_count(class_pairs(classes, a, b)) * dev * dev);
        }
    }
    let zeta2 = zeta2.value() / pairs;

    let two = T::two();
    let var = (two * T::from_count(n.saturating_sub(2)) * zeta1 + zeta2) / T::from_count(pair_count(n));
    var.max(T::zero())
}

/// Separable plug-in `Ĥ₂ = C(n,2)⁻¹ Σ_{i<j} h(clip(ρ̂ ĝ_i ĝ_j))`.
pub fn entropy_separable<T: Scalar>(g: &Graph, normalization: Normalization) -> Result<EntropyEstimate<T>> {
    let dd: DegreeData<T> = compute_g_hat(g, normalization)?;
    let n = g.node_count();
    let rho_hat = T::from_count(g.edge_count()) / T::from_count(pair_count(n));
    let classes = dd.degree_classes();
    let kernel = class_kernel(&dd, &classes);
    let value = separable_value(&dd, &classes, &kernel);
    let variance = separable_variance_from(&dd, &classes, &kernel, n);
    Ok(EntropyEstimate { estimator: Estimator::H2, value, asymptotic_variance: Some(variance), n, rho_hat })
}
