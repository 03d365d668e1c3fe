//! Universal singular value thresholding and the low-rank plug-in `Ĥ₄`.
//!
//! For a symmetric adjacency matrix the singular values are the absolute eigenvalues,
//! so the leading part of the spectrum is found by block subspace iteration with a
//! Rayleigh–Ritz step. The starting block is built from permutation-invariant node
//! features, which makes the whole computation equivariant under node relabeling.

use crate::entropy::clipped_binary_entropy;
use crate::error::{domain, Error, Result};
use crate::graph::{pair_count, Adjacency, Graph};
use crate::numeric::CompensatedSum;
use crate::sampler::derive_seed;
use crate::Scalar;

use super::linalg::{dot, norm, orthonormalize, symmetric_eigen};
use super::{EntropyEstimate, Estimator, PROBABILITY_CLIP};

pub const DEFAULT_ETA: f64 = 0.01;
pub const DEFAULT_SVD_TOL: f64 = 1e-8;
const INITIAL_BLOCK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UsvtOptions {
    pub eta: f64,
    /// Ritz residual tolerance relative to the largest retained singular value.
    pub tol: f64,
    /// Iteration cap; `None` means `10 n`.
    pub max_iter: Option<usize>,
}

impl Default for UsvtOptions {
    fn default() -> Self {
        Self { eta: DEFAULT_ETA, tol: DEFAULT_SVD_TOL, max_iter: None }
    }
}

/// Dense symmetric `n×n` matrix of estimated edge probabilities with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMatrix<T> {
    n: usize,
    data: Vec<T>,
    /// Number of singular values above the threshold.
    pub rank: usize,
    pub threshold: T,
    pub iterations: usize,
}

impl<T: Scalar> ProbabilityMatrix<T> {
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }
}

/// USVT singular value threshold `(2+η)√(n · max(ρ̂, 1/n))`.
pub fn usvt_threshold<T: Scalar>(n: usize, rho_hat: T, eta: T) -> T {
    let n_t = T::from_count(n);
    let rho = rho_hat.max(T::one() / n_t);
    (T::two() + eta) * (n_t * rho).sqrt()
}

fn multiply<T: Scalar>(adj: &Adjacency, q: &[T], out: &mut [T], n: usize, r: usize) {
    for c in 0..r {
        let col = &q[c * n..(c + 1) * n];
        let dst = &mut out[c * n..(c + 1) * n];
        for (i, d) in dst.iter_mut().enumerate() {
            let mut acc = T::zero();
            for &j in adj.neighbors(i) {
                acc += col[j as usize];
            }
            *d = acc;
        }
    }
}

#[inline]
fn hash_unit<T: Scalar>(a: u64, b: u64) -> T {
    // map 53 random bits to (−1, 1)
    let bits = derive_seed(a, b) >> 11;
    T::lit(bits as f64 / (1u64 << 53) as f64 * 2.0 - 1.0)
}

/// Fills columns `cols` of the block with values keyed on node features (degree and
/// the sum of neighbor degrees); columns that turn out linearly dependent are refilled
/// from node indices.
fn start_block<T: Scalar>(adj: &Adjacency, q: &mut [T], n: usize, cols: std::ops::Range<usize>) {
    let deg: Vec<u64> = (0..n).map(|i| adj.degree(i) as u64).collect();
    let feature: Vec<u64> = (0..n)
        .map(|i| {
            let s: u64 = adj.neighbors(i).iter().map(|&j| deg[j as usize]).sum();
            derive_seed(deg[i], s)
        })
        .collect();
    for c in cols {
        for i in 0..n {
            q[c * n + i] = hash_unit(feature[i], c as u64);
        }
    }
}

fn refill_dropped<T: Scalar>(q: &mut [T], n: usize, dropped: &[usize], round: u64) {
    for &c in dropped {
        for i in 0..n {
            q[c * n + i] = hash_unit(derive_seed(round, c as u64), i as u64);
        }
    }
}

fn orthonormal_block<T: Scalar>(q: &mut [T], n: usize, r: usize) {
    let drop_tol = T::lit(1e-10);
    let mut dropped = orthonormalize(q, n, r, drop_tol);
    let mut round = 0;
    while !dropped.is_empty() {
        round += 1;
        refill_dropped(q, n, &dropped, round);
        dropped = orthonormalize(q, n, r, drop_tol);
        assert!(round < 64, "could not complete an orthonormal block");
    }
}

/// Leading eigenpairs (by absolute value) of `A` down to `threshold`.
struct Spectrum<T> {
    values: Vec<T>,
    vectors: Vec<T>,
    iterations: usize,
}

fn leading_spectrum<T: Scalar>(adj: &Adjacency, threshold: T, opts: &UsvtOptions) -> Result<Spectrum<T>> {
    let n = adj.node_count();
    let max_iter = opts.max_iter.unwrap_or(10 * n).max(1);
    let tol = T::tolerance(opts.tol);
    let mut r = INITIAL_BLOCK.min(n);
    let mut q = vec![T::zero(); n * r];
    start_block(adj, &mut q, n, 0..r);
    orthonormal_block(&mut q, n, r);
    let mut z = vec![T::zero(); n * r];
    let mut iterations = 0;
    loop {
        let mut residual = T::infinity();
        let mut converged = false;
        let mut values = Vec::new();
        while iterations < max_iter {
            iterations += 1;
            multiply(adj, &q, &mut z, n, r);
            let mut b = vec![T::zero(); r * r];
            for i in 0..r {
                for j in i..r {
                    let v = dot(&q[i * n..(i + 1) * n], &z[j * n..(j + 1) * n]);
                    b[i * r + j] = v;
                    b[j * r + i] = v;
                }
            }
            let (theta, w) = symmetric_eigen(&b, r);
            q = rotate(&q, &w, n, r);
            z = rotate(&z, &w, n, r);
            let scale = theta[0].abs().max(T::one());
            residual = T::zero();
            for (j, &t) in theta.iter().enumerate() {
                if j > 0 && t.abs() <= threshold {
                    break;
                }
                let col_q = &q[j * n..(j + 1) * n];
                let col_z = &z[j * n..(j + 1) * n];
                let res: Vec<T> = col_z.iter().zip(col_q).map(|(&zz, &qq)| zz - t * qq).collect();
                residual = residual.max(norm(&res) / scale);
            }
            values = theta;
            if residual <= tol {
                converged = true;
                break;
            }
            q.copy_from_slice(&z);
            orthonormal_block(&mut q, n, r);
        }
        if !converged {
            return Err(Error::NoConvergence { iterations, residual: residual.as_f64() });
        }
        // every singular value above the threshold must lie inside the block
        let smallest = values.last().map(|v| v.abs()).unwrap_or_else(T::zero);
        if smallest <= threshold || r == n {
            return Ok(Spectrum { values, vectors: q, iterations });
        }
        let grown = (2 * r).min(n);
        let mut bigger = vec![T::zero(); n * grown];
        bigger[..n * r].copy_from_slice(&q);
        start_block(adj, &mut bigger, n, r..grown);
        orthonormal_block(&mut bigger, n, grown);
        q = bigger;
        z = vec![T::zero(); n * grown];
        r = grown;
    }
}

/// `Q W` for column-major `Q` (`n×r`) and `W` (`r×r`).
fn rotate<T: Scalar>(q: &[T], w: &[T], n: usize, r: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n * r];
    for c in 0..r {
        let dst = &mut out[c * n..(c + 1) * n];
        for k in 0..r {
            let coef = w[c * r + k];
            if coef == T::zero() {
                continue;
            }
            for (d, &x) in dst.iter_mut().zip(&q[k * n..(k + 1) * n]) {
                *d += coef * x;
            }
        }
    }
    out
}

/// USVT estimate of the edge-probability matrix: keep the singular values of `A` above
/// `(2+η)√(n · max(ρ̂, 1/n))`, reconstruct, clip to `[0, 1]` and zero the diagonal.
pub fn usvt<T: Scalar>(g: &Graph, opts: &UsvtOptions) -> Result<ProbabilityMatrix<T>> {
    let n = g.node_count();
    if n < 2 {
        return Err(domain(format!("USVT needs at least 2 nodes, got {n}")));
    }
    if !(opts.eta > 0.0 && opts.eta < 1.0) {
        return Err(domain(format!("eta must lie in (0, 1), got {}", opts.eta)));
    }
    let rho_hat = T::from_count(g.edge_count()) / T::from_count(pair_count(n));
    let threshold = usvt_threshold(n, rho_hat, T::lit(opts.eta));
    let mut data = vec![T::zero(); n * n];
    if g.edge_count() == 0 {
        return Ok(ProbabilityMatrix { n, data, rank: 0, threshold, iterations: 0 });
    }
    let adj = g.adjacency();
    let spec = leading_spectrum(&adj, threshold, opts)?;
    let kept: Vec<usize> = (0..spec.values.len()).filter(|&j| spec.values[j].abs() > threshold).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut p = T::zero();
            for &c in &kept {
                p += spec.values[c] * spec.vectors[c * n + i] * spec.vectors[c * n + j];
            }
            let p = p.max(T::zero()).min(T::one());
            data[i * n + j] = p;
            data[j * n + i] = p;
        }
    }
    Ok(ProbabilityMatrix { n, data, rank: kept.len(), threshold, iterations: spec.iterations })
}

/// Entropy of an estimated probability matrix, `n⁻² Σ_{i,j} h(p̂_ij)` over all ordered
/// pairs; the zero diagonal contributes nothing.
pub fn matrix_entropy<T: Scalar>(p: &ProbabilityMatrix<T>) -> T {
    let n = p.node_count();
    let eps = T::lit(PROBABILITY_CLIP);
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = p.get(i, j);
            if v > T::zero() {
                acc.add(clipped_binary_entropy(v, eps));
            }
        }
    }
    let n_t = T::from_count(n);
    T::two() * acc.value() / (n_t * n_t)
}

/// Low-rank plug-in `Ĥ₄` on the USVT estimate. No asymptotic variance is available.
pub fn entropy_lowrank<T: Scalar>(g: &Graph, opts: &UsvtOptions) -> Result<EntropyEstimate<T>> {
    let p = usvt(g, opts)?;
    let n = g.node_count();
    Ok(EntropyEstimate {
        estimator: Estimator::H4,
        value: matrix_entropy(&p),
        asymptotic_variance: None,
        n,
        rho_hat: T::from_count(g.edge_count()) / T::from_count(pair_count(n)),
    })
}
