//! Stochastic block model fitting by profile-likelihood ascent.
//!
//! Labels start from a degree-sorted split into `k` near-equal groups and are
//! improved by single-node moves and pairwise swaps, each accepted only if it
//! strictly raises the profile log-likelihood
//! `ℓ(z) = Σ_{a≤b} [e_ab ln e_ab + (P_ab − e_ab) ln(P_ab − e_ab) − P_ab ln P_ab]`,
//! where `e_ab` counts edges and `P_ab` node pairs between blocks `a` and `b`.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::graph::{pair_count, Adjacency, Graph};
use crate::numeric::{xlogx, XLogXTable};
use crate::sampler::{derive_seed, rng_from_seed};
use crate::Scalar;

pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// A fitted `k`-block model. Labels are 0-based block indices.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockFit<T> {
    pub labels: Vec<usize>,
    pub block_sizes: Vec<usize>,
    /// Row-major `k×k` block edge averages.
    pub theta_hat: Vec<T>,
    /// Row-major `k×k` node-pair counts: `h_a h_b` off the diagonal, `C(h_a, 2)` on it.
    pub pair_counts: Vec<u64>,
    /// Row-major `k×k` edge counts between blocks.
    pub edge_counts: Vec<u64>,
    pub log_likelihood: T,
    /// Profile log-likelihood after initialization and after every sweep that accepted a change.
    pub trace: Vec<T>,
    pub sweeps: usize,
    pub converged: bool,
    /// Set when every block is a single node, so the model reproduces `A` exactly.
    pub saturated: bool,
}

impl<T: Scalar> BlockFit<T> {
    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn theta(&self, a: usize, b: usize) -> T {
        self.theta_hat[a * self.k() + b]
    }

    /// Same fit with blocks renamed: old block `a` becomes `perm[a]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let k = self.k();
        let mut out = self.clone();
        out.labels = self.labels.iter().map(|&a| perm[a]).collect();
        for a in 0..k {
            out.block_sizes[perm[a]] = self.block_sizes[a];
            for b in 0..k {
                let (pa, pb) = (perm[a] * k + perm[b], a * k + b);
                out.theta_hat[pa] = self.theta_hat[pb];
                out.pair_counts[pa] = self.pair_counts[pb];
                out.edge_counts[pa] = self.edge_counts[pb];
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    pub swaps: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { restarts: 1, seed: 0, max_sweeps: DEFAULT_MAX_SWEEPS, swaps: true }
    }
}

/// `max(1, round(√n))`.
pub fn default_k(n: usize) -> usize {
    ((n as f64).sqrt().round() as usize).max(1)
}

#[inline]
fn block_pairs(ha: usize, hb: usize, same: bool) -> u64 {
    if same {
        pair_count(ha) as u64
    } else {
        (ha * hb) as u64
    }
}

fn validate_labels(n: usize, labels: &[usize], k: usize) -> Result<Vec<usize>> {
    if labels.len() != n {
        return Err(domain(format!("{} labels for {n} nodes", labels.len())));
    }
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let mut sizes = vec![0usize; k];
    for &z in labels {
        if z >= k {
            return Err(domain(format!("label {z} outside 0..{k}")));
        }
        sizes[z] += 1;
    }
    if let Some(a) = sizes.iter().position(|&h| h == 0) {
        return Err(domain(format!("block {a} is empty")));
    }
    Ok(sizes)
}

fn count_block_edges(g: &Graph, labels: &[usize], k: usize) -> Vec<u64> {
    let mut e = vec![0u64; k * k];
    for (i, j) in g.edges() {
        let (a, b) = (labels[i], labels[j]);
        e[a * k + b] += 1;
        if a != b {
            e[b * k + a] += 1;
        }
    }
    e
}

/// Block-average maximum-likelihood estimate `θ̂_ab = e_ab / P_ab` for fixed labels,
/// together with the log-likelihood at `(θ̂, z)`. Blocks of a single node have no
/// internal pairs; their diagonal entry is reported as 0.
pub fn theta_mle<T: Scalar>(g: &Graph, labels: &[usize], k: usize) -> Result<BlockFit<T>> {
    let sizes = validate_labels(g.node_count(), labels, k)?;
    let edges = count_block_edges(g, labels, k);
    Ok(assemble(labels.to_vec(), sizes, edges, Vec::new(), 0, true))
}

fn assemble<T: Scalar>(
    labels: Vec<usize>,
    sizes: Vec<usize>,
    edges: Vec<u64>,
    trace: Vec<T>,
    sweeps: usize,
    converged: bool,
) -> BlockFit<T> {
    let k = sizes.len();
    let mut theta = vec![T::zero(); k * k];
    let mut pairs = vec![0u64; k * k];
    let mut ll = T::zero();
    for a in 0..k {
        for b in 0..k {
            let p = block_pairs(sizes[a], sizes[b], a == b);
            let e = edges[a * k + b];
            pairs[a * k + b] = p;
            if p > 0 {
                theta[a * k + b] = T::from_count(e as usize) / T::from_count(p as usize);
            }
            if a <= b {
                let (e, p) = (T::from_count(e as usize), T::from_count(p as usize));
                ll += xlogx(e) + xlogx(p - e) - xlogx(p);
            }
        }
    }
    let saturated = sizes.iter().all(|&h| h == 1);
    BlockFit {
        labels,
        block_sizes: sizes,
        theta_hat: theta,
        pair_counts: pairs,
        edge_counts: edges,
        log_likelihood: ll,
        trace,
        sweeps,
        converged,
        saturated,
    }
}

/// Log-likelihood of arbitrary `θ` at labels `z` (used to check optimality of `θ̂`).
pub fn log_likelihood<T: Scalar>(g: &Graph, labels: &[usize], k: usize, theta: &[T]) -> Result<T> {
    let sizes = validate_labels(g.node_count(), labels, k)?;
    let edges = count_block_edges(g, labels, k);
    let mut ll = T::zero();
    for a in 0..k {
        for b in a..k {
            let p = block_pairs(sizes[a], sizes[b], a == b);
            let e = edges[a * k + b];
            let th = theta[a * k + b];
            let (e_t, miss) = (T::from_count(e as usize), T::from_count((p - e) as usize));
            if e > 0 {
                ll += e_t * th.ln();
            }
            if p > e {
                ll += miss * (T::one() - th).ln();
            }
        }
    }
    Ok(ll)
}

/// Mutable ascent state for one restart.
struct Ascent<'a, T> {
    k: usize,
    graph: &'a Graph,
    adj: &'a Adjacency,
    table: &'a XLogXTable<T>,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    edges: Vec<u64>,
    /// Row-major `n×k`: neighbors of each node in each block.
    nbr: Vec<u64>,
    scratch: Vec<u64>,
    tol: T,
}

impl<'a, T: Scalar> Ascent<'a, T> {
    #[inline]
    fn term(&self, e: u64, p: u64) -> T {
        self.table.get(e) + self.table.get(p - e) - self.table.get(p)
    }

    fn log_likelihood(&self) -> T {
        let k = self.k;
        let mut ll = T::zero();
        for a in 0..k {
            for b in a..k {
                ll += self.term(self.edges[a * k + b], block_pairs(self.sizes[a], self.sizes[b], a == b));
            }
        }
        ll
    }

    #[inline]
    fn counts(&self, i: usize) -> &[u64] {
        &self.nbr[i * self.k..(i + 1) * self.k]
    }

    /// Change in `ℓ` if node `i`, with per-block neighbor counts `c`, moved to block `b`.
    fn move_delta(&self, i: usize, b: usize, c: &[u64]) -> T {
        let k = self.k;
        let a = self.labels[i];
        debug_assert_ne!(a, b);
        let (ha, hb) = (self.sizes[a], self.sizes[b]);
        let e = |x: usize, y: usize| self.edges[x * k + y];
        let mut delta = T::zero();
        for x in 0..k {
            if x == a || x == b {
                continue;
            }
            let hx = self.sizes[x];
            delta += self.term(e(a, x) - c[x], ((ha - 1) * hx) as u64) - self.term(e(a, x), (ha * hx) as u64);
            delta += self.term(e(b, x) + c[x], ((hb + 1) * hx) as u64) - self.term(e(b, x), (hb * hx) as u64);
        }
        delta += self.term(e(a, a) - c[a], pair_count(ha - 1) as u64) - self.term(e(a, a), pair_count(ha) as u64);
        delta += self.term(e(b, b) + c[b], pair_count(hb + 1) as u64) - self.term(e(b, b), pair_count(hb) as u64);
        delta += self.term(e(a, b) - c[b] + c[a], ((ha - 1) * (hb + 1)) as u64) - self.term(e(a, b), (ha * hb) as u64);
        delta
    }

    /// Updates block totals for `i` moving to `b`; neighbor counts are left untouched.
    fn shift_blocks(&mut self, i: usize, b: usize, c: &[u64]) {
        let k = self.k;
        let a = self.labels[i];
        for x in 0..k {
            if x == a || x == b {
                continue;
            }
            self.edges[a * k + x] -= c[x];
            self.edges[x * k + a] -= c[x];
            self.edges[b * k + x] += c[x];
            self.edges[x * k + b] += c[x];
        }
        self.edges[a * k + a] -= c[a];
        self.edges[b * k + b] += c[b];
        let ab = self.edges[a * k + b] + c[a] - c[b];
        self.edges[a * k + b] = ab;
        self.edges[b * k + a] = ab;
        self.sizes[a] -= 1;
        self.sizes[b] += 1;
        self.labels[i] = b;
    }

    fn relabel_neighbors(&mut self, i: usize, from: usize, to: usize) {
        let k = self.k;
        for &j in self.adj.neighbors(i) {
            let row = j as usize * k;
            self.nbr[row + from] -= 1;
            self.nbr[row + to] += 1;
        }
    }

    fn load_scratch(&mut self, i: usize) {
        let k = self.k;
        self.scratch.copy_from_slice(&self.nbr[i * k..(i + 1) * k]);
    }

    /// Best strictly improving single-node move for `i`; among equal gains the lowest
    /// block index wins, and no move is made unless the gain is positive.
    fn try_move(&mut self, i: usize) -> bool {
        let a = self.labels[i];
        if self.sizes[a] == 1 {
            return false;
        }
        let mut best: Option<(usize, T)> = None;
        for b in 0..self.k {
            if b == a {
                continue;
            }
            let d = self.move_delta(i, b, self.counts(i));
            if d > self.tol && best.is_none_or(|(_, bd)| d > bd) {
                best = Some((b, d));
            }
        }
        match best {
            Some((b, _)) => {
                self.load_scratch(i);
                let c = std::mem::take(&mut self.scratch);
                self.shift_blocks(i, b, &c);
                self.scratch = c;
                self.relabel_neighbors(i, a, b);
                true
            }
            None => false,
        }
    }

    /// Swaps the labels of `i` and `j` if that strictly raises `ℓ`. Block sizes are
    /// unchanged, so only edge totals touching the two blocks move.
    fn try_swap(&mut self, i: usize, j: usize) -> bool {
        let k = self.k;
        let (a, b) = (self.labels[i], self.labels[j]);
        if a == b {
            return false;
        }
        let w = u64::from(self.graph.has_edge(i, j));
        let (ci, cj) = (self.counts(i), self.counts(j));
        let (ha, hb) = (self.sizes[a], self.sizes[b]);
        let e = |x: usize, y: usize| self.edges[x * k + y];
        let mut delta = T::zero();
        for x in 0..k {
            if x == a || x == b || ci[x] == cj[x] {
                continue;
            }
            let hx = self.sizes[x];
            let (pa, pb) = ((ha * hx) as u64, (hb * hx) as u64);
            delta += self.term(e(a, x) + cj[x] - ci[x], pa) - self.term(e(a, x), pa);
            delta += self.term(e(b, x) + ci[x] - cj[x], pb) - self.term(e(b, x), pb);
        }
        let aa = e(a, a) + cj[a] - ci[a] - w;
        let bb = e(b, b) + ci[b] - cj[b] - w;
        let ab = e(a, b) + ci[a] + cj[b] + 2 * w - cj[a] - ci[b];
        let (paa, pbb, pab) = (pair_count(ha) as u64, pair_count(hb) as u64, (ha * hb) as u64);
        delta += self.term(aa, paa) - self.term(e(a, a), paa);
        delta += self.term(bb, pbb) - self.term(e(b, b), pbb);
        delta += self.term(ab, pab) - self.term(e(a, b), pab);
        if delta <= self.tol {
            return false;
        }
        for x in 0..k {
            if x == a || x == b {
                continue;
            }
            let (cix, cjx) = (self.nbr[i * k + x], self.nbr[j * k + x]);
            let ea = self.edges[a * k + x] + cjx - cix;
            let eb = self.edges[b * k + x] + cix - cjx;
            self.edges[a * k + x] = ea;
            self.edges[x * k + a] = ea;
            self.edges[b * k + x] = eb;
            self.edges[x * k + b] = eb;
        }
        self.edges[a * k + a] = aa;
        self.edges[b * k + b] = bb;
        self.edges[a * k + b] = ab;
        self.edges[b * k + a] = ab;
        self.labels[i] = b;
        self.labels[j] = a;
        self.relabel_neighbors(i, a, b);
        self.relabel_neighbors(j, b, a);
        true
    }
}

/// Degree-sorted contiguous split into `k` near-equal groups; degree ties are
/// broken by a random key drawn from `seed`.
fn initial_labels(degrees: &[usize], k: usize, seed: u64) -> Vec<usize> {
    let n = degrees.len();
    let mut rng = rng_from_seed(seed);
    let keys: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&u, &v| degrees[v].cmp(&degrees[u]).then(keys[u].cmp(&keys[v])));
    let (base, extra) = (n / k, n % k);
    let mut labels = vec![0; n];
    let mut pos = 0;
    for block in 0..k {
        let size = base + usize::from(block < extra);
        for &node in &order[pos..pos + size] {
            labels[node] = block;
        }
        pos += size;
    }
    labels
}

fn ascend<T: Scalar>(
    g: &Graph,
    adj: &Adjacency,
    table: &XLogXTable<T>,
    k: usize,
    seed: u64,
    opts: &FitOptions,
) -> BlockFit<T> {
    let n = g.node_count();
    let labels = initial_labels(&adj_degrees(adj), k, seed);
    let sizes = validate_labels(n, &labels, k).expect("initial split has no empty block");
    let edges = count_block_edges(g, &labels, k);
    // rounding in ℓ differences is bounded by a few ulps of the largest table entry
    let tol = T::epsilon() * T::lit(64.0) * table.max_value().max(T::one());
    let mut nbr = vec![0u64; n * k];
    for (i, j) in g.edges() {
        nbr[i * k + labels[j]] += 1;
        nbr[j * k + labels[i]] += 1;
    }
    let mut st = Ascent { k, graph: g, adj, table, labels, sizes, edges, nbr, scratch: vec![0; k], tol };
    let mut trace = vec![st.log_likelihood()];
    // with all blocks singletons a swap is a pure relabeling
    let swappable = opts.swaps && k > 1 && k < n;
    let mut converged = k == 1;
    let mut sweeps = 0;
    while !converged && sweeps < opts.max_sweeps {
        sweeps += 1;
        let mut changed = false;
        if swappable {
            for i in 0..n {
                for j in i + 1..n {
                    changed |= st.try_swap(i, j);
                }
            }
        }
        for i in 0..n {
            changed |= st.try_move(i);
        }
        if changed {
            trace.push(st.log_likelihood());
        } else {
            converged = true;
        }
    }
    let Ascent { labels, sizes, edges, .. } = st;
    let mut fit = assemble(labels, sizes, edges, trace, sweeps, converged);
    // report ℓ from exact logs rather than the table-based running value
    fit.log_likelihood = fit.log_likelihood.min(T::zero());
    fit
}

fn adj_degrees(adj: &Adjacency) -> Vec<usize> {
    (0..adj.node_count()).map(|i| adj.degree(i)).collect()
}

/// Fits a `k`-block model by greedy profile-likelihood ascent, keeping the best of
/// `restarts` independent restarts (ties resolved toward the lower restart index).
pub fn fit_labels<T: Scalar>(g: &Graph, k: usize, opts: &FitOptions) -> Result<BlockFit<T>> {
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(domain(format!("number of blocks k = {k} must lie in 1..={n}")));
    }
    if opts.restarts == 0 {
        return Err(domain("restarts must be at least 1"));
    }
    let adj = g.adjacency();
    let table = XLogXTable::<T>::new(pair_count(n).max(1));
    let fits: Vec<BlockFit<T>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| ascend(g, &adj, &table, k, derive_seed(opts.seed, r as u64), opts))
        .collect();
    let mut best = 0;
    for (r, fit) in fits.iter().enumerate() {
        if fit.log_likelihood > fits[best].log_likelihood {
            best = r;
        }
    }
    Ok(fits.into_iter().nth(best).expect("at least one restart"))
}
