//! Simple undirected graphs stored as a packed upper-triangle bitset.

use std::io::{self, BufRead, Write};

use crate::error::{domain, Error, Result};

/// Simple undirected graph on nodes `0..n`: symmetric, hollow, binary.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    bits: Vec<u64>,
    edge_count: usize,
    latents: Option<Vec<f64>>,
}

/// Number of unordered node pairs, `C(n, 2)`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, bits: vec![0; pair_count(n).div_ceil(64)], edge_count: 0, latents: None }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(domain(format!("edge ({u}, {v}) out of range for {n} nodes")));
            }
            if u != v {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Inserts the edge `{i, j}`; returns false if it was already present.
    ///
    /// # Panics
    /// If `i == j` or either endpoint is out of range.
    pub fn add_edge(&mut self, i: usize, j: usize) -> bool {
        assert!(i != j && i < self.n && j < self.n, "invalid edge ({i}, {j}) for n = {}", self.n);
        let s = self.slot(i, j);
        let mask = 1u64 << (s % 64);
        let word = &mut self.bits[s / 64];
        if *word & mask != 0 {
            return false;
        }
        *word |= mask;
        self.edge_count += 1;
        true
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let s = self.slot(i, j);
        self.bits[s / 64] >> (s % 64) & 1 == 1
    }

    /// Edges `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for (i, j) in self.edges() {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_graph(self)
    }

    pub fn latents(&self) -> Option<&[f64]> {
        self.latents.as_deref()
    }

    pub fn with_latents(mut self, latents: Vec<f64>) -> Self {
        debug_assert_eq!(latents.len(), self.n);
        self.latents = Some(latents);
        self
    }

    /// Relabels nodes so that old node `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(domain("permutation length differs from node count"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(domain("not a permutation"));
            }
        }
        let mut g = Self::from_edges(self.n, self.edges().map(|(i, j)| (perm[i], perm[j])))?;
        if let Some(xi) = &self.latents {
            let mut moved = vec![0.0; self.n];
            for (i, &p) in perm.iter().enumerate() {
                moved[p] = xi[i];
            }
            g.latents = Some(moved);
        }
        Ok(g)
    }

    /// Induced subgraph on `nodes` (in the given order).
    pub fn induced(&self, nodes: &[usize]) -> Self {
        let mut g = Self::empty(nodes.len());
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    /// Writes the canonical edge list: a `# nodes: n` header, then one `i j` line per edge, `i < j`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# nodes: {}", self.n)?;
        for (i, j) in self.edges() {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }

    /// Reads the format produced by [`Graph::write_edge_list`]: 0-indexed integer pairs.
    ///
    /// The node count comes from the `# nodes:` header when present, otherwise from the
    /// largest index seen. Self-loops are dropped and duplicates collapsed.
    pub fn read_edge_list<R: BufRead>(input: R) -> Result<Self> {
        let mut declared = None;
        let mut pairs = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if let Some(rest) = t.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("nodes:") {
                    let n = v.trim().parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("bad node count {:?}", v.trim()),
                    })?;
                    declared = Some(n);
                }
                continue;
            }
            if t.is_empty() {
                continue;
            }
            let mut it = t.split_whitespace();
            let parse = |tok: Option<&str>| {
                tok.and_then(|s| s.parse::<usize>().ok()).ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    message: format!("expected two node indices, got {t:?}"),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            pairs.push((u, v));
        }
        let seen = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        let n = match declared {
            Some(n) if n < seen => {
                return Err(domain(format!("edge index {} exceeds declared node count {n}", seen - 1)))
            }
            Some(n) => n,
            None => seen,
        };
        Self::from_edges(n, pairs)
    }
}

/// Compressed neighbor lists.
#[derive(Clone, Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Adjacency {
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.node_count();
        let deg = g.degrees();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for (i, j) in g.edges() {
            targets[fill[i]] = j as u32;
            fill[i] += 1;
            targets[fill[j]] = i as u32;
            fill[j] += 1;
        }
        Self { offsets, targets }
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }
}
