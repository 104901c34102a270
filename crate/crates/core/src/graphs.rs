//! Sparse random contact networks.
//!
//! Two families are provided: the Erdős–Rényi graph `ER(n, c/n)` and the
//! erased configuration model, where half-edges are paired uniformly and the
//! resulting self-loops and parallel edges are deleted. Vertices are
//! `0..n`; adjacency lists are kept sorted so iteration order is
//! deterministic.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, weighted::WeightedIndex};

use crate::dist::DegreeDistribution;
use crate::error::{Error, Result};

/// Label recorded in output metadata for graphs built by
/// [`configuration_model`].
pub const ERASED_CM: &str = "erased_cm";

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseGraph {
    adj: Vec<Vec<u32>>,
}

impl SparseGraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Build from an edge list, dropping self-loops and duplicate edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u != v {
                adj[u].push(v as u32);
                adj[v].push(u as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Checks symmetry, absence of self-loops and of duplicate entries.
    pub fn check_simple(&self) -> Result<()> {
        for (v, list) in self.adj.iter().enumerate() {
            for w in list.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::invalid(format!("adjacency of {v} unsorted or duplicated")));
                }
            }
            for &w in list {
                let w = w as usize;
                if w == v {
                    return Err(Error::invalid(format!("self-loop at {v}")));
                }
                if self.adj[w].binary_search(&(v as u32)).is_err() {
                    return Err(Error::invalid(format!("edge {v}-{w} not symmetric")));
                }
            }
        }
        Ok(())
    }

    /// Writes one `u v` line per edge with `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// `ER(n, c/n)`: every unordered pair is an edge independently with
/// probability `c/n`.
pub fn erdos_renyi(n: usize, c: f64, seed: u64) -> Result<SparseGraph> {
    erdos_renyi_with_rng(n, c, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn erdos_renyi_with_rng<R: Rng + ?Sized>(n: usize, c: f64, rng: &mut R) -> Result<SparseGraph> {
    if n == 0 {
        return Err(Error::invalid("graph needs at least one vertex"));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::invalid(format!("mean degree must be positive, got {c}")));
    }
    let p = c / n as f64;
    if p > 1.0 {
        return Err(Error::invalid(format!("edge probability c/n = {p} exceeds 1")));
    }
    let mut edges = Vec::new();
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((v, w));
            }
        }
    } else {
        // Geometric skipping over the pairs (v, w), w < v, in row order.
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    SparseGraph::from_edges(n, edges)
}

/// Source of vertex degrees for the configuration model.
#[derive(Debug, Clone)]
pub enum DegreeSource<'a> {
    /// Explicit degree sequence; its sum must be even.
    Sequence(&'a [usize]),
    /// i.i.d. draws from a law. An odd total is fixed by redrawing the
    /// degree of one uniformly chosen vertex until its parity flips, or by
    /// incrementing it when the law has a single parity.
    Iid(&'a DegreeDistribution),
}

/// Erased configuration model: uniform stub matching followed by deletion of
/// self-loops and parallel edges.
pub fn configuration_model(n: usize, degrees: DegreeSource<'_>, seed: u64) -> Result<SparseGraph> {
    configuration_model_with_rng(n, degrees, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn configuration_model_with_rng<R: Rng + ?Sized>(
    n: usize,
    degrees: DegreeSource<'_>,
    rng: &mut R,
) -> Result<SparseGraph> {
    if n == 0 {
        return Err(Error::invalid("graph needs at least one vertex"));
    }
    let seq: Vec<usize> = match degrees {
        DegreeSource::Sequence(s) => {
            if s.len() != n {
                return Err(Error::invalid(format!(
                    "degree sequence has length {} but n = {n}",
                    s.len()
                )));
            }
            if s.iter().sum::<usize>() % 2 == 1 {
                return Err(Error::invalid("degree sequence has odd sum"));
            }
            s.to_vec()
        }
        DegreeSource::Iid(law) => {
            let sampler = WeightedIndex::new(law.probs())
                .map_err(|e| Error::invalid(format!("degree law: {e}")))?;
            let mut s: Vec<usize> = (0..n).map(|_| sampler.sample(rng)).collect();
            if s.iter().sum::<usize>() % 2 == 1 {
                let v = rng.random_range(0..n);
                let mixed_parity = law.support().any(|k| k % 2 != s[v] % 2);
                if mixed_parity {
                    let old = s[v];
                    while s[v] % 2 == old % 2 {
                        s[v] = sampler.sample(rng);
                    }
                } else {
                    // every degree has the same parity, so no redraw helps
                    s[v] += 1;
                }
            }
            s
        }
    };
    if let Some((v, d)) = seq.iter().enumerate().find(|(_, d)| **d >= n) {
        return Err(Error::invalid(format!("vertex {v} has degree {d} >= n = {n}")));
    }
    let mut stubs: Vec<usize> = seq
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    stubs.shuffle(rng);
    let edges: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    SparseGraph::from_edges(n, edges)
}

/// Empirical degree law of `g`.
pub fn degree_histogram(g: &SparseGraph) -> DegreeDistribution {
    let max = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut counts = vec![0.0; max + 1];
    for v in 0..g.n() {
        counts[g.degree(v)] += 1.0;
    }
    DegreeDistribution::from_weights(&counts).expect("nonempty graph has a degree histogram")
}
