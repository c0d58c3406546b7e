use std::collections::VecDeque;
use std::io::BufRead;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    m: usize,
}

/// Counts gathered while normalizing an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadStats {
    pub lines: usize,
    pub self_loops: usize,
    /// Repeated edges, in either orientation.
    pub duplicates: usize,
    pub zero_based: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexBase {
    /// Zero-based if any index is 0, one-based otherwise.
    Auto,
    Zero,
    One,
}

impl Graph {
    /// Symmetrizes and deduplicates `edges` (0-based), dropping self-loops.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<(Self, LoadStats)> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut stats = LoadStats::default();
        let mut raw = 0usize;
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!(
                    "edge ({}, {}) outside {n} nodes",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                stats.self_loops += 1;
                continue;
            }
            raw += 1;
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        let m = twice / 2;
        stats.duplicates = raw - m;
        Ok((Graph { adj, m }, stats))
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Self::from_edges(n, edges).expect("valid edges").0
    }

    /// `G(n, p)` random graph, deterministic in `seed`.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = rng_from_seed(seed);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((a, b));
                }
            }
        }
        Self::from_edges(n, edges).expect("valid edges").0
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Connected component labels, numbered in order of their smallest node.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    let w = w as usize;
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Induced subgraph on the largest component (ties go to the component
    /// with the smallest node), with the original index of each new node.
    pub fn largest_component(&self) -> (Graph, Vec<usize>) {
        let label = self.components();
        let count = label.iter().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0usize; count];
        for &l in &label {
            sizes[l] += 1;
        }
        let best = (0..count).fold(0, |b, c| if sizes[c] > sizes[b] { c } else { b });
        let keep: Vec<usize> = (0..self.n()).filter(|&v| label[v] == best).collect();
        let mut new_id = vec![u32::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i as u32;
        }
        let adj: Vec<Vec<u32>> = keep
            .iter()
            .map(|&v| self.adj[v].iter().map(|&w| new_id[w as usize]).collect())
            .collect();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        (Graph { adj, m }, keep)
    }
}

/// Reads whitespace-separated node pairs, one edge per line. Lines starting
/// with `#` or `%` are comments and extra columns are ignored. A
/// MatrixMarket banner makes the first data line a size header, skipped.
pub fn load_edge_list<R: BufRead>(reader: R, base: IndexBase) -> Result<(Graph, LoadStats)> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    let mut lines = 0;
    let mut matrix_market = false;
    let mut skip_size_line = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if idx == 0 && t.starts_with("%%MatrixMarket") {
            matrix_market = true;
            skip_size_line = true;
        }
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        if skip_size_line {
            skip_size_line = false;
            continue;
        }
        lines += 1;
        let mut fields = t.split_whitespace();
        let mut next = || -> Result<u64> {
            let f = fields.next().ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected two node indices".into(),
            })?;
            f.parse().map_err(|e| Error::Parse {
                line: idx + 1,
                message: format!("bad node index `{f}`: {e}"),
            })
        };
        let a = next()?;
        let b = next()?;
        raw.push((a, b));
    }
    let has_zero = raw.iter().any(|&(a, b)| a == 0 || b == 0);
    let zero_based = match base {
        IndexBase::Zero => true,
        IndexBase::One => false,
        IndexBase::Auto => has_zero && !matrix_market,
    };
    if !zero_based && has_zero {
        return Err(Error::invalid("node index 0 in a one-based edge list"));
    }
    let shift = u64::from(!zero_based);
    let max = raw.iter().map(|&(a, b)| a.max(b)).max();
    let n = match max {
        Some(m) => (m + 1 - shift) as usize,
        None => 0,
    };
    if n > u32::MAX as usize {
        return Err(Error::invalid("node index exceeds the u32 range"));
    }
    let edges = raw
        .into_iter()
        .map(|(a, b)| ((a - shift) as usize, (b - shift) as usize));
    let (g, mut stats) = Graph::from_edges(n, edges)?;
    stats.lines = lines;
    stats.zero_based = zero_based;
    Ok((g, stats))
}
