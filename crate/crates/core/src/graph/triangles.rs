use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_unit, Graph};
use crate::error::{check_dim, Result};
use crate::tensor::{Operand, SparseMatrix, SparseTensor3, StochasticVector, TransitionOperator};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleTensorStats {
    pub triangles: u64,
    pub nonzeros: usize,
    /// Ordered pairs `(j, k)` lying in at least one triangle.
    pub stored_pairs: usize,
    /// Fraction of the `n^2` columns that use the uniform default.
    pub dangling_fraction: f64,
}

/// Sorted intersection of two sorted lists.
fn common(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (mut p, mut q) = (0, 0);
    while p < a.len() && q < b.len() {
        match a[p].cmp(&b[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[p]);
                p += 1;
                q += 1;
            }
        }
    }
}

/// Triangle tensor of `g`. Columns are produced per `k` in parallel by
/// intersecting adjacency lists along each edge, then concatenated in
/// `(k, j)` order.
pub fn triangle_tensor(g: &Graph) -> Result<(SparseTensor3, TriangleTensorStats)> {
    let n = g.n();
    let per_k: Vec<(Vec<(u32, u32)>, Vec<usize>, Vec<u32>)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut pairs = Vec::new();
            let mut lens = Vec::new();
            let mut rows = Vec::new();
            let mut buf = Vec::new();
            for &j in g.neighbors(k) {
                common(g.neighbors(j as usize), g.neighbors(k), &mut buf);
                if !buf.is_empty() {
                    pairs.push((j, k as u32));
                    lens.push(buf.len());
                    rows.extend_from_slice(&buf);
                }
            }
            (pairs, lens, rows)
        })
        .collect();
    let nnz: usize = per_k.iter().map(|p| p.2.len()).sum();
    let npairs: usize = per_k.iter().map(|p| p.0.len()).sum();
    let mut pairs = Vec::with_capacity(npairs);
    let mut pair_ptr = Vec::with_capacity(npairs + 1);
    let mut rows = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz);
    pair_ptr.push(0);
    for (p, lens, r) in per_k {
        pairs.extend(p);
        let mut offset = 0;
        for len in lens {
            let w = 1.0 / len as f64;
            vals.extend(std::iter::repeat_n(w, len));
            offset += len;
            pair_ptr.push(rows.len() + offset);
        }
        rows.extend(r);
    }
    let stats = TriangleTensorStats {
        triangles: (nnz / 6) as u64,
        nonzeros: nnz,
        stored_pairs: npairs,
        dangling_fraction: if n == 0 {
            0.0
        } else {
            1.0 - npairs as f64 / (n as f64 * n as f64)
        },
    };
    let t = SparseTensor3::from_compressed(
        n,
        pairs,
        pair_ptr,
        rows,
        vals,
        StochasticVector::uniform(n.max(1)),
    )?;
    Ok((t, stats))
}

/// Edge walk `A[i,j] = 1 / d(j)`; isolated nodes get the uniform column.
pub fn transition_matrix(g: &Graph) -> Result<SparseMatrix> {
    let columns = (0..g.n())
        .map(|j| {
            let w = 1.0 / g.degree(j) as f64;
            g.neighbors(j).iter().map(|&i| (i as usize, w)).collect()
        })
        .collect();
    SparseMatrix::from_columns(columns, StochasticVector::uniform(g.n().max(1)))
}

/// `sum_i |a_i - b_i|` of two sparse columns with sorted rows.
fn sparse_l1(ar: &[u32], av: &[f64], br: &[u32], bv: &[f64]) -> f64 {
    let (mut p, mut q, mut s) = (0, 0, 0.0);
    while p < ar.len() || q < br.len() {
        if q == br.len() || (p < ar.len() && ar[p] < br[q]) {
            s += av[p].abs();
            p += 1;
        } else if p == ar.len() || br[q] < ar[p] {
            s += bv[q].abs();
            q += 1;
        } else {
            s += (av[p] - bv[q]).abs();
            p += 1;
            q += 1;
        }
    }
    s
}

/// `||T - A||_1 = max_{j,k} sum_i |T[i,j,k] - A[i,j]|`, dangling columns of
/// both included.
pub fn operator_one_norm_diff(t: &SparseTensor3, a: &SparseMatrix) -> Result<f64> {
    let n = t.n();
    check_dim(n, a.n())?;
    let mut stored_per_j = vec![0usize; n];
    let mut best: f64 = 0.0;
    for ((j, _), rows, vals) in t.stored_columns() {
        stored_per_j[j] += 1;
        let d = if a.is_dangling(j) {
            let col = a.dense_column(j);
            let mut s: f64 = col.iter().sum();
            for (&i, &v) in rows.iter().zip(vals) {
                s += (v - col[i as usize]).abs() - col[i as usize];
            }
            s
        } else {
            let (ar, av): (Vec<u32>, Vec<f64>) =
                a.stored_column(j).map(|(i, v)| (i as u32, v)).unzip();
            sparse_l1(rows, vals, &ar, &av)
        };
        best = best.max(d);
    }
    let default = t.dangling_default().as_slice();
    for j in 0..n {
        if stored_per_j[j] < n {
            let col = a.dense_column(j);
            let d: f64 = col.iter().zip(default).map(|(x, y)| (x - y).abs()).sum();
            best = best.max(d);
        }
    }
    Ok(best)
}

/// Triangle tensor and edge matrix of one graph, built once and shared by
/// every blended operator.
#[derive(Debug, Clone)]
pub struct TriangleWalk {
    pub tensor: Arc<SparseTensor3>,
    pub matrix: Arc<SparseMatrix>,
    pub stats: TriangleTensorStats,
}

impl TriangleWalk {
    pub fn new(g: &Graph) -> Result<Self> {
        let (t, stats) = triangle_tensor(g)?;
        Ok(TriangleWalk {
            tensor: Arc::new(t),
            matrix: Arc::new(transition_matrix(g)?),
            stats,
        })
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    /// `b T + (1 - b) A`.
    pub fn blend(&self, beta: f64) -> Result<TransitionOperator> {
        check_unit("beta", beta)?;
        TransitionOperator::new(
            self.n(),
            vec![
                (beta, Operand::Sparse(self.tensor.clone())),
                (1.0 - beta, Operand::LeftMatrix(self.matrix.clone())),
            ],
        )
    }

    /// `||T - A||_1`.
    pub fn one_norm_diff(&self) -> Result<f64> {
        operator_one_norm_diff(&self.tensor, &self.matrix)
    }
}
