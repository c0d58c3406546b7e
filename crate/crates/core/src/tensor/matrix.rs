use serde::{Deserialize, Serialize};

use super::vector::{StochasticVector, VALIDATION_TOL};
use crate::error::{check_dim, Error, Result};

/// Dense `n x n` matrix in column-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            for i in 0..n {
                m.data[i + n * j] = f(i, j);
            }
        }
        m
    }

    /// `rows[i][j]` is entry `(i, j)`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            check_dim(n, r.len())?;
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + self.n * j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i + self.n * j]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[self.n * j..self.n * (j + 1)]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (j, &xj) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * xj;
            }
        }
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.column(j).iter().sum()).collect()
    }

    pub fn is_column_stochastic(&self, tol: f64) -> bool {
        (0..self.n).all(|j| {
            let c = self.column(j);
            c.iter().all(|&v| v >= -tol) && (c.iter().sum::<f64>() - 1.0).abs() <= tol
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Column-stochastic sparse matrix in compressed-column form. Columns with
/// no stored entries are dangling and act as `dangling_default`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    vals: Vec<f64>,
    dangling_default: StochasticVector,
}

impl SparseMatrix {
    /// `columns[j]` lists `(i, value)` pairs; each nonempty column must sum
    /// to one.
    pub fn from_columns(
        columns: Vec<Vec<(usize, f64)>>,
        dangling_default: StochasticVector,
    ) -> Result<Self> {
        let n = columns.len();
        check_dim(n, dangling_default.len())?;
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut rows = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_by_key(|e| e.0);
            let mut sum = 0.0;
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::invalid(format!(
                        "duplicate entry ({}, {})",
                        w[0].0 + 1,
                        j + 1
                    )));
                }
            }
            for (i, v) in col {
                if i >= n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: i + 1,
                    });
                }
                if !(v > 0.0) {
                    return Err(Error::invalid("stored matrix entries must be positive"));
                }
                sum += v;
                rows.push(i as u32);
                vals.push(v);
            }
            if rows.len() > *col_ptr.last().unwrap() && (sum - 1.0).abs() > VALIDATION_TOL {
                return Err(Error::NotStochastic {
                    j: j + 1,
                    k: 0,
                    deviation: (sum - 1.0).abs(),
                });
            }
            col_ptr.push(rows.len());
        }
        Ok(SparseMatrix {
            n,
            col_ptr,
            rows,
            vals,
            dangling_default,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_dangling(&self, j: usize) -> bool {
        self.col_ptr[j] == self.col_ptr[j + 1]
    }

    pub fn dangling_default(&self) -> &StochasticVector {
        &self.dangling_default
    }

    /// Stored entries of column `j` as `(row, value)`.
    pub fn stored_column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.rows[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .map(|(&i, &v)| (i as usize, v))
    }

    /// Effective column `j`, dangling columns included.
    pub fn dense_column(&self, j: usize) -> Vec<f64> {
        if self.is_dangling(j) {
            return self.dangling_default.as_slice().to_vec();
        }
        let mut c = vec![0.0; self.n];
        for (i, v) in self.stored_column(j) {
            c[i] = v;
        }
        c
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.is_dangling(j) {
            return self.dangling_default.as_slice()[i];
        }
        self.stored_column(j)
            .find(|&(r, _)| r == i)
            .map_or(0.0, |(_, v)| v)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.apply_into(x, &mut out);
        out
    }

    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let mut dangling_mass = 0.0;
        for (j, &xj) in x.iter().enumerate() {
            if self.is_dangling(j) {
                dangling_mass += xj;
                continue;
            }
            for (i, v) in self.stored_column(j) {
                out[i] += v * xj;
            }
        }
        if dangling_mass != 0.0 {
            for (o, d) in out.iter_mut().zip(self.dangling_default.as_slice()) {
                *o += dangling_mass * d;
            }
        }
    }

    pub fn to_dense(&self) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(self.n);
        for j in 0..self.n {
            for (i, v) in self.dense_column(j).into_iter().enumerate() {
                *m.get_mut(i, j) = v;
            }
        }
        m
    }
}
