use rayon::prelude::*;

use super::dense::{DenseTensor3, StochasticityReport};
use super::vector::{StochasticVector, VALIDATION_TOL};
use super::Bilinear;
use crate::error::{check_dim, Error, Result};

/// Column batches above this many stored entries are applied in parallel.
const PARALLEL_NNZ: usize = 1 << 16;
const PAIRS_PER_CHUNK: usize = 2048;

/// Order-3 tensor with only its nonzero columns stored.
///
/// Entries are grouped by first-mode column `(j, k)`, pairs sorted by
/// `(k, j)` and rows ascending within a pair. Every stored column sums to one;
/// every other column is implicitly equal to `dangling_default`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTensor3 {
    n: usize,
    /// `(j, k)` of each stored column.
    pairs: Vec<(u32, u32)>,
    pair_ptr: Vec<usize>,
    rows: Vec<u32>,
    vals: Vec<f64>,
    dangling_default: StochasticVector,
}

impl SparseTensor3 {
    /// Builds from `(i, j, k, value)` triples (0-based). Zero values are
    /// dropped; negative values and duplicate triples are rejected.
    pub fn from_entries(
        n: usize,
        mut entries: Vec<(usize, usize, usize, f64)>,
        dangling_default: StochasticVector,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("tensor dimension must be positive"));
        }
        check_dim(n, dangling_default.len())?;
        if let Some(e) = entries.iter().find(|e| e.0 >= n || e.1 >= n || e.2 >= n) {
            return Err(Error::invalid(format!(
                "entry ({}, {}, {}) outside dimension {n}",
                e.0 + 1,
                e.1 + 1,
                e.2 + 1
            )));
        }
        if let Some(e) = entries.iter().find(|e| !(e.3 >= 0.0)) {
            return Err(Error::invalid(format!("negative entry {:e}", e.3)));
        }
        entries.retain(|e| e.3 > 0.0);
        entries.sort_by_key(|e| (e.2, e.1, e.0));
        if let Some(w) = entries
            .windows(2)
            .find(|w| (w[0].0, w[0].1, w[0].2) == (w[1].0, w[1].1, w[1].2))
        {
            return Err(Error::invalid(format!(
                "duplicate entry ({}, {}, {})",
                w[0].0 + 1,
                w[0].1 + 1,
                w[0].2 + 1
            )));
        }
        let mut pairs = Vec::new();
        let mut pair_ptr = vec![0];
        let mut rows = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        for (idx, &(i, j, k, v)) in entries.iter().enumerate() {
            if idx == 0 || (entries[idx - 1].1, entries[idx - 1].2) != (j, k) {
                if idx > 0 {
                    pair_ptr.push(rows.len());
                }
                pairs.push((j as u32, k as u32));
            }
            rows.push(i as u32);
            vals.push(v);
        }
        if !entries.is_empty() {
            pair_ptr.push(rows.len());
        }
        let t = SparseTensor3 {
            n,
            pairs,
            pair_ptr,
            rows,
            vals,
            dangling_default,
        };
        t.check_stored_columns()?;
        Ok(t)
    }

    /// Trusted constructor for builders that emit compressed columns already
    /// sorted by `(k, j)` with nonempty columns; stochasticity is still
    /// verified.
    pub(crate) fn from_compressed(
        n: usize,
        pairs: Vec<(u32, u32)>,
        pair_ptr: Vec<usize>,
        rows: Vec<u32>,
        vals: Vec<f64>,
        dangling_default: StochasticVector,
    ) -> Result<Self> {
        check_dim(n, dangling_default.len())?;
        if pair_ptr.len() != pairs.len() + 1 || rows.len() != vals.len() {
            return Err(Error::invalid("inconsistent compressed column layout"));
        }
        debug_assert!(pairs
            .windows(2)
            .all(|w| (w[0].1, w[0].0) < (w[1].1, w[1].0)));
        debug_assert!(pair_ptr.windows(2).all(|w| w[0] < w[1]));
        let t = SparseTensor3 {
            n,
            pairs,
            pair_ptr,
            rows,
            vals,
            dangling_default,
        };
        t.check_stored_columns()?;
        Ok(t)
    }

    fn check_stored_columns(&self) -> Result<()> {
        let r = self.validate_stochastic(VALIDATION_TOL)?;
        if r.stochastic {
            Ok(())
        } else {
            Err(Error::NotStochastic {
                j: r.worst_column.0 + 1,
                k: r.worst_column.1 + 1,
                deviation: r.worst_deviation,
            })
        }
    }

    pub fn validate_stochastic(&self, tol: f64) -> Result<StochasticityReport> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let mut worst = (0usize, 0usize);
        let mut worst_dev = 0.0;
        for (p, &(j, k)) in self.pairs.iter().enumerate() {
            let s: f64 = self.vals[self.pair_ptr[p]..self.pair_ptr[p + 1]]
                .iter()
                .sum();
            let dev = (s - 1.0).abs();
            if dev > worst_dev {
                worst_dev = dev;
                worst = (j as usize, k as usize);
            }
        }
        let d: f64 = self.dangling_default.as_slice().iter().sum();
        if self.stored_pairs() < self.n * self.n && (d - 1.0).abs() > worst_dev {
            worst_dev = (d - 1.0).abs();
            worst = self.first_dangling_pair().unwrap_or((0, 0));
        }
        Ok(StochasticityReport {
            stochastic: worst_dev <= tol,
            worst_column: worst,
            worst_deviation: worst_dev,
        })
    }

    fn first_dangling_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|k| (0..self.n).map(move |j| (j, k)))
            .find(|&(j, k)| self.find_pair(j, k).is_none())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn stored_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn dangling_default(&self) -> &StochasticVector {
        &self.dangling_default
    }

    fn find_pair(&self, j: usize, k: usize) -> Option<usize> {
        let key = (k as u32, j as u32);
        self.pairs
            .binary_search_by_key(&key, |&(pj, pk)| (pk, pj))
            .ok()
    }

    /// Stored entries of column `(j, k)`, or `None` if it is dangling.
    pub fn stored_column(&self, j: usize, k: usize) -> Option<(&[u32], &[f64])> {
        self.find_pair(j, k).map(|p| {
            let r = self.pair_ptr[p]..self.pair_ptr[p + 1];
            (&self.rows[r.clone()], &self.vals[r])
        })
    }

    /// Iterates stored columns as `((j, k), rows, values)` in storage order.
    pub fn stored_columns(&self) -> impl Iterator<Item = ((usize, usize), &[u32], &[f64])> + '_ {
        self.pairs.iter().enumerate().map(move |(p, &(j, k))| {
            let r = self.pair_ptr[p]..self.pair_ptr[p + 1];
            (
                (j as usize, k as usize),
                &self.rows[r.clone()],
                &self.vals[r],
            )
        })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        match self.stored_column(j, k) {
            None => self.dangling_default.as_slice()[i],
            Some((rows, vals)) => rows.binary_search(&(i as u32)).map_or(0.0, |pos| vals[pos]),
        }
    }

    /// Stored-column part of `Pxy` for pair range `range`, accumulated into
    /// `out`; returns the stored mass `sum x_j y_k` over those pairs.
    fn accumulate(
        &self,
        range: std::ops::Range<usize>,
        x: &[f64],
        y: &[f64],
        out: &mut [f64],
    ) -> f64 {
        let mut mass = 0.0;
        for p in range {
            let (j, k) = self.pairs[p];
            let w = x[j as usize] * y[k as usize];
            mass += w;
            if w == 0.0 {
                continue;
            }
            let r = self.pair_ptr[p]..self.pair_ptr[p + 1];
            for (&i, &v) in self.rows[r.clone()].iter().zip(&self.vals[r]) {
                out[i as usize] += v * w;
            }
        }
        mass
    }
}

impl Bilinear for SparseTensor3 {
    fn dim(&self) -> usize {
        self.n
    }

    /// Stored columns contribute entrywise; the dangling columns together
    /// contribute `(sum x)(sum y) - stored mass` times the default column.
    fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        let npairs = self.pairs.len();
        let stored_mass = if self.nnz() < PARALLEL_NNZ {
            self.accumulate(0..npairs, x, y, out)
        } else {
            // Fixed chunking and an in-order reduction keep results
            // independent of the thread count.
            let chunks: Vec<(Vec<f64>, f64)> = (0..npairs.div_ceil(PAIRS_PER_CHUNK))
                .into_par_iter()
                .map(|c| {
                    let lo = c * PAIRS_PER_CHUNK;
                    let hi = (lo + PAIRS_PER_CHUNK).min(npairs);
                    let mut part = vec![0.0; self.n];
                    let m = self.accumulate(lo..hi, x, y, &mut part);
                    (part, m)
                })
                .collect();
            let mut mass = 0.0;
            for (part, m) in chunks {
                mass += m;
                for (o, v) in out.iter_mut().zip(part) {
                    *o += v;
                }
            }
            mass
        };
        let total = x.iter().sum::<f64>() * y.iter().sum::<f64>();
        let dangling_mass = total - stored_mass;
        if dangling_mass != 0.0 {
            for (o, d) in out.iter_mut().zip(self.dangling_default.as_slice()) {
                *o += dangling_mass * d;
            }
        }
    }

    fn is_stochastic(&self) -> bool {
        true
    }

    fn densify(&self, limit: usize) -> Result<DenseTensor3> {
        if self.n > limit {
            return Err(Error::TooLarge {
                what: "dense materialization",
                limit,
                n: self.n,
            });
        }
        let n = self.n;
        let d = self.dangling_default.as_slice();
        let mut t = DenseTensor3::from_fn(n, |i, _, _| d[i])?;
        for ((j, k), rows, vals) in self.stored_columns() {
            for i in 0..n {
                t.set(i, j, k, 0.0);
            }
            for (&i, &v) in rows.iter().zip(vals) {
                t.set(i as usize, j, k, v);
            }
        }
        Ok(t.mark_stochastic_unchecked())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SparseTensor3 {
        SparseTensor3::from_entries(
            3,
            vec![
                (2, 0, 1, 1.0),
                (0, 1, 1, 0.25),
                (1, 1, 1, 0.75),
                (1, 2, 0, 1.0),
            ],
            StochasticVector::uniform(3),
        )
        .unwrap()
    }

    #[test]
    fn apply_matches_densified() {
        let t = small();
        let d = t.densify(10).unwrap();
        assert!(d.validate_stochastic(1e-12).unwrap().stochastic);
        let x = [0.1, 0.6, 0.3];
        let y = [0.5, 0.2, 0.3];
        let a = t.apply(&x, &y).unwrap();
        let b = d.apply(&x, &y).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-15);
        }
        assert_eq!(t.get(2, 0, 1), 1.0);
        assert_eq!(t.get(0, 0, 1), 0.0);
        assert_eq!(t.get(0, 0, 0), 1.0 / 3.0);
    }

    #[test]
    fn storage_is_grouped_by_column() {
        let t = small();
        let order: Vec<_> = t.stored_columns().map(|c| c.0).collect();
        assert_eq!(order, vec![(2, 0), (0, 1), (1, 1)]);
        assert_eq!(t.nnz(), 4);
    }

    #[test]
    fn rejects_invalid_entries() {
        let u = StochasticVector::uniform(2);
        assert!(SparseTensor3::from_entries(2, vec![(0, 0, 0, 0.5)], u.clone()).is_err());
        assert!(
            SparseTensor3::from_entries(2, vec![(0, 0, 0, 0.5), (0, 0, 0, 0.5)], u.clone())
                .is_err()
        );
        assert!(SparseTensor3::from_entries(2, vec![(0, 0, 0, -1.0)], u.clone()).is_err());
        assert!(SparseTensor3::from_entries(2, vec![(2, 0, 0, 1.0)], u).is_err());
    }

    #[test]
    fn densify_respects_guard() {
        assert!(matches!(small().densify(2), Err(Error::TooLarge { .. })));
    }
}
