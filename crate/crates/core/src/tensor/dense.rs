use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::SquareMatrix;
use super::vector::{StochasticVector, VALIDATION_TOL};
use super::Bilinear;
use crate::error::{check_dim, Error, Result};
use crate::rng::rng_from_seed;

/// Cubical order-3 tensor stored column-major: entry `(i, j, k)` lives at
/// `i + n * (j + n * k)`, so every first-mode column `P[:, j, k]` is
/// contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseTensor3 {
    n: usize,
    data: Vec<f64>,
    stochastic_checked: bool,
}

/// Outcome of a stochasticity check. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StochasticityReport {
    pub stochastic: bool,
    /// Column `(j, k)` with the largest violation.
    pub worst_column: (usize, usize),
    /// Largest of `|sum_i P[i,j,k] - 1|` and `-min P[i,j,k]` over that column.
    pub worst_deviation: f64,
}

impl DenseTensor3 {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("tensor dimension must be positive"));
        }
        check_dim(n * n * n, data.len())?;
        Ok(DenseTensor3 {
            n,
            data,
            stochastic_checked: false,
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n * n * n])
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    t.data[i + n * (j + n * k)] = f(i, j, k);
                }
            }
        }
        Ok(t)
    }

    /// Builds a tensor from bracketed matrix lists: `slices[k][i][j]` is
    /// `P[i, j, k]`, i.e. the k-th matrix is the frontal slice `P(:, :, k)`.
    pub fn from_frontal_slices(slices: &[Vec<Vec<f64>>]) -> Result<Self> {
        let n = slices.len();
        for s in slices {
            check_dim(n, s.len())?;
            for row in s {
                check_dim(n, row.len())?;
            }
        }
        Self::from_fn(n, |i, j, k| slices[k][i][j])
    }

    /// Validates at [`VALIDATION_TOL`] and marks the tensor as stochastic.
    pub fn into_stochastic(mut self) -> Result<Self> {
        let report = self.validate_stochastic(VALIDATION_TOL)?;
        if !report.stochastic {
            let (j, k) = report.worst_column;
            return Err(Error::NotStochastic {
                j: j + 1,
                k: k + 1,
                deviation: report.worst_deviation,
            });
        }
        self.stochastic_checked = true;
        Ok(self)
    }

    pub fn validate_stochastic(&self, tol: f64) -> Result<StochasticityReport> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let n = self.n;
        let mut worst = (0, 0);
        let mut worst_dev = -1.0;
        for k in 0..n {
            for j in 0..n {
                let col = self.column(j, k);
                let sum: f64 = col.iter().sum();
                let min = col.iter().cloned().fold(f64::INFINITY, f64::min);
                let dev = (sum - 1.0).abs().max(-min);
                if dev > worst_dev || dev.is_nan() {
                    worst_dev = dev;
                    worst = (j, k);
                }
            }
        }
        Ok(StochasticityReport {
            stochastic: worst_dev <= tol,
            worst_column: worst,
            worst_deviation: worst_dev,
        })
    }

    pub fn is_stochastic(&self) -> bool {
        self.stochastic_checked
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[i + self.n * (j + self.n * k)]
    }

    /// Mutating an entry drops the stochastic mark.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: f64) {
        let n = self.n;
        self.data[i + n * (j + n * k)] = value;
        self.stochastic_checked = false;
    }

    #[inline]
    pub fn column(&self, j: usize, k: usize) -> &[f64] {
        let start = self.n * (j + self.n * k);
        &self.data[start..start + self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `P^S[i,j,k] = P[i,k,j]`.
    pub fn s_transpose(&self) -> DenseTensor3 {
        let mut t = Self::from_fn(self.n, |i, j, k| self.get(i, k, j)).expect("n > 0");
        t.stochastic_checked = self.stochastic_checked;
        t
    }

    /// `Q = (P + P^S) / 2`.
    pub fn symmetrize(&self) -> DenseTensor3 {
        let mut t = Self::from_fn(self.n, |i, j, k| {
            0.5 * (self.get(i, j, k) + self.get(i, k, j))
        })
        .expect("n > 0");
        t.stochastic_checked = self.stochastic_checked;
        t
    }

    pub fn is_s_symmetric(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|k| {
            (0..n).all(|j| (0..n).all(|i| (self.get(i, j, k) - self.get(i, k, j)).abs() <= tol))
        })
    }

    /// `max_{j,k} sum_i |P[i,j,k]|`.
    pub fn one_norm(&self) -> f64 {
        self.data
            .chunks_exact(self.n)
            .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Entrywise `a * self + b * other`. The result keeps the stochastic
    /// mark when both inputs carry it and the weights form a convex pair.
    pub fn linear_combination(&self, a: f64, other: &DenseTensor3, b: f64) -> Result<DenseTensor3> {
        check_dim(self.n, other.n)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(p, q)| a * p + b * q)
            .collect();
        let convex = a >= 0.0 && b >= 0.0 && (a + b - 1.0).abs() <= VALIDATION_TOL;
        Ok(DenseTensor3 {
            n: self.n,
            data,
            stochastic_checked: convex && self.stochastic_checked && other.stochastic_checked,
        })
    }

    pub fn difference(&self, other: &DenseTensor3) -> Result<DenseTensor3> {
        self.linear_combination(1.0, other, -1.0)
    }

    /// Matrix `(Px)[i,j] = sum_k P[i,k,j] x_k`, so that `(Px) y = P x y`.
    pub fn collapse(&self, x: &[f64]) -> Result<SquareMatrix> {
        let n = self.n;
        check_dim(n, x.len())?;
        let mut m = SquareMatrix::zeros(n);
        for j in 0..n {
            for (k, &xk) in x.iter().enumerate() {
                if xk == 0.0 {
                    continue;
                }
                let col = self.column(k, j);
                for (i, &p) in col.iter().enumerate() {
                    *m.get_mut(i, j) += p * xk;
                }
            }
        }
        Ok(m)
    }

    pub fn uniform(n: usize) -> Result<DenseTensor3> {
        let mut t = Self::new(n, vec![1.0 / n as f64; n * n * n])?;
        t.stochastic_checked = true;
        Ok(t)
    }

    /// `V[i,j,k] = v_i`, so that `Vxy = v` on the simplex.
    pub fn rank_one(v: &StochasticVector) -> DenseTensor3 {
        let n = v.len();
        let mut t = Self::from_fn(n, |i, _, _| v.as_slice()[i]).expect("n > 0");
        t.stochastic_checked = true;
        t
    }

    /// `E^L[i,j,k] = delta_ij`.
    pub fn left_identity(n: usize) -> Result<DenseTensor3> {
        let mut t = Self::from_fn(n, |i, j, _| if i == j { 1.0 } else { 0.0 })?;
        t.stochastic_checked = true;
        Ok(t)
    }

    /// `E^R[i,j,k] = delta_ik`.
    pub fn right_identity(n: usize) -> Result<DenseTensor3> {
        let mut t = Self::from_fn(n, |i, _, k| if i == k { 1.0 } else { 0.0 })?;
        t.stochastic_checked = true;
        Ok(t)
    }

    /// `P[i,j,k] = A[i,j]`; stochastic iff `A` is column stochastic.
    pub fn from_left_matrix(a: &SquareMatrix) -> DenseTensor3 {
        Self::from_fn(a.n(), |i, j, _| a.get(i, j)).expect("n > 0")
    }

    /// Entries i.i.d. uniform on (0, 1), each column then normalized.
    pub fn random_stochastic(n: usize, seed: u64) -> Result<DenseTensor3> {
        let mut rng = rng_from_seed(seed);
        Self::random_stochastic_with(n, &mut rng)
    }

    pub fn random_stochastic_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DenseTensor3> {
        if n < 2 {
            return Err(Error::invalid("random stochastic tensors need n >= 2"));
        }
        let mut data: Vec<f64> = (0..n * n * n).map(|_| rng.random::<f64>()).collect();
        for col in data.chunks_exact_mut(n) {
            let s: f64 = col.iter().sum();
            col.iter_mut().for_each(|v| *v /= s);
        }
        Ok(DenseTensor3 {
            n,
            data,
            stochastic_checked: true,
        })
    }

    pub(crate) fn mark_stochastic_unchecked(mut self) -> Self {
        self.stochastic_checked = true;
        self
    }
}

impl Bilinear for DenseTensor3 {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply_into(&self, x: &[f64], y: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (k, &yk) in y.iter().enumerate() {
            if yk == 0.0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                let w = xj * yk;
                if w == 0.0 {
                    continue;
                }
                let col = self.column(j, k);
                for (o, &p) in out.iter_mut().zip(col) {
                    *o += p * w;
                }
            }
        }
    }

    fn is_stochastic(&self) -> bool {
        self.stochastic_checked
    }

    fn densify(&self, _limit: usize) -> Result<DenseTensor3> {
        Ok(self.clone())
    }
}
