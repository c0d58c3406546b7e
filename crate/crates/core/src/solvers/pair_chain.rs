//! Stationary law of the pair chain `(X(t), X(t-1))` of a second-order
//! Markov chain: `Y[i,j] = sum_k P[i,j,k] Y[j,k]`, found by power iteration
//! on the `n^2` states without forming the `n^2 x n^2` transition matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor3, SquareMatrix, StochasticVector};

pub const PAIR_CHAIN_LIMIT: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairChainReport {
    /// Joint law, `Y[i,j] = P(X(t) = i, X(t-1) = j)`.
    pub y: SquareMatrix,
    /// `Y 1`, the marginal of the current state.
    pub rowsum: StochasticVector,
    pub iterations: usize,
    /// Last step `||Y_{t+1} - Y_t||_1`.
    pub residual: f64,
    /// `max_{ij} |Y[i,j] - sum_k P[i,j,k] Y[j,k]|` at the returned `Y`.
    pub equation_residual: f64,
    /// `||Y 1 - Y^T 1||_1`.
    pub marginal_gap: f64,
}

fn pair_step(p: &DenseTensor3, y: &SquareMatrix) -> SquareMatrix {
    let n = p.n();
    let mut out = SquareMatrix::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let w = y.get(j, k);
            if w == 0.0 {
                continue;
            }
            for (i, pi) in p.column(j, k).iter().enumerate() {
                *out.get_mut(i, j) += pi * w;
            }
        }
    }
    out
}

/// Power iteration from the uniform joint law; stops when the `l1` step
/// falls below `tol`.
pub fn pair_chain_stationary(p: &DenseTensor3, tol: f64, maxit: usize) -> Result<PairChainReport> {
    let n = p.n();
    if n > PAIR_CHAIN_LIMIT {
        return Err(Error::TooLarge {
            what: "pair chain",
            limit: PAIR_CHAIN_LIMIT,
            n,
        });
    }
    crate::coefficients::require_stochastic(p)?;
    let mut y = SquareMatrix::from_fn(n, |_, _| 1.0 / (n * n) as f64);
    for it in 1..=maxit {
        let mut next = pair_step(p, &y);
        let total: f64 = next.as_slice().iter().sum();
        if (total - 1.0).abs() > crate::tensor::CLOSURE_TOL {
            return Err(Error::invariant(format!(
                "pair chain mass drifted to {total}"
            )));
        }
        next = SquareMatrix::from_fn(n, |i, j| next.get(i, j) / total);
        let residual: f64 = next
            .as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(a, b)| (a - b).abs())
            .sum();
        y = next;
        if residual < tol {
            let again = pair_step(p, &y);
            let equation_residual = again
                .as_slice()
                .iter()
                .zip(y.as_slice())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let rows = y.row_sums();
            let cols = y.column_sums();
            let marginal_gap = rows.iter().zip(&cols).map(|(a, b)| (a - b).abs()).sum();
            if marginal_gap > tol {
                return Err(Error::invariant(format!(
                    "pair chain marginals differ by {marginal_gap:e}"
                )));
            }
            return Ok(PairChainReport {
                rowsum: StochasticVector::normalized(rows)?,
                y,
                iterations: it,
                residual,
                equation_residual,
                marginal_gap,
            });
        }
    }
    Err(Error::NotConverged(maxit))
}
