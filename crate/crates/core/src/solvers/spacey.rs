//! Sampled spacey walk. At step `t` the walker at `X(t)` draws
//! `X(t+1) = i` with probability `sum_k P[i,X(t),k] (y_t)_k`, where
//!
//! ```text
//! (y_t)_j = (1 + #{1 <= s <= t : X(s) = j}) / (t + n).
//! ```
//!
//! Drawing `k ~ y_t` and then `i ~ P[:,X(t),k]` has exactly this law. The
//! draw of `k` picks a uniform slot among the `n` pseudo-counts and the `t`
//! recorded visits, so each step costs `O(n)` for the column draw only.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;
use crate::tensor::{DenseTensor3, SparseTensor3, StochasticVector};

#[derive(Debug, Clone, Copy)]
pub enum TensorRef<'a> {
    Dense(&'a DenseTensor3),
    Sparse(&'a SparseTensor3),
}

impl<'a> From<&'a DenseTensor3> for TensorRef<'a> {
    fn from(p: &'a DenseTensor3) -> Self {
        TensorRef::Dense(p)
    }
}

impl<'a> From<&'a SparseTensor3> for TensorRef<'a> {
    fn from(p: &'a SparseTensor3) -> Self {
        TensorRef::Sparse(p)
    }
}

impl TensorRef<'_> {
    fn n(&self) -> usize {
        match self {
            TensorRef::Dense(p) => p.n(),
            TensorRef::Sparse(p) => p.n(),
        }
    }

    fn sample_row<R: Rng>(&self, j: usize, k: usize, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        match self {
            TensorRef::Dense(p) => inverse_cdf(p.column(j, k).iter().copied(), u, |i| i),
            TensorRef::Sparse(p) => match p.stored_column(j, k) {
                Some((rows, vals)) => {
                    inverse_cdf(vals.iter().copied(), u, |idx| rows[idx] as usize)
                }
                None => inverse_cdf(p.dangling_default().as_slice().iter().copied(), u, |i| i),
            },
        }
    }
}

/// Index of the first cumulative weight exceeding `u`; rounding leftovers go
/// to the last positive weight.
fn inverse_cdf(weights: impl Iterator<Item = f64>, u: f64, map: impl Fn(usize) -> usize) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (idx, w) in weights.enumerate() {
        if w > 0.0 {
            last = idx;
            acc += w;
            if u < acc {
                return map(idx);
            }
        }
    }
    map(last)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceyMcResult {
    /// Occupation vector `y_steps`.
    pub occupation: StochasticVector,
    /// Visits to each state among `X(1), ..., X(steps)`.
    pub counts: Vec<u64>,
    pub final_state: usize,
}

/// Runs `steps` transitions from the 0-based state `x0_state`.
pub fn simulate_spacey_mc<'a>(
    p: impl Into<TensorRef<'a>>,
    x0_state: usize,
    steps: usize,
    seed: u64,
) -> Result<SpaceyMcResult> {
    let p = p.into();
    let n = p.n();
    if x0_state >= n {
        return Err(Error::invalid(format!(
            "start state {} outside 1..={n}",
            x0_state + 1
        )));
    }
    if steps == 0 {
        return Err(Error::invalid("spacey walk needs at least one step"));
    }
    let stochastic = match p {
        TensorRef::Dense(d) => d.is_stochastic(),
        TensorRef::Sparse(_) => true,
    };
    if !stochastic {
        return Err(Error::invalid("spacey walk needs a stochastic tensor"));
    }
    let mut rng = rng_from_seed(seed);
    let mut history: Vec<u32> = Vec::with_capacity(steps);
    let mut counts = vec![0u64; n];
    let mut state = x0_state;
    for t in 0..steps {
        let slot = rng.random_range(0..t + n);
        let k = if slot < n {
            slot
        } else {
            history[slot - n] as usize
        };
        state = p.sample_row(state, k, &mut rng);
        history.push(state as u32);
        counts[state] += 1;
    }
    let denom = (steps + n) as f64;
    let occ = counts.iter().map(|&c| (1 + c) as f64 / denom).collect();
    Ok(SpaceyMcResult {
        occupation: StochasticVector::normalized(occ)?,
        counts,
        final_state: state,
    })
}
