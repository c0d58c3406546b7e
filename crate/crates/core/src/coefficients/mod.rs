//! Ergodicity coefficients of stochastic matrices and order-3 tensors.
//!
//! For a stochastic tensor `P` the 1-norm coefficients are the best
//! Lipschitz constants of `(x, y) -> Pxy` in each slot and of the quadratic
//! map `x -> Pxx` on the simplex:
//!
//! ```text
//! T_L(P) = 1/2 max_{j,k1,k2} sum_i |P[i,j,k1] - P[i,j,k2]|
//! T_R(P) = 1/2 max_{j1,j2,k} sum_i |P[i,j1,k] - P[i,j2,k]|
//! T(P)   = 1/2 max_{j,k1,k2} sum_i |P[i,j,k1] - P[i,j,k2] + P[i,k1,j] - P[i,k2,j]|
//! ```
//!
//! `T(P) < 1` makes `x -> Pxx` a contraction, hence a unique stochastic
//! Z-eigenvector. The Birkhoff coefficient `T_H` measures contraction in the
//! Hilbert projective metric, and `delta`, `gamma` are the Li–Ng subset
//! coefficients. `theta` bounds `T` from above through a reference vector.
//!
//! Scans over index triples run in parallel for large `n`; witnesses are
//! always the lexicographically smallest extremizer.

mod birkhoff;
mod li_ng;
mod matrix;
mod one_norm;
mod subsets;
mod theta;

use serde::{Deserialize, Serialize};

pub use birkhoff::{birkhoff_delta, hilbert_distance, kappa, tau_h};
pub(crate) use li_ng::require_stochastic;
pub use li_ng::{delta_bruteforce, delta_closed_form, gamma, SUBSET_LIMIT};
pub use matrix::{tau1, tau1_overlap, tau1_report};
pub use one_norm::{
    lipschitz_check, tau, tau_left, tau_left_overlap, tau_left_subsets, tau_overlap, tau_right,
    tau_right_overlap, tau_summary, LipschitzEntry, LipschitzReport, TauSummary,
};
pub use theta::{sigma_vectors, theta, theta_bruteforce, SigmaVectors};

/// Below this size scans stay on the calling thread.
const PAR_THRESHOLD: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficient {
    Tau1,
    #[serde(rename = "TL")]
    TauL,
    #[serde(rename = "TR")]
    TauR,
    #[serde(rename = "T")]
    Tau,
    #[serde(rename = "TH")]
    TauH,
    Kappa,
    Delta,
    Gamma,
    Theta,
}

impl Coefficient {
    /// Closed range of values on stochastic input; `theta` is unbounded above.
    pub fn range(self) -> (f64, f64) {
        match self {
            Coefficient::Tau1 | Coefficient::TauL | Coefficient::TauR => (0.0, 1.0),
            Coefficient::Tau | Coefficient::TauH | Coefficient::Gamma => (0.0, 2.0),
            Coefficient::Kappa | Coefficient::Delta => (0.0, 1.0),
            Coefficient::Theta => (0.0, f64::INFINITY),
        }
    }
}

/// Value of one coefficient with the index tuple attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    pub name: Coefficient,
    pub value: f64,
    /// 0-based indices of the extremizer; for subset coefficients, the
    /// members of the minimizing subset.
    pub witness: Vec<usize>,
    /// Operation count class of the evaluation.
    pub cost: String,
}

impl CoefficientReport {
    pub(crate) fn new(name: Coefficient, value: f64, witness: Vec<usize>, cost: &str) -> Self {
        CoefficientReport {
            name,
            value,
            witness,
            cost: cost.to_string(),
        }
    }

    /// True when the value lies in the documented range up to `tol`.
    pub fn in_range(&self, tol: f64) -> bool {
        let (lo, hi) = self.name.range();
        self.value >= lo - tol && self.value <= hi + tol
    }
}

/// Best `(value, witness)` over outer indices `0..n`, each scanned by `f`.
/// Ties resolve to the smallest outer index, so `f` must itself keep the
/// lexicographically smallest witness.
pub(crate) fn reduce_lex<W, F>(n: usize, better: fn(f64, f64) -> bool, f: F) -> (f64, W)
where
    W: Send,
    F: Fn(usize) -> (f64, W) + Sync + Send,
{
    use rayon::prelude::*;
    let parts: Vec<(f64, W)> = if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().map(&f).collect()
    } else {
        (0..n).map(&f).collect()
    };
    let mut it = parts.into_iter();
    let mut best = it.next().expect("reduce_lex needs n >= 1");
    for cand in it {
        if better(cand.0, best.0) {
            best = cand;
        }
    }
    best
}

pub(crate) fn gt(a: f64, b: f64) -> bool {
    a > b
}

pub(crate) fn lt(a: f64, b: f64) -> bool {
    a < b
}
