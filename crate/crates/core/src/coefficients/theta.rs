//! `theta(P, s) = max_{j,k1,k2} sum_i |P[i,j,k1] - s_i| + |P[i,k2,j] - s_i|`
//! bounds `T(P)` from above for every reference vector `s`. The two sums
//! depend on disjoint indices once `j` is fixed, so the maximum splits into
//! `max_j (max_k1 A[j,k1] + max_k2 B[j,k2])` and costs `O(n^3)`.

use serde::{Deserialize, Serialize};

use super::{Coefficient, CoefficientReport};
use crate::error::{check_dim, Result};
use crate::tensor::DenseTensor3;

fn dev(col: &[f64], s: &[f64]) -> f64 {
    col.iter().zip(s).map(|(a, b)| (a - b).abs()).sum()
}

/// Witness `(j, k1, k2)`.
pub fn theta(p: &DenseTensor3, sigma: &[f64]) -> Result<CoefficientReport> {
    let n = p.n();
    check_dim(n, sigma.len())?;
    let mut best = (f64::NEG_INFINITY, [0usize; 3]);
    for j in 0..n {
        let (mut a, mut ka) = (f64::NEG_INFINITY, 0);
        let (mut b, mut kb) = (f64::NEG_INFINITY, 0);
        for k in 0..n {
            let x = dev(p.column(j, k), sigma);
            if x > a {
                a = x;
                ka = k;
            }
            let y = dev(p.column(k, j), sigma);
            if y > b {
                b = y;
                kb = k;
            }
        }
        if a + b > best.0 {
            best = (a + b, [j, ka, kb]);
        }
    }
    Ok(CoefficientReport::new(
        Coefficient::Theta,
        best.0,
        best.1.to_vec(),
        "O(n^3)",
    ))
}

/// Unfactored `O(n^4)` scan of the same maximum.
pub fn theta_bruteforce(p: &DenseTensor3, sigma: &[f64]) -> Result<f64> {
    let n = p.n();
    check_dim(n, sigma.len())?;
    let mut best = f64::NEG_INFINITY;
    for j in 0..n {
        for k1 in 0..n {
            for k2 in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += (p.get(i, j, k1) - sigma[i]).abs() + (p.get(i, k2, j) - sigma[i]).abs();
                }
                best = best.max(s);
            }
        }
    }
    Ok(best)
}

/// Reference vectors built from the row extremes of `P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaVectors {
    /// `max_{j,k} P[i,j,k]`.
    pub max: Vec<f64>,
    /// `min_{j,k} P[i,j,k]`.
    pub min: Vec<f64>,
    /// Average of the two.
    pub mid: Vec<f64>,
}

impl SigmaVectors {
    pub fn all(&self) -> [&[f64]; 3] {
        [&self.max, &self.min, &self.mid]
    }
}

pub fn sigma_vectors(p: &DenseTensor3) -> SigmaVectors {
    let n = p.n();
    let mut max = vec![f64::NEG_INFINITY; n];
    let mut min = vec![f64::INFINITY; n];
    for col in p.as_slice().chunks(n) {
        for (i, &v) in col.iter().enumerate() {
            max[i] = max[i].max(v);
            min[i] = min[i].min(v);
        }
    }
    let mid = max.iter().zip(&min).map(|(a, b)| 0.5 * (a + b)).collect();
    SigmaVectors { max, min, mid }
}
