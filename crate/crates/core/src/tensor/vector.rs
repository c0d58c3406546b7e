use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when validating user-supplied stochastic data.
pub const VALIDATION_TOL: f64 = 1e-12;
/// Tolerance used when asserting that an iterate stayed in the simplex.
pub const CLOSURE_TOL: f64 = 1e-10;

/// A point of the probability simplex `{x >= 0, sum(x) = 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StochasticVector(Vec<f64>);

impl StochasticVector {
    /// Validates at [`VALIDATION_TOL`].
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(values, VALIDATION_TOL)
    }

    pub fn with_tolerance(values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("stochastic vector must be non-empty"));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= -tol)) {
            return Err(Error::invalid(format!(
                "entry {} is negative ({v:e})",
                i + 1
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::invalid(format!(
                "entries sum to {total} instead of 1"
            )));
        }
        Ok(StochasticVector(values))
    }

    /// Clamps tiny negatives and rescales a nonnegative vector with positive mass.
    pub fn normalized(mut values: Vec<f64>) -> Result<Self> {
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        let total: f64 = values.iter().sum();
        if values.is_empty() || !(total > 0.0) || !total.is_finite() {
            return Err(Error::invalid("vector has no positive mass"));
        }
        values.iter_mut().for_each(|v| *v /= total);
        Ok(StochasticVector(values))
    }

    /// Accepts the output of a stochastic map. The closure property is
    /// asserted at [`CLOSURE_TOL`]; the vector is then renormalized, since
    /// the quadratic maps amplify any drift of the total mass.
    pub fn from_iterate(values: Vec<f64>) -> Result<Self> {
        let total: f64 = values.iter().sum();
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        if !((total - 1.0).abs() <= CLOSURE_TOL) || min < -CLOSURE_TOL {
            return Err(Error::invariant(format!(
                "iterate left the simplex (sum {total}, min entry {min:e})"
            )));
        }
        Self::normalized(values)
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform vector needs n > 0");
        StochasticVector(vec![1.0 / n as f64; n])
    }

    /// Canonical basis vector `e_i` (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        StochasticVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, w: f64, other: &StochasticVector) -> StochasticVector {
        let values = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| w * a + (1.0 - w) * b)
            .collect();
        StochasticVector(values)
    }

    pub fn l1_distance(&self, other: &StochasticVector) -> f64 {
        l1_distance(&self.0, &other.0)
    }
}

impl AsRef<[f64]> for StochasticVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn l1_norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).sum()
}
