use serde::{Deserialize, Serialize};

use crate::coefficients::{delta_closed_form, tau};
use crate::error::{check_dim, Error, Result};
use crate::tensor::{DenseTensor3, StochasticVector};

/// Slack for `actual <= bound_t`, covering the solver error in `x` and `x'`.
const BOUND_SLACK: f64 = 1e-9;

/// Bounds on `||x - x'||_1` for fixed points of `P` and a perturbation `P'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    pub norm_diff: f64,
    pub tau: f64,
    pub delta: f64,
    /// `||P - P'||_1 / (1 - T(P))`, available when `T(P) < 1`.
    pub bound_t: Option<f64>,
    /// `||P - P'||_1 / (2 delta(P) - 1)`, available when `delta(P) > 1/2`.
    pub bound_delta: Option<f64>,
    pub actual: f64,
}

/// Evaluates both bounds. Fails if `actual` exceeds `bound_t` or if
/// `bound_t > bound_delta` when both are available.
pub fn perturbation_bound(
    p: &DenseTensor3,
    p_prime: &DenseTensor3,
    x: &StochasticVector,
    x_prime: &StochasticVector,
) -> Result<PerturbationReport> {
    check_dim(p.n(), p_prime.n())?;
    check_dim(p.n(), x.len())?;
    check_dim(p.n(), x_prime.len())?;
    let norm_diff = p.difference(p_prime)?.one_norm();
    let t = tau(p).value;
    let delta = delta_closed_form(p)?.value;
    let bound_t = (t < 1.0).then(|| norm_diff / (1.0 - t));
    let bound_delta = (delta > 0.5).then(|| norm_diff / (2.0 * delta - 1.0));
    let actual = x.l1_distance(x_prime);
    if let Some(b) = bound_t {
        if actual > b + BOUND_SLACK {
            return Err(Error::invariant(format!(
                "||x - x'||_1 = {actual} exceeds ||P - P'||_1 / (1 - T) = {b}"
            )));
        }
        if let Some(d) = bound_delta {
            if b > d * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::invariant(format!(
                    "coefficient bound {b} exceeds the delta bound {d}"
                )));
            }
        }
    }
    Ok(PerturbationReport {
        norm_diff,
        tau: t,
        delta,
        bound_t,
        bound_delta,
        actual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_pair() {
        let p = DenseTensor3::uniform(3).unwrap();
        let x = StochasticVector::uniform(3);
        let r = perturbation_bound(&p, &p, &x, &x).unwrap();
        assert_eq!(r.actual, 0.0);
        assert_eq!(r.bound_t, Some(0.0));
        assert_eq!(r.bound_delta, Some(0.0));
    }

    #[test]
    fn unavailable_bounds_are_flagged() {
        let e = DenseTensor3::left_identity(3).unwrap();
        let x = StochasticVector::uniform(3);
        let r = perturbation_bound(&e, &e, &x, &x).unwrap();
        assert!(r.bound_t.is_none() && r.bound_delta.is_none());
    }
}
