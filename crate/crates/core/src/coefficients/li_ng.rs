//! Li–Ng coefficients
//!
//! ```text
//! delta(P) = min_I ( min_{j,k} sum_{i not in I} P[i,j,k] + min_{j,k} sum_{i in I} P[i,j,k] )
//!          = 1 - 1/2 max_{(j1,k1),(j2,k2)} || P[:,j1,k1] - P[:,j2,k2] ||_1
//! ```
//!
//! and `gamma(P)`, a minimum over proper nonempty subsets `I` of two
//! cross-mass terms. Both satisfy `gamma >= 2 delta` and `T <= 2 - 2 delta`.

use super::one_norm::tau;
use super::subsets::{members, SubsetSums};
use super::{reduce_lex, Coefficient, CoefficientReport};
use crate::error::{Error, Result};
use crate::tensor::DenseTensor3;

/// Largest `n` accepted by the `2^n` subset enumerations.
pub const SUBSET_LIMIT: usize = 20;

pub(crate) fn require_stochastic(p: &DenseTensor3) -> Result<()> {
    if p.is_stochastic() {
        return Ok(());
    }
    let r = p.validate_stochastic(crate::tensor::VALIDATION_TOL)?;
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

/// Closed form over pairs of columns; witness `(j1, k1, j2, k2)`.
pub fn delta_closed_form(p: &DenseTensor3) -> Result<CoefficientReport> {
    require_stochastic(p)?;
    let n = p.n();
    let cols: Vec<&[f64]> = p.as_slice().chunks(n).collect();
    let m = cols.len();
    let (dist, (u, v)) = reduce_lex(m, super::gt, |u| {
        let mut best = (0.0, (u, u));
        for v in u + 1..m {
            let d: f64 = cols[u]
                .iter()
                .zip(cols[v])
                .map(|(a, b)| (a - b).abs())
                .sum();
            if d > best.0 {
                best = (d, (u, v));
            }
        }
        best
    });
    let (u, v) = if dist == 0.0 { (0, 0) } else { (u, v) };
    let witness = vec![u % n, u / n, v % n, v / n];
    Ok(CoefficientReport::new(
        Coefficient::Delta,
        1.0 - 0.5 * dist,
        witness,
        "O(n^5)",
    ))
}

/// Direct minimum over all `2^n` subsets, empty and full set included.
/// The witness lists the minimizing subset.
pub fn delta_bruteforce(p: &DenseTensor3) -> Result<CoefficientReport> {
    require_stochastic(p)?;
    let n = p.n();
    let mut sums = SubsetSums::new(p)?;
    let mut best = (f64::INFINITY, 0u64);
    loop {
        let a = sums.outside().iter().cloned().fold(f64::INFINITY, f64::min);
        let b = sums.inside().iter().cloned().fold(f64::INFINITY, f64::min);
        if a + b < best.0 {
            best = (a + b, sums.mask());
        }
        if !sums.advance() {
            break;
        }
    }
    Ok(CoefficientReport::new(
        Coefficient::Delta,
        best.0,
        members(best.1, n),
        "O(2^n n^2)",
    ))
}

/// Li–Ng `gamma` over proper nonempty subsets. Also checks `gamma >= 2 delta`
/// and, for S-symmetric input, `2 - gamma <= T`.
pub fn gamma(p: &DenseTensor3) -> Result<CoefficientReport> {
    require_stochastic(p)?;
    let n = p.n();
    if n < 2 {
        return Err(Error::invalid("gamma needs n >= 2"));
    }
    let mut sums = SubsetSums::new(p)?;
    let mut best = (f64::INFINITY, 0u64);
    let mut delta = f64::INFINITY;
    let full = (1u64 << n) - 1;
    loop {
        let (inside, outside) = (sums.inside(), sums.outside());
        let a = outside.iter().cloned().fold(f64::INFINITY, f64::min);
        let b = inside.iter().cloned().fold(f64::INFINITY, f64::min);
        delta = delta.min(a + b);
        let mask = sums.mask();
        if mask != 0 && mask != full {
            // First term: outer min over k, inner mins over j in / not in I.
            let mut first = f64::INFINITY;
            for k in 0..n {
                let (mut x, mut y) = (f64::INFINITY, f64::INFINITY);
                for j in 0..n {
                    if sums.contains(j) {
                        x = x.min(outside[j + n * k]);
                    } else {
                        y = y.min(inside[j + n * k]);
                    }
                }
                first = first.min(x + y);
            }
            // Second term: outer min over j, inner mins over k.
            let mut second = f64::INFINITY;
            for j in 0..n {
                let (mut x, mut y) = (f64::INFINITY, f64::INFINITY);
                for k in 0..n {
                    if sums.contains(k) {
                        x = x.min(outside[j + n * k]);
                    } else {
                        y = y.min(inside[j + n * k]);
                    }
                }
                second = second.min(x + y);
            }
            let g = first + second;
            if g < best.0 || (g == best.0 && mask < best.1) {
                best = (g, mask);
            }
        }
        if !sums.advance() {
            break;
        }
    }
    let tol = 1e-12;
    if best.0 < 2.0 * delta - tol {
        return Err(Error::invariant(format!(
            "gamma = {} below 2 delta = {}",
            best.0,
            2.0 * delta
        )));
    }
    if p.is_s_symmetric(0.0) {
        let t = tau(p).value;
        if 2.0 - best.0 > t + tol {
            return Err(Error::invariant(format!(
                "2 - gamma = {} exceeds T = {t} on an S-symmetric tensor",
                2.0 - best.0
            )));
        }
    }
    Ok(CoefficientReport::new(
        Coefficient::Gamma,
        best.0,
        members(best.1, n),
        "O(2^n n^2)",
    ))
}
