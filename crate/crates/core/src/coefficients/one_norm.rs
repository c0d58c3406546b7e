use serde::{Deserialize, Serialize};

use super::subsets::SubsetSums;
use super::{gt, lt, reduce_lex, Coefficient, CoefficientReport};
use crate::error::{check_dim, Error, Result};
use crate::tensor::DenseTensor3;

fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Left-slot coefficient, valid for any real tensor.
pub fn tau_left(p: &DenseTensor3) -> CoefficientReport {
    let n = p.n();
    let (v, w) = reduce_lex(n, gt, |j| {
        let mut best = (0.0, [j, 0, 0]);
        for k1 in 0..n {
            for k2 in k1 + 1..n {
                let s = 0.5 * l1_diff(p.column(j, k1), p.column(j, k2));
                if s > best.0 {
                    best = (s, [j, k1, k2]);
                }
            }
        }
        best
    });
    let w = if v == 0.0 { [0, 0, 0] } else { w };
    CoefficientReport::new(Coefficient::TauL, v, w.to_vec(), "O(n^4)")
}

/// Right-slot coefficient `T_R(P) = T_L(P^S)`, witness `(j1, j2, k)`.
pub fn tau_right(p: &DenseTensor3) -> CoefficientReport {
    let n = p.n();
    let (v, w) = reduce_lex(n, gt, |j1| {
        let mut best = (0.0, [j1, 0, 0]);
        for j2 in j1 + 1..n {
            for k in 0..n {
                let s = 0.5 * l1_diff(p.column(j1, k), p.column(j2, k));
                if s > best.0 {
                    best = (s, [j1, j2, k]);
                }
            }
        }
        best
    });
    let w = if v == 0.0 { [0, 0, 0] } else { w };
    CoefficientReport::new(Coefficient::TauR, v, w.to_vec(), "O(n^4)")
}

/// Coefficient of the quadratic map `x -> Pxx`, witness `(j, k1, k2)`.
pub fn tau(p: &DenseTensor3) -> CoefficientReport {
    let n = p.n();
    let (v, w) = reduce_lex(n, gt, |j| {
        let mut best = (0.0, [j, 0, 0]);
        for k1 in 0..n {
            let a = p.column(j, k1);
            let c = p.column(k1, j);
            for k2 in k1 + 1..n {
                let b = p.column(j, k2);
                let d = p.column(k2, j);
                let mut s = 0.0;
                for i in 0..n {
                    s += (a[i] - b[i] + c[i] - d[i]).abs();
                }
                let s = 0.5 * s;
                if s > best.0 {
                    best = (s, [j, k1, k2]);
                }
            }
        }
        best
    });
    let w = if v == 0.0 { [0, 0, 0] } else { w };
    CoefficientReport::new(Coefficient::Tau, v, w.to_vec(), "O(n^4)")
}

/// `1 - min_{j,k1,k2} sum_i min(P[i,j,k1], P[i,j,k2])`; stochastic `P` only.
pub fn tau_left_overlap(p: &DenseTensor3) -> f64 {
    let n = p.n();
    let (m, _) = reduce_lex(n, lt, |j| {
        let mut best = f64::INFINITY;
        for k1 in 0..n {
            for k2 in k1..n {
                let s: f64 = p
                    .column(j, k1)
                    .iter()
                    .zip(p.column(j, k2))
                    .map(|(a, b)| a.min(*b))
                    .sum();
                best = best.min(s);
            }
        }
        (best, ())
    });
    1.0 - m
}

/// Overlap form of `T_R`; stochastic `P` only.
pub fn tau_right_overlap(p: &DenseTensor3) -> f64 {
    tau_left_overlap(&p.s_transpose())
}

/// `2 - min_{j,k1,k2} sum_i min(P[i,j,k1] + P[i,k1,j], P[i,j,k2] + P[i,k2,j])`.
pub fn tau_overlap(p: &DenseTensor3) -> f64 {
    2.0 * tau_left_overlap(&p.symmetrize())
}

/// Subset form
/// `1 - min_I min_j (min_k1 sum_{i not in I} P[i,j,k1] + min_k2 sum_{i in I} P[i,j,k2])`.
pub fn tau_left_subsets(p: &DenseTensor3) -> Result<f64> {
    let n = p.n();
    let mut sums = SubsetSums::new(p)?;
    let mut best = f64::INFINITY;
    loop {
        let (inside, outside) = (sums.inside(), sums.outside());
        for j in 0..n {
            let mut a = f64::INFINITY;
            let mut b = f64::INFINITY;
            for k in 0..n {
                a = a.min(outside[j + n * k]);
                b = b.min(inside[j + n * k]);
            }
            best = best.min(a + b);
        }
        if !sums.advance() {
            break;
        }
    }
    Ok(1.0 - best)
}

/// `T`, `T_L` and `T_R` of one tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauSummary {
    pub tau: CoefficientReport,
    pub tau_left: CoefficientReport,
    pub tau_right: CoefficientReport,
}

/// Evaluates all three 1-norm coefficients. For stochastic input it checks
/// `T <= T_L + T_R <= 2` and `T = 2 T_L((P + P^S) / 2)`.
pub fn tau_summary(p: &DenseTensor3) -> Result<TauSummary> {
    let s = TauSummary {
        tau: tau(p),
        tau_left: tau_left(p),
        tau_right: tau_right(p),
    };
    if p.is_stochastic() {
        let n = p.n() as f64;
        let tol = 1e-14_f64.max(4.0 * n * f64::EPSILON);
        let (t, l, r) = (s.tau.value, s.tau_left.value, s.tau_right.value);
        if t > l + r + tol || l + r > 2.0 + tol {
            return Err(Error::invariant(format!(
                "T = {t}, T_L + T_R = {} violate T <= T_L + T_R <= 2",
                l + r
            )));
        }
        let q = 2.0 * tau_left(&p.symmetrize()).value;
        if (q - t).abs() > tol {
            return Err(Error::invariant(format!(
                "T = {t} differs from 2 T_L(Q) = {q}"
            )));
        }
    }
    Ok(s)
}

/// The three quantities of the Lipschitz estimate for one coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEntry {
    pub name: Coefficient,
    /// `|T_*(P) - T_*(Q)|`.
    pub difference: f64,
    /// `T_*(P - Q)`.
    pub of_difference: f64,
    /// `c ||P - Q||_1` with `c = 2` for `T` and `1` otherwise.
    pub norm_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub entries: Vec<LipschitzEntry>,
}

/// Evaluates `|T_*(P) - T_*(Q)| <= T_*(P - Q) <= c ||P - Q||_1` for
/// `T_L`, `T_R` and `T`, and fails if either inequality is violated.
pub fn lipschitz_check(p: &DenseTensor3, q: &DenseTensor3) -> Result<LipschitzReport> {
    check_dim(p.n(), q.n())?;
    let d = p.difference(q)?;
    let norm = d.one_norm();
    let tol = 1e-12;
    let fns: [(Coefficient, fn(&DenseTensor3) -> CoefficientReport, f64); 3] = [
        (Coefficient::TauL, tau_left, 1.0),
        (Coefficient::TauR, tau_right, 1.0),
        (Coefficient::Tau, tau, 2.0),
    ];
    let mut entries = Vec::with_capacity(3);
    for (name, f, c) in fns {
        let e = LipschitzEntry {
            name,
            difference: (f(p).value - f(q).value).abs(),
            of_difference: f(&d).value,
            norm_bound: c * norm,
        };
        if e.difference > e.of_difference + tol || e.of_difference > e.norm_bound + tol {
            return Err(Error::invariant(format!(
                "Lipschitz estimate fails for {name:?}: {} <= {} <= {}",
                e.difference, e.of_difference, e.norm_bound
            )));
        }
        entries.push(e);
    }
    Ok(LipschitzReport { entries })
}
